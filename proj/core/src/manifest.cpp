#include "dvsb/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "dvsb/error.hpp"

namespace dvsb {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<std::string_view, Range ParamRanges::*>, 15> kRangeFields = {{
    {"rgb_offset", &ParamRanges::rgb_offset},
    {"hue_offset", &ParamRanges::hue_offset},
    {"sat_scale", &ParamRanges::sat_scale},
    {"val_scale", &ParamRanges::val_scale},
    {"contrast_scale", &ParamRanges::contrast_scale},
    {"brightness_offset", &ParamRanges::brightness_offset},
    {"downscale_factor", &ParamRanges::downscale_factor},
    {"sharpen_amount", &ParamRanges::sharpen_amount},
    {"scale", &ParamRanges::scale},
    {"translate", &ParamRanges::translate},
    {"deform_amplitude", &ParamRanges::deform_amplitude},
    {"deform_smooth_sigma", &ParamRanges::deform_smooth_sigma},
    {"blur_level", &ParamRanges::blur_level},
    {"kernel_sigma", &ParamRanges::kernel_sigma},
    {"filter_sigma", &ParamRanges::filter_sigma},
}};

std::string_view kind_name(TemporalMode::Kind kind) {
  switch (kind) {
    case TemporalMode::Kind::kStatic: return "static";
    case TemporalMode::Kind::kIndependent: return "independent";
    case TemporalMode::Kind::kDynamic: return "dynamic";
  }
  return "dynamic";
}

TemporalMode::Kind parse_kind(const std::string& text) {
  if (text == "static") return TemporalMode::Kind::kStatic;
  if (text == "independent") return TemporalMode::Kind::kIndependent;
  if (text == "dynamic") return TemporalMode::Kind::kDynamic;
  throw InputError("unknown temporal mode kind: " + text);
}

json filter_json(const std::optional<FilterSpec>& filter) {
  if (!filter) return nullptr;
  return json{{"mu", filter->mu}, {"sigma", filter->sigma}};
}

json channel_rows(const ParamTrack& track, int first, int last) {
  const ChannelMatrix m = continuous_channels(track);
  json rows = json::array();
  for (const ChannelRow& row : m) {
    json r = json::array();
    for (int c = first; c < last; ++c) r.push_back(row[static_cast<std::size_t>(c)]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string sha256_hex(std::string_view text) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int size = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), text.data(), text.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &size) != 1) {
    throw Error("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * size);
  for (unsigned int i = 0; i < size; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

template <typename Fn>
auto with_field_errors(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

std::string group_serialization(const ParamTrack& track, ParamGroup group) {
  json j;
  switch (group) {
    case ParamGroup::kColor:
      j["perturbed"] = to_string(track.clip.perturbed);
      j["frames"] = channel_rows(track, kRed, kQualityStrength);
      break;
    case ParamGroup::kQuality:
      j["quality_mode"] = to_string(track.clip.quality_mode);
      j["frames"] = channel_rows(track, kQualityStrength, kScaleX);
      break;
    case ParamGroup::kBlend:
      j["mask_scheme"] = track.clip.scheme.name();
      j["field_seed"] = track.clip.field_seed;
      j["smooth_sigma"] = track.clip.smooth_sigma;
      j["mode"] = kind_name(track.mode.kind);
      j["filter"] = filter_json(track.filter);
      j["frames"] = channel_rows(track, kScaleX, kChannelCount);
      break;
  }
  return j.dump();
}

std::string blend_group_hash(const ParamTrack& track) {
  return sha256_hex(group_serialization(track, ParamGroup::kBlend));
}

Manifest make_manifest(const ParamTrack& track, std::vector<int> madain_skipped_frames) {
  Manifest m;
  m.track = track;
  m.madain_skipped_frames = std::move(madain_skipped_frames);
  m.blend_group_hash = blend_group_hash(track);
  return m;
}

json ranges_to_json(const ParamRanges& ranges) {
  json j;
  for (const auto& [name, field] : kRangeFields) {
    const Range& r = ranges.*field;
    j[std::string(name)] = json::array({r.low, r.high});
  }
  j["madain_prob"] = ranges.madain_prob;
  return j;
}

ParamRanges ranges_from_json(const json& j, ParamRanges base) {
  if (!j.is_object()) throw ConfigError("parameter ranges must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "madain_prob") {
      if (!value.is_number()) throw ConfigError("madain_prob must be a number");
      base.madain_prob = value.get<double>();
      continue;
    }
    bool known = false;
    for (const auto& [name, field] : kRangeFields) {
      if (key != name) continue;
      if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
        throw ConfigError("range " + key + " must be [low, high]");
      }
      base.*field = Range{value[0].get<double>(), value[1].get<double>()};
      known = true;
    }
    if (!known) throw ConfigError("unknown parameter range: " + key);
  }
  base.validate();
  return base;
}

json track_to_json(const ParamTrack& track) {
  json j;
  j["seed"] = track.seed;
  j["seeds"] = {{"appearance", track.seeds.appearance},
                {"blend", track.seeds.blend},
                {"madain", track.seeds.madain}};
  j["stage"] = to_string(track.stage);
  j["mode"] = {{"name", track.mode.name()},
               {"kind", kind_name(track.mode.kind)},
               {"mu_low", track.mode.mu_low},
               {"mu_high", track.mode.mu_high}};
  j["filter"] = filter_json(track.filter);
  j["length"] = track.length();
  j["clip"] = {{"quality_mode", to_string(track.clip.quality_mode)},
               {"mask_scheme", track.clip.scheme.name()},
               {"field_seed", track.clip.field_seed},
               {"smooth_sigma", track.clip.smooth_sigma},
               {"perturbed", to_string(track.clip.perturbed)},
               {"madain", track.clip.madain}};
  json frames = json::array();
  for (const ChannelRow& row : continuous_channels(track)) {
    json f = json::object();
    for (int c = 0; c < kChannelCount; ++c) {
      f[std::string(channel_name(c))] = row[static_cast<std::size_t>(c)];
    }
    frames.push_back(std::move(f));
  }
  j["frames"] = std::move(frames);
  json unfiltered = json::array();
  for (int c : track.unfiltered_channels) unfiltered.push_back(channel_name(c));
  j["unfiltered_channels"] = std::move(unfiltered);
  j["ranges"] = ranges_to_json(track.ranges);
  return j;
}

ParamTrack track_from_json(const json& j) {
  return with_field_errors([&] {
    ParamTrack track;
    track.seed = j.at("seed").get<std::uint64_t>();
    const json& seeds = j.at("seeds");
    track.seeds = TrackSeeds{seeds.at("appearance").get<std::uint64_t>(),
                             seeds.at("blend").get<std::uint64_t>(),
                             seeds.at("madain").get<std::uint64_t>()};
    track.stage = parse_stage(j.at("stage").get<std::string>());
    const json& mode = j.at("mode");
    track.mode = TemporalMode{parse_kind(mode.at("kind").get<std::string>()),
                              mode.at("mu_low").get<double>(), mode.at("mu_high").get<double>()};
    if (!j.at("filter").is_null()) {
      track.filter = FilterSpec{j["filter"].at("mu").get<double>(),
                                j["filter"].at("sigma").get<double>()};
    }
    track.ranges = ranges_from_json(j.at("ranges"));

    const json& clip = j.at("clip");
    track.clip.quality_mode = parse_quality_mode(clip.at("quality_mode").get<std::string>());
    track.clip.scheme = MaskScheme::parse(clip.at("mask_scheme").get<std::string>());
    track.clip.field_seed = clip.at("field_seed").get<std::uint64_t>();
    track.clip.smooth_sigma = clip.at("smooth_sigma").get<double>();
    track.clip.perturbed = parse_side(clip.at("perturbed").get<std::string>());
    track.clip.madain = clip.at("madain").get<bool>();

    const json& frames = j.at("frames");
    const int length = j.at("length").get<int>();
    if (!frames.is_array() || static_cast<int>(frames.size()) != length) {
      throw InputError("manifest frame count does not match its length field");
    }
    ForgeryParams base;
    base.quality.mode = track.clip.quality_mode;
    base.deform.field_seed = track.clip.field_seed;
    base.deform.smooth_sigma = track.clip.smooth_sigma;
    track.frames.assign(static_cast<std::size_t>(length), base);
    ChannelMatrix m(static_cast<std::size_t>(length));
    for (std::size_t t = 0; t < m.size(); ++t) {
      for (int c = 0; c < kChannelCount; ++c) {
        m[t][static_cast<std::size_t>(c)] = frames[t].at(std::string(channel_name(c))).get<double>();
      }
    }
    track = with_channels(track, m);
    for (const json& name : j.at("unfiltered_channels")) {
      track.unfiltered_channels.push_back(parse_channel(name.get<std::string>()));
    }
    return track;
  });
}

json manifest_to_json(const Manifest& manifest) {
  json j = track_to_json(manifest.track);
  j["schema_version"] = manifest.schema_version;
  j["pipeline_version"] = manifest.pipeline_version;
  j["madain_skipped_frames"] = manifest.madain_skipped_frames;
  j["madain_applied"] = manifest.madain_applied();
  j["shared_filter_in_blend_group"] = true;
  j["blend_group_hash"] = manifest.blend_group_hash;
  return j;
}

Manifest manifest_from_json(const json& j) {
  return with_field_errors([&] {
    Manifest m;
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version > kManifestSchemaVersion) {
      throw InputError("manifest schema version " + std::to_string(m.schema_version) +
                       " is newer than the supported version " +
                       std::to_string(kManifestSchemaVersion));
    }
    m.pipeline_version = j.at("pipeline_version").get<std::string>();
    if (m.pipeline_version != kPipelineVersion) {
      throw InputError("manifest pipeline version '" + m.pipeline_version +
                       "' differs from this build's '" + std::string(kPipelineVersion) + "'");
    }
    m.track = track_from_json(j);
    m.madain_skipped_frames = j.at("madain_skipped_frames").get<std::vector<int>>();
    m.blend_group_hash = j.at("blend_group_hash").get<std::string>();
    if (m.blend_group_hash != blend_group_hash(m.track)) {
      throw InputError("manifest blend_group_hash does not match its parameters");
    }
    return m;
  });
}

std::string serialize_manifest(const Manifest& manifest) {
  return manifest_to_json(manifest).dump(2) + "\n";
}

Manifest parse_manifest(std::string_view text) { return manifest_from_json(parse_json(text)); }

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ParseError(e.what(), line, column);
  }
}

}  // namespace dvsb
