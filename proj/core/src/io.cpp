#include "dvsb/io.hpp"

#include <png.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "dvsb/error.hpp"

namespace dvsb::io {

namespace {

using nlohmann::json;

std::uint8_t quantize(float v) noexcept {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

template <int C>
std::string encode(const Image<C>& image) {
  if (image.empty()) throw InputError("cannot encode an empty image");
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = C == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  std::vector<std::uint8_t> pixels(image.values().size());
  std::transform(image.values().begin(), image.values().end(), pixels.begin(), quantize);

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
    throw InputError(std::string("PNG encode failed: ") + png.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
    throw InputError(std::string("PNG encode failed: ") + png.message);
  }
  out.resize(size);
  return out;
}

// Trailing digits of the stem, or -1.
long frame_index(const fs::path& path) {
  if (path.extension() != ".png") return -1;
  const std::string stem = path.stem().string();
  std::size_t i = stem.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(stem[i - 1]))) --i;
  if (i == stem.size()) return -1;
  const std::string digits = stem.substr(i);
  if (digits.size() > 9) return -1;
  return std::stol(digits);
}

json landmark_json(const LandmarkSet& set) {
  json frame = json::array();
  for (const Point& p : set.points) frame.push_back(json::array({p.x, p.y}));
  return frame;
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Frame read_png(const fs::path& path) {
  const std::string bytes = read_file(path);
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw InputError(path.string() + ": " + png.message);
  }
  // Alpha is dropped by compositing over black, which keeps opaque inputs exact.
  png.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, pixels.data(), 0, nullptr)) {
    png_image_free(&png);
    throw InputError(path.string() + ": " + png.message);
  }
  Frame frame(static_cast<int>(png.height), static_cast<int>(png.width));
  auto values = frame.values();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<float>(pixels[i]) / 255.0f;
  return frame;
}

std::string encode_png(const Frame& frame) { return encode(frame); }
std::string encode_png(const Mask& mask) { return encode(mask); }

void write_png(const fs::path& path, const Frame& frame) { write_file_atomic(path, encode(frame)); }
void write_png(const fs::path& path, const Mask& mask) { write_file_atomic(path, encode(mask)); }

std::vector<fs::path> list_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError(dir.string() + " is not a directory");
  std::map<long, fs::path> indexed;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const long index = frame_index(entry.path());
    if (index < 0) continue;
    if (!indexed.emplace(index, entry.path()).second) {
      throw ConsistencyError("duplicate frame index " + std::to_string(index) + " in " + dir.string());
    }
  }
  if (indexed.empty()) throw GapError("no numbered PNG frames in " + dir.string());
  std::vector<fs::path> out;
  long expected = indexed.begin()->first;
  for (const auto& [index, path] : indexed) {
    if (index != expected) {
      throw GapError("missing frame index " + std::to_string(expected) + " in " + dir.string());
    }
    out.push_back(path);
    ++expected;
  }
  return out;
}

std::vector<Frame> load_frames(const fs::path& dir) {
  std::vector<Frame> frames;
  for (const fs::path& path : list_frames(dir)) {
    frames.push_back(read_png(path));
    if (!frames.back().same_shape(frames.front())) {
      throw ConsistencyError(path.string() + " is " + std::to_string(frames.back().width()) + "x" +
                             std::to_string(frames.back().height()) + ", expected " +
                             std::to_string(frames.front().width()) + "x" +
                             std::to_string(frames.front().height()));
    }
  }
  return frames;
}

std::vector<LandmarkSet> parse_landmarks(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_array()) throw InputError("landmarks must be a JSON array over frames");
  std::vector<LandmarkSet> out;
  out.reserve(j.size());
  for (std::size_t t = 0; t < j.size(); ++t) {
    const json& frame = j[t];
    if (!frame.is_array() || frame.size() != LandmarkSet::kCount) {
      throw InputError("landmarks for frame " + std::to_string(t) + " must have 68 points");
    }
    LandmarkSet set;
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const json& p = frame[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw InputError("landmark " + std::to_string(i) + " of frame " + std::to_string(t) +
                         " must be [x, y]");
      }
      set.points[i] = Point{p[0].get<double>(), p[1].get<double>()};
    }
    set.validate();
    out.push_back(set);
  }
  return out;
}

std::vector<LandmarkSet> load_landmarks(const fs::path& path) {
  return parse_landmarks(read_file(path));
}

std::string serialize_landmarks(std::span<const LandmarkSet> landmarks) {
  json j = json::array();
  for (const LandmarkSet& set : landmarks) j.push_back(landmark_json(set));
  return j.dump() + "\n";
}

RealClip load_clip(const ClipSource& source) {
  RealClip clip;
  clip.frames = load_frames(source.frames_dir);
  const fs::path lm = source.landmarks.empty() ? source.frames_dir / "landmarks.json" : source.landmarks;
  clip.landmarks = load_landmarks(lm);
  if (clip.frames.size() != clip.landmarks.size()) {
    throw ConsistencyError(std::to_string(clip.frames.size()) + " frames in " +
                           source.frames_dir.string() + " but " +
                           std::to_string(clip.landmarks.size()) + " landmark entries in " +
                           lm.string());
  }
  return clip;
}

void save_clip(const fs::path& dir, const RealClip& clip) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    write_png(dir / frame_file_name(static_cast<int>(i)), clip.frames[i]);
  }
  write_file_atomic(dir / "landmarks.json", serialize_landmarks(clip.landmarks));
}

std::string frame_file_name(int index) {
  char name[32];
  std::snprintf(name, sizeof(name), "frame_%05d.png", index);
  return name;
}

std::string mask_file_name(int index) {
  char name[32];
  std::snprintf(name, sizeof(name), "mask_%05d.png", index);
  return name;
}

void save_synthesized(const fs::path& dir, const SynthesizedClip& clip) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    write_png(dir / frame_file_name(static_cast<int>(i)), clip.frames[i]);
    write_png(dir / mask_file_name(static_cast<int>(i)), clip.masks[i]);
  }
  save_manifest(dir / "manifest.json", clip.manifest);
}

void save_manifest(const fs::path& path, const Manifest& manifest) {
  write_file_atomic(path, serialize_manifest(manifest));
}

Manifest load_manifest(const fs::path& path) { return parse_manifest(read_file(path)); }

Config parse_config(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  Config config;
  for (const auto& [key, value] : j.items()) {
    if (key == "param_ranges") {
      config.ranges = ranges_from_json(value);
    } else if (key == "corruption_severity") {
      config.severity = severity_tables_from_json(value);
    } else {
      throw ConfigError("unknown configuration key: " + key);
    }
  }
  return config;
}

Config load_config(const fs::path& path) { return parse_config(read_file(path)); }

std::string serialize_config(const Config& config) {
  const json j{{"param_ranges", ranges_to_json(config.ranges)},
               {"corruption_severity", severity_tables_to_json(config.severity)}};
  return j.dump(2) + "\n";
}

}  // namespace dvsb::io
