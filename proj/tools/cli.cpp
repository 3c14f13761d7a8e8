#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "dvsb/contrastive.hpp"
#include "dvsb/error.hpp"
#include "dvsb/io.hpp"
#include "dvsb/pair_factory.hpp"
#include "dvsb/robustness.hpp"
#include "dvsb/rng.hpp"
#include "dvsb/synthetic.hpp"
#include "dvsb/temporal_filter.hpp"

namespace dvsb {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kModeNames = {"static", "independent", "dynamic-low", "dynamic-mid",
                                              "dynamic-high"};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s = buf;
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

io::Config load_config_or_default(const std::string& path) {
  return path.empty() ? io::Config{} : io::load_config(path);
}

RealClip trim(RealClip clip, int length) {
  if (clip.length() < length) {
    throw InputError("clip has " + std::to_string(clip.length()) + " frames, " +
                     std::to_string(length) + " requested");
  }
  clip.frames.resize(static_cast<std::size_t>(length));
  clip.landmarks.resize(static_cast<std::size_t>(length));
  return clip;
}

struct SynthesizeArgs {
  std::string input;
  std::string landmarks;
  std::string out;
  std::string config;
  std::string manifest;
  std::uint64_t seed = 0;
  std::string mode = "dynamic-low";
  int stage = 2;
  int clip_len = 16;
  double madain_prob = 0.25;
  int threads = 1;
  CLI::Option* madain_flag = nullptr;
};

int run_synthesize(const SynthesizeArgs& a, std::ostream& out) {
  RealClip clip = io::load_clip({a.input, a.landmarks});
  SynthesizedClip result;
  if (!a.manifest.empty()) {
    const Manifest manifest = io::load_manifest(a.manifest);
    clip = trim(std::move(clip), static_cast<int>(manifest.track.frames.size()));
    result = resynthesize(clip, manifest, a.threads);
  } else {
    io::Config config = load_config_or_default(a.config);
    if (a.madain_flag->count() > 0) config.ranges.madain_prob = a.madain_prob;
    config.ranges.validate();
    clip = trim(std::move(clip), a.clip_len);
    const ParamTrack track = prepare_track(a.seed, a.clip_len, parse_stage(std::to_string(a.stage)),
                                           TemporalMode::parse(a.mode), config.ranges);
    result = synthesize_clip(clip.frames, clip.landmarks, track, a.threads);
  }
  io::save_synthesized(a.out, result);
  out << "wrote " << result.frames.size() << " frames to " << a.out << "\n"
      << "blend_group_hash " << result.manifest.blend_group_hash << "\n";
  return 0;
}

struct PairgenArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::string config;
  std::uint64_t seed = 0;
  std::string mode = "dynamic-low";
  int pairs = 4;
  int clip_len = 16;
  int size = 224;
  int threads = 1;
  CLI::Option* pairs_flag = nullptr;
};

std::vector<RealClip> gather_reals(const std::vector<std::string>& inputs, int pairs,
                                   bool pairs_given, int clip_len, int size, std::uint64_t seed) {
  std::vector<RealClip> reals;
  if (inputs.empty()) {
    for (int i = 0; i < 2 * pairs; ++i) {
      reals.push_back(make_synthetic_face_clip(derive_seed(seed, "synthetic-real-" + std::to_string(i)),
                                               clip_len, size, size));
    }
    return reals;
  }
  if (pairs_given && inputs.size() != static_cast<std::size_t>(2 * pairs)) {
    throw InputError(std::to_string(pairs) + " pairs need " + std::to_string(2 * pairs) +
                     " input clips, got " + std::to_string(inputs.size()));
  }
  for (const std::string& dir : inputs) reals.push_back(trim(io::load_clip({dir, {}}), clip_len));
  return reals;
}

std::string clip_dir_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "clip_%03zu", i);
  return buf;
}

int run_pairgen(const PairgenArgs& a, std::ostream& out) {
  const io::Config config = load_config_or_default(a.config);
  const std::vector<RealClip> reals =
      gather_reals(a.inputs, a.pairs, a.pairs_flag->count() > 0, a.clip_len, a.size, a.seed);
  GenerationOptions options;
  options.mode = TemporalMode::parse(a.mode);
  options.ranges = config.ranges;
  options.threads = a.threads;
  const Batch batch = build_batch(reals, a.seed, options);

  json index{{"seed", a.seed}, {"mode", a.mode}, {"clips", json::array()}, {"pairs", json::array()}};
  for (std::size_t i = 0; i < batch.clips.size(); ++i) {
    io::save_synthesized(fs::path(a.out) / clip_dir_name(i), batch.clips[i]);
    index["clips"].push_back({{"dir", clip_dir_name(i)},
                              {"blend_group_hash", batch.clips[i].manifest.blend_group_hash}});
  }
  for (std::size_t i = 0; i < batch.pair_map.size(); ++i) {
    if (static_cast<int>(i) < batch.pair_map[i]) index["pairs"].push_back({i, batch.pair_map[i]});
  }
  io::write_file_atomic(fs::path(a.out) / "batch.json", index.dump(2) + "\n");
  out << "wrote " << batch.clips.size() / 2 << " positive pairs to " << a.out << "\n";
  return 0;
}

struct CorruptArgs {
  std::string input;
  std::string out;
  std::string config;
  std::string kind;
  int severity = 1;
  std::uint64_t seed = 0;
};

int run_corrupt(const CorruptArgs& a, std::ostream& out) {
  const io::Config config = load_config_or_default(a.config);
  const std::vector<fs::path> paths = io::list_frames(a.input);
  const std::vector<Frame> frames = io::load_frames(a.input);
  const CorruptionSpec spec{parse_corruption_kind(a.kind), a.severity};
  const std::vector<Frame> damaged = corrupt(frames, spec, a.seed, config.severity);
  for (std::size_t i = 0; i < damaged.size(); ++i) {
    io::write_png(fs::path(a.out) / paths[i].filename(), damaged[i]);
  }
  out << "wrote " << damaged.size() << " " << a.kind << " frames (severity " << a.severity
      << ") to " << a.out << "\n";
  return 0;
}

struct SpectrumArgs {
  std::string manifest;
  std::string out;
};

int run_spectrum(const SpectrumArgs& a, std::ostream& out) {
  const Manifest manifest = io::load_manifest(a.manifest);
  const ChannelMatrix m = normalized_channels(manifest.track);
  const std::size_t length = m.size();

  std::ostringstream csv;
  csv << "channel";
  for (std::size_t k = 1; k <= length; ++k) csv << ",k" << k;
  csv << "\n";
  for (int c = 0; c < kChannelCount; ++c) {
    std::vector<double> signal(length);
    for (std::size_t t = 0; t < length; ++t) signal[t] = m[t][static_cast<std::size_t>(c)];
    const std::vector<double> power = spectrum_power(signal);
    csv << channel_name(c);
    for (double p : power) csv << "," << format_number(p);
    csv << "\n";
  }
  if (a.out.empty()) {
    out << csv.str();
  } else {
    io::write_file_atomic(a.out, csv.str());
  }
  return 0;
}

// "score,label" rows; a non-numeric first row is taken as a header.
int run_eval_auc(const std::string& path, std::ostream& out) {
  const std::string text = io::read_file(path);
  std::istringstream lines(text);
  std::vector<double> scores;
  std::vector<int> labels;
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(path + ": expected score,label", line_no, static_cast<int>(line.size()) + 1);
    }
    double score = 0.0;
    double label = 0.0;
    try {
      std::size_t used = 0;
      score = std::stod(line.substr(0, comma), &used);
      label = std::stod(line.substr(comma + 1), &used);
    } catch (const std::exception&) {
      if (scores.empty() && labels.empty() && line_no == 1) continue;
      throw ParseError(path + ": non-numeric field", line_no, 1);
    }
    if (label != 0.0 && label != 1.0) {
      throw ParseError(path + ": label must be 0 or 1", line_no, static_cast<int>(comma) + 2);
    }
    scores.push_back(score);
    labels.push_back(static_cast<int>(label));
  }
  out << format_number(roc_auc(scores, labels)) << "\n";
  return 0;
}

struct DemoArgs {
  std::string out;
  std::uint64_t seed = 0;
  std::string mode = "dynamic-low";
  int pairs = 4;
  int clip_len = 8;
  int size = 112;
  double tau = 0.1;
  int threads = 1;
};

int run_demo(const DemoArgs& a, std::ostream& out) {
  const std::vector<RealClip> reals = gather_reals({}, a.pairs, true, a.clip_len, a.size, a.seed);
  GenerationOptions options;
  options.mode = TemporalMode::parse(a.mode);
  options.threads = a.threads;
  const Batch batch = build_batch(reals, a.seed, options);

  EmbeddingBatch embeddings;
  embeddings.pair_map = batch.pair_map;
  embeddings.tau = a.tau;
  for (const SynthesizedClip& clip : batch.clips) embeddings.vectors.push_back(toy_embed(clip.frames));
  const double loss = nt_xent_loss(embeddings);
  const MatchResult match = pair_match_accuracy(embeddings.vectors, embeddings.pair_map);

  out << "pairs " << a.pairs << ", clip " << a.clip_len << "x" << a.size << "x" << a.size
      << ", mode " << a.mode << "\n";
  for (std::size_t i = 0; i + 1 < batch.clips.size(); i += 2) {
    const auto& track = batch.clips[i].manifest.track;
    out << "  pair " << i / 2 << ": scheme " << track.clip.scheme.name() << ", mu "
        << format_number(track.filter ? track.filter->mu : 0.0) << ", hash "
        << batch.clips[i].manifest.blend_group_hash.substr(0, 12) << "\n";
  }
  out << "nt_xent " << format_number(loss) << " (tau " << format_number(a.tau) << ")\n"
      << "pair_match_accuracy " << format_number(match.accuracy) << " (chance "
      << format_number(1.0 / (2.0 * a.pairs - 1.0)) << ")\n";
  if (!a.out.empty()) {
    for (std::size_t i = 0; i < batch.clips.size(); ++i) {
      io::save_synthesized(fs::path(a.out) / clip_dir_name(i), batch.clips[i]);
    }
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic video self-blending: synthesize forgery clips and positive pairs", "dvsb"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  SynthesizeArgs syn;
  auto* synthesize = app.add_subcommand("synthesize", "Synthesize one blended clip");
  synthesize->add_option("--input", syn.input, "Directory of numbered PNG frames")->required();
  synthesize->add_option("--landmarks", syn.landmarks, "Landmark JSON (default: <input>/landmarks.json)");
  synthesize->add_option("--out", syn.out, "Output directory")->required();
  synthesize->add_option("--seed", syn.seed, "Master seed");
  synthesize->add_option("--mode", syn.mode, "Temporal mode")->check(CLI::IsMember(kModeNames));
  synthesize->add_option("--stage", syn.stage, "1 = pretraining, 2 = fine-tuning")
      ->check(CLI::IsMember({1, 2}));
  synthesize->add_option("--clip-len", syn.clip_len, "Frames to synthesize")->check(CLI::Range(2, 100000));
  syn.madain_flag = synthesize->add_option("--madain-prob", syn.madain_prob, "MAdaIN probability")
                        ->check(CLI::Range(0.0, 1.0));
  synthesize->add_option("--threads", syn.threads, "Worker threads")->check(CLI::Range(1, 1024));
  synthesize->add_option("--config", syn.config, "Configuration JSON");
  synthesize->add_option("--manifest", syn.manifest, "Re-synthesize from a manifest");

  PairgenArgs pg;
  auto* pairgen = app.add_subcommand("pairgen", "Synthesize a batch of positive pairs");
  pairgen->add_option("--input", pg.inputs, "Real clip directory (repeat; synthetic faces if absent)");
  pairgen->add_option("--out", pg.out, "Output directory")->required();
  pg.pairs_flag = pairgen->add_option("--pairs", pg.pairs, "Number of pairs")->check(CLI::Range(1, 100000));
  pairgen->add_option("--seed", pg.seed, "Master seed");
  pairgen->add_option("--mode", pg.mode, "Temporal mode")->check(CLI::IsMember(kModeNames));
  pairgen->add_option("--clip-len", pg.clip_len, "Frames per clip")->check(CLI::Range(2, 100000));
  pairgen->add_option("--size", pg.size, "Synthetic frame size")->check(CLI::Range(16, 4096));
  pairgen->add_option("--threads", pg.threads, "Worker threads")->check(CLI::Range(1, 1024));
  pairgen->add_option("--config", pg.config, "Configuration JSON");

  CorruptArgs cor;
  std::vector<std::string> kind_names;
  for (CorruptionKind k : all_corruption_kinds()) kind_names.emplace_back(to_string(k));
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Apply a corruption to a frame directory");
  corrupt_cmd->add_option("--input", cor.input, "Directory of numbered PNG frames")->required();
  corrupt_cmd->add_option("--out", cor.out, "Output directory")->required();
  corrupt_cmd->add_option("--kind", cor.kind, "Corruption kind")->required()->check(CLI::IsMember(kind_names));
  corrupt_cmd->add_option("--severity", cor.severity, "Severity 1..5")->required()->check(CLI::Range(1, 5));
  corrupt_cmd->add_option("--seed", cor.seed, "Seed for stochastic kinds");
  corrupt_cmd->add_option("--config", cor.config, "Configuration JSON");

  SpectrumArgs spec;
  auto* spectrum = app.add_subcommand("spectrum", "Per-channel DCT power of a manifest's track");
  spectrum->add_option("--manifest", spec.manifest, "manifest.json")->required();
  spectrum->add_option("--out", spec.out, "CSV path (default: stdout)");

  std::string auc_csv;
  auto* eval_auc = app.add_subcommand("eval-auc", "ROC AUC of a score,label CSV");
  eval_auc->add_option("csv", auc_csv, "CSV file")->required();

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo", "Pair generation, embedding and contrastive loss on synthetic faces");
  demo_cmd->add_option("--pairs", demo.pairs, "Number of pairs")->check(CLI::Range(2, 1000));
  demo_cmd->add_option("--seed", demo.seed, "Master seed");
  demo_cmd->add_option("--mode", demo.mode, "Temporal mode")->check(CLI::IsMember(kModeNames));
  demo_cmd->add_option("--clip-len", demo.clip_len, "Frames per clip")->check(CLI::Range(2, 1000));
  demo_cmd->add_option("--size", demo.size, "Frame size")->check(CLI::Range(16, 4096));
  demo_cmd->add_option("--tau", demo.tau, "NT-Xent temperature");
  demo_cmd->add_option("--threads", demo.threads, "Worker threads")->check(CLI::Range(1, 1024));
  demo_cmd->add_option("--out", demo.out, "Also write the clips here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (synthesize->parsed()) return run_synthesize(syn, out);
    if (pairgen->parsed()) return run_pairgen(pg, out);
    if (corrupt_cmd->parsed()) return run_corrupt(cor, out);
    if (spectrum->parsed()) return run_spectrum(spec, out);
    if (eval_auc->parsed()) return run_eval_auc(auc_csv, out);
    if (demo_cmd->parsed()) return run_demo(demo, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace dvsb
