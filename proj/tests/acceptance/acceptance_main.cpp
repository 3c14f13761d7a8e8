// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "dvsb/blend_pipeline.hpp"
#include "dvsb/contrastive.hpp"
#include "dvsb/io.hpp"
#include "dvsb/pair_factory.hpp"
#include "dvsb/rng.hpp"
#include "dvsb/robustness.hpp"
#include "dvsb/synthetic.hpp"
#include "dvsb/temporal_filter.hpp"
#include "../test_util.hpp"

namespace {

using namespace dvsb;
namespace fs = std::filesystem;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double power(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

std::vector<double> random_signal(Rng& rng, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

Outcome filter_fidelity() {
  Rng rng(1);
  double worst_power = 0.0, worst_round = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_signal(rng, 16);
    const auto c = dct(x);
    const FilterSpec spec{rng.uniform(-3.0, 9.0), rng.uniform(1.0, 5.0)};
    const auto f = gaussian_filter(c, spec);
    worst_power = std::max(worst_power, std::abs(power(f) - power(c)) / power(c));
    const auto back = idct(c);
    for (std::size_t t = 0; t < x.size(); ++t) worst_round = std::max(worst_round, std::abs(back[t] - x[t]));
  }
  return {worst_power < 1e-9 && worst_round < 1e-9,
          "power rel err " + fmt("%.2e", worst_power) + ", round trip " + fmt("%.2e", worst_round)};
}

// Mean over channels of the per-index power of a track's normalized channels.
std::vector<std::vector<double>> channel_spectra(const ParamTrack& track) {
  const ChannelMatrix m = normalized_channels(track);
  std::vector<std::vector<double>> out;
  for (int c = 0; c < kChannelCount; ++c) {
    std::vector<double> s(m.size());
    for (std::size_t t = 0; t < m.size(); ++t) s[t] = m[t][static_cast<std::size_t>(c)];
    out.push_back(spectrum_power(s));
  }
  return out;
}

Outcome spectrum_claims() {
  const int length = 16;
  const ParamRanges ranges;
  bool static_ok = true;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const ParamTrack t = prepare_track(s, length, Stage::kPretrain, TemporalMode::static_mode(), ranges);
    for (const auto& p : channel_spectra(t)) {
      double sum = 0.0;
      for (double v : p) sum += v;
      if (sum == 0.0) continue;
      if (std::abs(p[0] - sum) > 1e-12 * sum) static_ok = false;
    }
  }

  std::vector<double> mean(length, 0.0);
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const ParamTrack t = prepare_track(s, length, Stage::kPretrain, TemporalMode::independent(), ranges);
    for (const auto& p : channel_spectra(t)) {
      for (int k = 0; k < length; ++k) mean[static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(k)];
    }
  }
  double avg = 0.0;
  for (double v : mean) avg += v / length;
  double flat_dev = 0.0;
  for (double v : mean) flat_dev = std::max(flat_dev, std::abs(v / avg - 1.0));

  auto centroid = [&](const TemporalMode& mode) {
    double sum = 0.0;
    int n = 0;
    for (std::uint64_t s = 0; s < 300; ++s) {
      const ParamTrack t = prepare_track(s, length, Stage::kPretrain, mode, ranges);
      for (const auto& p : channel_spectra(t)) {
        double tot = 0.0;
        for (double v : p) tot += v;
        if (tot == 0.0) continue;
        sum += spectral_centroid(p);
        ++n;
      }
    }
    return sum / n;
  };
  const double low = centroid(TemporalMode::dynamic_low());
  const double mid = centroid(TemporalMode::dynamic_mid());
  const double high = centroid(TemporalMode::dynamic_high());

  return {static_ok && flat_dev <= 0.15 && low < mid && mid < high,
          std::string("static delta ") + (static_ok ? "yes" : "no") + ", independent flatness " +
              fmt("%.3f", flat_dev) + ", centroids " + fmt("%.2f", low) + " < " + fmt("%.2f", mid) +
              " < " + fmt("%.2f", high)};
}

Outcome madain_contract() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Frame src = testing::random_image<3>(24, 24, 3 * s);
    const Frame tgt = testing::random_image<3>(24, 24, 3 * s + 1);
    Mask m = testing::random_image<1>(24, 24, 3 * s + 2);
    for (float& v : m.values()) v = v < 0.3f ? 0.0f : v;
    const Frame out = madain_unclamped(src, tgt, m);
    const MaskedStats got = masked_stats(out, m);
    const MaskedStats want = masked_stats(tgt, m);
    for (std::size_t c = 0; c < 3; ++c) {
      worst = std::max({worst, std::abs(got.mean[c] - want.mean[c]), std::abs(got.std[c] - want.std[c])});
    }
  }
  return {worst < 1e-4, "max stat error " + fmt("%.2e", worst)};
}

Outcome pair_contract() {
  int shared_hash = 0, shared_color = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const RealClip a = make_synthetic_face_clip(derive_seed(s, "a"), 4, 40, 40);
    const RealClip b = make_synthetic_face_clip(derive_seed(s, "b"), 4, 40, 40);
    const PositivePair p = gen_positive_pair(a, b, s);
    shared_hash += p.a.manifest.blend_group_hash == p.b.manifest.blend_group_hash;
    shared_color += group_serialization(p.a.manifest.track, ParamGroup::kColor) ==
                    group_serialization(p.b.manifest.track, ParamGroup::kColor);
  }
  const RealClip real = make_synthetic_face_clip(99, 2, 32, 32);
  int madain = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) madain += gen_stage2_sample(real, s).manifest.madain_applied();
  const double rate = madain / 1000.0;
  return {shared_hash == 100 && shared_color == 0 && std::abs(rate - 0.25) <= 0.04,
          std::to_string(shared_hash) + "/100 shared hashes, " + std::to_string(shared_color) +
              " shared color groups, stage-2 MAdaIN rate " + fmt("%.3f", rate)};
}

double brute_nt_xent(const EmbeddingBatch& b) {
  const std::size_t n = b.vectors.size();
  auto cosine = [&](std::size_t i, std::size_t k) {
    double d = 0, a = 0, c = 0;
    for (std::size_t j = 0; j < b.vectors[i].size(); ++j) {
      d += b.vectors[i][j] * b.vectors[k][j];
      a += b.vectors[i][j] * b.vectors[i][j];
      c += b.vectors[k][j] * b.vectors[k][j];
    }
    return d / std::sqrt(a * c);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double denom = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i) denom += std::exp(cosine(i, k) / b.tau);
    }
    total -= std::log(std::exp(cosine(i, static_cast<std::size_t>(b.pair_map[i])) / b.tau) / denom);
  }
  return total / static_cast<double>(n);
}

EmbeddingBatch random_batch(Rng& rng, int pairs, int dim, double tau) {
  EmbeddingBatch b;
  b.tau = tau;
  for (int i = 0; i < 2 * pairs; ++i) {
    Embedding v(static_cast<std::size_t>(dim));
    for (double& x : v) x = rng.normal();
    b.vectors.push_back(v);
    b.pair_map.push_back(i ^ 1);
  }
  return b;
}

Outcome nt_xent_oracle() {
  Rng rng(5);
  double worst_loss = 0.0;
  for (int i = 0; i < 50; ++i) {
    const EmbeddingBatch b = random_batch(rng, 1 + i % 8, 3 + i % 13, rng.uniform(0.05, 1.0));
    worst_loss = std::max(worst_loss, std::abs(nt_xent_loss(b) - brute_nt_xent(b)));
  }

  EmbeddingBatch ortho;
  ortho.vectors = {{1, 0}, {1, 0}, {0, 1}, {0, 1}};
  ortho.pair_map = {1, 0, 3, 2};
  ortho.tau = 0.5;
  const double ortho_loss = nt_xent_loss(ortho);
  const double expected = std::log(1.0 + 2.0 * std::exp(-2.0));

  double worst_grad = 0.0;
  for (int i = 0; i < 10; ++i) {
    const EmbeddingBatch b = random_batch(rng, 2 + i % 3, 6, 0.5);
    const auto g = nt_xent_grad(b);
    double diff = 0.0, ref = 0.0;
    const double h = 1e-6;
    for (std::size_t v = 0; v < b.vectors.size(); ++v) {
      for (std::size_t j = 0; j < b.vectors[v].size(); ++j) {
        EmbeddingBatch p = b, m = b;
        p.vectors[v][j] += h;
        m.vectors[v][j] -= h;
        const double fd = (nt_xent_loss(p) - nt_xent_loss(m)) / (2 * h);
        diff += (g[v][j] - fd) * (g[v][j] - fd);
        ref += fd * fd;
      }
    }
    worst_grad = std::max(worst_grad, std::sqrt(diff / ref));
  }
  return {worst_loss < 1e-8 && std::abs(ortho_loss - expected) < 1e-12 && worst_grad < 1e-4,
          "loss err " + fmt("%.2e", worst_loss) + ", orthogonal case " + fmt("%.5f", ortho_loss) +
              ", gradient rel err " + fmt("%.2e", worst_grad)};
}

Outcome retrieval_sanity() {
  const int pairs = 8, length = 16, size = 112, seeds = 20;
  double total = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto seed = static_cast<std::uint64_t>(s);
    std::vector<RealClip> reals;
    for (int i = 0; i < 2 * pairs; ++i) {
      reals.push_back(make_synthetic_face_clip(derive_seed(seed, 1000 + static_cast<std::uint64_t>(i)), length,
                                               size, size));
    }
    const Batch batch = build_batch(reals, seed);
    std::vector<Embedding> e;
    for (const SynthesizedClip& c : batch.clips) e.push_back(toy_embed(c.frames));
    total += pair_match_accuracy(e, batch.pair_map).accuracy;
  }
  const double mean = total / seeds;
  const double target = 3.0 / (2 * pairs - 1);
  return {mean > target, "mean accuracy " + fmt("%.3f", mean) + " vs required " + fmt("%.3f", target)};
}

Outcome auc_oracle() {
  Rng rng(7);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(60));
    std::vector<double> s(static_cast<std::size_t>(n));
    std::vector<int> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      s[static_cast<std::size_t>(i)] = std::floor(rng.uniform() * 10.0) / 10.0;
      y[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(2));
    }
    y[0] = 0;
    y[1] = 1;
    double wins = 0.0, count = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (y[static_cast<std::size_t>(i)] != 1 || y[static_cast<std::size_t>(j)] != 0) continue;
        count += 1.0;
        const double a = s[static_cast<std::size_t>(i)], b = s[static_cast<std::size_t>(j)];
        wins += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
      }
    }
    if (roc_auc(s, y) != wins / count) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 1000 vectors"};
}

Outcome corruption_monotonicity() {
  const Frame f = io::read_png(testing::data_dir() / "natural.png");
  std::ostringstream detail;
  bool ok = true;
  for (CorruptionKind kind : all_corruption_kinds()) {
    double prev = std::numeric_limits<double>::infinity();
    bool strict = true;
    for (int s = 1; s <= kSeverityLevels; ++s) {
      const double p = psnr(f, corrupt_frame(f, CorruptionSpec{kind, s}, 3));
      strict = strict && p < prev;
      prev = p;
    }
    if (!strict) {
      ok = false;
      detail << to_string(kind) << " not monotone; ";
    }
  }
  return {ok, ok ? "7/7 kinds strictly decreasing" : detail.str()};
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

std::string dir_bytes(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += f.filename().string() + '\0' + io::read_file(f);
  return all;
}

Outcome determinism() {
  testing::TempDir tmp;
  io::save_clip(tmp / "real", make_synthetic_face_clip(17, 16, 96, 96));
  auto run = [&](const std::string& out, const std::string& threads) {
    return cli({"synthesize", "--input", (tmp / "real").string(), "--out", (tmp / out).string(), "--seed", "42",
                "--threads", threads, "--stage", "1"});
  };
  if (run("a", "1") || run("b", "1") || run("c", "8")) return {false, "synthesize failed"};
  if (cli({"synthesize", "--input", (tmp / "real").string(), "--out", (tmp / "d").string(), "--manifest",
           (tmp / "a" / "manifest.json").string()})) {
    return {false, "re-synthesis failed"};
  }
  const std::string a = dir_bytes(tmp / "a");
  const bool runs = a == dir_bytes(tmp / "b");
  const bool threads = a == dir_bytes(tmp / "c");
  const bool manifest = a == dir_bytes(tmp / "d");
  return {runs && threads && manifest, std::string("repeat ") + (runs ? "identical" : "differs") +
                                           ", threads 1 vs 8 " + (threads ? "identical" : "differs") +
                                           ", manifest " + (manifest ? "identical" : "differs")};
}

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Outcome throughput() {
  const RealClip real = make_synthetic_face_clip(3, 16, 224, 224);
  std::vector<ParamTrack> tracks;
  for (std::uint64_t s = 0; s < 8; ++s) {
    tracks.push_back(prepare_track(s, 16, Stage::kPretrain, TemporalMode::dynamic_low(), {}));
  }
  synthesize_clip(real.frames, real.landmarks, tracks[0]);  // warm-up

  double single = 0.0;
  for (const ParamTrack& t : tracks) single += time_ms([&] { synthesize_clip(real.frames, real.landmarks, t, 1); });
  single /= static_cast<double>(tracks.size());

  // Scaling: 8 clips, one per worker, against the same work on one thread.
  std::vector<RealClip> reals;
  for (std::uint64_t i = 0; i < 16; ++i) reals.push_back(make_synthetic_face_clip(50 + i, 16, 224, 224));
  GenerationOptions one, eight;
  eight.threads = 8;
  const double t1 = time_ms([&] { build_batch(reals, 1, one); });
  const double t8 = time_ms([&] { build_batch(reals, 1, eight); });
  const double speedup = t1 / t8;
  const double efficiency = speedup / 8.0;

  const bool fast = single < 250.0;
  const bool scales = efficiency >= 0.7;
  return {fast && scales, "single-thread " + fmt("%.1f", single) + " ms/clip (" + (fast ? "ok" : "slow") +
                              "), 8-worker speedup " + fmt("%.2f", speedup) + "x on " +
                              std::to_string(std::thread::hardware_concurrency()) + " hardware thread(s) (" +
                              (scales ? "ok" : "below 5.6x") + ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"filter fidelity", filter_fidelity},
      {"spectrum claims", spectrum_claims},
      {"MAdaIN contract", madain_contract},
      {"pair contract", pair_contract},
      {"NT-Xent oracle", nt_xent_oracle},
      {"retrieval sanity", retrieval_sanity},
      {"AUC oracle", auc_oracle},
      {"corruption monotonicity", corruption_monotonicity},
      {"determinism", determinism},
      {"throughput", throughput},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
