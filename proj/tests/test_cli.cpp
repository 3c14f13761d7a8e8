#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "dvsb/io.hpp"
#include "dvsb/synthetic.hpp"
#include "test_util.hpp"

namespace dvsb {
namespace {

using testing::TempDir;
namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_dir(const fs::path& dir) {
  std::string all;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) all += f.filename().string() + ":" + io::read_file(f);
  return all;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { io::save_clip(real_, make_synthetic_face_clip(1, 6, 48, 48)); }
  TempDir dir_;
  fs::path real_ = dir_ / "real";
};

TEST_F(CliTest, SynthesizeIsByteIdenticalAcrossRunsAndThreads) {
  const std::vector<std::string> base = {"synthesize", "--input", real_.string(), "--seed", "7",
                                         "--clip-len", "6", "--mode", "dynamic-mid"};
  auto with = [&](const std::string& out, const std::string& threads) {
    auto args = base;
    args.insert(args.end(), {"--out", (dir_ / out).string(), "--threads", threads});
    return cli(args);
  };
  const CliRun a = with("a", "1");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(with("b", "1").code, 0);
  ASSERT_EQ(with("c", "3").code, 0);
  EXPECT_EQ(read_dir(dir_ / "a"), read_dir(dir_ / "b"));
  EXPECT_EQ(read_dir(dir_ / "a"), read_dir(dir_ / "c"));
  EXPECT_NE(a.out.find("blend_group_hash"), std::string::npos);

  const nlohmann::json m = nlohmann::json::parse(io::read_file(dir_ / "a" / "manifest.json"));
  EXPECT_GE(m["filter"]["mu"].get<double>(), 0.0);
  EXPECT_LE(m["filter"]["mu"].get<double>(), 6.0);
  EXPECT_EQ(m["seed"].get<std::uint64_t>(), 7u);
}

TEST_F(CliTest, ManifestResynthesis) {
  ASSERT_EQ(cli({"synthesize", "--input", real_.string(), "--out", (dir_ / "a").string(), "--seed", "3",
                 "--clip-len", "5", "--stage", "1"})
                .code,
            0);
  const CliRun r = cli({"synthesize", "--input", real_.string(), "--out", (dir_ / "b").string(), "--manifest",
                     (dir_ / "a" / "manifest.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_dir(dir_ / "a"), read_dir(dir_ / "b"));
}

TEST_F(CliTest, MadainProbOverride) {
  ASSERT_EQ(cli({"synthesize", "--input", real_.string(), "--out", (dir_ / "a").string(), "--clip-len", "4",
                 "--madain-prob", "1"})
                .code,
            0);
  const Manifest m = io::load_manifest(dir_ / "a" / "manifest.json");
  EXPECT_TRUE(m.track.clip.madain);
  EXPECT_EQ(m.track.ranges.madain_prob, 1.0);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"synthesize", "--input", real_.string(), "--out", "x", "--bogus"}).code, 2);
  EXPECT_EQ(cli({"synthesize", "--input", real_.string(), "--out", "x", "--mode", "wobbly"}).code, 2);
  EXPECT_EQ(cli({"synthesize", "--input", (dir_ / "missing").string(), "--out", (dir_ / "x").string()}).code, 2);
  EXPECT_EQ(cli({"synthesize", "--input", real_.string(), "--out", (dir_ / "x").string(), "--clip-len", "50"}).code,
            2);

  io::write_file_atomic(dir_ / "bad.json", R"({"param_ranges": {"scale": [2, 1]}})");
  const CliRun r = cli({"synthesize", "--input", real_.string(), "--out", (dir_ / "x").string(), "--config",
                     (dir_ / "bad.json").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("scale"), std::string::npos);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, EvalAuc) {
  io::write_file_atomic(dir_ / "s.csv", "score,label\n0.9,1\n0.1,0\n0.8,1\n0.3,0\n");
  CliRun r = cli({"eval-auc", (dir_ / "s.csv").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1.0\n");
  io::write_file_atomic(dir_ / "t.csv", "0.1,1\n0.4,0\n0.35,1\n0.8,0\n");
  EXPECT_EQ(cli({"eval-auc", (dir_ / "t.csv").string()}).out, "0.0\n");
  io::write_file_atomic(dir_ / "one.csv", "0.1,1\n0.4,1\n");
  EXPECT_EQ(cli({"eval-auc", (dir_ / "one.csv").string()}).code, 2);
  io::write_file_atomic(dir_ / "bad.csv", "0.1,1\nx,0\n");
  EXPECT_EQ(cli({"eval-auc", (dir_ / "bad.csv").string()}).code, 2);
}

TEST_F(CliTest, SpectrumCsv) {
  ASSERT_EQ(cli({"synthesize", "--input", real_.string(), "--out", (dir_ / "a").string(), "--clip-len", "6"}).code,
            0);
  const CliRun r = cli({"spectrum", "--manifest", (dir_ / "a" / "manifest.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "channel,k1,k2,k3,k4,k5,k6");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
  }
  EXPECT_EQ(rows, kChannelCount);
}

TEST_F(CliTest, CorruptKeepsNames) {
  const CliRun r = cli({"corrupt", "--input", real_.string(), "--out", (dir_ / "c").string(), "--kind",
                     "gaussian_noise", "--severity", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::list_frames(dir_ / "c").size(), 6u);
  EXPECT_NE(io::read_png(dir_ / "c" / io::frame_file_name(0)), io::read_png(real_ / io::frame_file_name(0)));
  EXPECT_EQ(cli({"corrupt", "--input", real_.string(), "--out", (dir_ / "c").string(), "--kind", "fog",
                 "--severity", "3"})
                .code,
            2);
}

TEST_F(CliTest, PairgenWritesBatch) {
  const CliRun r = cli({"pairgen", "--out", (dir_ / "p").string(), "--pairs", "2", "--clip-len", "3", "--size", "32"});
  ASSERT_EQ(r.code, 0) << r.err;
  const nlohmann::json batch = nlohmann::json::parse(io::read_file(dir_ / "p" / "batch.json"));
  ASSERT_EQ(batch["clips"].size(), 4u);
  EXPECT_EQ(batch["clips"][0]["blend_group_hash"], batch["clips"][1]["blend_group_hash"]);
  EXPECT_NE(batch["clips"][0]["blend_group_hash"], batch["clips"][2]["blend_group_hash"]);
  EXPECT_TRUE(fs::exists(dir_ / "p" / batch["clips"][3]["dir"].get<std::string>() / "manifest.json"));
}

TEST_F(CliTest, Demo) {
  const CliRun r = cli({"demo", "--pairs", "2", "--clip-len", "3", "--size", "32"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("nt_xent"), std::string::npos);
}

}  // namespace
}  // namespace dvsb
