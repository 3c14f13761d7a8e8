#include <gtest/gtest.h>

#include <fstream>

#include "dvsb/error.hpp"
#include "dvsb/io.hpp"
#include "dvsb/synthetic.hpp"
#include "test_util.hpp"

namespace dvsb {
namespace {

using testing::TempDir;
namespace fs = std::filesystem;

Frame quantized(const Frame& f) {
  Frame q = f;
  for (float& v : q.values()) v = std::round(v * 255.0f) / 255.0f;
  return q;
}

TEST(Png, RoundTripIsQuantizationExact) {
  TempDir dir;
  const Frame f = testing::random_image<3>(17, 23, 1);
  io::write_png(dir / "a.png", f);
  const Frame back = io::read_png(dir / "a.png");
  const Frame q = quantized(f);
  ASSERT_TRUE(back.same_shape(f));
  for (std::size_t i = 0; i < q.values().size(); ++i) EXPECT_NEAR(back.values()[i], q.values()[i], 1e-6);
  io::write_png(dir / "b.png", back);
  EXPECT_EQ(io::read_png(dir / "b.png"), back);
}

TEST(Png, MaskDecodesAsGray) {
  TempDir dir;
  Mask m(4, 5);
  m.at(1, 2) = 1.0f;
  io::write_png(dir / "m.png", m);
  const Frame back = io::read_png(dir / "m.png");
  EXPECT_EQ(back.at(1, 2, 0), 1.0f);
  EXPECT_EQ(back.at(1, 2, 2), 1.0f);
  EXPECT_EQ(back.at(0, 0, 1), 0.0f);
}

TEST(Png, GarbageIsInputError) {
  TempDir dir;
  io::write_file_atomic(dir / "x.png", "not a png");
  EXPECT_THROW(io::read_png(dir / "x.png"), InputError);
  EXPECT_THROW(io::read_png(dir / "missing.png"), InputError);
}

TEST(FrameDir, OrderAndGaps) {
  TempDir dir;
  const Frame f(4, 4, 0.5f);
  for (int i : {2, 0, 1}) io::write_png(dir / io::frame_file_name(i), f);
  io::write_file_atomic(dir / "notes.txt", "x");
  const auto paths = io::list_frames(dir.path());
  ASSERT_EQ(paths.size(), 3u);
  EXPECT_EQ(paths[0].filename(), "frame_00000.png");
  EXPECT_EQ(paths[2].filename(), "frame_00002.png");

  fs::remove(dir / io::frame_file_name(1));
  EXPECT_THROW(io::list_frames(dir.path()), GapError);
}

TEST(FrameDir, EmptyIsGap) {
  TempDir dir;
  EXPECT_THROW(io::list_frames(dir.path()), GapError);
  EXPECT_THROW(io::list_frames(dir / "nope"), InputError);
}

TEST(FrameDir, DuplicateIndex) {
  TempDir dir;
  io::write_png(dir / "a_1.png", Frame(2, 2));
  io::write_png(dir / "b_01.png", Frame(2, 2));
  EXPECT_THROW(io::list_frames(dir.path()), ConsistencyError);
}

TEST(FrameDir, MixedSizes) {
  TempDir dir;
  io::write_png(dir / io::frame_file_name(0), Frame(4, 4));
  io::write_png(dir / io::frame_file_name(1), Frame(4, 5));
  EXPECT_THROW(io::load_frames(dir.path()), ConsistencyError);
}

TEST(Landmarks, RoundTrip) {
  const RealClip clip = make_synthetic_face_clip(3, 2, 40, 40);
  const auto back = io::parse_landmarks(io::serialize_landmarks(clip.landmarks));
  EXPECT_EQ(back, clip.landmarks);
}

TEST(Landmarks, Errors) {
  EXPECT_THROW(io::parse_landmarks("{}"), InputError);
  EXPECT_THROW(io::parse_landmarks("[[[1, 2]]]"), InputError);
  try {
    io::parse_landmarks("[\n[1, 2,\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 2);
  }
}

TEST(Clip, SaveLoadAndCountMismatch) {
  TempDir dir;
  const RealClip clip = make_synthetic_face_clip(4, 3, 32, 32);
  io::save_clip(dir.path(), clip);
  const RealClip back = io::load_clip({dir.path(), {}});
  EXPECT_EQ(back.length(), 3);
  EXPECT_EQ(back.landmarks, clip.landmarks);

  io::write_file_atomic(dir / "short.json",
                        io::serialize_landmarks(std::span(clip.landmarks).first(2)));
  try {
    io::load_clip({dir.path(), dir / "short.json"});
    FAIL() << "expected ConsistencyError";
  } catch (const ConsistencyError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('3'), std::string::npos);
    EXPECT_NE(msg.find('2'), std::string::npos);
  }
}

TEST(Synthesized, WritesFramesMasksManifest) {
  TempDir dir;
  const RealClip clip = make_synthetic_face_clip(5, 3, 32, 32);
  const SynthesizedClip out = gen_stage2_sample(clip, 8);
  io::save_synthesized(dir / "out", out);
  EXPECT_TRUE(fs::exists(dir / "out" / io::frame_file_name(2)));
  EXPECT_TRUE(fs::exists(dir / "out" / io::mask_file_name(2)));
  EXPECT_EQ(io::load_manifest(dir / "out" / "manifest.json"), out.manifest);
}

TEST(AtomicWrite, NoTemporaryLeftBehind) {
  TempDir dir;
  io::write_file_atomic(dir / "sub" / "f.txt", "hello");
  io::write_file_atomic(dir / "sub" / "f.txt", "world");
  EXPECT_EQ(io::read_file(dir / "sub" / "f.txt"), "world");
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sub")) ++files;
  EXPECT_EQ(files, 1);
}

TEST(Config, DefaultsRoundTrip) {
  const io::Config c = io::parse_config(io::serialize_config(io::Config{}));
  EXPECT_EQ(c.ranges, ParamRanges{});
  for (CorruptionKind k : all_corruption_kinds()) EXPECT_EQ(c.severity.row(k), SeverityTables{}.row(k));
}

TEST(Config, ShippedDefaultMatchesBuiltins) {
  const io::Config c = io::load_config(fs::path(DVSB_CONFIG_DIR) / "default.json");
  EXPECT_EQ(c.ranges, ParamRanges{});
  EXPECT_EQ(io::serialize_config(c), io::serialize_config(io::Config{}));
}

TEST(Config, PartialOverride) {
  const io::Config c = io::parse_config(R"({"param_ranges": {"madain_prob": 0.5, "scale": [0.9, 1.1]}})");
  EXPECT_EQ(c.ranges.madain_prob, 0.5);
  EXPECT_EQ(c.ranges.scale, (Range{0.9, 1.1}));
  EXPECT_EQ(c.ranges.translate, ParamRanges{}.translate);
}

TEST(Config, Errors) {
  EXPECT_THROW(io::parse_config(R"({"colour": {}})"), ConfigError);
  EXPECT_THROW(io::parse_config(R"({"param_ranges": {"scale": [1.1, 0.9]}})"), ConfigError);
  EXPECT_THROW(io::parse_config(R"({"param_ranges": {"madain_prob": 1.5}})"), ConfigError);
  EXPECT_THROW(io::parse_config(R"({"param_ranges": {"bogus": [0, 1]}})"), ConfigError);
  EXPECT_THROW(io::parse_config(R"({"corruption_severity": {"contrast": [1, 2]}})"), ConfigError);
  EXPECT_THROW(io::parse_config("[1, 2]"), ConfigError);
  EXPECT_THROW(io::parse_config("{\"param_ranges\": "), ParseError);
}

}  // namespace
}  // namespace dvsb
