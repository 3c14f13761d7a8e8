#include <gtest/gtest.h>

#include <set>

#include "dvsb/error.hpp"
#include "dvsb/pair_factory.hpp"
#include "dvsb/synthetic.hpp"

namespace dvsb {
namespace {

RealClip face(std::uint64_t seed, int length = 4, int size = 48) {
  return make_synthetic_face_clip(seed, length, size, size);
}

TEST(PositivePair, SharesBlendGroupOnly) {
  const RealClip a = face(1), b = face(2);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const PositivePair p = gen_positive_pair(a, b, s);
    EXPECT_EQ(p.a.manifest.blend_group_hash, p.b.manifest.blend_group_hash);
    EXPECT_EQ(p.a.manifest.track.filter, p.b.manifest.track.filter);
    EXPECT_EQ(p.a.manifest.track.clip.scheme, p.b.manifest.track.clip.scheme);
    EXPECT_NE(group_serialization(p.a.manifest.track, ParamGroup::kColor),
              group_serialization(p.b.manifest.track, ParamGroup::kColor));
    EXPECT_EQ(p.a.manifest.track.stage, Stage::kPretrain);
  }
}

TEST(PositivePair, SeedsShareBlendStreamOnly) {
  std::set<std::string> color;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto [sa, sb] = pair_seeds(s);
    EXPECT_EQ(sa.blend, sb.blend);
    EXPECT_NE(sa.appearance, sb.appearance);
    EXPECT_NE(sa.madain, sb.madain);
    const ParamTrack ta = prepare_track(sa, s, 6, Stage::kPretrain, TemporalMode::dynamic_low(), {});
    const ParamTrack tb = prepare_track(sb, s, 6, Stage::kPretrain, TemporalMode::dynamic_low(), {});
    EXPECT_EQ(blend_group_hash(ta), blend_group_hash(tb));
    color.insert(group_serialization(ta, ParamGroup::kColor));
    color.insert(group_serialization(tb, ParamGroup::kColor));
  }
  EXPECT_EQ(color.size(), 200u);
}

TEST(PositivePair, Deterministic) {
  const RealClip a = face(3), b = face(4);
  const PositivePair p = gen_positive_pair(a, b, 77);
  const PositivePair q = gen_positive_pair(a, b, 77);
  EXPECT_EQ(p.a.frames, q.a.frames);
  EXPECT_EQ(p.b.masks, q.b.masks);
  EXPECT_EQ(p.a.manifest, q.a.manifest);
}

TEST(PositivePair, Errors) {
  const RealClip a = face(5, 4), b = face(6, 5);
  EXPECT_THROW(gen_positive_pair(a, b, 1), InputError);
  RealClip bad = face(7, 4);
  bad.landmarks.pop_back();
  EXPECT_THROW(gen_positive_pair(a, bad, 1), ConsistencyError);
  EXPECT_THROW(gen_positive_pair(face(8, 1), face(9, 1), 1), InputError);
}

TEST(Stage2, WholeFaceAndMadainRate) {
  int madain = 0;
  const int n = 2000;
  for (int s = 0; s < n; ++s) {
    const ParamTrack t =
        prepare_track(static_cast<std::uint64_t>(s), 2, Stage::kFinetune, TemporalMode::independent(), {});
    EXPECT_TRUE(t.clip.scheme.is_whole_face());
    madain += t.clip.madain ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(madain) / n, 0.25, 0.04);
}

TEST(Stage2, SampleIsFinetune) {
  const SynthesizedClip c = gen_stage2_sample(face(10), 3);
  EXPECT_EQ(c.manifest.track.stage, Stage::kFinetune);
  EXPECT_TRUE(c.manifest.track.clip.scheme.is_whole_face());
  EXPECT_EQ(c.frames.size(), 4u);
}

TEST(BuildBatch, Errors) {
  std::vector<RealClip> reals = {face(1), face(2), face(3)};
  EXPECT_THROW(build_batch(reals, 1), InputError);
  EXPECT_THROW(build_batch(std::span<const RealClip>{}, 1), InputError);
  std::vector<RealClip> twins = {face(1), face(1)};
  EXPECT_THROW(build_batch(twins, 1), InputError);
}

TEST(BuildBatch, SinglePair) {
  std::vector<RealClip> reals = {face(1), face(2)};
  const Batch b = build_batch(reals, 5);
  EXPECT_EQ(b.pair_map, (std::vector<int>{1, 0}));
  EXPECT_EQ(b.clips[0].manifest.blend_group_hash, b.clips[1].manifest.blend_group_hash);
}

TEST(BuildBatch, PairMapInvolutionAndReproducibleManifests) {
  std::vector<RealClip> reals;
  for (std::uint64_t i = 0; i < 6; ++i) reals.push_back(face(20 + i));
  const Batch b = build_batch(reals, 9);
  ASSERT_EQ(b.clips.size(), 6u);
  std::set<std::string> hashes;
  for (std::size_t i = 0; i < b.pair_map.size(); ++i) {
    const auto j = static_cast<std::size_t>(b.pair_map[i]);
    EXPECT_NE(j, i);
    EXPECT_EQ(static_cast<std::size_t>(b.pair_map[j]), i);
    EXPECT_EQ(b.clips[i].manifest.blend_group_hash, b.clips[j].manifest.blend_group_hash);
    hashes.insert(b.clips[i].manifest.blend_group_hash);
    const SynthesizedClip again = resynthesize(reals[i], b.clips[i].manifest);
    EXPECT_EQ(again.frames, b.clips[i].frames);
    EXPECT_EQ(again.masks, b.clips[i].masks);
  }
  EXPECT_EQ(hashes.size(), 3u);
}

TEST(BuildBatch, IndependentOfThreads) {
  std::vector<RealClip> reals;
  for (std::uint64_t i = 0; i < 4; ++i) reals.push_back(face(40 + i));
  GenerationOptions one, four;
  four.threads = 4;
  const Batch a = build_batch(reals, 3, one);
  const Batch b = build_batch(reals, 3, four);
  for (std::size_t i = 0; i < a.clips.size(); ++i) {
    EXPECT_EQ(a.clips[i].frames, b.clips[i].frames);
    EXPECT_EQ(a.clips[i].manifest, b.clips[i].manifest);
  }
  EXPECT_EQ(a.pair_map, b.pair_map);
}

}  // namespace
}  // namespace dvsb
