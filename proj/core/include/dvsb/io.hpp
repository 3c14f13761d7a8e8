#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dvsb/image.hpp"
#include "dvsb/manifest.hpp"
#include "dvsb/mask_engine.hpp"
#include "dvsb/pair_factory.hpp"
#include "dvsb/param_space.hpp"
#include "dvsb/robustness.hpp"

namespace dvsb::io {

namespace fs = std::filesystem;

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const fs::path& path, std::string_view content);
std::string read_file(const fs::path& path);

// 8-bit PNG. Frames decode to RGB in [0, 1]; gray and alpha inputs are
// expanded/stripped. Writes quantize with round(255 * v).
Frame read_png(const fs::path& path);
std::string encode_png(const Frame& frame);
std::string encode_png(const Mask& mask);
void write_png(const fs::path& path, const Frame& frame);
void write_png(const fs::path& path, const Mask& mask);

// Numbered frame files in `dir`: any name ending in digits before ".png".
// Indices must be contiguous; the lexicographic order of the zero-padded
// names is the temporal order.
// Throws GapError for an empty directory or a missing index, ConsistencyError
// for mixed frame sizes.
std::vector<fs::path> list_frames(const fs::path& dir);
std::vector<Frame> load_frames(const fs::path& dir);

// JSON: array over frames, each an array of 68 [x, y] pairs.
std::vector<LandmarkSet> parse_landmarks(std::string_view text);
std::vector<LandmarkSet> load_landmarks(const fs::path& path);
std::string serialize_landmarks(std::span<const LandmarkSet> landmarks);

struct ClipSource {
  fs::path frames_dir;
  fs::path landmarks;  // empty: frames_dir / "landmarks.json"
};

// Throws ConsistencyError naming both counts when frames and landmark
// entries disagree.
RealClip load_clip(const ClipSource& source);
// Writes frame_00000.png... and landmarks.json into `dir`.
void save_clip(const fs::path& dir, const RealClip& clip);

std::string frame_file_name(int index);
std::string mask_file_name(int index);

// Frames, soft masks and manifest.json of a synthesized clip.
void save_synthesized(const fs::path& dir, const SynthesizedClip& clip);

void save_manifest(const fs::path& path, const Manifest& manifest);
Manifest load_manifest(const fs::path& path);

// Global configuration: {"param_ranges": {...}, "corruption_severity": {...}}.
struct Config {
  ParamRanges ranges;
  SeverityTables severity;
};
// Throws ConfigError for invalid values and ParseError for malformed JSON.
Config parse_config(std::string_view text);
Config load_config(const fs::path& path);
std::string serialize_config(const Config& config);

}  // namespace dvsb::io
