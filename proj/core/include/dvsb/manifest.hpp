#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dvsb/param_space.hpp"

namespace dvsb {

inline constexpr int kManifestSchemaVersion = 1;
// Bumped whenever synthesis output changes for identical parameters.
inline constexpr std::string_view kPipelineVersion = "dvsb-1;mask-peak-rescale;madain-pre-blur";

// Provenance of one synthesized clip: enough to re-synthesize it bit-exactly.
struct Manifest {
  int schema_version = kManifestSchemaVersion;
  std::string pipeline_version{kPipelineVersion};
  ParamTrack track;
  std::vector<int> madain_skipped_frames;
  std::string blend_group_hash;

  bool madain_applied() const noexcept {
    return track.clip.madain &&
           static_cast<int>(madain_skipped_frames.size()) < track.length();
  }

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

// Parameter groups of the forgery process.
enum class ParamGroup { kColor, kQuality, kBlend };

// Canonical text of one group: its per-frame channel values plus the clip
// fields that belong to it. The blend group also carries the filter spec.
std::string group_serialization(const ParamTrack& track, ParamGroup group);

// SHA-256 (hex) of the blend-group serialization. Equal for clips that share
// {dislocation, mask scheme, deformation, blending}; blind to color/quality.
std::string blend_group_hash(const ParamTrack& track);

Manifest make_manifest(const ParamTrack& track, std::vector<int> madain_skipped_frames);

nlohmann::json track_to_json(const ParamTrack& track);
ParamTrack track_from_json(const nlohmann::json& j);
nlohmann::json ranges_to_json(const ParamRanges& ranges);
// Missing keys keep their defaults.
ParamRanges ranges_from_json(const nlohmann::json& j, ParamRanges base = {});

nlohmann::json manifest_to_json(const Manifest& manifest);
// Throws InputError for a newer schema version or a missing field.
Manifest manifest_from_json(const nlohmann::json& j);

std::string serialize_manifest(const Manifest& manifest);
// Throws ParseError (with line/column) on malformed text.
Manifest parse_manifest(std::string_view text);

// Parses JSON and converts nlohmann parse errors into ParseError.
nlohmann::json parse_json(std::string_view text);

}  // namespace dvsb
