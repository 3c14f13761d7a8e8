#pragma once

#include <cstdint>

#include "dvsb/mask_engine.hpp"
#include "dvsb/pair_factory.hpp"

namespace dvsb {

// Mean 68-point face layout in unit face-box coordinates.
LandmarkSet template_landmarks();

// Procedural talking-head stand-in: a textured face with eyes, brows, nose
// and mouth drawn at the landmark positions over a gradient background, with
// slow head motion across frames. Distinct seeds give distinct identities.
RealClip make_synthetic_face_clip(std::uint64_t seed, int length, int height, int width);

}  // namespace dvsb
