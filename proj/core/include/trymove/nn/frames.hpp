#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "trymove/rng.hpp"
#include "trymove/taxonomy.hpp"

namespace trymove::nn {

inline constexpr int kFrameSize = 32;
inline constexpr std::size_t kFramePixels = kFrameSize * kFrameSize;
// Bumped whenever the glyph recipe changes; accuracy figures are tied to it.
inline constexpr int kGlyphRecipeVersion = 1;

struct Frame {
  std::vector<float> pixels = std::vector<float>(kFramePixels, 0.0f);  // row-major, [0, 1]
  std::optional<GestureClass> label;

  float at(int x, int y) const { return pixels[static_cast<std::size_t>(y * kFrameSize + x)]; }
  friend bool operator==(const Frame&, const Frame&) = default;
};

struct GlyphJitter {
  double max_rotation_degrees = 15.0;
  double max_shift_pixels = 3.0;
  double noise_sigma = 0.05;
};

// Clean rendering of a class glyph: no rotation, shift or noise.
Frame glyph_template(GestureClass gesture);

// One perturbed rendering drawn from rng.
Frame render_glyph(GestureClass gesture, Rng& rng, const GlyphJitter& jitter = {});

// Deterministic per (gesture, n, seed).
std::vector<Frame> synth_frames(GestureClass gesture, int n, std::uint64_t seed);

// n frames per class for every class, class-major.
std::vector<Frame> synth_dataset(int per_class, std::uint64_t seed);

// Binary portable graymap (P5, maxval 255); the label is kept in a comment.
void write_pgm(const Frame& frame, const std::filesystem::path& path);
Frame read_pgm(const std::filesystem::path& path);

}  // namespace trymove::nn
