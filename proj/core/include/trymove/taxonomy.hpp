#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace trymove {

// The 16 interactive gesture classes. Enumerator values are the ordinals used
// for count vectors: locomotion 1-4, arm/wrist/hand 5-10, finger/palm a-f.
enum class GestureClass : std::uint8_t {
  g1, g2, g3, g4, g5, g6, g7, g8, g9, g10, ga, gb, gc, gd, ge, gf,
};

inline constexpr std::size_t kGestureCount = 16;

using GestureCounts = std::array<std::int64_t, kGestureCount>;

struct GestureSpec {
  GestureClass gesture;
  int muscle_count;  // N: participating muscle activations
  std::vector<std::string> motor_parts;
  std::vector<std::string> muscles;
  std::string tag;  // the bare label used in the gesture table: "1".."10", "a".."f"
  std::string description;
};

constexpr std::size_t ordinal(GestureClass g) noexcept { return static_cast<std::size_t>(g); }

// Throws Error(invalid_gesture) when out of range.
GestureClass from_ordinal(std::size_t index);

std::string_view code(GestureClass g) noexcept;

// Exact code match only ("g7", "gd"); case-insensitive.
std::optional<GestureClass> parse_code(std::string_view text) noexcept;

// Accepts a code ("g7"), a bare tag ("7", "c") or a unique case-insensitive
// prefix of a description ("wrist extension"). Ambiguous or unmatched text
// throws Error(parse) naming the candidates.
GestureClass parse_label(std::string_view text);

const GestureSpec& gesture_spec(GestureClass g) noexcept;

int muscle_count(GestureClass g) noexcept;

// Looks up by code ("g5"); unknown codes throw Error(invalid_gesture).
int muscle_count(std::string_view gesture_code);

// N for every class in ordinal order.
const std::array<int, kGestureCount>& muscle_weights() noexcept;

// [g1 .. g10, ga .. gf]
const std::array<GestureClass, kGestureCount>& canonical_order() noexcept;

std::int64_t dot_weights(std::span<const std::int64_t> counts);

// One record per class: code, ordinal, tag, N, motor parts, muscles, description.
nlohmann::ordered_json taxonomy_document();

}  // namespace trymove
