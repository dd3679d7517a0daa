#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include <nlohmann/json.hpp>

#include "trymove/difficulty.hpp"

namespace trymove {

enum class Rounding { half_up, floor };

std::string_view to_string(Rounding mode) noexcept;
Rounding parse_rounding(std::string_view text);

// F = time_bonus + gesture_sum + weighted_sum. The base reward collects the
// time and repetition terms, the muscle reward is the weighted term.
struct ScoreBreakdown {
  std::int64_t time_bonus = 0;
  std::int64_t gesture_sum = 0;
  std::int64_t weighted_sum = 0;
  std::int64_t final_score = 0;
  std::int64_t reward_base = 0;
  std::int64_t reward_muscle = 0;
  bool finished = true;  // false: session never completed, time term forced to 0

  friend bool operator==(const ScoreBreakdown&, const ScoreBreakdown&) = default;
};

struct GestureSums {
  std::int64_t gesture_sum = 0;
  std::int64_t weighted_sum = 0;

  friend bool operator==(const GestureSums&, const GestureSums&) = default;
};

// 100 * (t_total - t_end) / t_total, rounded, clamped at 0. No budget -> 0.
std::int64_t time_bonus(double t_end, std::optional<double> t_total, Rounding mode = Rounding::half_up);

// Throws Error(shape) unless counts has 16 entries.
GestureSums gesture_sums(std::span<const std::int64_t> counts);

ScoreBreakdown compose_score(std::int64_t bonus, const GestureSums& sums, bool finished = true);

ScoreBreakdown final_score(double t_end, const DifficultyConfig& config,
                           std::span<const std::int64_t> counts,
                           Rounding mode = Rounding::half_up);

// Unfinished sessions keep their gesture terms but earn no time bonus.
ScoreBreakdown unfinished_score(std::span<const std::int64_t> counts);

nlohmann::ordered_json to_json(const ScoreBreakdown& score);

}  // namespace trymove
