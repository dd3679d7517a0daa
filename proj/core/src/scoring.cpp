#include "trymove/scoring.hpp"

#include <cmath>
#include <string>

#include "trymove/error.hpp"
#include "trymove/taxonomy.hpp"

namespace trymove {

std::string_view to_string(Rounding mode) noexcept {
  return mode == Rounding::floor ? "floor" : "half-up";
}

Rounding parse_rounding(std::string_view text) {
  if (text == "half-up" || text == "half_up") return Rounding::half_up;
  if (text == "floor") return Rounding::floor;
  fail(ErrorKind::validation, "unknown rounding mode '" + std::string(text) + "'; expected half-up or floor");
}

std::int64_t time_bonus(double t_end, std::optional<double> t_total, Rounding mode) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    fail(ErrorKind::invalid_time, "t_end must be a non-negative number of seconds");
  }
  if (!t_total) return 0;
  const double total = *t_total;
  if (!(total > 0.0)) fail(ErrorKind::invalid_time, "t_total must be positive");
  if (t_end >= total) return 0;

  // Whole-second inputs are rounded in exact integer arithmetic so that ties
  // such as 57.5 are not at the mercy of binary fractions.
  if (t_end == std::floor(t_end) && total == std::floor(total) && total < 1e15) {
    const auto num = 100 * (static_cast<std::int64_t>(total) - static_cast<std::int64_t>(t_end));
    const auto den = static_cast<std::int64_t>(total);
    return mode == Rounding::floor ? num / den : (2 * num + den) / (2 * den);
  }
  const double value = 100.0 * (total - t_end) / total;
  return static_cast<std::int64_t>(mode == Rounding::floor ? std::floor(value) : std::floor(value + 0.5));
}

GestureSums gesture_sums(std::span<const std::int64_t> counts) {
  if (counts.size() != kGestureCount) {
    fail(ErrorKind::shape, "count vector must have 16 entries, got " + std::to_string(counts.size()));
  }
  GestureSums sums;
  for (const auto c : counts) {
    if (c < 0) fail(ErrorKind::validation, "gesture counts must be non-negative");
    sums.gesture_sum += c;
  }
  sums.weighted_sum = dot_weights(counts);
  return sums;
}

ScoreBreakdown compose_score(std::int64_t bonus, const GestureSums& sums, bool finished) {
  ScoreBreakdown s;
  s.time_bonus = bonus;
  s.gesture_sum = sums.gesture_sum;
  s.weighted_sum = sums.weighted_sum;
  s.final_score = bonus + sums.gesture_sum + sums.weighted_sum;
  s.reward_base = bonus + sums.gesture_sum;
  s.reward_muscle = sums.weighted_sum;
  s.finished = finished;
  return s;
}

ScoreBreakdown final_score(double t_end, const DifficultyConfig& config,
                           std::span<const std::int64_t> counts, Rounding mode) {
  const auto sums = gesture_sums(counts);
  return compose_score(time_bonus(t_end, config.t_total, mode), sums);
}

ScoreBreakdown unfinished_score(std::span<const std::int64_t> counts) {
  return compose_score(0, gesture_sums(counts), false);
}

nlohmann::ordered_json to_json(const ScoreBreakdown& s) {
  nlohmann::ordered_json doc;
  doc["time_bonus"] = s.time_bonus;
  doc["gesture_sum"] = s.gesture_sum;
  doc["weighted_sum"] = s.weighted_sum;
  doc["final_score"] = s.final_score;
  doc["reward_base"] = s.reward_base;
  doc["reward_muscle"] = s.reward_muscle;
  doc["finished"] = s.finished;
  return doc;
}

}  // namespace trymove
