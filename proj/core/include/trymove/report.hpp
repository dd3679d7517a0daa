#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trymove/difficulty.hpp"
#include "trymove/scoring.hpp"
#include "trymove/taxonomy.hpp"

namespace trymove {

enum class RowSource { ground_truth, classified };

std::string_view to_string(RowSource source) noexcept;

// One line of the score table: level, time, bonus, 16 counts, the two sums, F.
// Rows without per-gesture counts ("sums only") carry just the totals.
struct ReportRow {
  Level level = Level::guidance;
  double t_end = 0.0;
  std::optional<std::int64_t> time_bonus;  // empty when the level has no time budget
  std::optional<GestureCounts> counts;
  std::int64_t gesture_sum = 0;
  std::int64_t weighted_sum = 0;
  std::int64_t final_score = 0;
  RowSource source = RowSource::ground_truth;
};

ReportRow make_row(Level level, double t_end, const ScoreBreakdown& score, const GestureCounts& counts,
                   bool has_time_budget, RowSource source = RowSource::ground_truth);

// Throws Error(validation) when the totals disagree with the counts or F.
void validate_row(const ReportRow& row);

std::string render_csv(const std::vector<ReportRow>& rows);
std::string render_table(const std::vector<ReportRow>& rows);

}  // namespace trymove
