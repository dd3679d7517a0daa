#include "trymove/report.hpp"

#include <algorithm>
#include <cstdio>

#include "trymove/error.hpp"

namespace trymove {

namespace {

std::string format_seconds(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", t);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

// The table uses "wtd" so that three-digit sums are not padded.
std::vector<std::string> header(bool compact) {
  std::vector<std::string> h = {"level", "time", "bonus"};
  for (const auto g : canonical_order()) h.emplace_back(code(g));
  h.insert(h.end(), {"sum", compact ? "wtd" : "weighted", "F"});
  return h;
}

std::vector<std::string> cells(const ReportRow& row, bool seconds_suffix) {
  std::vector<std::string> c;
  c.emplace_back(to_string(row.level));
  c.push_back(format_seconds(row.t_end) + (seconds_suffix ? "s" : ""));
  c.push_back(row.time_bonus ? std::to_string(*row.time_bonus) : "-");
  for (std::size_t i = 0; i < kGestureCount; ++i) c.push_back(row.counts ? std::to_string((*row.counts)[i]) : "-");
  c.push_back(std::to_string(row.gesture_sum));
  c.push_back(std::to_string(row.weighted_sum));
  c.push_back(std::to_string(row.final_score));
  return c;
}

}  // namespace

std::string_view to_string(RowSource source) noexcept {
  return source == RowSource::classified ? "classified" : "ground_truth";
}

ReportRow make_row(Level level, double t_end, const ScoreBreakdown& score, const GestureCounts& counts,
                   bool has_time_budget, RowSource source) {
  ReportRow row;
  row.level = level;
  row.t_end = t_end;
  if (has_time_budget) row.time_bonus = score.time_bonus;
  row.counts = counts;
  row.gesture_sum = score.gesture_sum;
  row.weighted_sum = score.weighted_sum;
  row.final_score = score.final_score;
  row.source = source;
  return row;
}

void validate_row(const ReportRow& row) {
  if (row.counts) {
    const auto sums = gesture_sums(*row.counts);
    if (sums.gesture_sum != row.gesture_sum || sums.weighted_sum != row.weighted_sum) {
      fail(ErrorKind::validation, "report row sums disagree with its gesture counts");
    }
  }
  if (row.final_score != row.time_bonus.value_or(0) + row.gesture_sum + row.weighted_sum) {
    fail(ErrorKind::validation, "report row F is not bonus + sum + weighted sum");
  }
}

std::string render_csv(const std::vector<ReportRow>& rows) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& c) {
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + c[i];
    out += "\n";
  };
  emit(header(false));
  for (const auto& row : rows) {
    validate_row(row);
    emit(cells(row, false));
  }
  return out;
}

std::string render_table(const std::vector<ReportRow>& rows) {
  std::vector<std::vector<std::string>> grid = {header(true)};
  for (const auto& row : rows) {
    validate_row(row);
    grid.push_back(cells(row, true));
  }
  std::vector<std::size_t> width(grid.front().size(), 0);
  for (const auto& r : grid)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());

  std::string out;
  for (const auto& r : grid) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += ' ';
      const std::string pad(width[i] - r[i].size(), ' ');
      line += i == 0 ? r[i] + pad : pad + r[i];  // level left-aligned, numbers right-aligned
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

}  // namespace trymove
