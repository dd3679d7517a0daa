#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "../support/table2.hpp"
#include "trymove/error.hpp"
#include "trymove/report.hpp"

using namespace trymove;

namespace {

std::vector<ReportRow> paper_report_rows() {
  std::vector<ReportRow> rows;
  for (const auto& p : testing::paper_rows()) {
    ReportRow r;
    r.level = p.level;
    r.t_end = p.t_end;
    r.counts = p.counts;
    if (p.counts) {
      const auto s = final_score(p.t_end, config_for(p.level), *p.counts);
      r.time_bonus = p.level == Level::guidance ? std::nullopt : std::optional(s.time_bonus);
      r.gesture_sum = s.gesture_sum;
      r.weighted_sum = s.weighted_sum;
      r.final_score = s.final_score;
    } else {
      r.gesture_sum = p.gesture_sum;
      r.weighted_sum = p.weighted_sum;
      r.time_bonus = p.bonus;
      r.final_score = p.bonus.value_or(0) + p.gesture_sum + p.weighted_sum;
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("guidance row 1 ends with the published sums") {
  const auto& p = testing::paper_rows()[0];
  const auto score = final_score(p.t_end, config_for(Level::guidance), *p.counts);
  const auto row = make_row(Level::guidance, p.t_end, score, *p.counts, false);
  const auto table = render_table({row});
  const auto line = table.substr(table.find('\n') + 1);
  CHECK(line.substr(line.size() - 11) == "48 274 322\n");
  const auto csv = render_csv({row});
  CHECK(csv.substr(csv.size() - 11) == "48,274,322\n");
  CHECK(csv.find("guidance,186,-,1,1,6,6,") != std::string::npos);
}

TEST_CASE("header only") {
  CHECK(render_csv({}) == "level,time,bonus,g1,g2,g3,g4,g5,g6,g7,g8,g9,g10,ga,gb,gc,gd,ge,gf,sum,weighted,F\n");
  const auto t = render_table({});
  CHECK(std::count(t.begin(), t.end(), '\n') == 1);
  CHECK(t.rfind("level", 0) == 0);
}

TEST_CASE("reconstructed table sums match the paper") {
  const auto rows = paper_report_rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& p = testing::paper_rows()[i];
    CHECK(rows[i].gesture_sum == p.gesture_sum);
    CHECK(rows[i].weighted_sum == p.weighted_sum);
  }
  const auto csv = render_csv(rows);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
  CHECK(csv.find("difficult,260,57,-,-,") != std::string::npos);
  CHECK(render_table(rows) == render_table(rows));

  // Every table line has the same width layout: 22 columns.
  const auto table = render_table(rows);
  std::size_t start = 0;
  while (start < table.size()) {
    const auto end = table.find('\n', start);
    std::istringstream in(table.substr(start, end - start));
    int cols = 0;
    for (std::string tok; in >> tok;) ++cols;
    CHECK(cols == 22);
    start = end + 1;
  }
}

TEST_CASE("row validation") {
  const GestureCounts counts{1, 1, 6, 6, 6, 6, 6, 6, 0, 0, 4, 0, 6, 0, 0, 0};
  auto row = make_row(Level::easy, 93, final_score(93, config_for(Level::easy), counts), counts, true);
  CHECK_NOTHROW(validate_row(row));
  row.final_score += 1;
  CHECK_THROWS_AS(validate_row(row), Error);
  CHECK_THROWS_AS(render_csv({row}), Error);
  row.final_score -= 1;
  row.weighted_sum += 1;
  row.final_score += 1;
  CHECK_THROWS_AS(validate_row(row), Error);
  CHECK(to_string(RowSource::classified) == "classified");
}
