#pragma once

// The published score table, transcribed row by row. Count columns are in
// the order 1..10, a..f; rows with dashed gesture columns have no counts.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "trymove/difficulty.hpp"
#include "trymove/taxonomy.hpp"

namespace trymove::testing {

struct PaperRow {
  Level level;
  double t_end;
  std::optional<std::int64_t> bonus;
  std::optional<GestureCounts> counts;
  std::int64_t gesture_sum;
  std::int64_t weighted_sum;
  std::int64_t final_score;
};

inline const std::vector<PaperRow>& paper_rows() {
  using L = Level;
  static const std::vector<PaperRow> rows = {
      {L::guidance, 186, {}, GestureCounts{1, 1, 6, 6, 6, 6, 6, 6, 0, 0, 4, 0, 6, 0, 0, 0}, 48, 274, 322},
      {L::guidance, 237, {}, GestureCounts{1, 1, 6, 6, 6, 6, 8, 7, 0, 0, 4, 0, 4, 2, 0, 1}, 52, 311, 363},
      {L::guidance, 221, {}, GestureCounts{1, 0, 5, 6, 6, 6, 7, 6, 0, 0, 4, 0, 4, 2, 0, 0}, 47, 296, 343},
      {L::guidance, 230, {}, {}, 32, 254, 286},
      {L::easy, 93, 61, GestureCounts{8, 8, 9, 14, 10, 13, 0, 3, 2, 0, 6, 0, 6, 4, 0, 0}, 83, 426, 570},
      {L::easy, 102, 57, GestureCounts{6, 6, 7, 7, 8, 9, 2, 6, 1, 0, 6, 0, 6, 5, 1, 2}, 72, 414, 543},
      {L::easy, 87, 64, GestureCounts{6, 6, 9, 9, 11, 12, 0, 6, 1, 1, 6, 0, 6, 4, 0, 0}, 77, 443, 584},
      {L::easy, 105, 56, {}, 59, 378, 493},
      {L::middle, 147, 69, GestureCounts{7, 7, 10, 10, 9, 12, 3, 8, 5, 2, 9, 0, 8, 8, 1, 0}, 99, 607, 775},
      {L::middle, 162, 66, GestureCounts{11, 11, 13, 15, 13, 16, 5, 7, 6, 0, 8, 0, 11, 6, 0, 0}, 122, 661, 849},
      {L::middle, 158, 67, GestureCounts{8, 8, 10, 9, 11, 14, 1, 9, 5, 3, 8, 0, 9, 5, 0, 1}, 101, 598, 766},
      {L::middle, 167, 65, {}, 87, 522, 674},
      {L::difficult, 246, 59, GestureCounts{10, 10, 15, 15, 16, 22, 2, 13, 10, 3, 13, 2, 15, 7, 2, 0}, 155, 944, 1158},
      {L::difficult, 218, 64, GestureCounts{15, 15, 17, 17, 15, 23, 4, 12, 12, 2, 12, 3, 17, 6, 1, 2}, 173, 963, 1200},
      {L::difficult, 255, 58, GestureCounts{13, 13, 18, 18, 19, 20, 3, 15, 12, 2, 13, 2, 14, 7, 3, 3}, 175, 980, 1213},
      {L::difficult, 260, 57, {}, 147, 902, 1106},
  };
  return rows;
}

// Muscle counts as printed in the gesture table, independent of the taxonomy module.
inline constexpr std::array<std::int64_t, 16> kPaperMuscleCounts = {0, 0, 0, 0, 9, 10, 6, 6,
                                                                    8, 8, 10, 10, 8, 16, 2, 3};

}  // namespace trymove::testing
