#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "trymove/taxonomy.hpp"

namespace trymove::nn {

// Rows are true classes, columns predicted classes, both in ordinal order.
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, kGestureCount>, kGestureCount> counts{};

  void add(GestureClass truth, GestureClass predicted) noexcept {
    ++counts[ordinal(truth)][ordinal(predicted)];
  }
  std::int64_t total() const noexcept;
  std::int64_t trace() const noexcept;
  std::int64_t row_sum(std::size_t row) const noexcept;
  double accuracy() const noexcept;

  // Header row of the 16 class codes, then 16 rows of 16 comma-separated counts.
  std::string to_csv() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Per-class correct classifications: counts[i][i].
GestureCounts diagonal_counts(const ConfusionMatrix& cm) noexcept;

}  // namespace trymove::nn
