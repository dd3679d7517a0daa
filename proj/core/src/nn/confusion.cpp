#include "trymove/nn/confusion.hpp"

namespace trymove::nn {

std::int64_t ConfusionMatrix::total() const noexcept {
  std::int64_t n = 0;
  for (const auto& row : counts)
    for (const auto v : row) n += v;
  return n;
}

std::int64_t ConfusionMatrix::trace() const noexcept {
  std::int64_t n = 0;
  for (std::size_t i = 0; i < kGestureCount; ++i) n += counts[i][i];
  return n;
}

std::int64_t ConfusionMatrix::row_sum(std::size_t row) const noexcept {
  std::int64_t n = 0;
  for (const auto v : counts[row]) n += v;
  return n;
}

double ConfusionMatrix::accuracy() const noexcept {
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
}

std::string ConfusionMatrix::to_csv() const {
  std::string out;
  for (const auto g : canonical_order()) {
    if (!out.empty()) out += ",";
    out += code(g);
  }
  out += "\n";
  for (const auto& row : counts) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + std::to_string(row[j]);
    out += "\n";
  }
  return out;
}

GestureCounts diagonal_counts(const ConfusionMatrix& cm) noexcept {
  GestureCounts d{};
  for (std::size_t i = 0; i < kGestureCount; ++i) d[i] = cm.counts[i][i];
  return d;
}

}  // namespace trymove::nn
