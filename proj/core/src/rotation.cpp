#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "trymove/error.hpp"
#include "trymove/geometry.hpp"

namespace trymove {

namespace {

int determinant(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::array<Matrix3, Rotation::kCount> build_table() {
  const Matrix3 identity = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  std::vector<Matrix3> all;
  std::array<int, 3> perm = {0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      Matrix3 m{};
      for (int r = 0; r < 3; ++r) m[r][perm[r]] = (signs >> r) & 1 ? -1 : 1;
      const bool is_identity = signs == 0 && perm == std::array<int, 3>{0, 1, 2};
      if (determinant(m) == 1 && !is_identity) all.push_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::sort(all.begin(), all.end());

  std::array<Matrix3, Rotation::kCount> table{};
  table[0] = identity;
  std::copy(all.begin(), all.end(), table.begin() + 1);
  return table;
}

Matrix3 multiply(const Matrix3& a, const Matrix3& b) {
  Matrix3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

int index_of(const Matrix3& m) {
  const auto& table = rotation_matrices();
  return static_cast<int>(std::find(table.begin(), table.end(), m) - table.begin());
}

}  // namespace

const std::array<Matrix3, Rotation::kCount>& rotation_matrices() noexcept {
  static const auto table = build_table();
  return table;
}

Rotation::Rotation(int index) : index_(index) {
  if (index < 0 || index >= kCount) {
    fail(ErrorKind::validation, "rotation index must be in 0..23, got " + std::to_string(index));
  }
}

Vec3 Rotation::apply(Vec3 v) const noexcept {
  const auto& m = rotation_matrices()[index_];
  return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
          m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
          m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

Rotation Rotation::compose(Rotation first) const noexcept {
  const auto& table = rotation_matrices();
  return Rotation(index_of(multiply(table[index_], table[first.index_])));
}

Rotation Rotation::inverse() const noexcept {
  const auto& m = rotation_matrices()[index_];
  Matrix3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
  return Rotation(index_of(t));
}

Rotation Rotation::quarter_turn_y(bool positive) noexcept {
  // x' = z, z' = -x (positive) about +y.
  const int s = positive ? 1 : -1;
  const Matrix3 m = {{{0, 0, s}, {0, 1, 0}, {-s, 0, 0}}};
  return Rotation(index_of(m));
}

std::vector<Vec3> normalize_cells(std::vector<Vec3> cells) {
  if (cells.empty()) return cells;
  Vec3 lo = cells.front();
  for (const auto& c : cells) {
    lo.x = std::min(lo.x, c.x);
    lo.y = std::min(lo.y, c.y);
    lo.z = std::min(lo.z, c.z);
  }
  for (auto& c : cells) c = c - lo;
  std::sort(cells.begin(), cells.end());
  return cells;
}

std::vector<Vec3> canonical_shape(const std::vector<Vec3>& cells) {
  std::vector<Vec3> best;
  for (int r = 0; r < Rotation::kCount; ++r) {
    const Rotation rot(r);
    std::vector<Vec3> image;
    image.reserve(cells.size());
    for (const auto& c : cells) image.push_back(rot.apply(c));
    image = normalize_cells(std::move(image));
    if (r == 0 || image < best) best = std::move(image);
  }
  return best;
}

bool is_connected(const std::vector<Vec3>& cells) {
  if (cells.empty()) return false;
  const std::set<Vec3> members(cells.begin(), cells.end());
  std::set<Vec3> seen = {cells.front()};
  std::queue<Vec3> frontier;
  frontier.push(cells.front());
  while (!frontier.empty()) {
    const Vec3 c = frontier.front();
    frontier.pop();
    for (const auto& d : kNeighborOffsets) {
      const Vec3 n = c + d;
      if (members.contains(n) && seen.insert(n).second) frontier.push(n);
    }
  }
  return seen.size() == members.size();
}

Box bounding_box(const std::vector<Vec3>& cells) {
  Box box{cells.front(), cells.front()};
  for (const auto& c : cells) {
    box.lo = {std::min(box.lo.x, c.x), std::min(box.lo.y, c.y), std::min(box.lo.z, c.z)};
    box.hi = {std::max(box.hi.x, c.x), std::max(box.hi.y, c.y), std::max(box.hi.z, c.z)};
  }
  return box;
}

}  // namespace trymove
