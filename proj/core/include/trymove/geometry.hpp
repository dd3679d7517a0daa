#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <vector>

namespace trymove {

struct Vec3 {
  int x = 0;
  int y = 0;
  int z = 0;

  friend constexpr auto operator<=>(const Vec3&, const Vec3&) = default;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
};

inline constexpr std::array<Vec3, 6> kNeighborOffsets = {{
    {-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1},
}};

// One of the 24 proper axis-aligned rotations, indexed 0..23. Index 0 is the
// identity; the rest follow the lexicographic order of their row-major
// signed-permutation matrices.
class Rotation {
 public:
  static constexpr int kCount = 24;

  constexpr Rotation() = default;
  // Throws Error(validation) for indices outside 0..23.
  explicit Rotation(int index);

  int index() const noexcept { return index_; }
  Vec3 apply(Vec3 v) const noexcept;

  // (*this) after (first): apply(first.apply(v)).
  Rotation compose(Rotation first) const noexcept;
  Rotation inverse() const noexcept;

  static Rotation identity() noexcept { return Rotation(); }
  // Quarter turns about the vertical (y) axis.
  static Rotation quarter_turn_y(bool positive) noexcept;

  friend bool operator==(Rotation a, Rotation b) noexcept { return a.index_ == b.index_; }

 private:
  int index_ = 0;
};

using Matrix3 = std::array<std::array<int, 3>, 3>;
const std::array<Matrix3, Rotation::kCount>& rotation_matrices() noexcept;

// Shifts cells so the per-axis minimum is 0 and sorts them.
std::vector<Vec3> normalize_cells(std::vector<Vec3> cells);

// Lexicographically smallest normalized image over all 24 rotations; two cell
// sets are congruent under rotation+translation iff their canonical forms match.
std::vector<Vec3> canonical_shape(const std::vector<Vec3>& cells);

bool is_connected(const std::vector<Vec3>& cells);

struct Box {
  Vec3 lo;  // inclusive
  Vec3 hi;  // inclusive

  bool intersects(const Box& other) const noexcept {
    return lo.x <= other.hi.x && other.lo.x <= hi.x && lo.y <= other.hi.y &&
           other.lo.y <= hi.y && lo.z <= other.hi.z && other.lo.z <= hi.z;
  }
};

Box bounding_box(const std::vector<Vec3>& cells);

}  // namespace trymove
