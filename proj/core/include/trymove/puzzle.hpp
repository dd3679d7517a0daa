#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trymove/geometry.hpp"
#include "trymove/rng.hpp"

namespace trymove {

inline constexpr const char* kPuzzleSchema = "trymove-puzzle/1";

struct Piece {
  int id = 0;                 // 1-based
  std::vector<Vec3> cells;    // target cells in grid coordinates (fakes: shape cells)
  Vec3 target_origin;         // lexicographically smallest cell
  Vec3 spawn_origin;
  int spawn_rotation = 0;     // 0..23
  bool fake = false;

  // Cells relative to target_origin, the frame in which poses are applied.
  std::vector<Vec3> local_cells() const;

  friend bool operator==(const Piece&, const Piece&) = default;
};

// Flat index convention: index = z*S*S + y*S + x (x fastest).
class IdGrid {
 public:
  explicit IdGrid(int size);

  int size() const noexcept { return size_; }
  int volume() const noexcept { return static_cast<int>(ids_.size()); }

  bool contains(Vec3 c) const noexcept;
  int flat_index(Vec3 c) const noexcept { return (c.z * size_ + c.y) * size_ + c.x; }
  Vec3 coord(int index) const noexcept;

  int at(Vec3 c) const noexcept { return ids_[static_cast<std::size_t>(flat_index(c))]; }
  void set(Vec3 c, int id) noexcept { ids_[static_cast<std::size_t>(flat_index(c))] = id; }

  std::vector<Vec3> cells_of(int id) const;
  const std::vector<int>& ids() const noexcept { return ids_; }
  std::vector<int>& ids() noexcept { return ids_; }

 private:
  int size_;
  std::vector<int> ids_;
};

struct PuzzleSpec {
  int size = 0;               // S
  int requested_pieces = 0;   // N
  std::uint64_t seed = 0;
  int fake_count = 0;
  bool attempts_exhausted = false;
  int extended_pieces = 0;    // starts that grew to two cells
  int missing_count = 0;      // single-cell pieces added by fill_missing
  bool fake_duplicates = false;
  std::vector<int> grid;      // S^3 ids, flat index order
  std::vector<Piece> pieces;  // real pieces 1..P, then fakes

  int cell(Vec3 c) const noexcept { return grid[static_cast<std::size_t>((c.z * size + c.y) * size + c.x)]; }
  const Piece* find(int id) const noexcept;
  // Number of real (non-fake) pieces.
  int real_count() const noexcept;

  friend bool operator==(const PuzzleSpec&, const PuzzleSpec&) = default;
};

struct GrowResult {
  bool extended = false;
  Vec3 cell;
};

// Extends piece_id by one free 6-neighbour chosen uniformly over all
// (cell, free neighbour) pairs. Leaves the grid unchanged when enclosed.
GrowResult grow_piece(IdGrid& grid, int piece_id, Rng& rng);

// Gives every empty cell its own single-cell piece, ids first_id, first_id+1,
// ... in flat-index order. Returns the number of pieces added.
int fill_missing(IdGrid& grid, int first_id);

struct FakeSet {
  std::vector<Piece> pieces;
  bool duplicates = false;  // shape uniqueness could not be met
};

// Connected 2-3 cell decoys, none congruent to a real piece of equal size.
FakeSet make_fakes(const PuzzleSpec& spec, int fake_count, Rng& rng);

// Box of edge 3S beside the target grid, on the +x side with a one-cell gap.
Box spawn_region(int size) noexcept;

// Assigns spawn_origin/spawn_rotation so that the world-space bounding boxes
// of all pieces are pairwise disjoint and inside spawn_region.
void scatter_spawns(PuzzleSpec& spec, Rng& rng);

// World cells of a piece at a pose: origin + R * local.
std::vector<Vec3> posed_cells(const Piece& piece, Vec3 origin, int rotation);

PuzzleSpec generate_puzzle(int size, int pieces, std::uint64_t seed, int fake_count);

nlohmann::ordered_json to_json(const PuzzleSpec& spec);
PuzzleSpec puzzle_from_json(const nlohmann::json& doc);

void save_puzzle(const PuzzleSpec& spec, const std::filesystem::path& path);
PuzzleSpec load_puzzle(const std::filesystem::path& path);

std::string dump_puzzle(const PuzzleSpec& spec);
PuzzleSpec parse_puzzle(const std::string& text);

}  // namespace trymove
