#include "trymove/puzzle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "json_util.hpp"
#include "trymove/error.hpp"

namespace trymove {

namespace {

constexpr int kMaxAttempts = 3;
constexpr int kFakeShapeTries = 64;
constexpr int kSpawnTries = 1000;

std::vector<Piece> pieces_from_grid(const IdGrid& grid) {
  const int max_id = grid.ids().empty() ? 0 : *std::max_element(grid.ids().begin(), grid.ids().end());
  std::vector<Piece> pieces(static_cast<std::size_t>(max_id));
  for (int i = 0; i < max_id; ++i) pieces[static_cast<std::size_t>(i)].id = i + 1;
  for (int index = 0; index < grid.volume(); ++index) {
    const int id = grid.ids()[static_cast<std::size_t>(index)];
    if (id > 0) pieces[static_cast<std::size_t>(id - 1)].cells.push_back(grid.coord(index));
  }
  for (auto& p : pieces) {
    p.target_origin = *std::min_element(p.cells.begin(), p.cells.end());
  }
  return pieces;
}

std::vector<Vec3> random_polycube(int cell_count, Rng& rng) {
  std::vector<Vec3> cells = {{0, 0, 0}};
  while (static_cast<int>(cells.size()) < cell_count) {
    std::vector<Vec3> options;
    for (const auto& c : cells) {
      for (const auto& d : kNeighborOffsets) {
        const Vec3 n = c + d;
        if (std::find(cells.begin(), cells.end(), n) == cells.end()) options.push_back(n);
      }
    }
    cells.push_back(options[static_cast<std::size_t>(rng.below(options.size()))]);
  }
  return normalize_cells(std::move(cells));
}

}  // namespace

std::vector<Vec3> Piece::local_cells() const {
  std::vector<Vec3> local;
  local.reserve(cells.size());
  for (const auto& c : cells) local.push_back(c - target_origin);
  return local;
}

IdGrid::IdGrid(int size) : size_(size) {
  if (size <= 0) fail(ErrorKind::invalid_size, "puzzle size must be >= 1, got " + std::to_string(size));
  ids_.assign(static_cast<std::size_t>(size) * size * size, 0);
}

bool IdGrid::contains(Vec3 c) const noexcept {
  return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < size_ && c.y < size_ && c.z < size_;
}

Vec3 IdGrid::coord(int index) const noexcept {
  return {index % size_, (index / size_) % size_, index / (size_ * size_)};
}

std::vector<Vec3> IdGrid::cells_of(int id) const {
  std::vector<Vec3> cells;
  for (int index = 0; index < volume(); ++index) {
    if (ids_[static_cast<std::size_t>(index)] == id) cells.push_back(coord(index));
  }
  return cells;
}

const Piece* PuzzleSpec::find(int id) const noexcept {
  for (const auto& p : pieces) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

int PuzzleSpec::real_count() const noexcept {
  return static_cast<int>(std::count_if(pieces.begin(), pieces.end(), [](const Piece& p) { return !p.fake; }));
}

GrowResult grow_piece(IdGrid& grid, int piece_id, Rng& rng) {
  std::vector<Vec3> options;
  for (const auto& cell : grid.cells_of(piece_id)) {
    for (const auto& d : kNeighborOffsets) {
      const Vec3 n = cell + d;
      if (grid.contains(n) && grid.at(n) == 0) options.push_back(n);
    }
  }
  if (options.empty()) return {};
  const Vec3 chosen = options[static_cast<std::size_t>(rng.below(options.size()))];
  grid.set(chosen, piece_id);
  return {true, chosen};
}

int fill_missing(IdGrid& grid, int first_id) {
  int added = 0;
  for (auto& id : grid.ids()) {
    if (id == 0) id = first_id + added++;
  }
  return added;
}

FakeSet make_fakes(const PuzzleSpec& spec, int fake_count, Rng& rng) {
  FakeSet out;
  if (fake_count <= 0) return out;

  std::map<std::size_t, std::set<std::vector<Vec3>>> real_shapes;
  int next_id = 0;
  for (const auto& p : spec.pieces) {
    next_id = std::max(next_id, p.id);
    if (!p.fake) real_shapes[p.cells.size()].insert(canonical_shape(p.cells));
  }

  for (int i = 0; i < fake_count; ++i) {
    std::vector<Vec3> cells;
    bool unique = false;
    for (int attempt = 0; attempt < kFakeShapeTries && !unique; ++attempt) {
      cells = random_polycube(2 + static_cast<int>(rng.below(2)), rng);
      unique = !real_shapes[cells.size()].contains(canonical_shape(cells));
    }
    out.duplicates = out.duplicates || !unique;

    Piece fake;
    fake.id = ++next_id;
    fake.target_origin = *std::min_element(cells.begin(), cells.end());
    fake.cells = std::move(cells);
    fake.fake = true;
    out.pieces.push_back(std::move(fake));
  }
  return out;
}

Box spawn_region(int size) noexcept {
  const int edge = 3 * size;
  return {{size + 1, 0, 0}, {size + edge, edge - 1, edge - 1}};
}

std::vector<Vec3> posed_cells(const Piece& piece, Vec3 origin, int rotation) {
  const Rotation rot(rotation);
  std::vector<Vec3> world;
  world.reserve(piece.cells.size());
  for (const auto& c : piece.cells) world.push_back(origin + rot.apply(c - piece.target_origin));
  return world;
}

void scatter_spawns(PuzzleSpec& spec, Rng& rng) {
  const Box region = spawn_region(spec.size);
  const int edge = 3 * spec.size;
  std::vector<Box> taken;
  for (auto& piece : spec.pieces) {
    bool placed = false;
    for (int attempt = 0; attempt < kSpawnTries && !placed; ++attempt) {
      const int rotation = static_cast<int>(rng.below(Rotation::kCount));
      const Box shape = bounding_box(posed_cells(piece, {0, 0, 0}, rotation));
      const Vec3 extent = shape.hi - shape.lo;
      if (extent.x >= edge || extent.y >= edge || extent.z >= edge) continue;
      const Vec3 corner = {
          region.lo.x + static_cast<int>(rng.below(static_cast<std::uint64_t>(edge - extent.x))),
          region.lo.y + static_cast<int>(rng.below(static_cast<std::uint64_t>(edge - extent.y))),
          region.lo.z + static_cast<int>(rng.below(static_cast<std::uint64_t>(edge - extent.z))),
      };
      const Box box = {corner, corner + extent};
      if (std::any_of(taken.begin(), taken.end(), [&](const Box& b) { return b.intersects(box); })) continue;
      piece.spawn_origin = corner - shape.lo;
      piece.spawn_rotation = rotation;
      taken.push_back(box);
      placed = true;
    }
    if (!placed) {
      fail(ErrorKind::spawn_region_too_small,
           "could not place piece " + std::to_string(piece.id) + " in the spawn region after " +
               std::to_string(kSpawnTries) + " tries");
    }
  }
}

PuzzleSpec generate_puzzle(int size, int pieces, std::uint64_t seed, int fake_count) {
  if (size <= 0) fail(ErrorKind::invalid_size, "puzzle size must be >= 1, got " + std::to_string(size));
  if (pieces < 0) fail(ErrorKind::validation, "number of pieces must be >= 0");
  if (fake_count < 0) fail(ErrorKind::validation, "fake count must be >= 0");
  const long long volume = 1LL * size * size * size;
  if (pieces > volume) {
    fail(ErrorKind::infeasible_puzzle, std::to_string(pieces) + " pieces do not fit in a grid of " +
                                           std::to_string(volume) + " cells");
  }

  Rng rng(seed);
  std::optional<IdGrid> best;
  int best_extended = -1;
  bool success = false;
  for (int attempt = 0; attempt < kMaxAttempts && !success; ++attempt) {
    IdGrid grid(size);
    std::vector<int> indices(static_cast<std::size_t>(grid.volume()));
    std::iota(indices.begin(), indices.end(), 0);
    for (int k = 0; k < pieces; ++k) {
      const auto j = static_cast<std::size_t>(k) + rng.below(indices.size() - static_cast<std::size_t>(k));
      std::swap(indices[static_cast<std::size_t>(k)], indices[j]);
      grid.ids()[static_cast<std::size_t>(indices[static_cast<std::size_t>(k)])] = k + 1;
    }
    int extended = 0;
    for (int k = 1; k <= pieces; ++k) extended += grow_piece(grid, k, rng).extended ? 1 : 0;
    success = extended == pieces;
    if (extended > best_extended) {
      best_extended = extended;
      best = std::move(grid);
    }
  }

  PuzzleSpec spec;
  spec.size = size;
  spec.requested_pieces = pieces;
  spec.seed = seed;
  spec.fake_count = fake_count;
  spec.attempts_exhausted = !success;
  spec.extended_pieces = best_extended;
  spec.missing_count = fill_missing(*best, pieces + 1);
  spec.grid = best->ids();
  spec.pieces = pieces_from_grid(*best);

  FakeSet fakes = make_fakes(spec, fake_count, rng);
  spec.fake_duplicates = fakes.duplicates;
  for (auto& f : fakes.pieces) spec.pieces.push_back(std::move(f));

  scatter_spawns(spec, rng);
  return spec;
}

nlohmann::ordered_json to_json(const PuzzleSpec& spec) {
  nlohmann::ordered_json doc;
  doc["version"] = kPuzzleSchema;
  doc["size"] = spec.size;
  doc["requested_pieces"] = spec.requested_pieces;
  doc["seed"] = spec.seed;
  doc["fake_count"] = spec.fake_count;
  doc["attempts_exhausted"] = spec.attempts_exhausted;
  doc["extended_pieces"] = spec.extended_pieces;
  doc["missing_count"] = spec.missing_count;
  doc["fake_duplicates"] = spec.fake_duplicates;
  doc["grid"] = spec.grid;
  auto& pieces = doc["pieces"] = nlohmann::ordered_json::array();
  for (const auto& p : spec.pieces) {
    nlohmann::ordered_json rec;
    rec["id"] = p.id;
    auto& cells = rec["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : p.cells) cells.push_back(detail::vec3_json(c));
    rec["target_origin"] = detail::vec3_json(p.target_origin);
    rec["spawn_origin"] = detail::vec3_json(p.spawn_origin);
    rec["spawn_rotation"] = p.spawn_rotation;
    rec["fake"] = p.fake;
    pieces.push_back(std::move(rec));
  }
  return doc;
}

PuzzleSpec puzzle_from_json(const nlohmann::json& doc) {
  using namespace detail;
  const std::string ctx = "puzzle";
  const auto version = as_string(require(doc, "version", ctx), "version");
  if (version != kPuzzleSchema) {
    fail(ErrorKind::schema, ctx + ": unsupported version \"" + version + "\", expected " + kPuzzleSchema);
  }

  PuzzleSpec spec;
  spec.size = as_int32(require(doc, "size", ctx), "size");
  if (spec.size <= 0) fail(ErrorKind::schema, ctx + ": field \"size\" must be >= 1");
  spec.requested_pieces = as_int32(require(doc, "requested_pieces", ctx), "requested_pieces");
  spec.seed = as_uint64(require(doc, "seed", ctx), "seed");
  spec.fake_count = as_int32(require(doc, "fake_count", ctx), "fake_count");
  spec.attempts_exhausted = as_bool(require(doc, "attempts_exhausted", ctx), "attempts_exhausted");
  if (doc.contains("extended_pieces")) spec.extended_pieces = as_int32(doc["extended_pieces"], "extended_pieces");
  if (doc.contains("missing_count")) spec.missing_count = as_int32(doc["missing_count"], "missing_count");
  if (doc.contains("fake_duplicates")) spec.fake_duplicates = as_bool(doc["fake_duplicates"], "fake_duplicates");

  const auto& grid = require(doc, "grid", ctx);
  const auto volume = static_cast<std::size_t>(spec.size) * spec.size * spec.size;
  if (!grid.is_array() || grid.size() != volume) {
    fail(ErrorKind::schema, ctx + ": field \"grid\" must be a list of " + std::to_string(volume) + " ids");
  }
  for (std::size_t i = 0; i < volume; ++i) spec.grid.push_back(as_int32(grid[i], "grid[" + std::to_string(i) + "]"));

  const auto& pieces = require(doc, "pieces", ctx);
  if (!pieces.is_array()) fail(ErrorKind::schema, ctx + ": field \"pieces\" must be a list");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string pctx = ctx + ": pieces[" + std::to_string(i) + "]";
    const auto& rec = pieces[i];
    Piece p;
    p.id = as_int32(require(rec, "id", pctx), "id");
    const auto& cells = require(rec, "cells", pctx);
    if (!cells.is_array() || cells.empty()) fail(ErrorKind::schema, pctx + ": \"cells\" must be a non-empty list");
    for (const auto& c : cells) p.cells.push_back(as_vec3(c, "cells"));
    p.target_origin = as_vec3(require(rec, "target_origin", pctx), "target_origin");
    p.spawn_origin = as_vec3(require(rec, "spawn_origin", pctx), "spawn_origin");
    p.spawn_rotation = as_int32(require(rec, "spawn_rotation", pctx), "spawn_rotation");
    if (p.spawn_rotation < 0 || p.spawn_rotation >= Rotation::kCount) {
      fail(ErrorKind::schema, pctx + ": \"spawn_rotation\" must be in 0..23");
    }
    p.fake = as_bool(require(rec, "fake", pctx), "fake");
    spec.pieces.push_back(std::move(p));
  }

  // Grid and piece cells must agree.
  for (const auto& p : spec.pieces) {
    if (p.fake) continue;
    for (const auto& c : p.cells) {
      if (c.x < 0 || c.y < 0 || c.z < 0 || c.x >= spec.size || c.y >= spec.size || c.z >= spec.size ||
          spec.cell(c) != p.id) {
        fail(ErrorKind::schema, ctx + ": piece " + std::to_string(p.id) + " cells disagree with \"grid\"");
      }
    }
  }
  return spec;
}

std::string dump_puzzle(const PuzzleSpec& spec) { return to_json(spec).dump(2) + "\n"; }

PuzzleSpec parse_puzzle(const std::string& text) {
  return puzzle_from_json(detail::parse_text(text, "puzzle"));
}

void save_puzzle(const PuzzleSpec& spec, const std::filesystem::path& path) {
  detail::write_file(path, dump_puzzle(spec));
}

PuzzleSpec load_puzzle(const std::filesystem::path& path) {
  return parse_puzzle(detail::read_file(path));
}

}  // namespace trymove
