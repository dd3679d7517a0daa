#include "trymove/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json_util.hpp"
#include "trymove/error.hpp"

namespace trymove {

namespace {

constexpr const char* kSnapshotSchema = "trymove-snapshot/1";

std::vector<Vec3> sorted(std::vector<Vec3> cells) {
  std::sort(cells.begin(), cells.end());
  return cells;
}

}  // namespace

std::string_view to_string(Effect effect) noexcept {
  switch (effect) {
    case Effect::selected: return "selected";
    case Effect::grasped: return "grasped";
    case Effect::moved: return "moved";
    case Effect::rotated: return "rotated";
    case Effect::placed: return "placed";
    case Effect::released: return "released";
    case Effect::rejected_fake: return "rejected_fake";
    case Effect::gripped: return "gripped";
    case Effect::logged: return "logged";
    case Effect::no_selection: return "no_selection";
    case Effect::grasp_mismatch: return "grasp_mismatch";
    case Effect::already_carrying: return "already_carrying";
    case Effect::already_placed: return "already_placed";
    case Effect::not_carrying: return "not_carrying";
    case Effect::missing_target: return "missing_target";
  }
  return "logged";
}

nlohmann::ordered_json to_json(const GestureEvent& e) {
  nlohmann::ordered_json doc;
  doc["timestamp"] = e.timestamp;
  doc["class"] = code(e.gesture);
  if (e.target_piece) doc["target_piece"] = *e.target_piece;
  if (e.pose_delta) {
    doc["pose_delta"] = {{"translation", detail::vec3_json(e.pose_delta->translation)},
                         {"rotation", e.pose_delta->rotation}};
  }
  if (e.frame_ref) doc["frame_ref"] = *e.frame_ref;
  return doc;
}

GestureEvent event_from_json(const nlohmann::json& doc) {
  using namespace detail;
  const std::string ctx = "event";
  GestureEvent e;
  e.timestamp = as_number(require(doc, "timestamp", ctx), "timestamp");
  const auto cls = as_string(require(doc, "class", ctx), "class");
  const auto g = parse_code(cls);
  if (!g) fail(ErrorKind::schema, ctx + ": unknown gesture class \"" + cls + "\"");
  e.gesture = *g;
  if (doc.contains("target_piece") && !doc["target_piece"].is_null()) {
    e.target_piece = as_int32(doc["target_piece"], "target_piece");
  }
  if (doc.contains("pose_delta") && !doc["pose_delta"].is_null()) {
    const auto& pd = doc["pose_delta"];
    PoseDelta delta;
    if (pd.contains("translation")) delta.translation = as_vec3(pd["translation"], "pose_delta.translation");
    if (pd.contains("rotation")) delta.rotation = as_int32(pd["rotation"], "pose_delta.rotation");
    if (delta.rotation < 0 || delta.rotation >= Rotation::kCount) {
      fail(ErrorKind::schema, ctx + ": pose_delta.rotation must be in 0..23");
    }
    e.pose_delta = delta;
  }
  if (doc.contains("frame_ref") && !doc["frame_ref"].is_null()) {
    e.frame_ref = as_string(doc["frame_ref"], "frame_ref");
  }
  return e;
}

Session::Session(std::string id, DifficultyConfig config, std::uint64_t seed, PuzzleSpec puzzle)
    : id_(std::move(id)), config_(config), seed_(seed), puzzle_(std::move(puzzle)) {
  for (const auto& p : puzzle_.pieces) poses_[p.id] = {p.spawn_origin, p.spawn_rotation, false};
}

const Piece& Session::piece(int id) const {
  const Piece* p = puzzle_.find(id);
  if (!p) fail(ErrorKind::validation, "unknown piece id " + std::to_string(id));
  return *p;
}

std::vector<Vec3> Session::world_cells(int piece_id) const {
  const auto& pose = poses_.at(piece_id);
  return posed_cells(piece(piece_id), pose.origin, pose.rotation);
}

bool Session::aligned(int piece_id) const {
  const Piece& p = piece(piece_id);
  return !p.fake && sorted(world_cells(piece_id)) == sorted(p.cells);
}

Outcome Session::apply(const GestureEvent& event) {
  if (completed_) fail(ErrorKind::session_closed, "session " + id_ + " is already completed");
  if (!std::isfinite(event.timestamp) || event.timestamp < 0.0) {
    fail(ErrorKind::validation, "event timestamp must be a non-negative number");
  }
  if (!log_.empty() && event.timestamp < log_.back().timestamp) {
    fail(ErrorKind::ordering, "event timestamp " + std::to_string(event.timestamp) +
                                  " precedes previous event at " + std::to_string(log_.back().timestamp));
  }
  if (event.target_piece && !puzzle_.find(*event.target_piece)) {
    fail(ErrorKind::validation, "event targets unknown piece " + std::to_string(*event.target_piece));
  }
  if (event.pose_delta && (event.pose_delta->rotation < 0 || event.pose_delta->rotation >= Rotation::kCount)) {
    fail(ErrorKind::validation, "pose_delta.rotation must be in 0..23");
  }

  GestureEvent logged = event;
  if (logged.frame_ref) {
    if (frames_captured_ < config_.frame_budget) {
      ++frames_captured_;
    } else {
      logged.frame_ref.reset();
    }
  }
  log_.push_back(std::move(logged));
  ++counts_[ordinal(event.gesture)];

  Outcome out;
  out.effect = dispatch(event);
  switch (out.effect) {
    case Effect::no_selection:
    case Effect::grasp_mismatch:
    case Effect::already_carrying:
    case Effect::already_placed:
    case Effect::not_carrying:
    case Effect::missing_target:
    case Effect::rejected_fake:
      out.accepted = false;
      break;
    default:
      out.accepted = true;
  }
  out.completed = completed_;
  out.score_so_far = live_score();
  return out;
}

Effect Session::dispatch(const GestureEvent& event) {
  switch (event.gesture) {
    case GestureClass::g1:
    case GestureClass::g2:
    case GestureClass::g3:
    case GestureClass::g4:
      return Effect::logged;

    case GestureClass::ga:
      if (!event.target_piece) return Effect::missing_target;
      if (poses_.at(*event.target_piece).placed) return Effect::already_placed;
      selected_ = event.target_piece;
      return Effect::selected;

    case GestureClass::gb:
    case GestureClass::gc:
    case GestureClass::gd: {
      if (carried_) return Effect::already_carrying;
      if (!selected_) return Effect::no_selection;
      if (poses_.at(*selected_).placed) return Effect::already_placed;
      const auto size = piece(*selected_).cells.size();
      if ((event.gesture == GestureClass::gb && size < 3) || (event.gesture == GestureClass::gc && size > 2)) {
        return Effect::grasp_mismatch;
      }
      carried_ = selected_;
      return Effect::grasped;
    }

    case GestureClass::g5:
    case GestureClass::g6:
      if (!carried_) return Effect::not_carrying;
      if (event.pose_delta) poses_[*carried_].origin = poses_[*carried_].origin + event.pose_delta->translation;
      return Effect::moved;

    case GestureClass::g7:
    case GestureClass::g8:
      if (!carried_) return Effect::not_carrying;
      poses_[*carried_].origin.y += event.gesture == GestureClass::g7 ? 1 : -1;
      return Effect::moved;

    case GestureClass::ge:
    case GestureClass::gf: {
      if (!carried_) return Effect::not_carrying;
      const Rotation delta = event.pose_delta ? Rotation(event.pose_delta->rotation)
                                              : Rotation::quarter_turn_y(event.gesture == GestureClass::ge);
      auto& pose = poses_[*carried_];
      pose.rotation = delta.compose(Rotation(pose.rotation)).index();
      return Effect::rotated;
    }

    case GestureClass::g9: {
      if (!carried_) return Effect::not_carrying;
      const int id = *carried_;
      carried_.reset();
      if (piece(id).fake) return Effect::rejected_fake;
      if (!aligned(id)) return Effect::released;
      poses_[id].placed = true;
      if (selected_ == id) selected_.reset();
      const bool all_placed = std::all_of(puzzle_.pieces.begin(), puzzle_.pieces.end(),
                                          [&](const Piece& p) { return p.fake || poses_.at(p.id).placed; });
      if (all_placed) {
        completed_ = true;
        t_end_ = event.timestamp;
      }
      return Effect::placed;
    }

    case GestureClass::g10:
      return carried_ ? Effect::gripped : Effect::not_carrying;
  }
  return Effect::logged;
}

std::optional<GestureEvent> Session::plan_next() const {
  if (completed_) return std::nullopt;
  GestureEvent step;

  if (carried_) {
    const int id = *carried_;
    step.target_piece = id;
    const Piece& p = piece(id);
    if (p.fake || aligned(id)) {
      step.gesture = GestureClass::g9;
      return step;
    }
    const auto target_shape = normalize_cells(p.cells);
    const auto& pose = poses_.at(id);
    const auto world = world_cells(id);
    if (normalize_cells(world) == target_shape) {
      step.gesture = GestureClass::g5;
      step.pose_delta = PoseDelta{bounding_box(p.cells).lo - bounding_box(world).lo, 0};
      return step;
    }
    for (int d = 1; d < Rotation::kCount; ++d) {
      const int rotated = Rotation(d).compose(Rotation(pose.rotation)).index();
      if (normalize_cells(posed_cells(p, pose.origin, rotated)) == target_shape) {
        step.gesture = GestureClass::ge;
        step.pose_delta = PoseDelta{{0, 0, 0}, d};
        return step;
      }
    }
    fail(ErrorKind::validation, "piece " + std::to_string(id) + " cannot be oriented onto its target");
  }

  const Piece* next = nullptr;
  for (const auto& p : puzzle_.pieces) {
    if (!p.fake && !poses_.at(p.id).placed) {
      next = &p;
      break;
    }
  }
  if (!next) return std::nullopt;
  step.target_piece = next->id;
  if (selected_ == next->id) {
    step.gesture = next->cells.size() >= 3 ? GestureClass::gb : GestureClass::gc;
  } else {
    step.gesture = GestureClass::ga;
  }
  return step;
}

Hint Session::hint() const {
  if (config_.level != Level::guidance) {
    fail(ErrorKind::hint_unavailable, "hints are only given in guidance sessions");
  }
  if (completed_) fail(ErrorKind::hint_unavailable, "session is completed");
  const auto step = plan_next();
  Hint h;
  for (const auto& p : puzzle_.pieces) {
    if (!p.fake && !poses_.at(p.id).placed) h.remaining_cells += static_cast<int>(p.cells.size());
  }
  if (step) {
    h.piece_id = step->target_piece.value_or(0);
    h.suggested = step->gesture;
    h.pose_delta = step->pose_delta;
  }
  return h;
}

ScoreBreakdown Session::live_score(Rounding mode) const {
  const double t = t_end_.value_or(last_timestamp());
  return final_score(t, config_, counts_, mode);
}

nlohmann::ordered_json Session::snapshot() const {
  nlohmann::ordered_json doc;
  doc["version"] = kSnapshotSchema;
  doc["id"] = id_;
  doc["config"] = to_json(config_);
  doc["seed"] = seed_;
  doc["puzzle"] = to_json(puzzle_);
  auto& poses = doc["poses"] = nlohmann::ordered_json::array();
  for (const auto& [id, pose] : poses_) {
    poses.push_back({{"id", id},
                     {"origin", detail::vec3_json(pose.origin)},
                     {"rotation", pose.rotation},
                     {"placed", pose.placed}});
  }
  doc["selected"] = selected_ ? nlohmann::ordered_json(*selected_) : nlohmann::ordered_json(nullptr);
  doc["carried"] = carried_ ? nlohmann::ordered_json(*carried_) : nlohmann::ordered_json(nullptr);
  doc["counts"] = counts_;
  doc["frames_captured"] = frames_captured_;
  doc["t_end"] = t_end_ ? nlohmann::ordered_json(*t_end_) : nlohmann::ordered_json(nullptr);
  doc["completed"] = completed_;
  auto& events = doc["events"] = nlohmann::ordered_json::array();
  for (const auto& e : log_) events.push_back(to_json(e));
  return doc;
}

Session Session::restore(const nlohmann::json& doc) {
  using namespace detail;
  const std::string ctx = "snapshot";
  if (as_string(require(doc, "version", ctx), "version") != kSnapshotSchema) {
    fail(ErrorKind::schema, ctx + ": unsupported version");
  }
  Session s(as_string(require(doc, "id", ctx), "id"), config_from_json(require(doc, "config", ctx)),
            as_uint64(require(doc, "seed", ctx), "seed"), puzzle_from_json(require(doc, "puzzle", ctx)));
  for (const auto& rec : require(doc, "poses", ctx)) {
    const int id = as_int32(require(rec, "id", ctx), "id");
    if (!s.poses_.contains(id)) fail(ErrorKind::schema, ctx + ": pose for unknown piece");
    s.poses_[id] = {as_vec3(require(rec, "origin", ctx), "origin"), as_int32(require(rec, "rotation", ctx), "rotation"),
                    as_bool(require(rec, "placed", ctx), "placed")};
  }
  const auto& sel = require(doc, "selected", ctx);
  if (!sel.is_null()) s.selected_ = as_int32(sel, "selected");
  const auto& car = require(doc, "carried", ctx);
  if (!car.is_null()) s.carried_ = as_int32(car, "carried");
  const auto& counts = require(doc, "counts", ctx);
  if (!counts.is_array() || counts.size() != kGestureCount) fail(ErrorKind::schema, ctx + ": counts must have 16 entries");
  for (std::size_t i = 0; i < kGestureCount; ++i) s.counts_[i] = as_int(counts[i], "counts");
  s.frames_captured_ = as_int32(require(doc, "frames_captured", ctx), "frames_captured");
  const auto& t_end = require(doc, "t_end", ctx);
  if (!t_end.is_null()) s.t_end_ = as_number(t_end, "t_end");
  s.completed_ = as_bool(require(doc, "completed", ctx), "completed");
  for (const auto& e : require(doc, "events", ctx)) s.log_.push_back(event_from_json(e));
  return s;
}

Session new_session(const DifficultyConfig& config, std::uint64_t seed, std::string id) {
  if (id.empty()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s-%016llx", std::string(to_string(config.level)).c_str(),
                  static_cast<unsigned long long>(seed));
    id = buf;
  }
  return Session(std::move(id), config, seed,
                 generate_puzzle(config.grid_size, config.requested_pieces, seed, config.fake_count));
}

Session replay(const DifficultyConfig& config, std::uint64_t seed, const std::vector<GestureEvent>& events) {
  Session s = new_session(config, seed);
  for (const auto& e : events) s.apply(e);
  return s;
}

std::vector<GestureEvent> solve(const DifficultyConfig& config, std::uint64_t seed, const SolveOptions& options) {
  Session s = new_session(config, seed);
  std::vector<GestureEvent> script;
  const std::size_t limit = 8 * s.puzzle().pieces.size() + 16;
  double t = options.start_time;
  while (auto step = s.plan_next()) {
    if (script.size() >= limit) fail(ErrorKind::validation, "solver did not converge");
    step->timestamp = t;
    if (options.with_frames) {
      char name[32];
      std::snprintf(name, sizeof name, "f%04zu.pgm", script.size() + 1);
      step->frame_ref = name;
    }
    s.apply(*step);
    script.push_back(*step);
    t += options.step_seconds;
  }
  return script;
}

}  // namespace trymove
