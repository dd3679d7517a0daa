#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "trymove/difficulty.hpp"
#include "trymove/geometry.hpp"
#include "trymove/puzzle.hpp"
#include "trymove/scoring.hpp"
#include "trymove/taxonomy.hpp"

namespace trymove {

struct PoseDelta {
  Vec3 translation;
  int rotation = 0;  // 0..23, applied before the current orientation

  friend bool operator==(const PoseDelta&, const PoseDelta&) = default;
};

struct GestureEvent {
  double timestamp = 0.0;  // seconds since session start
  GestureClass gesture = GestureClass::g1;
  std::optional<int> target_piece;
  std::optional<PoseDelta> pose_delta;
  std::optional<std::string> frame_ref;

  friend bool operator==(const GestureEvent&, const GestureEvent&) = default;
};

nlohmann::ordered_json to_json(const GestureEvent& event);
GestureEvent event_from_json(const nlohmann::json& doc);

struct PiecePose {
  Vec3 origin;
  int rotation = 0;
  bool placed = false;

  friend bool operator==(const PiecePose&, const PiecePose&) = default;
};

enum class Effect {
  selected,
  grasped,
  moved,
  rotated,
  placed,
  released,       // dropped away from its target
  rejected_fake,  // fake pieces never place
  gripped,
  logged,         // locomotion: counted, no game effect
  no_selection,
  grasp_mismatch,
  already_carrying,
  already_placed,
  not_carrying,
  missing_target,
};

std::string_view to_string(Effect effect) noexcept;

struct Outcome {
  bool accepted = true;  // the gesture had its game effect; it is counted either way
  Effect effect = Effect::logged;
  ScoreBreakdown score_so_far;
  bool completed = false;
};

struct Hint {
  int piece_id = 0;
  int remaining_cells = 0;  // target cells not yet covered by placed pieces
  GestureClass suggested = GestureClass::ga;
  std::optional<PoseDelta> pose_delta;
};

class Session {
 public:
  Session(std::string id, DifficultyConfig config, std::uint64_t seed, PuzzleSpec puzzle);

  const std::string& id() const noexcept { return id_; }
  const DifficultyConfig& config() const noexcept { return config_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const PuzzleSpec& puzzle() const noexcept { return puzzle_; }
  const std::map<int, PiecePose>& poses() const noexcept { return poses_; }
  std::optional<int> selected() const noexcept { return selected_; }
  std::optional<int> carried() const noexcept { return carried_; }
  const std::vector<GestureEvent>& event_log() const noexcept { return log_; }
  const GestureCounts& counts() const noexcept { return counts_; }
  int frames_captured() const noexcept { return frames_captured_; }
  std::optional<double> t_end() const noexcept { return t_end_; }
  bool completed() const noexcept { return completed_; }
  double last_timestamp() const noexcept { return log_.empty() ? 0.0 : log_.back().timestamp; }

  // Appends and counts the event, then applies its game effect. Throws
  // session_closed after completion, ordering on a decreasing timestamp and
  // validation for unknown target pieces or negative times.
  Outcome apply(const GestureEvent& event);

  // Guidance sessions only (hint_unavailable otherwise).
  Hint hint() const;

  // The next gesture of the canonical pickup sequence, for any level. Empty
  // once every real piece is placed. Fakes are never picked up.
  std::optional<GestureEvent> plan_next() const;

  // World cells of a piece at its current pose.
  std::vector<Vec3> world_cells(int piece_id) const;
  bool aligned(int piece_id) const;

  // Score if the session ended now: the time term uses t_end once completed,
  // otherwise the last event time.
  ScoreBreakdown live_score(Rounding mode = Rounding::half_up) const;

  nlohmann::ordered_json snapshot() const;
  static Session restore(const nlohmann::json& snapshot);

 private:
  Effect dispatch(const GestureEvent& event);
  const Piece& piece(int id) const;

  std::string id_;
  DifficultyConfig config_;
  std::uint64_t seed_ = 0;
  PuzzleSpec puzzle_;
  std::map<int, PiecePose> poses_;
  std::optional<int> selected_;
  std::optional<int> carried_;
  std::vector<GestureEvent> log_;
  GestureCounts counts_{};
  int frames_captured_ = 0;
  std::optional<double> t_end_;
  bool completed_ = false;
};

Session new_session(const DifficultyConfig& config, std::uint64_t seed, std::string id = {});

inline Outcome apply_event(Session& session, const GestureEvent& event) { return session.apply(event); }
inline Hint current_hint(const Session& session) { return session.hint(); }

// Replays events against a fresh session built from (config, seed).
Session replay(const DifficultyConfig& config, std::uint64_t seed, const std::vector<GestureEvent>& events);

struct SolveOptions {
  double start_time = 1.0;
  double step_seconds = 1.5;
  bool with_frames = true;  // attach frame_ref names f0001.pgm, f0002.pgm, ...
};

// Scripted solution: the canonical pickup sequence for every real piece.
std::vector<GestureEvent> solve(const DifficultyConfig& config, std::uint64_t seed,
                                const SolveOptions& options = {});

}  // namespace trymove
