#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trymove/difficulty.hpp"
#include "trymove/engine.hpp"
#include "trymove/nn/model.hpp"
#include "trymove/scoring.hpp"

namespace trymove {

inline constexpr const char* kSessionSchema = "trymove-session/1";

// A session log: header {version, config, seed} then one event per line.
struct SessionLog {
  DifficultyConfig config;
  std::uint64_t seed = 0;
  std::vector<GestureEvent> events;

  friend bool operator==(const SessionLog&, const SessionLog&) = default;
};

std::string format_log(const SessionLog& log);
SessionLog parse_log(const std::string& text);  // errors carry the line number

void write_log(const SessionLog& log, const std::filesystem::path& path);
SessionLog ingest_log(const std::filesystem::path& path);

SessionLog log_of(const Session& session);

// Event scripts (for play/solve) are the same line format without a header.
std::string format_script(const std::vector<GestureEvent>& events);
std::vector<GestureEvent> parse_script(const std::string& text);

// Directory holding the frames of a log: <dir>/<stem>_frames.
std::filesystem::path frames_dir_for(const std::filesystem::path& log_path);

// Synthetic capture for the i-th event of a session.
nn::Frame capture_frame(GestureClass gesture, std::uint64_t session_seed, std::size_t event_index);

struct PlayResult {
  Session session;
  std::filesystem::path log_path;
  std::filesystem::path frames_dir;
  int frames_written = 0;
};

// Runs the script against new_session(config, seed), writes the log and
// renders every captured frame (frame_ref kept by the engine) as a PGM.
PlayResult play(const DifficultyConfig& config, std::uint64_t seed, const std::vector<GestureEvent>& script,
                const std::filesystem::path& log_path);

struct PipelineResult {
  GestureCounts counts{};
  std::optional<nn::ConfusionMatrix> confusion;  // set when a predictor was used
  int frames_classified = 0;
};

// Without a predictor: ground-truth counts from the event classes. With one:
// every event carrying a frame_ref is classified against its logged class and
// the confusion-matrix diagonal is returned.
PipelineResult pipeline_counts(const std::vector<GestureEvent>& events, const nn::Predictor* predictor,
                               const std::filesystem::path& frames_dir);

struct ScoreOptions {
  Rounding rounding = Rounding::half_up;
  std::optional<double> t_total_override;
};

// Replays the log; completed sessions are scored at t_end, unfinished ones
// with no time bonus.
ScoreBreakdown score_log(const SessionLog& log, const GestureCounts& counts, const ScoreOptions& options = {});
ScoreBreakdown score_log(const SessionLog& log, const ScoreOptions& options = {});

}  // namespace trymove
