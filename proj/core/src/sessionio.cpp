#include "trymove/sessionio.hpp"

#include <sstream>

#include "json_util.hpp"
#include "trymove/error.hpp"

namespace trymove {

namespace {

constexpr std::uint64_t kCaptureStream = 0xCA97'0000'0000ULL;

std::vector<std::pair<std::size_t, std::string>> split_lines(const std::string& text) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.emplace_back(number, line);
  }
  return lines;
}

template <typename Fn>
auto at_line(std::size_t number, const std::string& context, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::schema, context + ": line " + std::to_string(number) + ": " + e.what());
  } catch (const Error& e) {
    fail(e.kind(), context + ": line " + std::to_string(number) + ": " + e.what());
  }
}

std::vector<GestureEvent> parse_events(const std::vector<std::pair<std::size_t, std::string>>& lines,
                                       std::size_t first, const std::string& context) {
  std::vector<GestureEvent> events;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto& [number, line] = lines[i];
    auto e = at_line(number, context, [&] { return event_from_json(nlohmann::json::parse(line)); });
    if (!events.empty() && e.timestamp < events.back().timestamp) {
      fail(ErrorKind::ordering, context + ": line " + std::to_string(number) + ": timestamp " +
                                    std::to_string(e.timestamp) + " decreases");
    }
    events.push_back(std::move(e));
  }
  return events;
}

}  // namespace

std::string format_log(const SessionLog& log) {
  nlohmann::ordered_json header;
  header["version"] = kSessionSchema;
  header["config"] = to_json(log.config);
  header["seed"] = log.seed;
  std::string out = header.dump() + "\n";
  for (const auto& e : log.events) out += to_json(e).dump() + "\n";
  return out;
}

SessionLog parse_log(const std::string& text) {
  const std::string ctx = "session log";
  const auto lines = split_lines(text);
  if (lines.empty()) fail(ErrorKind::schema, ctx + ": empty file, expected a header line");

  SessionLog log;
  at_line(lines[0].first, ctx, [&] {
    const auto header = nlohmann::json::parse(lines[0].second);
    const auto version = detail::as_string(detail::require(header, "version", "header"), "version");
    if (version != kSessionSchema) fail(ErrorKind::schema, "unsupported version \"" + version + "\"");
    log.config = config_from_json(detail::require(header, "config", "header"));
    log.seed = detail::as_uint64(detail::require(header, "seed", "header"), "seed");
    return 0;
  });
  log.events = parse_events(lines, 1, ctx);
  return log;
}

void write_log(const SessionLog& log, const std::filesystem::path& path) {
  detail::write_file(path, format_log(log));
}

SessionLog ingest_log(const std::filesystem::path& path) {
  try {
    return parse_log(detail::read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw;
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

SessionLog log_of(const Session& session) {
  return {session.config(), session.seed(), session.event_log()};
}

std::string format_script(const std::vector<GestureEvent>& events) {
  std::string out;
  for (const auto& e : events) out += to_json(e).dump() + "\n";
  return out;
}

std::vector<GestureEvent> parse_script(const std::string& text) {
  return parse_events(split_lines(text), 0, "script");
}

std::filesystem::path frames_dir_for(const std::filesystem::path& log_path) {
  return log_path.parent_path() / (log_path.stem().string() + "_frames");
}

nn::Frame capture_frame(GestureClass gesture, std::uint64_t session_seed, std::size_t event_index) {
  Rng rng(derive_seed(session_seed, kCaptureStream + event_index));
  return nn::render_glyph(gesture, rng);
}

PlayResult play(const DifficultyConfig& config, std::uint64_t seed, const std::vector<GestureEvent>& script,
                const std::filesystem::path& log_path) {
  PlayResult result{new_session(config, seed), log_path, frames_dir_for(log_path), 0};
  for (const auto& e : script) result.session.apply(e);

  const auto& events = result.session.event_log();
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!events[i].frame_ref) continue;
    nn::write_pgm(capture_frame(events[i].gesture, seed, i), result.frames_dir / *events[i].frame_ref);
    ++result.frames_written;
  }
  write_log(log_of(result.session), log_path);
  return result;
}

PipelineResult pipeline_counts(const std::vector<GestureEvent>& events, const nn::Predictor* predictor,
                               const std::filesystem::path& frames_dir) {
  PipelineResult result;
  if (!predictor) {
    for (const auto& e : events) ++result.counts[ordinal(e.gesture)];
    return result;
  }
  nn::ConfusionMatrix cm;
  for (const auto& e : events) {
    if (!e.frame_ref) continue;
    const auto path = frames_dir / *e.frame_ref;
    if (!std::filesystem::exists(path)) fail(ErrorKind::io, "missing frame " + path.string());
    nn::Frame frame = nn::read_pgm(path);
    frame.label = e.gesture;
    cm.add(e.gesture, (*predictor)(frame));
    ++result.frames_classified;
  }
  result.counts = nn::diagonal_counts(cm);
  result.confusion = cm;
  return result;
}

ScoreBreakdown score_log(const SessionLog& log, const GestureCounts& counts, const ScoreOptions& options) {
  const Session s = replay(log.config, log.seed, log.events);
  if (!s.completed()) return unfinished_score(counts);
  DifficultyConfig config = log.config;
  if (options.t_total_override) config.t_total = options.t_total_override;
  return final_score(*s.t_end(), config, counts, options.rounding);
}

ScoreBreakdown score_log(const SessionLog& log, const ScoreOptions& options) {
  return score_log(log, pipeline_counts(log.events, nullptr, {}).counts, options);
}

}  // namespace trymove
