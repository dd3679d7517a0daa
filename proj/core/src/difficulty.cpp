#include "trymove/difficulty.hpp"

#include <string>

#include "json_util.hpp"
#include "trymove/error.hpp"

namespace trymove {

std::string_view to_string(Level level) noexcept {
  switch (level) {
    case Level::guidance: return "guidance";
    case Level::easy: return "easy";
    case Level::middle: return "middle";
    case Level::difficult: return "difficult";
  }
  return "guidance";
}

Level parse_level(std::string_view text) {
  for (Level l : {Level::guidance, Level::easy, Level::middle, Level::difficult}) {
    if (text == to_string(l)) return l;
  }
  fail(ErrorKind::validation,
       "unknown level '" + std::string(text) + "'; valid levels: guidance, easy, middle, difficult");
}

// With two-cell growth every piece costs at least four gestures to place
// (tap, grasp, move, open hand), so the piece count S^3 - N sets the session
// length. These sizes keep scripted sessions inside each level's frame budget.
DifficultyConfig config_for(Level level) {
  switch (level) {
    case Level::guidance: return {Level::guidance, 2, 2, 0, std::nullopt, 50};
    case Level::easy: return {Level::easy, 3, 7, 1, 240.0, 90};
    case Level::middle: return {Level::middle, 3, 2, 2, 480.0, 120};
    case Level::difficult: return {Level::difficult, 4, 30, 4, 600.0, 180};
  }
  return {};
}

nlohmann::ordered_json to_json(const DifficultyConfig& c) {
  nlohmann::ordered_json doc;
  doc["level"] = to_string(c.level);
  doc["grid_size"] = c.grid_size;
  doc["requested_pieces"] = c.requested_pieces;
  doc["fake_count"] = c.fake_count;
  doc["t_total"] = c.t_total ? nlohmann::ordered_json(*c.t_total) : nlohmann::ordered_json(nullptr);
  doc["frame_budget"] = c.frame_budget;
  return doc;
}

DifficultyConfig config_from_json(const nlohmann::json& doc) {
  using namespace detail;
  const std::string ctx = "config";
  DifficultyConfig c;
  c.level = parse_level(as_string(require(doc, "level", ctx), "level"));
  c.grid_size = as_int32(require(doc, "grid_size", ctx), "grid_size");
  c.requested_pieces = as_int32(require(doc, "requested_pieces", ctx), "requested_pieces");
  c.fake_count = as_int32(require(doc, "fake_count", ctx), "fake_count");
  const auto& total = require(doc, "t_total", ctx);
  if (!total.is_null()) c.t_total = as_number(total, "t_total");
  c.frame_budget = as_int32(require(doc, "frame_budget", ctx), "frame_budget");
  if (c.grid_size <= 0 || c.requested_pieces < 0 || c.fake_count < 0 || c.frame_budget < 0 ||
      (c.t_total && !(*c.t_total > 0.0))) {
    fail(ErrorKind::schema, ctx + ": values out of range");
  }
  return c;
}

}  // namespace trymove
