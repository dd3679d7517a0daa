#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace trymove {

enum class Level { guidance, easy, middle, difficult };

std::string_view to_string(Level level) noexcept;
// Throws Error(validation) listing the valid level names.
Level parse_level(std::string_view text);

struct DifficultyConfig {
  Level level = Level::guidance;
  int grid_size = 2;
  int requested_pieces = 2;
  int fake_count = 0;
  std::optional<double> t_total;  // seconds; none for guidance
  int frame_budget = 50;

  friend bool operator==(const DifficultyConfig&, const DifficultyConfig&) = default;
};

// Built-in per-level configuration.
DifficultyConfig config_for(Level level);

nlohmann::ordered_json to_json(const DifficultyConfig& config);
DifficultyConfig config_from_json(const nlohmann::json& doc);

}  // namespace trymove
