#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "trymove/error.hpp"
#include "trymove/geometry.hpp"

namespace trymove::detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& context) {
  if (!obj.is_object()) fail(ErrorKind::schema, context + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorKind::schema, context + ": missing field \"" + key + "\"");
  return *it;
}

inline std::int64_t as_int(const nlohmann::json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(ErrorKind::schema, "field \"" + field + "\" must be an integer");
  return v.get<std::int64_t>();
}

inline int as_int32(const nlohmann::json& v, const std::string& field) {
  const auto value = as_int(v, field);
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
    fail(ErrorKind::schema, "field \"" + field + "\" out of range");
  }
  return static_cast<int>(value);
}

inline std::uint64_t as_uint64(const nlohmann::json& v, const std::string& field) {
  if (!v.is_number_unsigned()) {
    fail(ErrorKind::schema, "field \"" + field + "\" must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline double as_number(const nlohmann::json& v, const std::string& field) {
  if (!v.is_number()) fail(ErrorKind::schema, "field \"" + field + "\" must be a number");
  return v.get<double>();
}

inline bool as_bool(const nlohmann::json& v, const std::string& field) {
  if (!v.is_boolean()) fail(ErrorKind::schema, "field \"" + field + "\" must be a boolean");
  return v.get<bool>();
}

inline std::string as_string(const nlohmann::json& v, const std::string& field) {
  if (!v.is_string()) fail(ErrorKind::schema, "field \"" + field + "\" must be a string");
  return v.get<std::string>();
}

inline Vec3 as_vec3(const nlohmann::json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 3) {
    fail(ErrorKind::schema, "field \"" + field + "\" must be an [x, y, z] triple");
  }
  return {as_int32(v[0], field), as_int32(v[1], field), as_int32(v[2], field)};
}

inline nlohmann::ordered_json vec3_json(Vec3 v) { return nlohmann::ordered_json::array({v.x, v.y, v.z}); }

// Parses text, converting parser byte offsets into line numbers.
inline nlohmann::json parse_text(const std::string& text, const std::string& context) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n';
    fail(ErrorKind::schema, context + ": line " + std::to_string(line) + ": " + e.what());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace trymove::detail
