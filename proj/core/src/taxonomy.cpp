#include "trymove/taxonomy.hpp"

#include <algorithm>
#include <cctype>

#include "trymove/error.hpp"

namespace trymove {

namespace {

constexpr std::array<std::string_view, kGestureCount> kCodes = {
    "g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8",
    "g9", "g10", "ga", "gb", "gc", "gd", "ge", "gf",
};

// Muscle lists are kept as printed in the gesture table. Two rows need care:
// "Thenar and Hypothenar Muscles" under the index tap names two groups, and
// the double-handed index-thumb grasp recruits the single-hand group on both
// sides (8 per hand, 16 total).
std::vector<GestureSpec> build_specs() {
  const std::vector<std::string> pinch = {
      "Thenar Muscles", "Lumbrical Muscles", "Interossei Muscles",
      "Flexor Pollicis Longus", "Flexor Digitorum Superficialis",
      "Flexor Digitorum Profundus", "Extensor Muscles", "Opponent Muscles",
  };
  std::vector<std::string> pinch_both;
  for (const char* side : {"left", "right"}) {
    for (const auto& m : pinch) pinch_both.push_back(m + " (" + side + ")");
  }
  const std::vector<std::string> locomotion_parts = {"Upper limb", "Lower limb"};

  std::vector<GestureSpec> specs = {
      {GestureClass::g1, 0, locomotion_parts, {}, "1", "Move forward"},
      {GestureClass::g2, 0, locomotion_parts, {}, "2", "Move backward"},
      {GestureClass::g3, 0, locomotion_parts, {}, "3", "Turn right"},
      {GestureClass::g4, 0, locomotion_parts, {}, "4", "Turn left"},
      {GestureClass::g5, 9, {"Forearm", "Humerus"},
       {"Biceps Brachii", "Triceps Brachii", "Deltoid", "Trapezius", "Subscapularis",
        "Subclavius", "Teres Minor", "Infraspinatus", "Brachioradialis"},
       "5", "Upper and front arm folding movement"},
      {GestureClass::g6, 10, {"Forearm", "Hand"},
       {"Flexor Carpi Radialis", "Flexor Carpi Ulnaris", "Palmaris Longus",
        "Flexor Digitorum Superficialis", "Flexor Digitorum Profundus",
        "Extensor Carpi Radialis Brevis", "Extensor Carpi Radialis Longus",
        "Extensor Carpi Ulnaris", "Extensor Digitorum", "Extensor Digiti Minimi"},
       "6", "Movement of the forearm drives movement of the wrist"},
      {GestureClass::g7, 6, {"Forearm", "Hand"},
       {"Extensor Digitorum", "Extensor Indicis", "Extensor Digiti Minimi",
        "Extensor Pollicis Longus", "Extensor Pollicis Brevis",
        "Extensor Carpi Radialis Longus"},
       "7", "Wrist extension"},
      {GestureClass::g8, 6, {"Forearm", "Hand"},
       {"Flexor Digitorum Superficialis", "Flexor Digitorum Profundus",
        "Flexor Pollicis Longus", "Flexor Carpi Radialis", "Flexor Carpi Ulnaris",
        "Palmaris Longus"},
       "8", "Wrist flexion"},
      {GestureClass::g9, 8, {"Forearm", "Hand"},
       {"Extensor Digitorum", "Extensor Indicis", "Extensor Digiti Minimi",
        "Extensor Pollicis Longus", "Extensor Pollicis Brevis",
        "Extensor Carpi Radialis Longus", "Extensor Carpi Ulnaris",
        "Extensor Digitorum Communis"},
       "9", "Open hand"},
      {GestureClass::g10, 8, {"Forearm", "Hand"},
       {"Flexor Digitorum Superficialis", "Flexor Digitorum Profundus",
        "Flexor Pollicis Longus", "Flexor Carpi Radialis", "Flexor Carpi Ulnaris",
        "Palmaris Longus", "Flexor Pollicis Brevis", "Flexor Digiti Minimi Brevis"},
       "10", "Close hand"},
      {GestureClass::ga, 10, {"Forearm", "Hand", "Finger"},
       {"Flexor Digitorum Superficialis", "Flexor Digitorum Profundus",
        "Extensor Digitorum", "Extensor Indicis", "Interossei Muscles",
        "Lumbrical Muscles", "Thenar Muscles", "Hypothenar Muscles",
        "Flexor Carpi Radialis", "Extensor Carpi Radialis Longus"},
       "a", "Tap with index-finger"},
      {GestureClass::gb, 10, {"Forearm", "Hand", "Finger"},
       {"Flexor Digitorum Superficialis", "Flexor Digitorum Profundus",
        "Flexor Pollicis Longus", "Flexor Carpi Radialis", "Flexor Carpi Ulnaris",
        "Thenar Muscles", "Hypothenar Muscles", "Lumbrical Muscles",
        "Interossei Muscles", "Extensor Muscles"},
       "b", "All-finger grasping"},
      {GestureClass::gc, 8, {"Forearm", "Hand", "Finger"}, pinch, "c",
       "Index-thumb-finger grasping (single hand)"},
      {GestureClass::gd, 16, {"Forearm", "Hand", "Finger"}, pinch_both, "d",
       "Index-thumb-finger grasping (double hands)"},
      {GestureClass::ge, 2, {"Humerus", "Forearm"}, {"Biceps Brachii", "Supinator"}, "e",
       "Turn the palm upwards"},
      {GestureClass::gf, 3, {"Humerus", "Forearm"},
       {"Pronator Teres", "Pronator Quadratus", "Brachioradialis"}, "f",
       "Turn the palm downwards"},
  };
  return specs;
}

const std::vector<GestureSpec>& specs() {
  static const std::vector<GestureSpec> table = build_specs();
  return table;
}

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

}  // namespace

GestureClass from_ordinal(std::size_t index) {
  if (index >= kGestureCount) {
    fail(ErrorKind::invalid_gesture, "gesture ordinal out of range: " + std::to_string(index));
  }
  return static_cast<GestureClass>(index);
}

std::string_view code(GestureClass g) noexcept { return kCodes[ordinal(g)]; }

std::optional<GestureClass> parse_code(std::string_view text) noexcept {
  const std::string needle = lower(trim(text));
  for (std::size_t i = 0; i < kGestureCount; ++i) {
    if (needle == kCodes[i]) return static_cast<GestureClass>(i);
  }
  return std::nullopt;
}

GestureClass parse_label(std::string_view text) {
  const std::string needle = lower(trim(text));
  if (needle.empty()) fail(ErrorKind::parse, "empty gesture label");
  if (auto g = parse_code(needle)) return *g;
  for (const auto& spec : specs()) {
    if (needle == spec.tag) return spec.gesture;
  }

  std::vector<const GestureSpec*> hits;
  for (const auto& spec : specs()) {
    if (lower(spec.description).starts_with(needle)) hits.push_back(&spec);
  }
  if (hits.size() == 1) return hits.front()->gesture;

  std::string message;
  if (hits.empty()) {
    message = "unknown gesture label '" + std::string(text) + "'; expected one of:";
    for (const auto& c : kCodes) message += " " + std::string(c);
  } else {
    message = "ambiguous gesture label '" + std::string(text) + "'; candidates:";
    for (const auto* spec : hits) {
      message += " " + std::string(code(spec->gesture)) + " (" + spec->description + ")";
    }
  }
  fail(ErrorKind::parse, message);
}

const GestureSpec& gesture_spec(GestureClass g) noexcept { return specs()[ordinal(g)]; }

int muscle_count(GestureClass g) noexcept { return gesture_spec(g).muscle_count; }

int muscle_count(std::string_view gesture_code) {
  auto g = parse_code(gesture_code);
  if (!g) fail(ErrorKind::invalid_gesture, "unknown gesture code '" + std::string(gesture_code) + "'");
  return muscle_count(*g);
}

const std::array<int, kGestureCount>& muscle_weights() noexcept {
  static const std::array<int, kGestureCount> weights = [] {
    std::array<int, kGestureCount> w{};
    for (std::size_t i = 0; i < kGestureCount; ++i) w[i] = specs()[i].muscle_count;
    return w;
  }();
  return weights;
}

const std::array<GestureClass, kGestureCount>& canonical_order() noexcept {
  static const std::array<GestureClass, kGestureCount> order = [] {
    std::array<GestureClass, kGestureCount> o{};
    for (std::size_t i = 0; i < kGestureCount; ++i) o[i] = static_cast<GestureClass>(i);
    return o;
  }();
  return order;
}

std::int64_t dot_weights(std::span<const std::int64_t> counts) {
  if (counts.size() != kGestureCount) {
    fail(ErrorKind::shape, "count vector must have 16 entries, got " + std::to_string(counts.size()));
  }
  std::int64_t total = 0;
  for (std::size_t i = 0; i < kGestureCount; ++i) total += counts[i] * muscle_weights()[i];
  return total;
}

nlohmann::ordered_json taxonomy_document() {
  nlohmann::ordered_json doc;
  doc["version"] = "trymove-taxonomy/1";
  auto& classes = doc["classes"] = nlohmann::ordered_json::array();
  for (const auto& spec : specs()) {
    nlohmann::ordered_json rec;
    rec["code"] = code(spec.gesture);
    rec["ordinal"] = ordinal(spec.gesture);
    rec["tag"] = spec.tag;
    rec["muscle_count"] = spec.muscle_count;
    rec["description"] = spec.description;
    rec["motor_parts"] = spec.motor_parts;
    rec["muscles"] = spec.muscles;
    classes.push_back(std::move(rec));
  }
  return doc;
}

}  // namespace trymove
