#include "trymove/nn/frames.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "trymove/error.hpp"

namespace trymove::nn {

namespace {

// Glyph space: [-1, 1]^2, x to the right, y downwards; one unit is 16 pixels.
struct Point {
  double x;
  double y;
};

struct Segment {
  Point a;
  Point b;
};

struct Arc {
  Point center;
  double radius;
  double from;  // radians, counter-clockwise in glyph space
  double to;
};

struct Disc {
  Point center;
  double radius;
};

struct Glyph {
  std::vector<Segment> segments;
  std::vector<Arc> arcs;
  std::vector<Disc> discs;
};

constexpr double kHalfWidth = 0.085;
constexpr double kEdge = 1.0 / 16.0;
constexpr double kPi = std::numbers::pi;

double deg(double d) { return d * kPi / 180.0; }

Glyph arrow(Point tail, Point tip) {
  const double dx = tip.x - tail.x, dy = tip.y - tail.y;
  const double len = std::hypot(dx, dy);
  const double ux = dx / len, uy = dy / len;
  const double head = 0.45;
  const Point left = {tip.x - head * (ux * std::cos(deg(35)) - uy * std::sin(deg(35))),
                      tip.y - head * (uy * std::cos(deg(35)) + ux * std::sin(deg(35)))};
  const Point right = {tip.x - head * (ux * std::cos(deg(35)) + uy * std::sin(deg(35))),
                       tip.y - head * (uy * std::cos(deg(35)) - ux * std::sin(deg(35)))};
  return {{{tail, tip}, {tip, left}, {tip, right}}, {}, {}};
}

Glyph pinch(double cx, double scale) {
  return {{{{cx - 0.45 * scale, -0.6 * scale}, {cx, 0.5 * scale}},
           {{cx + 0.45 * scale, -0.6 * scale}, {cx, 0.5 * scale}}},
          {},
          {{{cx, 0.5 * scale}, 0.12 * scale}}};
}

Glyph glyph_for(GestureClass g) {
  switch (g) {
    // Locomotion: arrows.
    case GestureClass::g1: return arrow({0, 0.75}, {0, -0.75});
    case GestureClass::g2: return arrow({0, -0.75}, {0, 0.75});
    case GestureClass::g3: return arrow({-0.75, 0}, {0.75, 0});
    case GestureClass::g4: return arrow({0.75, 0}, {-0.75, 0});
    // Arm and wrist: arcs.
    case GestureClass::g5: return {{}, {{{0, 0}, 0.6, deg(40), deg(320)}}, {}};
    case GestureClass::g6: return {{}, {{{0, 0}, 0.6, deg(220), deg(500)}}, {}};
    case GestureClass::g7:
      return {{{{-0.65, 0.0}, {-0.2, 0.5}}, {{-0.2, 0.5}, {0.7, -0.6}}}, {}, {}};
    case GestureClass::g8:
      return {{{{-0.65, 0.0}, {-0.2, -0.5}}, {{-0.2, -0.5}, {0.7, 0.6}}}, {}, {}};
    // Hand: open and closed blobs.
    case GestureClass::g9: return {{}, {{{0, 0}, 0.6, 0, 2 * kPi}}, {}};
    case GestureClass::g10: return {{}, {}, {{{0, 0}, 0.42}}};
    // Fingers and palm: stroke motifs.
    case GestureClass::ga: return {{{{0, 0.75}, {0, -0.15}}}, {}, {{{0, -0.5}, 0.2}}};
    case GestureClass::gb:
      return {{{{-0.6, -0.7}, {-0.6, 0.3}},
               {{-0.2, -0.7}, {-0.2, 0.3}},
               {{0.2, -0.7}, {0.2, 0.3}},
               {{0.6, -0.7}, {0.6, 0.3}},
               {{-0.75, 0.55}, {0.75, 0.55}}},
              {},
              {}};
    case GestureClass::gc: return pinch(0.0, 1.0);
    case GestureClass::gd: {
      Glyph left = pinch(-0.45, 0.7);
      const Glyph right = pinch(0.45, 0.7);
      left.segments.insert(left.segments.end(), right.segments.begin(), right.segments.end());
      left.discs.insert(left.discs.end(), right.discs.begin(), right.discs.end());
      return left;
    }
    // Palm up: a cup with the thumb dot above; palm down: a dome with the dot below.
    case GestureClass::ge: return {{}, {{{0, 0.05}, 0.6, deg(180), deg(360)}}, {{{0, -0.55}, 0.15}}};
    case GestureClass::gf: return {{}, {{{0, -0.05}, 0.6, deg(0), deg(180)}}, {{{0, 0.55}, 0.15}}};
  }
  return {};
}

double segment_distance(Point p, const Segment& s) {
  const double vx = s.b.x - s.a.x, vy = s.b.y - s.a.y;
  const double wx = p.x - s.a.x, wy = p.y - s.a.y;
  const double len2 = vx * vx + vy * vy;
  const double t = len2 > 0 ? std::clamp((wx * vx + wy * vy) / len2, 0.0, 1.0) : 0.0;
  return std::hypot(wx - t * vx, wy - t * vy);
}

double arc_distance(Point p, const Arc& a) {
  const double dx = p.x - a.center.x, dy = p.y - a.center.y;
  // Glyph space has y down; measure angles counter-clockwise on screen.
  double angle = std::atan2(-dy, dx);
  const double span = a.to - a.from;
  double rel = std::fmod(angle - a.from, 2 * kPi);
  if (rel < 0) rel += 2 * kPi;
  if (span >= 2 * kPi - 1e-9 || rel <= span) return std::abs(std::hypot(dx, dy) - a.radius);
  const Point e1 = {a.center.x + a.radius * std::cos(a.from), a.center.y - a.radius * std::sin(a.from)};
  const Point e2 = {a.center.x + a.radius * std::cos(a.to), a.center.y - a.radius * std::sin(a.to)};
  return std::min(std::hypot(p.x - e1.x, p.y - e1.y), std::hypot(p.x - e2.x, p.y - e2.y));
}

double coverage(double distance_to_stroke_edge) {
  return std::clamp(0.5 - distance_to_stroke_edge / kEdge, 0.0, 1.0);
}

double intensity(const Glyph& glyph, Point p) {
  double value = 0.0;
  for (const auto& s : glyph.segments) value = std::max(value, coverage(segment_distance(p, s) - kHalfWidth));
  for (const auto& a : glyph.arcs) value = std::max(value, coverage(arc_distance(p, a) - kHalfWidth));
  for (const auto& d : glyph.discs) {
    value = std::max(value, coverage(std::hypot(p.x - d.center.x, p.y - d.center.y) - d.radius));
  }
  return value;
}

Frame render(GestureClass gesture, double rotation, double shift_x, double shift_y) {
  const Glyph glyph = glyph_for(gesture);
  const double c = std::cos(rotation), s = std::sin(rotation);
  Frame frame;
  frame.label = gesture;
  for (int y = 0; y < kFrameSize; ++y) {
    for (int x = 0; x < kFrameSize; ++x) {
      // Pixel centre to glyph space, then undo the shift and rotation.
      const double u = (x + 0.5 - kFrameSize / 2.0) / 16.0 - shift_x / 16.0;
      const double v = (y + 0.5 - kFrameSize / 2.0) / 16.0 - shift_y / 16.0;
      const Point p = {c * u + s * v, -s * u + c * v};
      frame.pixels[static_cast<std::size_t>(y * kFrameSize + x)] = static_cast<float>(intensity(glyph, p));
    }
  }
  return frame;
}

}  // namespace

Frame glyph_template(GestureClass gesture) { return render(gesture, 0.0, 0.0, 0.0); }

Frame render_glyph(GestureClass gesture, Rng& rng, const GlyphJitter& jitter) {
  const double rotation = deg(rng.uniform(-jitter.max_rotation_degrees, jitter.max_rotation_degrees));
  const double sx = rng.uniform(-jitter.max_shift_pixels, jitter.max_shift_pixels);
  const double sy = rng.uniform(-jitter.max_shift_pixels, jitter.max_shift_pixels);
  Frame frame = render(gesture, rotation, sx, sy);
  for (auto& px : frame.pixels) {
    px = static_cast<float>(std::clamp(px + jitter.noise_sigma * rng.normal(), 0.0, 1.0));
  }
  return frame;
}

std::vector<Frame> synth_frames(GestureClass gesture, int n, std::uint64_t seed) {
  std::vector<Frame> frames;
  if (n <= 0) return frames;
  Rng rng(derive_seed(seed, ordinal(gesture) + 1));
  frames.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) frames.push_back(render_glyph(gesture, rng));
  return frames;
}

std::vector<Frame> synth_dataset(int per_class, std::uint64_t seed) {
  std::vector<Frame> all;
  for (const auto g : canonical_order()) {
    auto frames = synth_frames(g, per_class, seed);
    all.insert(all.end(), std::make_move_iterator(frames.begin()), std::make_move_iterator(frames.end()));
  }
  return all;
}

void write_pgm(const Frame& frame, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot write frame " + path.string());
  out << "P5\n# trymove-glyph/" << kGlyphRecipeVersion;
  if (frame.label) out << " label=" << code(*frame.label);
  out << "\n" << kFrameSize << " " << kFrameSize << "\n255\n";
  for (const float v : frame.pixels) {
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f))));
  }
  if (!out) fail(ErrorKind::io, "write failed for frame " + path.string());
}

Frame read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open frame " + path.string());

  Frame frame;
  std::vector<std::string> tokens;
  std::string line;
  while (tokens.size() < 4 && std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      const auto pos = line.find("label=");
      if (pos != std::string::npos) frame.label = parse_code(line.substr(pos + 6));
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  if (tokens.size() != 4 || tokens[0] != "P5" || tokens[1] != std::to_string(kFrameSize) ||
      tokens[2] != std::to_string(kFrameSize) || tokens[3] != "255") {
    fail(ErrorKind::schema, "frame " + path.string() + " is not a 32x32 8-bit P5 graymap");
  }
  std::string data(kFramePixels, '\0');
  in.read(data.data(), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size())) {
    fail(ErrorKind::schema, "frame " + path.string() + " is truncated");
  }
  for (std::size_t i = 0; i < kFramePixels; ++i) {
    frame.pixels[i] = static_cast<float>(static_cast<unsigned char>(data[i])) / 255.0f;
  }
  return frame;
}

}  // namespace trymove::nn
