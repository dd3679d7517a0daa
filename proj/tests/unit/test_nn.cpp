#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <numeric>

#include "trymove/error.hpp"
#include "trymove/nn/model.hpp"
#include "trymove/rng.hpp"

using namespace trymove;
using namespace trymove::nn;

namespace {

double pixel_distance(const Frame& a, const Frame& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) d += std::abs(a.pixels[i] - b.pixels[i]);
  return d / static_cast<double>(a.pixels.size());
}

Network<double> micro_network() {
  // 1 conv 2x2 (2 filters), 1 dense, on a full frame.
  Network<double> net({1, kFrameSize, kFrameSize},
                      {{LayerKind::conv, 2, 2}, {LayerKind::relu}, {LayerKind::dense, 16}, {LayerKind::softmax}});
  initialize(net, 5);
  for (auto& b : net.layers()[0].bias) b = 0.05;
  return net;
}

std::vector<double> frame_input_double(const Frame& f) { return {f.pixels.begin(), f.pixels.end()}; }

}  // namespace

TEST_CASE("synthetic frames") {
  CHECK(synth_frames(GestureClass::g1, 0, 1).empty());
  const auto a = synth_frames(GestureClass::g1, 5, 3);
  CHECK(a == synth_frames(GestureClass::g1, 5, 3));
  CHECK(a != synth_frames(GestureClass::g1, 5, 4));
  for (const auto& f : a) {
    CHECK(f.label == GestureClass::g1);
    CHECK(f.pixels.size() == 32u * 32u);
    for (float p : f.pixels) CHECK((p >= 0.0f && p <= 1.0f));
  }
  const auto ds = synth_dataset(3, 9);
  CHECK(ds.size() == 48);
  CHECK(ds[3].label == GestureClass::g2);
}

TEST_CASE("templates are more distinct between classes than samples within one") {
  double inter = 0;
  int pairs = 0;
  for (std::size_t i = 0; i < kGestureCount; ++i)
    for (std::size_t j = i + 1; j < kGestureCount; ++j) {
      const double d = pixel_distance(glyph_template(from_ordinal(i)), glyph_template(from_ordinal(j)));
      CHECK(d > 0.0);
      inter += d;
      ++pairs;
    }
  inter /= pairs;
  double intra = 0;
  int n = 0;
  for (std::size_t c = 0; c < kGestureCount; ++c) {
    const auto s = synth_frames(from_ordinal(c), 100, 17);
    for (std::size_t k = 0; k + 1 < s.size(); k += 2) {
      intra += pixel_distance(s[k], s[k + 1]);
      ++n;
    }
  }
  intra /= n;
  MESSAGE("mean template distance " << inter << ", mean sample distance " << intra);
  CHECK(inter > intra);
}

TEST_CASE("pgm round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "trymove_test_pgm";
  std::filesystem::remove_all(dir);
  const auto f = synth_frames(GestureClass::ge, 1, 2)[0];
  write_pgm(f, dir / "f.pgm");
  const auto g = read_pgm(dir / "f.pgm");
  CHECK(g.label == GestureClass::ge);
  for (std::size_t i = 0; i < f.pixels.size(); ++i) CHECK(std::abs(f.pixels[i] - g.pixels[i]) <= 0.5f / 255.0f + 1e-6f);
  CHECK_THROWS_AS(read_pgm(dir / "missing.pgm"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("default architecture") {
  const auto model = make_default_model();
  const auto& layers = model.network.layers();
  REQUIRE(layers.size() == 10);
  CHECK(layers[0].out == Shape{8, 30, 30});
  CHECK(layers[2].out == Shape{8, 15, 15});
  CHECK(layers[3].out == Shape{16, 13, 13});
  CHECK(layers[5].out == Shape{16, 6, 6});
  CHECK(layers[6].in.size() == 576);
  CHECK(layers[6].out.size() == 64);
  CHECK(model.network.output_size() == 16);
  CHECK(model.network.parameter_count() == (8 * 9 + 8) + (16 * 8 * 9 + 16) + (576 * 64 + 64) + (64 * 16 + 16));
  const double limit = std::sqrt(6.0 / 9.0);
  for (float w : layers[0].weight) CHECK(std::abs(w) <= limit);
  CHECK(std::all_of(layers[0].bias.begin(), layers[0].bias.end(), [](float b) { return b == 0.0f; }));
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(Network<float>({1, 2, 2}, {{LayerKind::conv, 1, 3}, {LayerKind::softmax}}), Error);
  CHECK_THROWS_AS(Network<float>({1, 4, 4}, {{LayerKind::softmax}, {LayerKind::dense, 2}}), Error);
  CHECK_THROWS_AS(Network<float>({1, 4, 4}, {{LayerKind::dense, 2}}), Error);
  const auto model = make_default_model();
  const std::vector<float> wrong(10, 0.0f);
  CHECK_THROWS_AS(model.network.logits(wrong), Error);
}

TEST_CASE("probabilities sum to one") {
  const auto model = make_default_model();
  const auto frames = synth_dataset(1, 4);
  for (const auto& p : forward(model, frames)) {
    CHECK(p.size() == 16);
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-9);
    for (double v : p) CHECK(v >= 0.0);
  }
  Network<float> zero({1, kFrameSize, kFrameSize}, default_layers());
  for (double v : zero.probabilities(frame_input(frames[0]))) CHECK(v == doctest::Approx(1.0 / 16).epsilon(1e-12));
}

TEST_CASE("hand-computed micro network") {
  Network<double> net({1, 4, 4}, {{LayerKind::conv, 1, 2}, {LayerKind::relu}, {LayerKind::maxpool, 0, 3},
                                  {LayerKind::dense, 2}, {LayerKind::softmax}});
  auto& conv = net.layers()[0];
  conv.weight = {1.0, -1.0, 0.5, 2.0};
  conv.bias = {-1.0};
  auto& dense = net.layers()[3];
  dense.weight = {0.5, -0.25};
  dense.bias = {0.1, 0.2};
  std::vector<double> x(16);
  for (int i = 0; i < 16; ++i) x[i] = 0.1 * i;

  // 2x2 valid convolution, ReLU, then one 3x3 pool window over the whole map.
  double peak = -1e9;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const auto px = [&](int rr, int cc) { return 0.1 * (4 * rr + cc); };
      const double v = px(r, c) - px(r, c + 1) + 0.5 * px(r + 1, c) + 2.0 * px(r + 1, c + 1) - 1.0;
      peak = std::max(peak, std::max(v, 0.0));
    }
  // bottom-right window value: 1.0 - 1.1 + 0.5*1.4 + 2*1.5 - 1 = 2.6
  CHECK(peak == doctest::Approx(2.6));
  const auto logits = net.logits(x);
  REQUIRE(logits.size() == 2);
  CHECK(logits[0] == doctest::Approx(0.5 * 2.6 + 0.1));
  CHECK(logits[1] == doctest::Approx(-0.25 * 2.6 + 0.2));
  const double e0 = std::exp(1.4), e1 = std::exp(-0.45);
  const auto p = net.probabilities(x);
  CHECK(p[0] == doctest::Approx(e0 / (e0 + e1)));
  CHECK(net.loss(x, 1) == doctest::Approx(-std::log(e1 / (e0 + e1))));

  // dL/d dense.bias = p - onehot
  auto g = net.zero_gradients();
  net.accumulate_gradients(x, 1, g);
  CHECK(g[3][0] == doctest::Approx(p[0]));
  CHECK(g[3][1] == doctest::Approx(p[1] - 1.0));
  CHECK(g[2][0] == doctest::Approx(p[0] * 2.6));
  // conv bias gradient flows only through the pooled maximum
  CHECK(g[1][0] == doctest::Approx(p[0] * 0.5 + (p[1] - 1.0) * -0.25));
}

TEST_CASE("micro network gradient check") {
  const auto net = micro_network();
  const auto f = synth_frames(GestureClass::g9, 1, 3)[0];
  const double err = gradient_check(net, frame_input_double(f), static_cast<int>(ordinal(GestureClass::g9)));
  MESSAGE("micro max relative error " << err);
  CHECK(err < 1e-4);
}

TEST_CASE("bias-only path matches finite differences") {
  const auto net = micro_network();
  const std::vector<double> zero(kFrameSize * kFrameSize, 0.0);
  auto g = net.zero_gradients();
  net.accumulate_gradients(zero, 4, g);
  for (std::size_t block : {1u, 3u}) {
    for (std::size_t i = 0; i < g[block].size(); ++i) {
      auto plus = net, minus = net;
      plus.parameters()[block][i] += 1e-5;
      minus.parameters()[block][i] -= 1e-5;
      const double fd = (plus.loss(zero, 4) - minus.loss(zero, 4)) / 2e-5;
      CHECK(std::abs(fd - g[block][i]) < 1e-7);
    }
  }
}

TEST_CASE("full architecture gradient check") {
  Network<double> net = make_default_model().network.cast<double>();
  const auto f = synth_frames(GestureClass::gd, 1, 8)[0];
  const double err = gradient_check(net, frame_input_double(f), static_cast<int>(ordinal(GestureClass::gd)));
  MESSAGE("full max relative error " << err);
  CHECK(err < 1e-3);
}

TEST_CASE("argmax ties go to the lowest ordinal") {
  std::vector<double> p(16, 0.0);
  p[3] = p[7] = 0.5;
  CHECK(argmax_class(p) == GestureClass::g4);
  std::vector<double> u(16, 1.0 / 16);
  CHECK(argmax_class(u) == GestureClass::g1);
}

TEST_CASE("training determinism and edge cases") {
  const auto data = synth_dataset(4, 21);
  Hyper h;
  h.epochs = 2;
  h.batch_size = 8;
  const auto model = make_default_model(h);
  const auto a = train(model, data, h);
  const auto b = train(model, data, h);
  CHECK(a.epoch_losses.size() == 2);
  CHECK(a.epoch_losses == b.epoch_losses);
  CHECK(serialize_model(a.model) == serialize_model(b.model));

  auto shuffled = data;
  Rng rng(99);
  rng.shuffle(shuffled);
  const auto c = train(model, shuffled, h);
  CHECK(serialize_model(c.model) == serialize_model(a.model));

  Hyper none = h;
  none.epochs = 0;
  const auto z = train(model, data, none);
  CHECK(z.epoch_losses.empty());
  CHECK(serialize_model(z.model) == serialize_model(Model{model.network, none}));

  try {
    train(model, std::vector<Frame>{}, h);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_data);
  }
}

// Loss curve of a reduced recipe (40 frames per class, 4 epochs), frozen.
TEST_CASE("loss curve regression") {
  Hyper h;
  h.epochs = 4;
  const auto r = train(make_default_model(h), synth_dataset(40, h.seed), h);
  const std::vector<double> pinned = {2.096624444, 0.7818262669, 0.5427439377, 0.2654530267};
  REQUIRE(r.epoch_losses.size() == pinned.size());
  for (std::size_t i = 0; i < pinned.size(); ++i) {
    MESSAGE("epoch " << i << " loss " << std::setprecision(10) << r.epoch_losses[i]);
    CHECK(r.epoch_losses[i] == doctest::Approx(pinned[i]).epsilon(1e-4));
  }
  CHECK(r.epoch_losses[3] < r.epoch_losses[0]);
}

TEST_CASE("confusion matrix") {
  const auto frames = synth_dataset(3, 2);
  const Predictor perfect = [](const Frame& f) { return *f.label; };
  const auto cm = evaluate(perfect, frames);
  CHECK(cm.trace() == cm.total());
  CHECK(cm.total() == 48);
  for (std::size_t i = 0; i < kGestureCount; ++i) CHECK(cm.row_sum(i) == 3);
  GestureCounts expected{};
  expected.fill(3);
  CHECK(diagonal_counts(cm) == expected);
  CHECK(diagonal_counts(ConfusionMatrix{}) == GestureCounts{});

  const Predictor constant = [](const Frame&) { return GestureClass::g5; };
  const auto cc = evaluate(constant, frames);
  for (std::size_t i = 0; i < kGestureCount; ++i)
    for (std::size_t j = 0; j < kGestureCount; ++j) CHECK((cc.counts[i][j] != 0) == (j == ordinal(GestureClass::g5)));

  const auto csv = cm.to_csv();
  CHECK(csv.rfind("g1,g2,g3,g4,g5,g6,g7,g8,g9,g10,ga,gb,gc,gd,ge,gf\n3,0,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);

  Frame unlabeled = frames[0];
  unlabeled.label.reset();
  CHECK(evaluate(perfect, std::vector<Frame>{unlabeled}).total() == 0);
}

TEST_CASE("model file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "trymove_test_model";
  std::filesystem::remove_all(dir);
  Hyper h;
  h.seed = 3;
  const auto m = make_default_model(h);
  save_model(m, dir / "m.bin");
  const auto back = load_model(dir / "m.bin");
  CHECK(serialize_model(back) == serialize_model(m));
  CHECK(back.hyper == h);
  const auto bytes = serialize_model(m);
  CHECK(bytes.rfind("trymove-model/1\n", 0) == 0);
  CHECK_THROWS_AS(deserialize_model(bytes.substr(0, bytes.size() - 4)), Error);
  CHECK_THROWS_AS(deserialize_model("nope"), Error);
  std::filesystem::remove_all(dir);
}
