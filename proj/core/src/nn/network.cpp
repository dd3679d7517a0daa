#include <algorithm>
#include <cmath>
#include <numeric>

#include "trymove/nn/model.hpp"
#include "trymove/rng.hpp"

namespace trymove::nn {

std::string_view to_string(LayerKind kind) noexcept {
  switch (kind) {
    case LayerKind::conv: return "conv";
    case LayerKind::relu: return "relu";
    case LayerKind::maxpool: return "maxpool";
    case LayerKind::dense: return "dense";
    case LayerKind::softmax: return "softmax";
  }
  return "relu";
}

std::vector<LayerDesc> default_layers() {
  return {
      {LayerKind::conv, 8, 3},   {LayerKind::relu},     {LayerKind::maxpool, 0, 2},
      {LayerKind::conv, 16, 3},  {LayerKind::relu},     {LayerKind::maxpool, 0, 2},
      {LayerKind::dense, 64, 0}, {LayerKind::relu},     {LayerKind::dense, 16, 0},
      {LayerKind::softmax},
  };
}

template <typename T>
void initialize(Network<T>& network, std::uint64_t seed) {
  Rng rng(seed);
  for (auto& layer : network.layers()) {
    if (!layer.has_parameters()) continue;
    const std::size_t fan_in = layer.weight.size() / static_cast<std::size_t>(layer.out_channels);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (auto& w : layer.weight) w = static_cast<T>(rng.uniform(-limit, limit));
    std::fill(layer.bias.begin(), layer.bias.end(), T(0));
  }
}

template void initialize<float>(Network<float>&, std::uint64_t);
template void initialize<double>(Network<double>&, std::uint64_t);

Model make_default_model(const Hyper& hyper) {
  Model m{Network<float>({1, kFrameSize, kFrameSize}, default_layers()), hyper};
  initialize(m.network, hyper.seed);
  return m;
}

std::vector<float> frame_input(const Frame& frame) {
  if (frame.pixels.size() != kFramePixels) fail(ErrorKind::shape, "frames must be 32x32");
  return frame.pixels;
}

std::vector<std::vector<double>> forward(const Model& model, std::span<const Frame> frames) {
  std::vector<std::vector<double>> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(model.network.probabilities(frame_input(f)));
  return out;
}

GestureClass argmax_class(std::span<const double> probabilities) {
  if (probabilities.size() != kGestureCount) fail(ErrorKind::shape, "expected 16 class probabilities");
  std::size_t best = 0;
  for (std::size_t i = 1; i < probabilities.size(); ++i) {
    if (probabilities[i] > probabilities[best]) best = i;
  }
  return from_ordinal(best);
}

TrainResult train(const Model& model, std::span<const Frame> dataset, const Hyper& hyper) {
  if (dataset.empty()) fail(ErrorKind::no_data, "training set is empty");
  if (hyper.batch_size <= 0 || hyper.epochs < 0) fail(ErrorKind::validation, "batch size must be positive");
  for (const auto& f : dataset) {
    if (!f.label) fail(ErrorKind::validation, "every training frame needs a label");
    if (f.pixels.size() != kFramePixels) fail(ErrorKind::shape, "frames must be 32x32");
  }

  std::vector<std::size_t> canonical(dataset.size());
  std::iota(canonical.begin(), canonical.end(), 0);
  std::stable_sort(canonical.begin(), canonical.end(), [&](std::size_t a, std::size_t b) {
    const auto& fa = dataset[a];
    const auto& fb = dataset[b];
    if (*fa.label != *fb.label) return *fa.label < *fb.label;
    return fa.pixels < fb.pixels;
  });

  TrainResult result{model, {}};
  result.model.hyper = hyper;
  auto& net = result.model.network;
  auto params = net.parameters();

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::vector<std::size_t> order = canonical;
    Rng rng(derive_seed(hyper.seed, static_cast<std::uint64_t>(epoch) + 1));
    rng.shuffle(order);

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(hyper.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(hyper.batch_size));
      auto grads = net.zero_gradients();
      for (std::size_t i = start; i < end; ++i) {
        const auto& f = dataset[order[i]];
        epoch_loss += net.accumulate_gradients(f.pixels, static_cast<int>(ordinal(*f.label)), grads);
      }
      const float scale = static_cast<float>(hyper.learning_rate / static_cast<double>(end - start));
      for (std::size_t b = 0; b < params.size(); ++b) {
        for (std::size_t j = 0; j < params[b].size(); ++j) params[b][j] -= scale * grads[b][j];
      }
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(order.size()));
  }
  return result;
}

double gradient_check(const Network<double>& network, std::span<const double> input, int label,
                      std::size_t sample_params, std::uint64_t seed, double step) {
  Network<double> net = network;
  auto grads = net.zero_gradients();
  net.accumulate_gradients(input, label, grads);

  auto params = net.parameters();
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t b = 0; b < params.size(); ++b) {
    for (std::size_t j = 0; j < params[b].size(); ++j) slots.emplace_back(b, j);
  }
  if (slots.size() > sample_params) {
    Rng rng(seed);
    for (std::size_t i = 0; i < sample_params; ++i) {
      std::swap(slots[i], slots[i + rng.below(slots.size() - i)]);
    }
    slots.resize(sample_params);
  }

  double worst = 0.0;
  for (const auto& [b, j] : slots) {
    double& p = params[b][j];
    const double original = p;
    p = original + step;
    const double up = net.loss(input, label);
    p = original - step;
    const double down = net.loss(input, label);
    p = original;
    const double numeric = (up - down) / (2.0 * step);
    const double analytic = grads[b][j];
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  }
  return worst;
}

Predictor predictor_for(const Model& model) {
  return [&model](const Frame& f) { return argmax_class(model.network.probabilities(frame_input(f))); };
}

ConfusionMatrix evaluate(const Predictor& predictor, std::span<const Frame> frames) {
  ConfusionMatrix cm;
  for (const auto& f : frames) {
    if (!f.label) continue;
    cm.add(*f.label, predictor(f));
  }
  return cm;
}

ConfusionMatrix evaluate(const Model& model, std::span<const Frame> frames) {
  return evaluate(predictor_for(model), frames);
}

}  // namespace trymove::nn
