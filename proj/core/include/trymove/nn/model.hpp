#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "trymove/nn/confusion.hpp"
#include "trymove/nn/frames.hpp"
#include "trymove/nn/network.hpp"

namespace trymove::nn {

inline constexpr const char* kModelSchema = "trymove-model/1";

struct Hyper {
  double learning_rate = 0.05;
  int batch_size = 32;
  int epochs = 10;
  std::uint64_t seed = 1;

  friend bool operator==(const Hyper&, const Hyper&) = default;
};

struct Model {
  Network<float> network;
  Hyper hyper;
};

// conv3x3x8 - relu - pool2 - conv3x3x16 - relu - pool2 - dense576x64 - relu
// - dense64x16 - softmax over a 1x32x32 input.
std::vector<LayerDesc> default_layers();

// Weights ~ U(-sqrt(6/fan_in), sqrt(6/fan_in)) from the seeded generator,
// biases zero.
template <typename T>
void initialize(Network<T>& network, std::uint64_t seed);

Model make_default_model(const Hyper& hyper = {});

std::vector<float> frame_input(const Frame& frame);

// Class probabilities per frame; each vector sums to 1.
std::vector<std::vector<double>> forward(const Model& model, std::span<const Frame> frames);

// Highest probability wins, ties go to the lowest ordinal.
GestureClass argmax_class(std::span<const double> probabilities);

struct TrainResult {
  Model model;
  std::vector<double> epoch_losses;  // mean cross-entropy per epoch
};

// Mini-batch SGD on softmax cross-entropy. The dataset is first put in a
// canonical order (label, then pixels) so results depend only on its
// contents and the seed, never on the order it was passed in.
TrainResult train(const Model& model, std::span<const Frame> dataset, const Hyper& hyper);

// Max relative error between analytic and central-difference gradients of the
// sample's loss over up to sample_params randomly chosen parameters (all of
// them when the network has fewer).
double gradient_check(const Network<double>& network, std::span<const double> input, int label,
                      std::size_t sample_params = 200, std::uint64_t seed = 7, double step = 1e-5);

using Predictor = std::function<GestureClass(const Frame&)>;

Predictor predictor_for(const Model& model);

// Frames without labels are skipped.
ConfusionMatrix evaluate(const Predictor& predictor, std::span<const Frame> frames);
ConfusionMatrix evaluate(const Model& model, std::span<const Frame> frames);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

std::string serialize_model(const Model& model);
Model deserialize_model(const std::string& bytes);

}  // namespace trymove::nn
