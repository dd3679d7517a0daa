#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "trymove/error.hpp"

namespace trymove::nn {

struct Shape {
  int channels = 1;
  int height = 1;
  int width = 1;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  friend bool operator==(const Shape&, const Shape&) = default;
};

enum class LayerKind { conv, relu, maxpool, dense, softmax };

std::string_view to_string(LayerKind kind) noexcept;

// Valid (unpadded) stride-1 convolution, 2D max-pooling with floor division,
// fully-connected layers. Parameters are stored row-major:
//   conv weight [out][in][ky][kx], dense weight [out][in].
template <typename T>
struct Layer {
  LayerKind kind = LayerKind::relu;
  int out_channels = 0;  // conv filters or dense outputs
  int kernel = 0;        // conv kernel edge or pool window
  Shape in;
  Shape out;
  std::vector<T> weight;
  std::vector<T> bias;

  bool has_parameters() const noexcept { return kind == LayerKind::conv || kind == LayerKind::dense; }
};

struct LayerDesc {
  LayerKind kind;
  int out_channels = 0;
  int kernel = 0;
};

template <typename T>
class Network {
 public:
  Network() = default;

  // Resolves the shape chain; throws Error(shape) if it is inconsistent
  // (kernel larger than input, softmax not last, ...). Parameters start at 0.
  Network(Shape input, const std::vector<LayerDesc>& layers) : input_(input) {
    Shape cur = input;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const auto& d = layers[i];
      Layer<T> l;
      l.kind = d.kind;
      l.in = cur;
      switch (d.kind) {
        case LayerKind::conv:
          if (d.kernel <= 0 || d.out_channels <= 0 || d.kernel > cur.height || d.kernel > cur.width) {
            fail(ErrorKind::shape, "convolution does not fit its input");
          }
          l.out_channels = d.out_channels;
          l.kernel = d.kernel;
          l.out = {d.out_channels, cur.height - d.kernel + 1, cur.width - d.kernel + 1};
          l.weight.assign(static_cast<std::size_t>(d.out_channels) * cur.channels * d.kernel * d.kernel, T(0));
          l.bias.assign(static_cast<std::size_t>(d.out_channels), T(0));
          break;
        case LayerKind::relu:
          l.out = cur;
          break;
        case LayerKind::maxpool:
          if (d.kernel <= 0 || d.kernel > cur.height || d.kernel > cur.width) {
            fail(ErrorKind::shape, "pool window does not fit its input");
          }
          l.kernel = d.kernel;
          l.out = {cur.channels, cur.height / d.kernel, cur.width / d.kernel};
          break;
        case LayerKind::dense:
          if (d.out_channels <= 0) fail(ErrorKind::shape, "dense layer needs a positive output size");
          l.out_channels = d.out_channels;
          l.out = {d.out_channels, 1, 1};
          l.weight.assign(static_cast<std::size_t>(d.out_channels) * cur.size(), T(0));
          l.bias.assign(static_cast<std::size_t>(d.out_channels), T(0));
          break;
        case LayerKind::softmax:
          if (i + 1 != layers.size()) fail(ErrorKind::shape, "softmax must be the last layer");
          l.out = cur;
          break;
      }
      cur = l.out;
      layers_.push_back(std::move(l));
    }
    if (layers_.empty() || layers_.back().kind != LayerKind::softmax) {
      fail(ErrorKind::shape, "network must end with a softmax layer");
    }
  }

  const Shape& input_shape() const noexcept { return input_; }
  std::size_t output_size() const noexcept { return layers_.empty() ? 0 : layers_.back().out.size(); }
  const std::vector<Layer<T>>& layers() const noexcept { return layers_; }
  std::vector<Layer<T>>& layers() noexcept { return layers_; }

  std::vector<LayerDesc> descriptors() const {
    std::vector<LayerDesc> out;
    for (const auto& l : layers_) out.push_back({l.kind, l.out_channels, l.kernel});
    return out;
  }

  // Parameter blocks in a fixed order: per parameterised layer, weight then bias.
  std::vector<std::span<T>> parameters() {
    std::vector<std::span<T>> blocks;
    for (auto& l : layers_) {
      if (!l.has_parameters()) continue;
      blocks.emplace_back(l.weight);
      blocks.emplace_back(l.bias);
    }
    return blocks;
  }

  std::vector<std::span<const T>> parameters() const {
    std::vector<std::span<const T>> blocks;
    for (const auto& l : layers_) {
      if (!l.has_parameters()) continue;
      blocks.emplace_back(l.weight);
      blocks.emplace_back(l.bias);
    }
    return blocks;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& b : parameters()) n += b.size();
    return n;
  }

  // One zero-initialised buffer per parameter block.
  std::vector<std::vector<T>> zero_gradients() const {
    std::vector<std::vector<T>> g;
    for (const auto& b : parameters()) g.emplace_back(b.size(), T(0));
    return g;
  }

  template <typename U>
  Network<U> cast() const {
    Network<U> out(input_, descriptors());
    auto dst = out.parameters();
    auto src = parameters();
    for (std::size_t b = 0; b < src.size(); ++b) {
      std::transform(src[b].begin(), src[b].end(), dst[b].begin(), [](T v) { return static_cast<U>(v); });
    }
    return out;
  }

  // Pre-softmax scores.
  std::vector<T> logits(std::span<const T> input) const {
    Workspace ws;
    run_forward(input, ws);
    return ws.activations.back();
  }

  // Softmax evaluated in double precision.
  std::vector<double> probabilities(std::span<const T> input) const { return softmax(logits(input)); }

  static std::vector<double> softmax(std::span<const T> logits) {
    double peak = -std::numeric_limits<double>::infinity();
    for (const auto v : logits) peak = std::max(peak, static_cast<double>(v));
    std::vector<double> p(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) total += p[i] = std::exp(static_cast<double>(logits[i]) - peak);
    for (auto& v : p) v /= total;
    return p;
  }

  // Cross-entropy of one sample.
  double loss(std::span<const T> input, int label) const {
    const auto p = probabilities(input);
    return -std::log(std::max(p.at(static_cast<std::size_t>(label)), 1e-300));
  }

  // Cross-entropy loss of one sample; parameter gradients are added to grads.
  double accumulate_gradients(std::span<const T> input, int label, std::vector<std::vector<T>>& grads) const {
    Workspace ws;
    run_forward(input, ws);
    const auto p = softmax(ws.activations.back());
    const auto label_index = static_cast<std::size_t>(label);
    std::vector<T> delta(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) delta[i] = static_cast<T>(p[i] - (i == label_index ? 1.0 : 0.0));

    // activations[i] is the input of layer i; the softmax layer is skipped.
    std::size_t block = 2 * parameterised_count();
    for (std::size_t li = layers_.size() - 1; li-- > 0;) {
      const auto& l = layers_[li];
      const auto& x = ws.activations[li];
      std::vector<T> dx(x.size(), T(0));
      switch (l.kind) {
        case LayerKind::conv: {
          block -= 2;
          auto& gw = grads[block];
          auto& gb = grads[block + 1];
          const int k = l.kernel, ic = l.in.channels, ih = l.in.height, iw = l.in.width;
          const int oh = l.out.height, ow = l.out.width;
          for (int o = 0; o < l.out.channels; ++o) {
            for (int y = 0; y < oh; ++y) {
              for (int xo = 0; xo < ow; ++xo) {
                const T g = delta[static_cast<std::size_t>((o * oh + y) * ow + xo)];
                if (g == T(0)) continue;
                gb[static_cast<std::size_t>(o)] += g;
                for (int c = 0; c < ic; ++c) {
                  const std::size_t wbase = static_cast<std::size_t>(((o * ic + c) * k) * k);
                  for (int ky = 0; ky < k; ++ky) {
                    const std::size_t xrow = static_cast<std::size_t>((c * ih + y + ky) * iw + xo);
                    const std::size_t wrow = wbase + static_cast<std::size_t>(ky * k);
                    for (int kx = 0; kx < k; ++kx) {
                      gw[wrow + kx] += g * x[xrow + kx];
                      dx[xrow + kx] += g * l.weight[wrow + kx];
                    }
                  }
                }
              }
            }
          }
          break;
        }
        case LayerKind::relu:
          for (std::size_t i = 0; i < x.size(); ++i) dx[i] = x[i] > T(0) ? delta[i] : T(0);
          break;
        case LayerKind::maxpool: {
          const auto& arg = ws.pool_argmax[li];
          for (std::size_t i = 0; i < delta.size(); ++i) dx[arg[i]] += delta[i];
          break;
        }
        case LayerKind::dense: {
          block -= 2;
          auto& gw = grads[block];
          auto& gb = grads[block + 1];
          const std::size_t n_in = x.size();
          for (std::size_t o = 0; o < delta.size(); ++o) {
            const T g = delta[o];
            gb[o] += g;
            const std::size_t row = o * n_in;
            for (std::size_t i = 0; i < n_in; ++i) {
              gw[row + i] += g * x[i];
              dx[i] += g * l.weight[row + i];
            }
          }
          break;
        }
        case LayerKind::softmax:
          break;
      }
      delta = std::move(dx);
    }
    return -std::log(std::max(p[label_index], 1e-300));
  }

 private:
  struct Workspace {
    std::vector<std::vector<T>> activations;
    std::vector<std::vector<std::size_t>> pool_argmax;
  };

  std::size_t parameterised_count() const {
    return static_cast<std::size_t>(std::count_if(layers_.begin(), layers_.end(),
                                                  [](const Layer<T>& l) { return l.has_parameters(); }));
  }

  void run_forward(std::span<const T> input, Workspace& ws) const {
    if (input.size() != input_.size()) {
      fail(ErrorKind::shape, "network input has " + std::to_string(input.size()) + " values, expected " +
                                 std::to_string(input_.size()));
    }
    ws.activations.assign(1, std::vector<T>(input.begin(), input.end()));
    ws.pool_argmax.assign(layers_.size(), {});
    for (std::size_t li = 0; li + 1 < layers_.size(); ++li) {
      const auto& l = layers_[li];
      const auto& x = ws.activations.back();
      std::vector<T> y(l.out.size(), T(0));
      switch (l.kind) {
        case LayerKind::conv: {
          const int k = l.kernel, ic = l.in.channels, ih = l.in.height, iw = l.in.width;
          const int oh = l.out.height, ow = l.out.width;
          for (int o = 0; o < l.out.channels; ++o) {
            for (int yy = 0; yy < oh; ++yy) {
              for (int xo = 0; xo < ow; ++xo) {
                T acc = l.bias[static_cast<std::size_t>(o)];
                for (int c = 0; c < ic; ++c) {
                  const std::size_t wbase = static_cast<std::size_t>(((o * ic + c) * k) * k);
                  for (int ky = 0; ky < k; ++ky) {
                    const std::size_t xrow = static_cast<std::size_t>((c * ih + yy + ky) * iw + xo);
                    const std::size_t wrow = wbase + static_cast<std::size_t>(ky * k);
                    for (int kx = 0; kx < k; ++kx) acc += l.weight[wrow + kx] * x[xrow + kx];
                  }
                }
                y[static_cast<std::size_t>((o * oh + yy) * ow + xo)] = acc;
              }
            }
          }
          break;
        }
        case LayerKind::relu:
          for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
          break;
        case LayerKind::maxpool: {
          const int k = l.kernel, ih = l.in.height, iw = l.in.width;
          const int oh = l.out.height, ow = l.out.width;
          auto& arg = ws.pool_argmax[li];
          arg.assign(y.size(), 0);
          for (int c = 0; c < l.in.channels; ++c) {
            for (int yy = 0; yy < oh; ++yy) {
              for (int xo = 0; xo < ow; ++xo) {
                std::size_t best = static_cast<std::size_t>((c * ih + yy * k) * iw + xo * k);
                for (int dy = 0; dy < k; ++dy) {
                  for (int dx = 0; dx < k; ++dx) {
                    const std::size_t idx = static_cast<std::size_t>((c * ih + yy * k + dy) * iw + xo * k + dx);
                    if (x[idx] > x[best]) best = idx;
                  }
                }
                const std::size_t out_idx = static_cast<std::size_t>((c * oh + yy) * ow + xo);
                y[out_idx] = x[best];
                arg[out_idx] = best;
              }
            }
          }
          break;
        }
        case LayerKind::dense: {
          const std::size_t n_in = x.size();
          for (std::size_t o = 0; o < y.size(); ++o) {
            T acc = l.bias[o];
            const std::size_t row = o * n_in;
            for (std::size_t i = 0; i < n_in; ++i) acc += l.weight[row + i] * x[i];
            y[o] = acc;
          }
          break;
        }
        case LayerKind::softmax:
          break;
      }
      ws.activations.push_back(std::move(y));
    }
  }

  Shape input_;
  std::vector<Layer<T>> layers_;
};

}  // namespace trymove::nn
