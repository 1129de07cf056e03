// Copyright 2026 The oodkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OODKIT__AUTOENCODER_HPP_
#define OODKIT__AUTOENCODER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oodkit/binary_io.hpp"
#include "oodkit/error.hpp"
#include "oodkit/linalg.hpp"

namespace oodkit
{

enum class Activation : std::uint8_t { relu = 0, sigmoid = 1, identity = 2 };

inline std::string_view to_string(Activation a)
{
  switch (a) {
    case Activation::relu:
      return "relu";
    case Activation::sigmoid:
      return "sigmoid";
    case Activation::identity:
      return "identity";
  }
  return "?";
}

inline Activation parse_activation(std::string_view s)
{
  if (s == "relu") return Activation::relu;
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "identity") return Activation::identity;
  throw ParameterError("unknown activation '" + std::string(s) + "'");
}

struct LayerSpec
{
  std::size_t width = 0;
  Activation activation = Activation::relu;

  friend bool operator==(const LayerSpec &, const LayerSpec &) = default;
};

/// One fully-connected layer: out = act(in * weights + bias).
/// `weights` is fan_in x fan_out.
struct DenseLayer
{
  Matrix weights;
  RealVector bias;
  Activation activation = Activation::identity;

  friend bool operator==(const DenseLayer &, const DenseLayer &) = default;
};

struct AutoencoderModel
{
  std::size_t input_dim = 0;
  std::vector<DenseLayer> layers;
  std::size_t latent_index = 0;  // index into `layers` of the bottleneck

  std::vector<LayerSpec> specs() const
  {
    std::vector<LayerSpec> out;
    for (const auto & l : layers) {
      out.push_back({l.weights.cols(), l.activation});
    }
    return out;
  }

  std::size_t latent_width() const { return layers.at(latent_index).weights.cols(); }

  std::size_t parameter_count() const
  {
    std::size_t n = 0;
    for (const auto & l : layers) {
      n += l.weights.data().size() + l.bias.size();
    }
    return n;
  }

  /// Checks that weight shapes chain from input_dim back to input_dim.
  void validate() const
  {
    if (layers.empty()) {
      throw DimensionError("autoencoder has no layers");
    }
    std::size_t fan_in = input_dim;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const auto & l = layers[i];
      if (l.weights.rows() != fan_in || l.bias.size() != l.weights.cols()) {
        throw DimensionError(
          "layer " + std::to_string(i) + " weights " +
          detail::shape_str(l.weights.rows(), l.weights.cols()) + " with bias " +
          std::to_string(l.bias.size()) + " do not chain from width " + std::to_string(fan_in));
      }
      if (!l.weights.all_finite() ||
          !std::all_of(l.bias.begin(), l.bias.end(), [](double v) { return std::isfinite(v); })) {
        throw NumericalError("layer " + std::to_string(i) + " has non-finite parameters");
      }
      fan_in = l.weights.cols();
    }
    if (fan_in != input_dim) {
      throw DimensionError(
        "last layer width " + std::to_string(fan_in) + " does not reproduce input_dim " +
        std::to_string(input_dim));
    }
    if (latent_index >= layers.size()) {
      throw DimensionError("latent_index out of range");
    }
  }

  friend bool operator==(const AutoencoderModel &, const AutoencoderModel &) = default;
};

struct ForwardResult
{
  RealVector reconstruction;
  std::vector<RealVector> activations;  // post-activation values, one per layer
};

enum class Optimizer : std::uint8_t { sgd = 0, adam = 1 };

struct TrainConfig
{
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  Optimizer optimizer = Optimizer::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

struct TrainResult
{
  AutoencoderModel model;
  std::vector<double> loss_history;  // epoch-mean reconstruction MSE
};

/// Per-parameter gradients, shaped like the model's layers.
struct Gradients
{
  std::vector<Matrix> weights;
  std::vector<RealVector> biases;
};

namespace detail
{

inline void apply_activation(Activation act, std::span<double> v)
{
  switch (act) {
    case Activation::relu:
      for (double & x : v) x = x > 0.0 ? x : 0.0;
      break;
    case Activation::sigmoid:
      for (double & x : v) x = 1.0 / (1.0 + std::exp(-x));
      break;
    case Activation::identity:
      break;
  }
}

/// Derivative expressed through the post-activation value.
inline double activation_derivative(Activation act, double post)
{
  switch (act) {
    case Activation::relu:
      return post > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid:
      return post * (1.0 - post);
    case Activation::identity:
      return 1.0;
  }
  return 1.0;
}

/// Post-activation outputs of layers [0, last], computed row by row.
inline std::vector<Matrix> forward_batch(
  const AutoencoderModel & model, const Matrix & x, std::size_t last)
{
  std::vector<Matrix> acts;
  acts.reserve(last + 1);
  const Matrix * in = &x;
  for (std::size_t li = 0; li <= last; ++li) {
    const auto & layer = model.layers[li];
    Matrix out = matmul(*in, layer.weights);
    for (std::size_t r = 0; r < out.rows(); ++r) {
      auto row = out.row(r);
      for (std::size_t j = 0; j < row.size(); ++j) {
        row[j] += layer.bias[j];
      }
      apply_activation(layer.activation, row);
    }
    acts.push_back(std::move(out));
    in = &acts.back();
  }
  return acts;
}

inline void check_input(const AutoencoderModel & model, std::size_t cols)
{
  if (cols != model.input_dim) {
    throw DimensionError(
      "input has " + std::to_string(cols) + " features, model expects " +
      std::to_string(model.input_dim));
  }
}

}  // namespace detail

/// Default five-layer shape (input, hidden, latent, hidden, output). Inputs
/// of 256 features or more use 256/64 hidden/latent widths; narrower inputs
/// use twice the input width for the hidden layers and half of it for the
/// latent layer. Hidden layers are relu, the latent layer is linear and the
/// output is sigmoid (inputs are expected in [0, 1]).
inline std::vector<LayerSpec> default_layers(std::size_t input_dim)
{
  std::size_t hidden = 0;
  std::size_t latent = 0;
  if (input_dim >= 256) {
    hidden = 256;
    latent = 64;
  } else {
    hidden = std::max<std::size_t>(2, input_dim * 2);
    latent = std::max<std::size_t>(1, input_dim / 2);
  }
  return {
    {hidden, Activation::relu},
    {latent, Activation::identity},
    {hidden, Activation::relu},
    {input_dim, Activation::sigmoid}};
}

/// Parses "width:activation,..." (e.g. "256:relu,64:identity,256:relu,784:sigmoid").
inline std::vector<LayerSpec> parse_layers(std::string_view text)
{
  std::vector<LayerSpec> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
    const auto colon = item.find(':');
    const auto width_str = item.substr(0, colon);
    std::size_t width = 0;
    for (char c : width_str) {
      if (c < '0' || c > '9') throw ParameterError("bad layer width in '" + std::string(item) + "'");
      width = width * 10 + static_cast<std::size_t>(c - '0');
    }
    if (width_str.empty() || width == 0) {
      throw ParameterError("bad layer width in '" + std::string(item) + "'");
    }
    const auto act = colon == std::string_view::npos ? Activation::relu
                                                     : parse_activation(item.substr(colon + 1));
    out.push_back({width, act});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string format_layers(std::span<const LayerSpec> layers)
{
  std::string out;
  for (const auto & l : layers) {
    if (!out.empty()) out += ',';
    out += std::to_string(l.width) + ":" + std::string(to_string(l.activation));
  }
  return out;
}

/// Builds a symmetric autoencoder. `layers` excludes the input and ends with
/// the reconstruction layer (width == input_dim); the bottleneck is the
/// middle entry and must be narrower than the input.
inline AutoencoderModel init_model(
  std::size_t input_dim, const std::vector<LayerSpec> & layers, std::uint64_t seed)
{
  if (input_dim == 0) {
    throw ParameterError("input_dim must be >= 1");
  }
  const std::size_t n = layers.size();
  if (n < 2 || n % 2 != 0) {
    throw ParameterError(
      "layer list must have an even number (>= 2) of entries around the bottleneck, got " +
      std::to_string(n));
  }
  for (const auto & l : layers) {
    if (l.width == 0) {
      throw ParameterError("layer width must be >= 1");
    }
  }
  if (layers.back().width != input_dim) {
    throw ParameterError(
      "output layer width " + std::to_string(layers.back().width) + " must equal input_dim " +
      std::to_string(input_dim));
  }
  const std::size_t latent = n / 2 - 1;
  for (std::size_t i = 0; i < latent; ++i) {
    if (layers[i].width != layers[n - 2 - i].width) {
      throw ParameterError("encoder and decoder widths are not symmetric");
    }
  }
  if (layers[latent].width >= input_dim) {
    throw ParameterError(
      "bottleneck width " + std::to_string(layers[latent].width) +
      " must be smaller than input_dim " + std::to_string(input_dim));
  }

  AutoencoderModel model;
  model.input_dim = input_dim;
  model.latent_index = latent;
  std::mt19937_64 rng(seed);
  std::size_t fan_in = input_dim;
  for (const auto & spec : layers) {
    const double scale = std::sqrt(6.0 / static_cast<double>(fan_in + spec.width));
    std::uniform_real_distribution<double> dist(-scale, scale);
    DenseLayer layer{Matrix(fan_in, spec.width), RealVector(spec.width, 0.0), spec.activation};
    for (double & w : layer.weights.data()) {
      w = dist(rng);
    }
    model.layers.push_back(std::move(layer));
    fan_in = spec.width;
  }
  return model;
}

inline ForwardResult forward(const AutoencoderModel & model, std::span<const double> x)
{
  model.validate();
  detail::check_input(model, x.size());
  const Matrix in(1, x.size(), RealVector(x.begin(), x.end()));
  auto acts = detail::forward_batch(model, in, model.layers.size() - 1);
  ForwardResult out;
  for (const auto & a : acts) {
    out.activations.emplace_back(a.data().begin(), a.data().end());
  }
  out.reconstruction = out.activations.back();
  return out;
}

/// Full-network reconstruction of every row.
inline Matrix reconstruct(const AutoencoderModel & model, const Matrix & data)
{
  model.validate();
  detail::check_input(model, data.cols());
  return std::move(detail::forward_batch(model, data, model.layers.size() - 1).back());
}

/// Mean of (reconstruction - x)^2 over all rows and features, with gradients.
/// `row_sq_error`, when given, receives each row's summed squared error.
inline std::pair<double, Gradients> loss_and_gradient(
  const AutoencoderModel & model, const Matrix & batch, RealVector * row_sq_error = nullptr)
{
  detail::check_input(model, batch.cols());
  const std::size_t nl = model.layers.size();
  const auto acts = detail::forward_batch(model, batch, nl - 1);
  const auto & recon = acts.back();
  const double denom = static_cast<double>(batch.rows() * batch.cols());

  double loss = 0.0;
  if (row_sq_error) row_sq_error->assign(recon.rows(), 0.0);
  Matrix delta(recon.rows(), recon.cols());
  for (std::size_t i = 0; i < recon.rows(); ++i) {
    double row_loss = 0.0;
    for (std::size_t j = 0; j < recon.cols(); ++j) {
      const double diff = recon(i, j) - batch(i, j);
      row_loss += diff * diff;
      delta(i, j) = (2.0 * diff / denom) *
                    detail::activation_derivative(model.layers[nl - 1].activation, recon(i, j));
    }
    loss += row_loss;
    if (row_sq_error) (*row_sq_error)[i] = row_loss;
  }
  loss /= denom;

  Gradients g;
  g.weights.resize(nl);
  g.biases.resize(nl);
  for (std::size_t li = nl; li-- > 0;) {
    const Matrix & input = li == 0 ? batch : acts[li - 1];
    g.weights[li] = matmul_at_b(input, delta);
    RealVector gb(delta.cols(), 0.0);
    for (std::size_t r = 0; r < delta.rows(); ++r) {
      const auto dr = delta.row(r);
      for (std::size_t j = 0; j < gb.size(); ++j) {
        gb[j] += dr[j];
      }
    }
    g.biases[li] = std::move(gb);
    if (li > 0) {
      Matrix prev = matmul_a_bt(delta, model.layers[li].weights);
      const auto act = model.layers[li - 1].activation;
      for (std::size_t r = 0; r < prev.rows(); ++r) {
        for (std::size_t j = 0; j < prev.cols(); ++j) {
          prev(r, j) *= detail::activation_derivative(act, input(r, j));
        }
      }
      delta = std::move(prev);
    }
  }
  return {loss, std::move(g)};
}

/// Parameters in persistence order: per layer, weights row-major then bias.
inline RealVector flatten_parameters(const AutoencoderModel & model)
{
  RealVector out;
  out.reserve(model.parameter_count());
  for (const auto & l : model.layers) {
    out.insert(out.end(), l.weights.data().begin(), l.weights.data().end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

inline void assign_parameters(AutoencoderModel & model, std::span<const double> flat)
{
  if (flat.size() != model.parameter_count()) {
    throw DimensionError("parameter vector length does not match model");
  }
  std::size_t pos = 0;
  for (auto & l : model.layers) {
    for (double & w : l.weights.data()) w = flat[pos++];
    for (double & b : l.bias) b = flat[pos++];
  }
}

inline RealVector flatten_gradients(const Gradients & g)
{
  RealVector out;
  for (std::size_t i = 0; i < g.weights.size(); ++i) {
    out.insert(out.end(), g.weights[i].data().begin(), g.weights[i].data().end());
    out.insert(out.end(), g.biases[i].begin(), g.biases[i].end());
  }
  return out;
}

/// Mini-batch gradient descent on reconstruction MSE. Deterministic given
/// cfg.seed: the batch order comes from a seeded shuffle and every reduction
/// runs in a fixed order.
inline TrainResult train(AutoencoderModel model, const Matrix & data, const TrainConfig & cfg)
{
  model.validate();
  detail::check_input(model, data.cols());
  if (cfg.epochs == 0) throw ParameterError("epochs must be >= 1");
  if (cfg.batch_size == 0) throw ParameterError("batch_size must be >= 1");
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw ParameterError("learning_rate must be finite and >= 0");
  }

  const std::size_t n = data.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);

  auto params = flatten_parameters(model);
  RealVector m1(params.size(), 0.0);
  RealVector m2(params.size(), 0.0);
  std::uint64_t step = 0;

  RealVector row_err(n, 0.0);
  RealVector batch_err;
  TrainResult result;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) {
      std::shuffle(order.begin(), order.end(), rng);
    }
    for (std::size_t start = 0, batch_idx = 0; start < n; start += cfg.batch_size, ++batch_idx) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      const Matrix batch =
        data.select_rows(std::span<const std::size_t>(order.data() + start, end - start));
      auto [loss, grads] = loss_and_gradient(model, batch, &batch_err);
      if (!std::isfinite(loss)) {
        throw NumericalError(
          "non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
          std::to_string(batch_idx));
      }
      for (std::size_t i = start; i < end; ++i) {
        row_err[order[i]] = batch_err[i - start];
      }

      const auto g = flatten_gradients(grads);
      ++step;
      if (cfg.optimizer == Optimizer::sgd) {
        for (std::size_t i = 0; i < params.size(); ++i) {
          params[i] -= cfg.learning_rate * g[i];
        }
      } else {
        const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
        for (std::size_t i = 0; i < params.size(); ++i) {
          m1[i] = cfg.beta1 * m1[i] + (1.0 - cfg.beta1) * g[i];
          m2[i] = cfg.beta2 * m2[i] + (1.0 - cfg.beta2) * g[i] * g[i];
          const double mhat = m1[i] / c1;
          const double vhat = m2[i] / c2;
          params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
        }
      }
      assign_parameters(model, params);
    }
    // Summed in row order so the value does not depend on the batch order.
    double epoch_loss = 0.0;
    for (double e : row_err) epoch_loss += e;
    result.loss_history.push_back(epoch_loss / static_cast<double>(n * data.cols()));
  }
  result.model = std::move(model);
  return result;
}

/// Latent-layer activations, one row per input row.
inline Matrix encode(const AutoencoderModel & model, const Matrix & data)
{
  model.validate();
  detail::check_input(model, data.cols());
  return std::move(detail::forward_batch(model, data, model.latent_index).back());
}

/// Indices of the `m` columns with highest mean absolute activation,
/// returned in ascending index order. Ties prefer the lower index.
inline std::vector<std::size_t> select_active_neurons(const Matrix & latent, std::size_t m)
{
  if (m < 1 || m > latent.cols()) {
    throw ParameterError(
      "select_active_neurons: m=" + std::to_string(m) + " must lie in [1, " +
      std::to_string(latent.cols()) + "]");
  }
  RealVector activity(latent.cols(), 0.0);
  for (std::size_t r = 0; r < latent.rows(); ++r) {
    const auto row = latent.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      activity[j] += std::abs(row[j]);
    }
  }
  for (double & a : activity) {
    a /= static_cast<double>(latent.rows());
  }
  std::vector<std::size_t> idx(latent.cols());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return activity[a] > activity[b];
  });
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

/// Activation traces over an ordered subset of latent neurons.
inline Matrix extract_traces(
  const AutoencoderModel & model, const Matrix & data, std::span<const std::size_t> subset)
{
  if (subset.empty()) {
    throw ParameterError("extract_traces: neuron subset is empty");
  }
  for (auto s : subset) {
    if (s >= model.latent_width()) {
      throw ParameterError(
        "extract_traces: neuron index " + std::to_string(s) + " out of range for latent width " +
        std::to_string(model.latent_width()));
    }
  }
  const Matrix latent = encode(model, data);
  Matrix out(latent.rows(), subset.size());
  for (std::size_t r = 0; r < latent.rows(); ++r) {
    for (std::size_t j = 0; j < subset.size(); ++j) {
      out(r, j) = latent(r, subset[j]);
    }
  }
  return out;
}

// ---- persistence ----------------------------------------------------------
//
// "OODKIT-AE" | u32 version | u64 input_dim | u64 latent_index | u64 n_layers
// | n_layers x (u64 width, u8 activation) | str metadata
// | parameters as f64, per layer weights (row-major, fan_in x fan_out) then bias
// All integers and reals little-endian.

inline constexpr std::string_view kModelMagic = "OODKIT-AE";
inline constexpr std::uint32_t kModelVersion = 1;

inline std::string serialize_model(const AutoencoderModel & model, std::string_view metadata = {})
{
  model.validate();
  ByteWriter w;
  w.raw(kModelMagic);
  w.u32(kModelVersion);
  w.u64(model.input_dim);
  w.u64(model.latent_index);
  w.u64(model.layers.size());
  for (const auto & l : model.layers) {
    w.u64(l.weights.cols());
    w.u8(static_cast<std::uint8_t>(l.activation));
  }
  w.str(metadata);
  for (const auto & l : model.layers) {
    w.f64s(l.weights.data());
    w.f64s(l.bias);
  }
  return w.bytes();
}

struct LoadedModel
{
  AutoencoderModel model;
  std::string metadata;
};

inline LoadedModel deserialize_model(std::string_view bytes)
{
  ByteReader r(bytes);
  if (r.raw(kModelMagic.size()) != kModelMagic) {
    throw DataError("not an autoencoder model file (bad magic)");
  }
  const auto version = r.u32();
  if (version != kModelVersion) {
    throw DataError("unsupported autoencoder model version " + std::to_string(version));
  }
  LoadedModel out;
  auto & m = out.model;
  m.input_dim = r.u64();
  m.latent_index = r.u64();
  const auto n_layers = r.count(9);
  std::vector<LayerSpec> specs;
  for (std::size_t i = 0; i < n_layers; ++i) {
    const auto width = r.u64();
    const auto act = r.u8();
    if (act > static_cast<std::uint8_t>(Activation::identity)) {
      r.fail("unknown activation tag " + std::to_string(act));
    }
    if (width == 0) {
      r.fail("zero layer width");
    }
    specs.push_back({static_cast<std::size_t>(width), static_cast<Activation>(act)});
  }
  out.metadata = r.str();
  std::size_t fan_in = m.input_dim;
  for (const auto & s : specs) {
    if (fan_in == 0 || s.width > (bytes.size() / 8) / fan_in) {
      r.fail("layer shape exceeds file size");
    }
    DenseLayer layer{Matrix(fan_in, s.width), RealVector(s.width), s.activation};
    for (double & w : layer.weights.data()) w = r.f64();
    for (double & b : layer.bias) b = r.f64();
    m.layers.push_back(std::move(layer));
    fan_in = s.width;
  }
  if (!r.at_end()) {
    r.fail("trailing bytes after parameters");
  }
  m.validate();
  return out;
}

inline void save_model(
  const AutoencoderModel & model, const std::filesystem::path & path,
  std::string_view metadata = {})
{
  write_file_atomic(path, serialize_model(model, metadata));
}

inline LoadedModel load_model(const std::filesystem::path & path)
{
  return deserialize_model(read_file(path));
}

}  // namespace oodkit

#endif  // OODKIT__AUTOENCODER_HPP_
