// Copyright 2026 The DFA Workbench Authors
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

#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfa/ciphers/cipher.hpp"

namespace dfa::faultlab {
struct DeltaSet;
}

namespace dfa::neural {

enum class Activation : std::uint8_t { relu = 0, elu = 1 };
std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

/// Dense -> [batch norm] -> activation -> [dropout].
struct HiddenLayer {
  std::size_t width = 0;
  Activation activation = Activation::relu;
  float dropout = 0.0F;
  float l2 = 0.0F;  // penalty l2 * sum(W^2) on the dense kernel
  bool batch_norm = false;

  bool operator==(const HiddenLayer&) const = default;
};

struct MlpSpec {
  std::size_t input_width = 0;
  std::vector<HiddenLayer> hidden;
  std::size_t output_classes = 0;  // softmax output

  void validate() const;
  bool operator==(const MlpSpec&) const = default;

  /// Per-cipher architectures (ACORN 5 x ELU, MORUS 3 x ReLU, ATOM 3 x ELU).
  static MlpSpec preset(ciphers::CipherId id);
};

/// Batch-norm constants.
inline constexpr double kBatchNormMomentum = 0.99;
inline constexpr double kBatchNormEpsilon = 1e-3;

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

/// A named parameter tensor with its gradient (used by the optimizer and by
/// gradient checks).
template <class T>
struct ParamRef {
  std::string name;
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>* value;
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>* grad;
};

/// Multilayer perceptron. Activations are column-major with one sample per
/// column. `float` is the production precision; `double` exists for
/// finite-difference checks of the same code.
template <class T>
class Mlp {
 public:
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

  Mlp() = default;
  /// Glorot-uniform kernels, zero biases, unit BN scale; deterministic in seed.
  static Mlp build(const MlpSpec& spec, std::uint64_t seed);

  const MlpSpec& spec() const { return spec_; }
  std::size_t parameter_count() const;

  /// Pre-softmax outputs in inference mode (running BN statistics, no dropout).
  Matrix logits(const Matrix& x) const;
  /// Softmax of `logits`.
  Matrix probabilities(const Matrix& x) const;
  /// Argmax class per column; ties go to the lowest index.
  std::vector<std::size_t> predict(const Matrix& x) const;
  std::size_t predict(std::span<const std::uint8_t> delta) const;

  /// Training-mode forward and backward pass on one batch. Returns mean
  /// cross-entropy plus the L2 penalty and fills every gradient. Dropout masks
  /// come from `rng`; BN uses batch statistics and updates running ones only
  /// when `update_running` is set. `predicted` receives the training-mode
  /// argmax per sample when given.
  T loss_and_gradients(const Matrix& x, std::span<const std::int32_t> labels, std::mt19937_64& rng,
                       bool update_running = true, std::vector<std::size_t>* predicted = nullptr);

  void adam_step(const AdamConfig& cfg);

  std::vector<ParamRef<T>> parameters();

  /// Running BN statistics of hidden layer `i` (empty without batch norm).
  const Vector& running_mean(std::size_t i) const { return layers_.at(i).running_mean; }
  const Vector& running_var(std::size_t i) const { return layers_.at(i).running_var; }

  /// Binary model file, layout in docs/model_format.md.
  void save(const std::filesystem::path& path) const;
  static Mlp load(const std::filesystem::path& path);
  /// Throws DataError unless the stored spec has the given input width.
  static Mlp load_expecting(const std::filesystem::path& path, std::size_t input_width);

  template <class U>
  Mlp<U> cast() const;

 private:
  template <class U>
  friend class Mlp;

  struct Layer {
    Matrix w, b;            // out x in, out x 1
    Matrix gamma, beta;     // out x 1 (batch norm only)
    Vector running_mean, running_var;
    Matrix dw, db, dgamma, dbeta;
    Matrix mw, vw, mb, vb, mg, vg, mbeta, vbeta;  // Adam moments

    // Cached for backward.
    Matrix input, z, xhat, pre_act, act, mask;
    Vector batch_inv_std;
  };

  MlpSpec spec_;
  std::vector<Layer> layers_;  // hidden layers then the output layer
  std::uint64_t step_ = 0;
};

using MlpModel = Mlp<float>;

extern template class Mlp<float>;
extern template class Mlp<double>;

/// Converts rows of a DeltaSet into a column-per-sample matrix.
template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> to_matrix(const faultlab::DeltaSet& set, std::size_t first,
                                                           std::size_t count);

struct TrainConfig {
  std::size_t max_epochs = 50;
  std::size_t patience = 7;  // epochs without validation-accuracy gain
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;

  void validate() const;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;
  double best_val_accuracy = 0.0;
  bool stopped_early = false;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// Adam on shuffled mini-batches with early stopping on validation accuracy;
/// the model ends with the best-epoch weights.
TrainHistory train(MlpModel& model, const faultlab::DeltaSet& train_set, const faultlab::DeltaSet& val_set,
                   const TrainConfig& cfg, const EpochCallback& on_epoch = {});

/// Accuracy and mean cross-entropy in inference mode.
struct EvalStats {
  double loss = 0.0;
  double accuracy = 0.0;
};
EvalStats evaluate_loss(const MlpModel& model, const faultlab::DeltaSet& set);

std::vector<std::size_t> predict_all(const MlpModel& model, const faultlab::DeltaSet& set);

/// Central-difference check (4-point stencil) of `loss_and_gradients` on a
/// sampled fraction of every parameter tensor. Relative error uses
/// max(|analytic|, |numeric|, 1e-6) as denominator.
struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::string worst_parameter;
};
GradientCheck gradient_check(Mlp<double>& model, const Eigen::MatrixXd& x, std::span<const std::int32_t> labels,
                             double fraction, std::uint64_t seed, double step = 1e-4);

}  // namespace dfa::neural
