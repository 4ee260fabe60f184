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

#include "dfa/neural/mlp.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "dfa/common/error.hpp"
#include "dfa/faultlab/faultlab.hpp"

namespace dfa::neural {

static_assert(std::endian::native == std::endian::little, "model files assume a little-endian host");

std::string_view to_string(Activation a) { return a == Activation::elu ? "elu" : "relu"; }

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "elu") return Activation::elu;
  throw ConfigError("unknown activation: " + std::string(name));
}

void MlpSpec::validate() const {
  if (input_width == 0) throw ConfigError("input width must be at least 1");
  if (output_classes < 2) throw ConfigError("need at least 2 output classes");
  for (const auto& h : hidden) {
    if (h.width == 0) throw ConfigError("hidden width must be at least 1");
    if (!(h.dropout >= 0.0F && h.dropout < 1.0F)) throw ConfigError("dropout must be in [0, 1)");
    if (!(h.l2 >= 0.0F)) throw ConfigError("l2 must be non-negative");
  }
}

MlpSpec MlpSpec::preset(ciphers::CipherId id) {
  MlpSpec s;
  const auto& tr = ciphers::traits(id);
  s.input_width = tr.keystream_bits;
  s.output_classes = tr.faultable_bits;
  switch (id) {
    case ciphers::CipherId::acorn:
      for (std::size_t w : {152, 512, 512, 512, 512}) s.hidden.push_back({w, Activation::elu, 0.3F, 1e-8F, true});
      break;
    case ciphers::CipherId::morus:
      s.hidden = {{512, Activation::relu, 0.2F, 0.0F, true},
                  {512, Activation::relu, 0.2F, 0.0F, true},
                  {512, Activation::relu, 0.0F, 0.0F, true}};
      break;
    case ciphers::CipherId::atom:
      s.hidden = {{128, Activation::elu, 0.2F, 0.0F, true},
                  {256, Activation::elu, 0.2F, 0.0F, true},
                  {128, Activation::elu, 0.0F, 0.0F, true}};
      break;
  }
  return s;
}

namespace {

template <class M>
M zeros_like(const M& m) {
  return M::Zero(m.rows(), m.cols());
}

template <class T>
void activate(Activation a, Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& y) {
  if (a == Activation::relu) {
    y = y.cwiseMax(T(0));
  } else {
    y = y.unaryExpr([](T v) { return v > T(0) ? v : std::expm1(v); });
  }
}

// Column-wise softmax, in place.
template <class T>
void softmax_columns(Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& z) {
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    auto col = z.col(c);
    const T m = col.maxCoeff();
    col = (col.array() - m).exp();
    col /= col.sum();
  }
}

template <class T>
std::size_t argmax_column(const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& m, Eigen::Index c) {
  Eigen::Index best = 0;
  for (Eigen::Index r = 1; r < m.rows(); ++r) {
    if (m(r, c) > m(best, c)) best = r;
  }
  return static_cast<std::size_t>(best);
}

// ---- binary I/O ----

constexpr char kMagic[8] = {'D', 'F', 'A', 'M', 'L', 'P', '\0', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  template <class V>
  void put(V v) {
    char buf[sizeof(V)];
    std::memcpy(buf, &v, sizeof(V));
    bytes_.insert(bytes_.end(), buf, buf + sizeof(V));
  }
  void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  template <class M>
  void floats(const M& m) {
    // Row-major order.
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) put(static_cast<float>(m(r, c)));
  }
  const std::vector<char>& bytes() const { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const char> data) : data_(data) {}
  template <class V>
  V get() {
    if (pos_ + sizeof(V) > data_.size()) throw DataError("model file truncated");
    V v;
    std::memcpy(&v, data_.data() + pos_, sizeof(V));
    pos_ += sizeof(V);
    return v;
  }
  template <class M>
  void floats(M& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = static_cast<typename M::Scalar>(get<float>());
  }
  std::size_t position() const { return pos_; }

 private:
  std::span<const char> data_;
  std::size_t pos_ = 0;
};

std::uint64_t fnv1a(std::span<const char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

template <class T>
Mlp<T> Mlp<T>::build(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  Mlp m;
  m.spec_ = spec;
  std::mt19937_64 rng(seed);
  std::size_t in = spec.input_width;
  const std::size_t n_layers = spec.hidden.size() + 1;
  for (std::size_t i = 0; i < n_layers; ++i) {
    const bool hidden = i < spec.hidden.size();
    const std::size_t out = hidden ? spec.hidden[i].width : spec.output_classes;
    Layer L;
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    std::uniform_real_distribution<double> u(-limit, limit);
    L.w.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
    // Filled row by row so the draw order matches the file layout.
    for (Eigen::Index r = 0; r < L.w.rows(); ++r)
      for (Eigen::Index c = 0; c < L.w.cols(); ++c) L.w(r, c) = static_cast<T>(u(rng));
    L.b = Matrix::Zero(static_cast<Eigen::Index>(out), 1);
    if (hidden && spec.hidden[i].batch_norm) {
      L.gamma = Matrix::Ones(static_cast<Eigen::Index>(out), 1);
      L.beta = Matrix::Zero(static_cast<Eigen::Index>(out), 1);
      L.running_mean = Vector::Zero(static_cast<Eigen::Index>(out));
      L.running_var = Vector::Ones(static_cast<Eigen::Index>(out));
    }
    L.dw = zeros_like(L.w);
    L.db = zeros_like(L.b);
    L.mw = zeros_like(L.w);
    L.vw = zeros_like(L.w);
    L.mb = zeros_like(L.b);
    L.vb = zeros_like(L.b);
    if (L.gamma.size()) {
      L.dgamma = zeros_like(L.gamma);
      L.dbeta = zeros_like(L.beta);
      L.mg = zeros_like(L.gamma);
      L.vg = zeros_like(L.gamma);
      L.mbeta = zeros_like(L.beta);
      L.vbeta = zeros_like(L.beta);
    }
    m.layers_.push_back(std::move(L));
    in = out;
  }
  return m;
}

template <class T>
std::size_t Mlp<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& L : layers_) n += static_cast<std::size_t>(L.w.size() + L.b.size() + L.gamma.size() + L.beta.size());
  return n;
}

template <class T>
typename Mlp<T>::Matrix Mlp<T>::logits(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != spec_.input_width) throw DataError("input width mismatch");
  Matrix a = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& L = layers_[i];
    Matrix z = L.w * a;
    z.colwise() += L.b.col(0);
    if (i == spec_.hidden.size()) return z;
    if (L.gamma.size()) {
      const Vector scale =
          (L.gamma.col(0).array() / (L.running_var.array() + T(kBatchNormEpsilon)).sqrt()).matrix();
      const Vector shift = (L.beta.col(0).array() - L.running_mean.array() * scale.array()).matrix();
      z = (z.array().colwise() * scale.array()).matrix();
      z.colwise() += shift;
    }
    activate(spec_.hidden[i].activation, z);
    a = std::move(z);
  }
  return a;  // unreachable: the output layer returns above
}

template <class T>
typename Mlp<T>::Matrix Mlp<T>::probabilities(const Matrix& x) const {
  Matrix z = logits(x);
  softmax_columns(z);
  return z;
}

template <class T>
std::vector<std::size_t> Mlp<T>::predict(const Matrix& x) const {
  const Matrix z = logits(x);
  std::vector<std::size_t> out(static_cast<std::size_t>(z.cols()));
  for (Eigen::Index c = 0; c < z.cols(); ++c) out[static_cast<std::size_t>(c)] = argmax_column(z, c);
  return out;
}

template <class T>
std::size_t Mlp<T>::predict(std::span<const std::uint8_t> delta) const {
  if (delta.size() != spec_.input_width) throw DataError("input width mismatch");
  Matrix x(static_cast<Eigen::Index>(delta.size()), 1);
  for (std::size_t i = 0; i < delta.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = delta[i] ? T(1) : T(0);
  return predict(x).front();
}

template <class T>
T Mlp<T>::loss_and_gradients(const Matrix& x, std::span<const std::int32_t> labels, std::mt19937_64& rng,
                             bool update_running, std::vector<std::size_t>* predicted) {
  if (static_cast<std::size_t>(x.rows()) != spec_.input_width) throw DataError("input width mismatch");
  if (labels.size() != static_cast<std::size_t>(x.cols()) || labels.empty()) throw DataError("label count mismatch");
  const auto batch = x.cols();
  const T inv_batch = T(1) / static_cast<T>(batch);
  const std::size_t nh = spec_.hidden.size();

  // Forward.
  const Matrix* a = &x;
  for (std::size_t i = 0; i < nh; ++i) {
    auto& L = layers_[i];
    const auto& h = spec_.hidden[i];
    L.input = *a;
    L.z = L.w * L.input;
    L.z.colwise() += L.b.col(0);
    if (L.gamma.size()) {
      const Vector mu = L.z.rowwise().mean();
      const Matrix centered = L.z.colwise() - mu;
      const Vector var = centered.array().square().rowwise().mean().matrix();
      L.batch_inv_std = (var.array() + T(kBatchNormEpsilon)).rsqrt().matrix();
      L.xhat = (centered.array().colwise() * L.batch_inv_std.array()).matrix();
      L.pre_act = (L.xhat.array().colwise() * L.gamma.col(0).array()).matrix();
      L.pre_act.colwise() += L.beta.col(0);
      if (update_running) {
        const T mom = T(kBatchNormMomentum);
        L.running_mean = mom * L.running_mean + (T(1) - mom) * mu;
        L.running_var = mom * L.running_var + (T(1) - mom) * var;
      }
    } else {
      L.pre_act = L.z;
    }
    L.act = L.pre_act;
    activate(h.activation, L.act);
    if (h.dropout > 0.0F) {
      const T keep = T(1) - static_cast<T>(h.dropout);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      L.mask.resize(L.act.rows(), L.act.cols());
      for (Eigen::Index c = 0; c < L.mask.cols(); ++c)
        for (Eigen::Index r = 0; r < L.mask.rows(); ++r)
          L.mask(r, c) = u(rng) < static_cast<double>(h.dropout) ? T(0) : T(1) / keep;
      L.act = L.act.cwiseProduct(L.mask);
    } else {
      L.mask.resize(0, 0);
    }
    a = &L.act;
  }
  auto& out = layers_[nh];
  out.input = *a;
  Matrix p = out.w * out.input;
  p.colwise() += out.b.col(0);
  softmax_columns(p);
  if (predicted) {
    predicted->resize(static_cast<std::size_t>(batch));
    for (Eigen::Index c = 0; c < batch; ++c) (*predicted)[static_cast<std::size_t>(c)] = argmax_column(p, c);
  }

  T loss = 0;
  for (Eigen::Index c = 0; c < batch; ++c) {
    const auto y = labels[static_cast<std::size_t>(c)];
    if (y < 0 || static_cast<std::size_t>(y) >= spec_.output_classes) throw DataError("label out of range");
    loss -= std::log(std::max(p(y, c), std::numeric_limits<T>::min()));
  }
  loss *= inv_batch;
  for (std::size_t i = 0; i < nh; ++i) {
    if (spec_.hidden[i].l2 > 0.0F) loss += static_cast<T>(spec_.hidden[i].l2) * layers_[i].w.squaredNorm();
  }

  // Backward.
  Matrix d = std::move(p);
  for (Eigen::Index c = 0; c < batch; ++c) d(labels[static_cast<std::size_t>(c)], c) -= T(1);
  d *= inv_batch;
  out.dw.noalias() = d * out.input.transpose();
  out.db = d.rowwise().sum();
  Matrix dx = out.w.transpose() * d;
  for (std::size_t k = nh; k-- > 0;) {
    auto& L = layers_[k];
    const auto& h = spec_.hidden[k];
    if (L.mask.size()) dx = dx.cwiseProduct(L.mask);
    // d/dy of the activation, expressed through its input.
    if (h.activation == Activation::relu) {
      dx = (L.pre_act.array() > T(0)).select(dx, T(0));
    } else {
      dx = (L.pre_act.array() > T(0)).select(dx.array(), dx.array() * L.pre_act.array().exp()).matrix();
    }
    Matrix dz;
    if (L.gamma.size()) {
      L.dgamma = dx.cwiseProduct(L.xhat).rowwise().sum();
      L.dbeta = dx.rowwise().sum();
      const Matrix dxhat = (dx.array().colwise() * L.gamma.col(0).array()).matrix();
      const Vector sum_dxhat = dxhat.rowwise().sum();
      const Vector sum_dxhat_xhat = dxhat.cwiseProduct(L.xhat).rowwise().sum();
      Matrix t = static_cast<T>(batch) * dxhat;
      t.colwise() -= sum_dxhat;
      t -= (L.xhat.array().colwise() * sum_dxhat_xhat.array()).matrix();
      dz = (t.array().colwise() * (L.batch_inv_std.array() * inv_batch)).matrix();
    } else {
      dz = std::move(dx);
    }
    L.dw.noalias() = dz * L.input.transpose();
    if (h.l2 > 0.0F) L.dw += T(2) * static_cast<T>(h.l2) * L.w;
    L.db = dz.rowwise().sum();
    if (k > 0) dx = L.w.transpose() * dz;
  }
  return loss;
}

template <class T>
void Mlp<T>::adam_step(const AdamConfig& cfg) {
  ++step_;
  const double t = static_cast<double>(step_);
  const T lr = static_cast<T>(cfg.learning_rate * std::sqrt(1.0 - std::pow(cfg.beta2, t)) /
                              (1.0 - std::pow(cfg.beta1, t)));
  const T b1 = static_cast<T>(cfg.beta1);
  const T b2 = static_cast<T>(cfg.beta2);
  const T eps = static_cast<T>(cfg.epsilon);
  auto update = [&](Matrix& p, const Matrix& g, Matrix& m, Matrix& v) {
    m = b1 * m + (T(1) - b1) * g;
    v = b2 * v + (T(1) - b2) * g.cwiseProduct(g);
    p.array() -= lr * m.array() / (v.array().sqrt() + eps);
  };
  for (auto& L : layers_) {
    update(L.w, L.dw, L.mw, L.vw);
    update(L.b, L.db, L.mb, L.vb);
    if (L.gamma.size()) {
      update(L.gamma, L.dgamma, L.mg, L.vg);
      update(L.beta, L.dbeta, L.mbeta, L.vbeta);
    }
  }
}

template <class T>
std::vector<ParamRef<T>> Mlp<T>::parameters() {
  std::vector<ParamRef<T>> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    auto& L = layers_[i];
    const std::string p = "layer" + std::to_string(i) + ".";
    out.push_back({p + "kernel", &L.w, &L.dw});
    out.push_back({p + "bias", &L.b, &L.db});
    if (L.gamma.size()) {
      out.push_back({p + "gamma", &L.gamma, &L.dgamma});
      out.push_back({p + "beta", &L.beta, &L.dbeta});
    }
  }
  return out;
}

template <class T>
void Mlp<T>::save(const std::filesystem::path& path) const {
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.put(kFormatVersion);
  w.put(static_cast<std::uint32_t>(spec_.input_width));
  w.put(static_cast<std::uint32_t>(spec_.output_classes));
  w.put(static_cast<std::uint32_t>(spec_.hidden.size()));
  for (const auto& h : spec_.hidden) {
    w.put(static_cast<std::uint32_t>(h.width));
    w.put(static_cast<std::uint8_t>(h.activation));
    w.put(static_cast<std::uint8_t>(h.batch_norm ? 1 : 0));
    w.put(std::uint16_t{0});
    w.put(h.dropout);
    w.put(h.l2);
  }
  for (const auto& L : layers_) {
    w.floats(L.w);
    w.floats(L.b);
    if (L.gamma.size()) {
      w.floats(L.gamma);
      w.floats(L.beta);
      w.floats(L.running_mean);
      w.floats(L.running_var);
    }
  }
  w.put(fnv1a(w.bytes()));
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write model file " + path.string());
  f.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!f) throw IoError("short write to " + path.string());
}

template <class T>
Mlp<T> Mlp<T>::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open model file " + path.string());
  const std::vector<char> data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (data.size() < sizeof kMagic + 12 || std::memcmp(data.data(), kMagic, sizeof kMagic) != 0) {
    throw DataError("not a model file: " + path.string());
  }
  Reader r(std::span<const char>(data).subspan(sizeof kMagic));
  const auto version = r.get<std::uint32_t>();
  if (version != kFormatVersion) {
    throw DataError("model format version " + std::to_string(version) + " not supported (expected " +
                    std::to_string(kFormatVersion) + ")");
  }
  MlpSpec spec;
  spec.input_width = r.get<std::uint32_t>();
  spec.output_classes = r.get<std::uint32_t>();
  const auto nh = r.get<std::uint32_t>();
  if (nh > 1024) throw DataError("implausible hidden layer count");
  for (std::uint32_t i = 0; i < nh; ++i) {
    HiddenLayer h;
    h.width = r.get<std::uint32_t>();
    const auto act = r.get<std::uint8_t>();
    if (act > 1) throw DataError("unknown activation code");
    h.activation = static_cast<Activation>(act);
    h.batch_norm = r.get<std::uint8_t>() != 0;
    r.get<std::uint16_t>();
    h.dropout = r.get<float>();
    h.l2 = r.get<float>();
    spec.hidden.push_back(h);
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw DataError(std::string("corrupt model spec: ") + e.what());
  }
  auto m = build(spec, 0);
  for (auto& L : m.layers_) {
    r.floats(L.w);
    r.floats(L.b);
    if (L.gamma.size()) {
      r.floats(L.gamma);
      r.floats(L.beta);
      r.floats(L.running_mean);
      r.floats(L.running_var);
    }
  }
  const std::size_t payload = sizeof kMagic + r.position();
  const auto stored = r.get<std::uint64_t>();
  if (stored != fnv1a(std::span<const char>(data).first(payload))) throw DataError("model file checksum mismatch");
  if (payload + sizeof(std::uint64_t) != data.size()) throw DataError("trailing bytes in model file");
  return m;
}

template <class T>
Mlp<T> Mlp<T>::load_expecting(const std::filesystem::path& path, std::size_t input_width) {
  auto m = load(path);
  if (m.spec_.input_width != input_width) {
    throw DataError("model input width " + std::to_string(m.spec_.input_width) + " does not match " +
                    std::to_string(input_width));
  }
  return m;
}

template <class T>
template <class U>
Mlp<U> Mlp<T>::cast() const {
  Mlp<U> m = Mlp<U>::build(spec_, 0);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& a = layers_[i];
    auto& b = m.layers_[i];
    b.w = a.w.template cast<U>();
    b.b = a.b.template cast<U>();
    if (a.gamma.size()) {
      b.gamma = a.gamma.template cast<U>();
      b.beta = a.beta.template cast<U>();
      b.running_mean = a.running_mean.template cast<U>();
      b.running_var = a.running_var.template cast<U>();
    }
  }
  return m;
}

template class Mlp<float>;
template class Mlp<double>;
template Mlp<double> Mlp<float>::cast<double>() const;
template Mlp<float> Mlp<double>::cast<float>() const;

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> to_matrix(const faultlab::DeltaSet& set, std::size_t first,
                                                           std::size_t count) {
  if (first + count > set.rows()) throw DataError("row range out of bounds");
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> x(static_cast<Eigen::Index>(set.width),
                                                     static_cast<Eigen::Index>(count));
  for (std::size_t c = 0; c < count; ++c) {
    const auto row = set.row(first + c);
    for (std::size_t r = 0; r < set.width; ++r)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[r] ? T(1) : T(0);
  }
  return x;
}

template Eigen::MatrixXf to_matrix<float>(const faultlab::DeltaSet&, std::size_t, std::size_t);
template Eigen::MatrixXd to_matrix<double>(const faultlab::DeltaSet&, std::size_t, std::size_t);

void TrainConfig::validate() const {
  if (max_epochs == 0) throw ConfigError("max_epochs must be at least 1");
  if (patience == 0) throw ConfigError("patience must be at least 1");
  if (batch_size == 0) throw ConfigError("batch size must be at least 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
}

namespace {

constexpr std::size_t kEvalChunk = 4096;

void check_split(const MlpModel& model, const faultlab::DeltaSet& set, const char* what) {
  if (set.rows() == 0) throw DataError(std::string(what) + " split is empty");
  if (set.width != model.spec().input_width) throw DataError(std::string(what) + " width does not match the model");
  for (auto y : set.labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= model.spec().output_classes) {
      throw DataError(std::string(what) + " label out of range: " + std::to_string(y));
    }
  }
}

Eigen::MatrixXf gather(const faultlab::DeltaSet& set, std::span<const std::size_t> idx) {
  Eigen::MatrixXf x(static_cast<Eigen::Index>(set.width), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const auto row = set.row(idx[c]);
    for (std::size_t r = 0; r < set.width; ++r)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[r] ? 1.0F : 0.0F;
  }
  return x;
}

}  // namespace

EvalStats evaluate_loss(const MlpModel& model, const faultlab::DeltaSet& set) {
  check_split(model, set, "evaluation");
  double loss = 0.0;
  std::size_t correct = 0;
  for (std::size_t first = 0; first < set.rows(); first += kEvalChunk) {
    const std::size_t n = std::min(kEvalChunk, set.rows() - first);
    const auto p = model.probabilities(to_matrix<float>(set, first, n));
    for (std::size_t c = 0; c < n; ++c) {
      const auto y = set.labels[first + c];
      loss -= std::log(std::max(static_cast<double>(p(y, static_cast<Eigen::Index>(c))), 1e-38));
      if (argmax_column(p, static_cast<Eigen::Index>(c)) == static_cast<std::size_t>(y)) ++correct;
    }
  }
  return {loss / static_cast<double>(set.rows()), static_cast<double>(correct) / static_cast<double>(set.rows())};
}

std::vector<std::size_t> predict_all(const MlpModel& model, const faultlab::DeltaSet& set) {
  if (set.width != model.spec().input_width) throw DataError("dataset width does not match the model");
  std::vector<std::size_t> out;
  out.reserve(set.rows());
  for (std::size_t first = 0; first < set.rows(); first += kEvalChunk) {
    const std::size_t n = std::min(kEvalChunk, set.rows() - first);
    const auto part = model.predict(to_matrix<float>(set, first, n));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

TrainHistory train(MlpModel& model, const faultlab::DeltaSet& train_set, const faultlab::DeltaSet& val_set,
                   const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  check_split(model, train_set, "training");
  check_split(model, val_set, "validation");
  std::mt19937_64 rng(cfg.seed);
  AdamConfig adam;
  adam.learning_rate = cfg.learning_rate;
  std::vector<std::size_t> order(train_set.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::int32_t> labels;
  std::vector<std::size_t> pred;
  TrainHistory hist;
  MlpModel best = model;
  std::size_t since_best = 0;
  bool have_best = false;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t first = 0; first < order.size(); first += cfg.batch_size) {
      const std::size_t n = std::min(cfg.batch_size, order.size() - first);
      const std::span<const std::size_t> idx(order.data() + first, n);
      labels.resize(n);
      for (std::size_t i = 0; i < n; ++i) labels[i] = train_set.labels[idx[i]];
      const auto x = gather(train_set, idx);
      loss_sum += static_cast<double>(model.loss_and_gradients(x, labels, rng, true, &pred)) * static_cast<double>(n);
      model.adam_step(adam);
      for (std::size_t i = 0; i < n; ++i) correct += pred[i] == static_cast<std::size_t>(labels[i]) ? 1 : 0;
    }
    EpochStats st;
    st.epoch = epoch;
    st.train_loss = loss_sum / static_cast<double>(order.size());
    st.train_accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
    const auto val = evaluate_loss(model, val_set);
    st.val_loss = val.loss;
    st.val_accuracy = val.accuracy;
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    hist.epochs.push_back(st);
    if (on_epoch) on_epoch(st);

    if (!have_best || st.val_accuracy > hist.best_val_accuracy) {
      have_best = true;
      hist.best_val_accuracy = st.val_accuracy;
      hist.best_epoch = epoch;
      best = model;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      hist.stopped_early = epoch < cfg.max_epochs;
      break;
    }
  }
  model = std::move(best);
  return hist;
}

GradientCheck gradient_check(Mlp<double>& model, const Eigen::MatrixXd& x, std::span<const std::int32_t> labels,
                             double fraction, std::uint64_t seed, double step) {
  GradientCheck out;
  std::mt19937_64 pick(seed ^ 0x9e3779b97f4a7c15ULL);
  auto loss_at = [&] {
    std::mt19937_64 rng(seed);
    return model.loss_and_gradients(x, labels, rng, false);
  };
  loss_at();
  auto params = model.parameters();
  std::vector<Eigen::MatrixXd> analytic;
  for (const auto& p : params) analytic.push_back(*p.grad);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& value = *params[k].value;
    const auto n = static_cast<std::size_t>(value.size());
    const std::size_t samples = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(n)));
    std::uniform_int_distribution<std::size_t> which(0, n - 1);
    for (std::size_t s = 0; s < samples; ++s) {
      const auto idx = static_cast<Eigen::Index>(which(pick));
      const double orig = value.data()[idx];
      auto at = [&](double offset) {
        value.data()[idx] = orig + offset;
        return loss_at();
      };
      // Fourth-order central stencil.
      const double numeric = (8.0 * (at(step) - at(-step)) - (at(2.0 * step) - at(-2.0 * step))) / (12.0 * step);
      value.data()[idx] = orig;
      const double a = analytic[k].data()[idx];
      // Relative error with an absolute floor for gradients near zero.
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
      ++out.checked;
      if (rel > out.max_relative_error) {
        out.max_relative_error = rel;
        out.worst_parameter = params[k].name + "[" + std::to_string(idx) + "]";
      }
    }
  }
  loss_at();  // leave gradients consistent with the unperturbed weights
  return out;
}

}  // namespace dfa::neural
