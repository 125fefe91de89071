#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace agora::num {

/// Feed-forward net with two ReLU hidden layers of equal width and a linear
/// output head. Parameters live in one flat vector laid out as
/// W1 | b1 | W2 | b2 | W3 | b3 (weights row-major, row = output unit),
/// which keeps the optimizer and serialization trivial.
template <typename T>
struct MlpParamsT {
  int in_dim = 0;
  int hidden = 0;
  int out_dim = 0;
  std::vector<T> theta;

  MlpParamsT() = default;
  MlpParamsT(int d, int h, int c) : in_dim(d), hidden(h), out_dim(c) {
    if (d < 1 || h < 1 || c < 1) throw std::invalid_argument("MlpParams: bad dimensions");
    theta.assign(param_count(d, h, c), T(0));
  }

  static std::size_t param_count(int d, int h, int c) {
    return static_cast<std::size_t>(h) * d + h + static_cast<std::size_t>(h) * h + h +
           static_cast<std::size_t>(c) * h + c;
  }

  std::size_t off_w1() const { return 0; }
  std::size_t off_b1() const { return static_cast<std::size_t>(hidden) * in_dim; }
  std::size_t off_w2() const { return off_b1() + hidden; }
  std::size_t off_b2() const { return off_w2() + static_cast<std::size_t>(hidden) * hidden; }
  std::size_t off_w3() const { return off_b2() + hidden; }
  std::size_t off_b3() const { return off_w3() + static_cast<std::size_t>(out_dim) * hidden; }

  std::span<T> w1() { return {theta.data() + off_w1(), static_cast<std::size_t>(hidden) * in_dim}; }
  std::span<T> b1() { return {theta.data() + off_b1(), static_cast<std::size_t>(hidden)}; }
  std::span<T> w2() { return {theta.data() + off_w2(), static_cast<std::size_t>(hidden) * hidden}; }
  std::span<T> b2() { return {theta.data() + off_b2(), static_cast<std::size_t>(hidden)}; }
  std::span<T> w3() { return {theta.data() + off_w3(), static_cast<std::size_t>(out_dim) * hidden}; }
  std::span<T> b3() { return {theta.data() + off_b3(), static_cast<std::size_t>(out_dim)}; }
};

using MlpParams = MlpParamsT<float>;

/// Scaled-uniform init: each layer U(-s, s) with s = sqrt(6/(fan_in+fan_out)),
/// biases zero.
template <typename T>
void mlp_init(MlpParamsT<T>& p, std::mt19937_64& rng) {
  auto fill = [&rng](std::span<T> w, int fan_in, int fan_out) {
    const double s = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-s, s);
    for (T& v : w) v = static_cast<T>(dist(rng));
  };
  fill(p.w1(), p.in_dim, p.hidden);
  fill(p.w2(), p.hidden, p.hidden);
  fill(p.w3(), p.hidden, p.out_dim);
  std::fill(p.b1().begin(), p.b1().end(), T(0));
  std::fill(p.b2().begin(), p.b2().end(), T(0));
  std::fill(p.b3().begin(), p.b3().end(), T(0));
}

template <typename T>
struct MlpTrace {
  std::vector<T> z1, h1, z2, h2, logits;
};

template <typename T>
MlpTrace<T> mlp_forward(const MlpParamsT<T>& p, std::span<const T> x) {
  if (static_cast<int>(x.size()) != p.in_dim) {
    throw std::invalid_argument("mlp_forward: input dimension mismatch");
  }
  MlpTrace<T> t;
  const int d = p.in_dim, h = p.hidden, c = p.out_dim;
  const T* w1 = p.theta.data() + p.off_w1();
  const T* b1 = p.theta.data() + p.off_b1();
  const T* w2 = p.theta.data() + p.off_w2();
  const T* b2 = p.theta.data() + p.off_b2();
  const T* w3 = p.theta.data() + p.off_w3();
  const T* b3 = p.theta.data() + p.off_b3();

  t.z1.resize(h);
  t.h1.resize(h);
  for (int i = 0; i < h; ++i) {
    T acc = b1[i];
    const T* row = w1 + static_cast<std::size_t>(i) * d;
    for (int j = 0; j < d; ++j) acc += row[j] * x[j];
    t.z1[i] = acc;
    t.h1[i] = acc > T(0) ? acc : T(0);
  }
  t.z2.resize(h);
  t.h2.resize(h);
  for (int i = 0; i < h; ++i) {
    T acc = b2[i];
    const T* row = w2 + static_cast<std::size_t>(i) * h;
    for (int j = 0; j < h; ++j) acc += row[j] * t.h1[j];
    t.z2[i] = acc;
    t.h2[i] = acc > T(0) ? acc : T(0);
  }
  t.logits.resize(c);
  for (int k = 0; k < c; ++k) {
    T acc = b3[k];
    const T* row = w3 + static_cast<std::size_t>(k) * h;
    for (int j = 0; j < h; ++j) acc += row[j] * t.h2[j];
    t.logits[k] = acc;
  }
  return t;
}

/// Softmax cross-entropy, max-subtraction stabilized. Returns the loss and
/// writes softmax - one_hot(label) into grad.
template <typename T>
T softmax_xent(std::span<const T> logits, int label, std::span<T> grad) {
  const int c = static_cast<int>(logits.size());
  if (label < 0 || label >= c) throw std::invalid_argument("softmax_xent: label out of range");
  if (static_cast<int>(grad.size()) != c) throw std::invalid_argument("softmax_xent: grad size mismatch");
  T mx = logits[0];
  for (T v : logits) mx = std::max(mx, v);
  T sum = T(0);
  for (int k = 0; k < c; ++k) {
    grad[k] = std::exp(logits[k] - mx);
    sum += grad[k];
  }
  const T loss = std::log(sum) - (logits[label] - mx);
  for (int k = 0; k < c; ++k) grad[k] /= sum;
  grad[label] -= T(1);
  return loss;
}

/// Backprop of softmax cross-entropy through the whole net. Accumulates
/// into grad (caller zeroes it); returns the per-sample loss.
template <typename T>
T mlp_backward(const MlpParamsT<T>& p, std::span<const T> x, int label, std::span<T> grad) {
  if (grad.size() != p.theta.size()) throw std::invalid_argument("mlp_backward: grad size mismatch");
  const int d = p.in_dim, h = p.hidden, c = p.out_dim;
  const MlpTrace<T> t = mlp_forward(p, x);

  std::vector<T> g3(c);
  const T loss = softmax_xent<T>(t.logits, label, g3);

  const T* w2 = p.theta.data() + p.off_w2();
  const T* w3 = p.theta.data() + p.off_w3();
  T* d_w1 = grad.data() + p.off_w1();
  T* d_b1 = grad.data() + p.off_b1();
  T* d_w2 = grad.data() + p.off_w2();
  T* d_b2 = grad.data() + p.off_b2();
  T* d_w3 = grad.data() + p.off_w3();
  T* d_b3 = grad.data() + p.off_b3();

  std::vector<T> g2(h, T(0));
  for (int k = 0; k < c; ++k) {
    d_b3[k] += g3[k];
    T* row = d_w3 + static_cast<std::size_t>(k) * h;
    const T* w_row = w3 + static_cast<std::size_t>(k) * h;
    for (int j = 0; j < h; ++j) {
      row[j] += g3[k] * t.h2[j];
      g2[j] += w_row[j] * g3[k];
    }
  }
  for (int i = 0; i < h; ++i) g2[i] = t.z2[i] > T(0) ? g2[i] : T(0);

  std::vector<T> g1(h, T(0));
  for (int i = 0; i < h; ++i) {
    d_b2[i] += g2[i];
    T* row = d_w2 + static_cast<std::size_t>(i) * h;
    const T* w_row = w2 + static_cast<std::size_t>(i) * h;
    for (int j = 0; j < h; ++j) {
      row[j] += g2[i] * t.h1[j];
      g1[j] += w_row[j] * g2[i];
    }
  }
  for (int i = 0; i < h; ++i) g1[i] = t.z1[i] > T(0) ? g1[i] : T(0);

  for (int i = 0; i < h; ++i) {
    d_b1[i] += g1[i];
    T* row = d_w1 + static_cast<std::size_t>(i) * d;
    for (int j = 0; j < d; ++j) row[j] += g1[i] * x[j];
  }
  return loss;
}

}  // namespace agora::num
