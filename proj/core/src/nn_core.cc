// Copyright 2026 The mmart Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmart/nn_core.h"

#include <cmath>
#include <numbers>
#include <string>

#include "mmart/errors.h"

namespace mmart {

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  SparseVector out(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    out.push_back(static_cast<std::uint32_t>(i), dense[i]);
  }
  return out;
}

void SparseVector::push_back(std::uint32_t index, double value) {
  if (index >= dim_) {
    throw UsageError("sparse index " + std::to_string(index) + " out of range for dim " +
                     std::to_string(dim_));
  }
  if (!entries_.empty() && entries_.back().index >= index) {
    throw UsageError("sparse indices must be strictly increasing");
  }
  if (value != 0.0) entries_.push_back({index, value});
}

double SparseVector::at(std::size_t index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const SparseEntry& e, std::size_t i) { return e.index < i; });
  return (it != entries_.end() && it->index == index) ? it->value : 0.0;
}

Vector SparseVector::to_dense() const {
  Vector out(dim_, 0.0);
  for (const auto& e : entries_) out[e.index] = e.value;
  return out;
}

double SparseVector::norm() const {
  double acc = 0.0;
  for (const auto& e : entries_) acc += e.value * e.value;
  return std::sqrt(acc);
}

void SparseVector::scale(double factor) {
  for (auto& e : entries_) e.value *= factor;
  std::erase_if(entries_, [](const SparseEntry& e) { return e.value == 0.0; });
}

SparseVector concat(const SparseVector& head, const SparseVector& tail) {
  SparseVector out(head.dim() + tail.dim());
  for (const auto& e : head.entries()) out.push_back(e.index, e.value);
  const auto offset = static_cast<std::uint32_t>(head.dim());
  for (const auto& e : tail.entries()) out.push_back(offset + e.index, e.value);
  return out;
}

Vector concat(std::span<const double> head, std::span<const double> tail) {
  Vector out;
  out.reserve(head.size() + tail.size());
  out.insert(out.end(), head.begin(), head.end());
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("dot: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

namespace {

void check_affine_shapes(const Matrix& w, std::size_t in_dim, std::size_t bias_dim,
                         std::size_t out_dim) {
  if (w.cols() != in_dim) {
    throw UsageError("affine: input dim " + std::to_string(in_dim) + " does not match " +
                     std::to_string(w.cols()));
  }
  if (w.rows() != bias_dim || w.rows() != out_dim) {
    throw UsageError("affine: output dim mismatch");
  }
}

}  // namespace

void affine(const Matrix& w, std::span<const double> x, std::span<const double> b,
            std::span<double> y) {
  check_affine_shapes(w, x.size(), b.size(), y.size());
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const auto row = w.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
    y[r] = acc + b[r];
  }
}

void affine(const Matrix& w, const SparseVector& x, std::span<const double> b,
            std::span<double> y) {
  check_affine_shapes(w, x.dim(), b.size(), y.size());
  const auto entries = x.entries();
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const auto row = w.row(r);
    double acc = 0.0;
    for (const auto& e : entries) acc += row[e.index] * e.value;
    y[r] = acc + b[r];
  }
}

void add_outer(Matrix& w, std::span<const double> g, std::span<const double> x) {
  if (w.rows() != g.size() || w.cols() != x.size()) {
    throw UsageError("add_outer: shape mismatch");
  }
  for (std::size_t r = 0; r < w.rows(); ++r) {
    auto row = w.row(r);
    const double gr = g[r];
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += gr * x[c];
  }
}

void add_outer(Matrix& w, std::span<const double> g, const SparseVector& x) {
  if (w.rows() != g.size() || w.cols() != x.dim()) {
    throw UsageError("add_outer: shape mismatch");
  }
  for (std::size_t r = 0; r < w.rows(); ++r) {
    auto row = w.row(r);
    const double gr = g[r];
    for (const auto& e : x.entries()) row[e.index] += gr * e.value;
  }
}

void add_transposed_product(const Matrix& w, std::span<const double> g,
                            std::span<double> dx) {
  if (w.rows() != g.size() || w.cols() != dx.size()) {
    throw UsageError("add_transposed_product: shape mismatch");
  }
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const auto row = w.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) dx[c] += row[c] * g[r];
  }
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void softmax(std::span<const double> logits, std::span<double> out) {
  if (logits.size() != out.size()) throw UsageError("softmax: dimension mismatch");
  if (logits.empty()) return;
  const double max = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max);
    total += out[i];
  }
  for (double& v : out) v /= total;
}

double smooth_l1(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

double smooth_l1_grad(double x) {
  if (x >= 1.0) return 1.0;
  if (x <= -1.0) return -1.0;
  return x;
}

double clamped_neg_log(double p) { return -std::log(std::max(p, kLogClamp)); }

// --- Rng ----------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ fnv1a(purpose)) + index);
}

Rng Rng::stream(std::uint64_t seed, std::string_view purpose, std::uint64_t index) {
  return Rng(mix_seed(seed, purpose, index));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw UsageError("uniform_index: empty range");
  // Rejection sampling removes modulo bias.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

void glorot_uniform(Matrix& w, Rng& rng) {
  const double fan = static_cast<double>(w.rows() + w.cols());
  const double limit = fan > 0 ? std::sqrt(6.0 / fan) : 0.0;
  for (double& v : w.data()) v = rng.uniform(-limit, limit);
}

// --- Adam ---------------------------------------------------------------------

Adam::Adam(AdamConfig config, std::vector<std::size_t> shapes) : config_(config) {
  m_.reserve(shapes.size());
  v_.reserve(shapes.size());
  for (std::size_t n : shapes) {
    m_.emplace_back(n, 0.0);
    v_.emplace_back(n, 0.0);
  }
}

bool Adam::step(const std::vector<std::span<double>>& params,
                const std::vector<std::span<const double>>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw UsageError("adam: tensor count mismatch");
  }
  for (std::size_t k = 0; k < m_.size(); ++k) {
    if (params[k].size() != m_[k].size() || grads[k].size() != m_[k].size()) {
      throw UsageError("adam: shape mismatch for tensor " + std::to_string(k));
    }
  }
  for (const auto& g : grads) {
    if (!all_finite(g)) {
      ++skipped_;
      return false;
    }
  }

  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t k = 0; k < m_.size(); ++k) {
    auto& m = m_[k];
    auto& v = v_[k];
    const auto g = grads[k];
    auto p = params[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
  return true;
}

// --- gradient checking ----------------------------------------------------------

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / scale;
}

GradCheckResult grad_check(const LossFn& loss, std::span<const double> params,
                           std::span<const double> analytic, double h) {
  if (params.size() != analytic.size()) throw UsageError("grad_check: size mismatch");
  GradCheckResult result;
  Vector probe(params.begin(), params.end());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + h;
    const double plus = loss(probe);
    probe[i] = saved - h;
    const double minus = loss(probe);
    probe[i] = saved;
    const double numeric = (plus - minus) / (2.0 * h);
    const double err = relative_error(analytic[i], numeric);
    if (err > result.max_relative_error) {
      result.max_relative_error = err;
      result.worst_index = i;
    }
  }
  return result;
}

}  // namespace mmart
