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
//
// Shared numeric kernel: dense and sparse vectors, affine maps, activations,
// the Adam optimizer, seeded random streams and a finite-difference gradient
// checker. Everything is double precision.

#ifndef MMART_NN_CORE_H_
#define MMART_NN_CORE_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace mmart {

using Vector = std::vector<double>;

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  void fill(double value) { std::fill(data_.begin(), data_.end(), value); }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SparseEntry {
  std::uint32_t index;
  double value;
  bool operator==(const SparseEntry&) const = default;
};

// Sparse vector with strictly increasing indices and no stored zeros.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t dim) : dim_(dim) {}

  static SparseVector from_dense(std::span<const double> dense);

  // Appends an entry. Indices must arrive in increasing order; zeros are
  // dropped silently.
  void push_back(std::uint32_t index, double value);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return entries_.size(); }
  std::span<const SparseEntry> entries() const { return entries_; }

  // Value at `index` (zero when absent). O(log nnz).
  double at(std::size_t index) const;

  Vector to_dense() const;
  double norm() const;
  void scale(double factor);

  bool operator==(const SparseVector&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<SparseEntry> entries_;
};

SparseVector concat(const SparseVector& head, const SparseVector& tail);
Vector concat(std::span<const double> head, std::span<const double> tail);

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> v);
bool all_finite(std::span<const double> v);

// y = W x + b. The dense and sparse overloads accumulate each output row in
// ascending column order, so they agree bit-for-bit on the same input.
void affine(const Matrix& w, std::span<const double> x, std::span<const double> b,
            std::span<double> y);
void affine(const Matrix& w, const SparseVector& x, std::span<const double> b,
            std::span<double> y);

// W += g x^T. The sparse overload only touches columns where x is nonzero.
void add_outer(Matrix& w, std::span<const double> g, std::span<const double> x);
void add_outer(Matrix& w, std::span<const double> g, const SparseVector& x);

// dx += W^T g (dense input gradient of an affine map).
void add_transposed_product(const Matrix& w, std::span<const double> g, std::span<double> dx);

// --- activations and losses -------------------------------------------------

inline double relu(double x) { return x > 0.0 ? x : 0.0; }
double sigmoid(double x);

// Numerically stable softmax, written into `out` (may alias `logits`).
void softmax(std::span<const double> logits, std::span<double> out);

// Huber with beta = 1.
double smooth_l1(double x);
double smooth_l1_grad(double x);

// -ln(max(p, 1e-12)).
inline constexpr double kLogClamp = 1e-12;
double clamped_neg_log(double p);

// --- random streams ---------------------------------------------------------

// Seeded generator. Streams for different purposes are split off a single
// 64-bit seed with `Rng::stream(seed, purpose, index)`; the engine is
// std::mt19937_64 and every distribution below is computed in-house so the
// sequence is identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::string_view purpose, std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);
  // Standard normal (Box-Muller).
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t index);

// Uniform Glorot range: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Matrix& w, Rng& rng);

// --- Adam -------------------------------------------------------------------

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over a fixed list of parameter tensors.
class Adam {
 public:
  Adam(AdamConfig config, std::vector<std::size_t> shapes);

  // Applies one update. Returns false, and leaves both parameters and
  // moments untouched, when any gradient entry is non-finite. Throws
  // UsageError when the tensor list does not match the construction shapes.
  bool step(const std::vector<std::span<double>>& params,
            const std::vector<std::span<const double>>& grads);

  std::uint64_t steps() const { return t_; }
  std::uint64_t skipped_steps() const { return skipped_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<Vector> m_;
  std::vector<Vector> v_;
  std::uint64_t t_ = 0;
  std::uint64_t skipped_ = 0;
};

// --- gradient checking ------------------------------------------------------

using LossFn = std::function<double(std::span<const double>)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
};

// |a - n| / max(|a|, |n|, 1e-8).
double relative_error(double analytic, double numeric);

// Compares `analytic` against central differences of `loss` at `params`.
GradCheckResult grad_check(const LossFn& loss, std::span<const double> params,
                           std::span<const double> analytic, double h = 1e-4);

}  // namespace mmart

#endif  // MMART_NN_CORE_H_
