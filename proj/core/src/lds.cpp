// Copyright 2026 The PQMC Authors
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

#include <pqmc/lds.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include <pqmc/error.hpp>
#include <pqmc/random.hpp>

namespace pqmc {

namespace {

constexpr int kBits = 32;

struct PrimitivePolynomial {
  unsigned degree;
  std::uint32_t coefficients;  // interior coefficients a, highest first
  std::array<std::uint32_t, 8> initial;  // m_1..m_degree
};

// Joe-Kuo new-joe-kuo-6.21201, dimensions 2..21. Dimension 1 is the van der Corput sequence.
constexpr std::array<PrimitivePolynomial, kMaxSobolDimension - 1> kJoeKuo{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
}};

using DirectionNumbers = std::array<std::uint32_t, kBits>;

DirectionNumbers direction_numbers(std::size_t dim) {
  DirectionNumbers v{};
  if (dim == 0) {
    for (int k = 0; k < kBits; ++k) {
      v[static_cast<std::size_t>(k)] = std::uint32_t{1} << (kBits - 1 - k);
    }
    return v;
  }
  const auto& poly = kJoeKuo[dim - 1];
  const unsigned s = poly.degree;
  for (unsigned k = 0; k < s; ++k) {
    v[k] = poly.initial[k] << (kBits - 1 - static_cast<int>(k));
  }
  for (unsigned k = s; k < kBits; ++k) {
    std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
    for (unsigned l = 1; l < s; ++l) {
      if (((poly.coefficients >> (s - 1 - l)) & 1U) != 0U) {
        value ^= v[k - l];
      }
    }
    v[k] = value;
  }
  return v;
}

// One pseudo-random bit per node of the binary digit tree.
std::uint64_t node_hash(std::uint64_t dim_seed, std::uint64_t node) noexcept {
  return mix64(dim_seed ^ mix64(node));
}

double scramble_coordinate(double value, std::uint64_t dim_seed) {
  const auto digits = static_cast<std::uint32_t>(std::ldexp(value, kBits));
  std::uint32_t out = 0;
  for (int b = 0; b < kBits; ++b) {
    const std::uint64_t prefix = b == 0 ? 0 : (digits >> (kBits - b));
    const std::uint64_t node = (std::uint64_t{1} << b) | prefix;
    const auto flip = static_cast<std::uint32_t>(node_hash(dim_seed, node) >> 63U);
    const std::uint32_t bit = (digits >> (kBits - 1 - b)) & 1U;
    out |= (bit ^ flip) << (kBits - 1 - b);
  }
  const std::uint64_t leaf = (std::uint64_t{1} << kBits) | digits;
  const std::uint64_t tail = node_hash(dim_seed, leaf) >> (64 - 21);
  const std::uint64_t mantissa = (static_cast<std::uint64_t>(out) << 21U) | tail;
  return static_cast<double>(mantissa) * 0x1.0p-53;
}

template <std::size_t N>
double horner(const std::array<double, N>& c, double x) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) {
    acc = acc * x + c[i];
  }
  return acc;
}

}  // namespace

UnitCubePoints::UnitCubePoints(PointMatrix values) : values_{std::move(values)} {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw DomainError("unit-cube point set must be non-empty");
  }
  const bool in_range = (values_.array() >= 0.0).all() && (values_.array() < 1.0).all();
  if (!in_range) {
    throw DomainError("unit-cube point set has entries outside [0,1)");
  }
}

UnitCubePoints sobol(std::size_t n, std::size_t p) {
  if (n == 0 || p == 0) {
    throw DomainError("sobol: n and p must be positive");
  }
  if (p > kMaxSobolDimension) {
    throw UnsupportedDimensionError("sobol: dimension " + std::to_string(p) + " exceeds the direction-number table (max " +
                                    std::to_string(kMaxSobolDimension) + ")");
  }
  if (n > (std::size_t{1} << kBits)) {
    throw CapacityError("sobol: at most 2^32 points are available");
  }
  std::vector<DirectionNumbers> v(p);
  for (std::size_t j = 0; j < p; ++j) {
    v[j] = direction_numbers(j);
  }
  PointMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  std::vector<std::uint32_t> state(p, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      // Gray-code step: flip the direction number of the lowest zero bit of i-1.
      const auto c = static_cast<std::size_t>(std::countr_one(i - 1));
      for (std::size_t j = 0; j < p; ++j) {
        state[j] ^= v[j][c];
      }
    }
    for (std::size_t j = 0; j < p; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::ldexp(static_cast<double>(state[j]), -kBits);
    }
  }
  return UnitCubePoints{std::move(out)};
}

UnitCubePoints owen_scramble(const UnitCubePoints& points, ScrambleSeed seed) {
  PointMatrix out(points.values().rows(), points.values().cols());
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const std::uint64_t dim_seed = derive_seed(seed.value, {static_cast<std::uint64_t>(j)});
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      out(i, j) = scramble_coordinate(points.values()(i, j), dim_seed);
    }
  }
  return UnitCubePoints{std::move(out)};
}

double inverse_normal_cdf(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("inverse_normal_cdf: argument must lie in (0,1)");
  }
  static constexpr std::array<double, 8> a{
      3.3871328727963666080e0, 1.3314166789178437745e+2, 1.9715909503065514427e+3, 1.3731693765509461125e+4,
      4.5921953931549871457e+4, 6.7265770927008700853e+4, 3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr std::array<double, 8> b{
      1.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2, 5.3941960214247511077e+3,
      2.1213794301586595867e+4, 3.9307895800092710610e+4, 2.8729085735721942674e+4, 5.2264952788528545610e+3};
  static constexpr std::array<double, 8> c{
      1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0, 3.64784832476320460504e0,
      1.27045825245236838258e0, 2.41780725177450611770e-1, 2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr std::array<double, 8> d{
      1.0,                      2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static constexpr std::array<double, 8> e{
      6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0, 2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3, 2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr std::array<double, 8> f{
      1.0,                      5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7, 2.04426310338993978564e-15};

  const double q = u - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(a, r) / horner(b, r);
  }
  double r = q < 0.0 ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double value = 0.0;
  if (r <= 5.0) {
    r -= 1.6;
    value = horner(c, r) / horner(d, r);
  } else {
    r -= 5.0;
    value = horner(e, r) / horner(f, r);
  }
  return q < 0.0 ? -value : value;
}

PointMatrix gaussian_inverse_transform(const UnitCubePoints& u, const Vector& mean, const Matrix& cov) {
  const auto p = static_cast<Eigen::Index>(u.dim());
  if (mean.size() != p || cov.rows() != p || cov.cols() != p) {
    throw DomainError("gaussian_inverse_transform: dimension mismatch");
  }
  const Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success || !cov.allFinite()) {
    throw CovarianceError("gaussian_inverse_transform: covariance is not positive definite");
  }
  const Matrix lower = llt.matrixL();
  PointMatrix out(u.values().rows(), p);
  Vector z(p);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double clamped = std::clamp(u.values()(i, j), kQuantileClamp, 1.0 - kQuantileClamp);
      z(j) = inverse_normal_cdf(clamped);
    }
    const Vector offset = lower.triangularView<Eigen::Lower>() * z;
    out.row(i) = (mean + offset).transpose();
  }
  return out;
}

namespace {

// Sweep state for the exact star discrepancy. Every dimension but the last is
// enumerated over its critical grid; the last one is swept against points
// sorted by their last coordinate.
class DiscrepancySweep {
 public:
  explicit DiscrepancySweep(const PointMatrix& x) : x_{x}, n_{static_cast<std::size_t>(x.rows())}, p_{static_cast<std::size_t>(x.cols())} {
    grids_.resize(p_);
    for (std::size_t j = 0; j < p_; ++j) {
      auto& g = grids_[j];
      g.reserve(n_ + 1);
      for (std::size_t i = 0; i < n_; ++i) {
        g.push_back(x_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
      g.push_back(1.0);
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
    }
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    const auto last = static_cast<Eigen::Index>(p_ - 1);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return x_(static_cast<Eigen::Index>(a), last) < x_(static_cast<Eigen::Index>(b), last);
    });
  }

  double run() {
    std::vector<char> open(n_, 1);
    std::vector<char> closed(n_, 1);
    recurse(0, 1.0, open, closed);
    return best_;
  }

 private:
  void recurse(std::size_t level, double volume, const std::vector<char>& open, const std::vector<char>& closed) {
    if (level + 1 == p_) {
      sweep_last(volume, open, closed);
      return;
    }
    std::vector<char> next_open(n_);
    std::vector<char> next_closed(n_);
    const auto col = static_cast<Eigen::Index>(level);
    for (const double a : grids_[level]) {
      for (std::size_t i = 0; i < n_; ++i) {
        const double v = x_(static_cast<Eigen::Index>(i), col);
        next_open[i] = static_cast<char>(open[i] != 0 && v < a);
        next_closed[i] = static_cast<char>(closed[i] != 0 && v <= a);
      }
      recurse(level + 1, volume * a, next_open, next_closed);
    }
  }

  void sweep_last(double volume, const std::vector<char>& open, const std::vector<char>& closed) {
    const auto last = static_cast<Eigen::Index>(p_ - 1);
    const double inv_n = 1.0 / static_cast<double>(n_);
    std::size_t open_count = 0;
    std::size_t closed_count = 0;
    std::size_t lo = 0;  // first sorted point with x >= a (open boundary)
    std::size_t hi = 0;  // first sorted point with x > a (closed boundary)
    for (const double a : grids_.back()) {
      while (lo < n_ && x_(static_cast<Eigen::Index>(order_[lo]), last) < a) {
        open_count += static_cast<std::size_t>(open[order_[lo]] != 0);
        ++lo;
      }
      while (hi < n_ && x_(static_cast<Eigen::Index>(order_[hi]), last) <= a) {
        closed_count += static_cast<std::size_t>(closed[order_[hi]] != 0);
        ++hi;
      }
      const double vol = volume * a;
      best_ = std::max(best_, vol - static_cast<double>(open_count) * inv_n);
      best_ = std::max(best_, static_cast<double>(closed_count) * inv_n - vol);
    }
  }

  const PointMatrix& x_;
  std::size_t n_;
  std::size_t p_;
  std::vector<std::vector<double>> grids_;
  std::vector<std::size_t> order_;
  double best_ = 0.0;
};

}  // namespace

double star_discrepancy(const UnitCubePoints& points) {
  if (points.size() > kStarDiscrepancyMaxPoints || points.dim() > kStarDiscrepancyMaxDim) {
    throw CapacityError("star_discrepancy: exact computation limited to n <= " + std::to_string(kStarDiscrepancyMaxPoints) +
                        " and p <= " + std::to_string(kStarDiscrepancyMaxDim));
  }
  DiscrepancySweep sweep(points.values());
  return sweep.run();
}

}  // namespace pqmc
