// Copyright 2026 The slacq Authors
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

// Classical SLAC derivative operators on a periodic lattice of N = 2^n sites
// with unit spacing: coefficients, dense circulants, spectra, symbols and the
// finite-lattice truncation error.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "slacq/common.hpp"

namespace slacq {

struct LatticeConfig {
  int n = 0;

  LatticeConfig() = default;
  explicit LatticeConfig(int qubits) : n(qubits) { validate(); }

  std::int64_t N() const { return std::int64_t{1} << n; }
  void validate() const {
    if (n < 2 || n > 30) throw ConfigError("lattice needs 2 <= n <= 30");
  }
};

enum class Variant { exact, truncated };

struct CirculantOperator {
  std::vector<cplx> coeffs;  // first column: entry (r,c) = coeffs[(r-c) mod N]
  int order = 2;
  Variant variant = Variant::truncated;

  std::int64_t size() const { return static_cast<std::int64_t>(coeffs.size()); }
};

struct FourierSymbol {
  std::string label;
  std::vector<double> q_grid;
  std::vector<cplx> values;
};

struct ProjectionSpec {
  std::int64_t k_max = 0;
};

// Infinite-lattice kernel of the SLAC derivative at separation r.
inline cplx infinite_kernel(std::int64_t r, int order) {
  if (order == 2) {
    if (r == 0) return -kPi * kPi / 3.0;
    const double rr = static_cast<double>(r);
    return -2.0 * sign_pow(r) / (rr * rr);
  }
  if (order == 1) {
    if (r == 0) return 0.0;
    return sign_pow(r + 1) / static_cast<double>(r);
  }
  throw ConfigError("order must be 1 or 2");
}

inline CirculantOperator exact_laplacian(const LatticeConfig& cfg) {
  cfg.validate();
  const std::int64_t N = cfg.N();
  const double Nd = static_cast<double>(N);
  CirculantOperator op{std::vector<cplx>(N), 2, Variant::exact};
  op.coeffs[0] = -kPi * kPi / 3.0 - 2.0 * kPi * kPi / (3.0 * Nd * Nd);
  for (std::int64_t j = 1; j < N; ++j) {
    const double s = std::sin(kPi * static_cast<double>(j) / Nd);
    op.coeffs[j] = 2.0 * kPi * kPi * sign_pow(j + 1) / (Nd * Nd * s * s);
  }
  return op;
}

inline CirculantOperator truncated_laplacian(const LatticeConfig& cfg) {
  cfg.validate();
  const std::int64_t N = cfg.N();
  CirculantOperator op{std::vector<cplx>(N, 0.0), 2, Variant::truncated};
  op.coeffs[0] = -kPi * kPi / 3.0;
  for (std::int64_t j = 1; j < N; ++j) {
    if (j == N / 2) continue;
    const double m = static_cast<double>(j < N / 2 ? j : N - j);
    op.coeffs[j] = 2.0 * sign_pow(j + 1) / (m * m);
  }
  return op;
}

inline CirculantOperator exact_first_order(const LatticeConfig& cfg) {
  cfg.validate();
  const std::int64_t N = cfg.N();
  const double Nd = static_cast<double>(N);
  CirculantOperator op{std::vector<cplx>(N), 1, Variant::exact};
  op.coeffs[0] = -kI * kPi / Nd;
  for (std::int64_t j = 1; j < N; ++j) {
    const double x = kPi * static_cast<double>(j) / Nd;
    op.coeffs[j] = (kPi * sign_pow(j + 1) / Nd) * (std::cos(x) / std::sin(x) + kI);
  }
  return op;
}

inline CirculantOperator truncated_first_order(const LatticeConfig& cfg) {
  cfg.validate();
  const std::int64_t N = cfg.N();
  const double Nd = static_cast<double>(N);
  CirculantOperator op{std::vector<cplx>(N, 0.0), 1, Variant::truncated};
  for (std::int64_t j = 1; j < N; ++j) {
    if (j == N / 2) continue;
    const double m = static_cast<double>(j < N / 2 ? j : N - j);
    op.coeffs[j] = (sign_pow(j + 1) / m) * std::exp(kI * kPi * static_cast<double>(j) / Nd);
  }
  return op;
}

inline CirculantOperator slac_operator(int order, Variant variant, const LatticeConfig& cfg) {
  if (order == 2) return variant == Variant::exact ? exact_laplacian(cfg) : truncated_laplacian(cfg);
  if (order == 1) return variant == Variant::exact ? exact_first_order(cfg) : truncated_first_order(cfg);
  throw ConfigError("order must be 1 or 2");
}

inline CMatrix to_dense(const CirculantOperator& op) {
  const std::int64_t N = op.size();
  if (N > kDenseLimit) throw std::length_error("dense limit exceeded");
  CMatrix m(N, N);
  for (std::int64_t c = 0; c < N; ++c)
    for (std::int64_t r = 0; r < N; ++r) m(r, c) = op.coeffs[((r - c) % N + N) % N];
  return m;
}

// Cyclic shift P^j as a dense permutation: |c> -> |c + j mod N>.
inline CMatrix shift_matrix(std::int64_t N, std::int64_t j) {
  CirculantOperator e{std::vector<cplx>(N, 0.0), 0, Variant::exact};
  e.coeffs[((j % N) + N) % N] = 1.0;
  return to_dense(e);
}

// eigenvalue(k) = sum_j coeffs[j] exp(-2 pi i j k / N), k = 0..N-1.
inline std::vector<cplx> circulant_spectrum(const CirculantOperator& op) {
  Eigen::FFT<double> fft;
  std::vector<cplx> in(op.coeffs.begin(), op.coeffs.end());
  std::vector<cplx> out;
  fft.fwd(out, in);
  return out;
}

// Signed momentum of DFT index k in the window (-N/2, N/2].
inline std::int64_t signed_momentum(std::int64_t k, std::int64_t N) {
  return k <= N / 2 ? k : k - N;
}

// Unit-norm DFT column k: v_r = exp(2 pi i r k / N) / sqrt(N).
inline CVector dft_column(std::int64_t N, std::int64_t k) {
  CVector v(N);
  const double s = 1.0 / std::sqrt(static_cast<double>(N));
  for (std::int64_t r = 0; r < N; ++r)
    v(r) = s * std::exp(kI * (2.0 * kPi * static_cast<double>((r * k) % N) / static_cast<double>(N)));
  return v;
}

inline std::vector<FourierSymbol> symbol_table(const LatticeConfig& cfg, int samples) {
  cfg.validate();
  if (samples < 16) throw ConfigError("symbol_table needs at least 16 samples");
  const std::int64_t N = cfg.N();
  std::vector<double> q(samples);
  for (int i = 0; i < samples; ++i) q[i] = -kPi + 2.0 * kPi * (i + 1) / samples;

  auto make = [&](std::string label, auto f) {
    FourierSymbol s{std::move(label), q, {}};
    s.values.reserve(samples);
    for (double x : q) s.values.emplace_back(f(x));
    return s;
  };
  auto d_trunc = [N](double x) {
    double acc = 0.0;
    for (std::int64_t j = 1; j < N; ++j) acc += sign_pow(j + 1) * std::sin(j * x) / static_cast<double>(j);
    return 2.0 * acc;
  };
  auto lap_trunc = [N](double x) {
    double acc = 0.0;
    for (std::int64_t j = 1; j < N; ++j) {
      const double jd = static_cast<double>(j);
      acc += sign_pow(j) * std::cos(j * x) / (jd * jd);
    }
    return kPi * kPi / 3.0 + 4.0 * acc;
  };
  return {
      make("continuum_d1", [](double x) { return x; }),
      make("fd_d1", [](double x) { return std::sin(x); }),
      make("slac_trunc_d1", d_trunc),
      make("continuum_d2", [](double x) { return x * x; }),
      make("fd_d2", [](double x) { return 4.0 * std::sin(x / 2) * std::sin(x / 2); }),
      make("slac_trunc_d2", lap_trunc),
  };
}

// Operator norm of exact - truncated via the circulant spectrum, optionally
// restricted to momenta |k| <= k_max.
inline double truncation_error(const CirculantOperator& exact, const CirculantOperator& truncated,
                               std::optional<ProjectionSpec> proj = std::nullopt) {
  if (exact.size() != truncated.size() || exact.order != truncated.order)
    throw ConfigError("truncation_error: mismatched operators");
  const std::int64_t N = exact.size();
  if (exact.order == 1 && !proj) throw ConfigError("first-order truncation error needs a projection");
  if (proj && (proj->k_max <= 0 || proj->k_max > N / 2)) throw ConfigError("k_max out of range");
  const auto a = circulant_spectrum(exact);
  const auto b = circulant_spectrum(truncated);
  double err = 0.0;
  for (std::int64_t k = 0; k < N; ++k) {
    if (proj && std::llabs(signed_momentum(k, N)) > proj->k_max) continue;
    err = std::max(err, std::abs(a[k] - b[k]));
  }
  return err;
}

inline ProjectionSpec default_projection(std::int64_t N) {
  return ProjectionSpec{static_cast<std::int64_t>(std::floor(static_cast<double>(N) / 2.5))};
}

}  // namespace slacq
