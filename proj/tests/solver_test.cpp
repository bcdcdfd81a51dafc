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

// Wavelet preconditioner, nullspace projection, benchmarks and the emulated
// solve, compared with dense and spectral references.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "slacq/acceptance.hpp"

namespace slacq {
namespace {

double max_abs(const CMatrix& A) { return A.cwiseAbs().maxCoeff(); }

TEST(Preconditioner, DiagonalAndAngles) {
  const auto pre = build_preconditioner(3, 1.0);
  const RVector d = pre.diagonal();
  const double want[8] = {1, 1, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25};
  for (int i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(d(i), want[i]);
  EXPECT_NEAR(pre.theta(1), kPi / 3.0, 1e-15);
  EXPECT_EQ(pre.theta(0), 0.0);
  const auto u = u_plus_minus(pre);
  EXPECT_LT((0.5 * (u.plus + u.minus) - d.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(preconditioner_from_weights(3, {0.5, 0.5, 0.25}), ConfigError);
  EXPECT_THROW(preconditioner_from_weights(3, {1.0, 0.5}), ConfigError);
  EXPECT_THROW(build_preconditioner(3, -1.0), ConfigError);
}

TEST(Preconditioner, CircuitBlockIsDiagonal) {
  for (int n = 3; n <= 5; ++n) {
    const auto pre = build_preconditioner(n, 1.0);
    const auto be = precond_block_encoding(pre);
    EXPECT_LT(max_abs(extract_block(be) - pre.dense()), 1e-12) << n;
  }
}

TEST(Preconditioner, SandwichMatchesDense) {
  const int n = 4, r = 3;
  const auto be = assemble(2, n);
  const auto pre = build_preconditioner(n, 1.0);
  const auto enc = preconditioned_encoding(be, r, pre);
  const CMatrix W = multiscale_dense(n, r);
  const CMatrix P = pre.dense();
  EXPECT_LT(max_abs(extract_block(enc) - P * W * extract_block(be) * W.adjoint() * P), 1e-12);
  EXPECT_EQ(enc.cost().call_count("precond"), 2);
  // All-ones weights leave the multiscale form unchanged.
  const auto flat = preconditioner_from_weights(n, std::vector<double>(n, 1.0));
  const CMatrix A = to_dense(truncated_laplacian(LatticeConfig(n)));
  const CMatrix Wf = multiscale_dense(n, n - 1);
  EXPECT_LT(max_abs(precondition_dense(A, flat) - Wf * A * Wf.adjoint()), 1e-13);
}

TEST(SwapTest, NullAndOrthogonalInputs) {
  for (int n = 2; n <= 4; ++n) {
    const std::int64_t N = std::int64_t{1} << n;
    const auto z = swap_test_projection(null_vector(N));
    EXPECT_TRUE(z.zero_rhs);
    EXPECT_NEAR(z.flag_probability, 0.0, 1e-14);
    CVector b = CVector::Zero(N);
    b(0) = 1.0 / std::sqrt(2.0);
    b(1) = -1.0 / std::sqrt(2.0);
    const auto o = swap_test_projection(b);
    EXPECT_FALSE(o.zero_rhs);
    EXPECT_NEAR(o.success_probability, 0.25, 1e-13);
    EXPECT_NEAR(o.flag_probability, 0.5, 1e-13);
    EXPECT_LT((o.state - b).norm(), 1e-12);
  }
}

TEST(Conditioning, ExactOperators) {
  const LatticeConfig cfg(5);
  const CMatrix L = to_dense(exact_laplacian(cfg));
  EXPECT_TRUE(std::isinf(condition_number(L, false)));
  EXPECT_NEAR(condition_number(precondition_dense(L, build_preconditioner(5, 1.0)), true), 4.0, 1e-8);
  const CMatrix D = to_dense(exact_first_order(cfg));
  EXPECT_LE(condition_number(precondition_dense(D, build_preconditioner(5, 0.5)), true), 2.0 + 1e-8);
  // Unpreconditioned projected kappa is the momentum ratio (N/2)^2.
  EXPECT_NEAR(condition_number(L, true), 256.0, 1e-6);
}

TEST(Conditioning, DyadicBands) {
  for (int n = 4; n <= 6; ++n) {
    const auto bands = dyadic_band_check(n);
    ASSERT_EQ(static_cast<int>(bands.size()), n);
    for (const auto& b : bands) {
      EXPECT_GE(b.lo, 0.25 - 1e-9);
      EXPECT_LE(b.hi, 1.0 + 1e-9);
    }
    EXPECT_NEAR(bands.back().hi, 1.0, 1e-9);
    EXPECT_NEAR(bands.back().lo, 0.25, 1e-9);
  }
}

TEST(Benchmarks, EllipticityAndConditioning) {
  const LatticeConfig cfg(6);
  const auto l4 = benchmark_operator(Benchmark::L4, cfg, 0.5);
  EXPECT_NEAR(l4.ellipticity.principal_min, 0.5, 1e-12);
  EXPECT_TRUE(l4.ellipticity.elliptic);
  EXPECT_EQ(benchmark_operator(Benchmark::L1, cfg).ellipticity.principal_min, 1.0);
  EXPECT_NEAR(benchmark_operator(Benchmark::L2, cfg).ellipticity.principal_min, 1.0, 1e-15);
  EXPECT_THROW(benchmark_operator(Benchmark::L4, cfg, 1.0), ConfigError);
  EXPECT_THROW(parse_benchmark("L5"), ConfigError);
  for (auto which : {Benchmark::L1, Benchmark::L2, Benchmark::L3, Benchmark::L4}) {
    const auto row = condition_sweep(which, {6}, 1.0, 0.5, 1).front();
    EXPECT_LT(row.kappa_p, row.kappa) << benchmark_name(which);
  }
  EXPECT_THROW(condition_sweep(Benchmark::L1, {5}), ConfigError);
}

// Spectral solution of u'' = b on the periodic unit interval, zero mean.
CVector spectral_poisson(const CVector& b) {
  const std::int64_t N = b.size();
  CVector u = CVector::Zero(N);
  for (std::int64_t k = 1; k < N; ++k) {
    const CVector e = dft_column(N, k);
    const double s = static_cast<double>(k <= N / 2 ? k : k - N);
    u += (e.dot(b) / (-(2.0 * kPi * s) * (2.0 * kPi * s))) * e;
  }
  return u;
}

TEST(Solve, PoissonAgainstSpectralOracle) {
  std::mt19937_64 rng(11);
  for (int n = 3; n <= 7; ++n) {
    const LatticeConfig cfg(n);
    const std::int64_t N = cfg.N();
    PDEProblem pb;
    pb.n = n;
    pb.op = static_cast<double>(N * N) * to_dense(exact_laplacian(cfg));
    pb.b = oracle::random_unit(N, rng, false);
    pb.project_nullspace = true;
    const auto rep = emulated_solve(pb);
    const CVector bp = pb.b - CVector::Constant(N, pb.b.mean());
    const CVector us = spectral_poisson(bp);
    EXPECT_LT(rep.residual, 1e-8);
    EXPECT_LT((rep.u - us).norm() / us.norm(), 1e-8);
    EXPECT_LT(rep.branch_mismatch, 1e-10);
    EXPECT_GT(rep.fidelity, 1.0 - 1e-10);
    EXPECT_EQ(rep.qswt_calls, 2 * (n - 1));
    EXPECT_EQ(rep.precond_calls, 2);
  }
}

TEST(Solve, TwoDimensionalKroneckerSum) {
  const int n = 3;
  const LatticeConfig cfg(n);
  const std::int64_t N = cfg.N();
  std::mt19937_64 rng(5);
  PDEProblem pb;
  pb.dim = 2;
  pb.n = n;
  pb.op = static_cast<double>(N * N) * to_dense(exact_laplacian(cfg));
  pb.b = oracle::random_unit(N * N, rng, false);
  pb.project_nullspace = true;
  const auto rep = emulated_solve(pb);
  EXPECT_LT(rep.residual, 1e-10);
  EXPECT_EQ(rep.qswt_calls, 4 * (n - 1));
}

TEST(Solve, ZeroRightHandSideAndErrors) {
  const LatticeConfig cfg(4);
  PDEProblem pb;
  pb.n = 4;
  pb.op = to_dense(exact_laplacian(cfg));
  pb.b = null_vector(cfg.N());
  pb.project_nullspace = true;
  EXPECT_TRUE(emulated_solve(pb).zero_rhs);
  pb.dim = 3;
  EXPECT_THROW(emulated_solve(pb), ConfigError);
  pb.dim = 1;
  pb.b = CVector::Ones(5);
  EXPECT_THROW(emulated_solve(pb), ConfigError);
  // Without the projection the singular Laplacian is rejected.
  std::mt19937_64 rng(2);
  pb.b = oracle::random_unit(cfg.N(), rng, false);
  pb.project_nullspace = false;
  EXPECT_THROW(emulated_solve(pb), std::runtime_error);
}

}  // namespace
}  // namespace slacq
