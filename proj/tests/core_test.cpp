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

// Lattice operators, the statevector simulator and the nested-box
// preparation, each against brute-force references.

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numeric>

#include "slacq/acceptance.hpp"

namespace slacq {
namespace {

// Signed lattice momentum q in (-pi, pi] of DFT index k.
double momentum(std::int64_t k, std::int64_t N) {
  const std::int64_t s = k <= N / 2 ? k : k - N;
  return 2.0 * kPi * static_cast<double>(s) / static_cast<double>(N);
}

CVector plane_wave(std::int64_t N, std::int64_t k) {
  CVector v(N);
  for (std::int64_t r = 0; r < N; ++r) v(r) = std::exp(kI * (2.0 * kPi * static_cast<double>(r * k) / N));
  return v;
}

TEST(Kernel, ClosedFormValues) {
  EXPECT_NEAR(infinite_kernel(0, 2).real(), -kPi * kPi / 3.0, 1e-15);
  EXPECT_NEAR(infinite_kernel(1, 2).real(), 2.0, 1e-15);
  EXPECT_NEAR(infinite_kernel(2, 2).real(), -0.5, 1e-15);
  EXPECT_NEAR(infinite_kernel(1, 1).real(), 1.0, 1e-15);
  EXPECT_THROW(infinite_kernel(1, 3), ConfigError);
}

TEST(ExactLaplacian, CoefficientsAtN8) {
  const auto op = exact_laplacian(LatticeConfig(3));
  EXPECT_NEAR(op.coeffs[0].real(), -kPi * kPi / 3.0 - 2.0 * kPi * kPi / 192.0, 1e-14);
  EXPECT_NEAR(op.coeffs[4].real(), -kPi * kPi / 32.0, 1e-14);
}

TEST(ExactOperators, PlaneWavesAreEigenvectors) {
  for (int n = 3; n <= 6; ++n) {
    const LatticeConfig cfg(n);
    const std::int64_t N = cfg.N();
    const CMatrix L = to_dense(exact_laplacian(cfg)), D = to_dense(exact_first_order(cfg));
    for (std::int64_t k = 0; k < N; ++k) {
      const CVector v = plane_wave(N, k);
      const double q = momentum(k, N);
      EXPECT_LT((L * v + q * q * v).norm() / v.norm(), 1e-10) << "n=" << n << " k=" << k;
      EXPECT_LT((D * v + kI * q * v).norm() / v.norm(), 1e-10) << "n=" << n << " k=" << k;
    }
  }
}

TEST(TruncatedOperators, CoefficientTables) {
  const auto lap = truncated_laplacian(LatticeConfig(3));
  EXPECT_NEAR(lap.coeffs[0].real(), -kPi * kPi / 3.0, 1e-15);
  EXPECT_NEAR(lap.coeffs[1].real(), 2.0, 1e-15);
  EXPECT_EQ(lap.coeffs[4], cplx(0.0));
  const auto fo = truncated_first_order(LatticeConfig(3));
  EXPECT_EQ(fo.coeffs[0], cplx(0.0));
  EXPECT_EQ(fo.coeffs[4], cplx(0.0));
  EXPECT_NEAR(std::abs(fo.coeffs[1] - std::exp(kI * kPi / 8.0)), 0.0, 1e-15);
  EXPECT_NEAR(exact_first_order(LatticeConfig(3)).coeffs[0].imag(), -kPi / 8.0, 1e-15);
}

TEST(TruncatedOperators, HermiticityAndZeroRowSum) {
  for (int n = 2; n <= 7; ++n) {
    const LatticeConfig cfg(n);
    const CMatrix L = to_dense(truncated_laplacian(cfg)), D = to_dense(truncated_first_order(cfg));
    EXPECT_LT((L - L.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((D + D.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    const auto ex = exact_laplacian(cfg);
    const cplx sum = std::accumulate(ex.coeffs.begin(), ex.coeffs.end(), cplx(0.0));
    EXPECT_LT(std::abs(sum), 1e-10);
  }
}

TEST(Circulant, SpectrumMatchesBruteForceSum) {
  for (int order : {1, 2}) {
    const auto op = slac_operator(order, Variant::truncated, LatticeConfig(5));
    const auto spec = circulant_spectrum(op);
    const std::int64_t N = op.size();
    for (std::int64_t k = 0; k < N; ++k) {
      cplx acc = 0.0;
      for (std::int64_t j = 0; j < N; ++j) acc += op.coeffs[j] * std::exp(-kI * (2.0 * kPi * double(j * k) / double(N)));
      EXPECT_LT(std::abs(acc - spec[k]), 1e-12);
    }
  }
  for (int order : {1, 2})
    EXPECT_LT(std::abs(circulant_spectrum(slac_operator(order, Variant::exact, LatticeConfig(5)))[0]), 1e-12);
}

TEST(Circulant, DenseFromUnitCoefficients) {
  const std::int64_t N = 8;
  EXPECT_TRUE(shift_matrix(N, 0).isApprox(CMatrix::Identity(N, N)));
  const CMatrix P = shift_matrix(N, 1);
  for (std::int64_t c = 0; c < N; ++c) EXPECT_EQ(P((c + 1) % N, c), cplx(1.0));
}

TEST(Symbols, HeaderOrderAndEndpoints) {
  const auto t = symbol_table(LatticeConfig(6), 256);
  const std::vector<std::string> labels{"continuum_d1", "fd_d1", "slac_trunc_d1",
                                        "continuum_d2", "fd_d2", "slac_trunc_d2"};
  ASSERT_EQ(t.size(), labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) EXPECT_EQ(t[i].label, labels[i]);
  // Grid point 127 of 256 is q = 0, the last is q = pi.
  EXPECT_NEAR(t[0].q_grid[127], 0.0, 1e-15);
  for (int s : {0, 1, 2, 3, 4}) EXPECT_NEAR(t[s].values[127].real(), 0.0, 1e-12);
  EXPECT_LT(std::abs(t[5].values[127].real()), 4.0 / 64.0);
  EXPECT_NEAR(t[1].values[255].real(), 0.0, 1e-12);
  EXPECT_NEAR(t[0].values[255].real(), kPi, 1e-15);
  // q = pi / 2 sits at index 191.
  EXPECT_LT(std::abs(t[5].values[191].real() - kPi * kPi / 4.0), 0.05);
}

TEST(TruncationError, ProjectionRulesAndScaling) {
  const LatticeConfig cfg(7);
  const auto e1 = exact_first_order(cfg), t1 = truncated_first_order(cfg);
  EXPECT_THROW(truncation_error(e1, t1), ConfigError);
  EXPECT_EQ(default_projection(512).k_max, 204);
  EXPECT_EQ(truncation_error(e1, e1, default_projection(cfg.N())), 0.0);
  const auto e128 = truncation_error(exact_laplacian(LatticeConfig(7)), truncated_laplacian(LatticeConfig(7)));
  const auto e256 = truncation_error(exact_laplacian(LatticeConfig(8)), truncated_laplacian(LatticeConfig(8)));
  EXPECT_NEAR(e128 / e256, 2.0, 0.4);
}

TEST(Config, RejectsInvalidSizes) {
  EXPECT_THROW(LatticeConfig(1), ConfigError);
  EXPECT_THROW(PrepConfig(2, 2), ConfigError);
  EXPECT_THROW(PrepConfig(4, 3), ConfigError);
  EXPECT_THROW(symbol_table(LatticeConfig(4), 8), ConfigError);
  RegisterLayout lay;
  lay.add("a", 20);
  EXPECT_THROW(lay.add("b", 7), ConfigError);
  EXPECT_THROW(lay.add("a", 1), ConfigError);
}

// ---------------------------------------------------------------------------

TEST(Simulator, BasicGates) {
  RegisterLayout lay;
  lay.add("q", 2);
  Statevector s(lay);
  apply_gate(s, GateKind::H, 0);
  EXPECT_NEAR(std::abs(s.data()[0] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.data()[1] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  Statevector t(lay, 1);  // control q0 = 1, target q1 = 0
  apply_gate(t, GateKind::X, 1, {Control{0, true}});
  EXPECT_EQ(t.data()[3], cplx(1.0));
}

TEST(Simulator, QftMatchesDftTable) {
  RegisterLayout lay;
  lay.add("x", 2);
  Statevector s(lay, 1);
  qft_circuit(lay.qubits("x")).apply(s);
  const cplx want[4] = {0.5, 0.5 * kI, -0.5, -0.5 * kI};
  for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(s.data()[i] - want[i]), 1e-15);

  RegisterLayout l5;
  l5.add("x", 5);
  for (std::uint64_t b : {0u, 3u, 17u}) {
    Statevector u(l5, b);
    const Circuit f = qft_circuit(l5.qubits("x"));
    f.apply(u);
    for (int y = 0; y < 32; ++y)
      EXPECT_LT(std::abs(u.data()[y] - std::exp(kI * (2.0 * kPi * double(b * y) / 32.0)) / std::sqrt(32.0)), 1e-13);
    f.adjoint().apply(u);
    EXPECT_LT(std::abs(u.data()[b] - 1.0), 1e-12);
  }
}

TEST(Simulator, ModularAdderAndControls) {
  RegisterLayout lay;
  lay.add("x", 3).add("c", 1);
  Statevector s(lay, lay.index({{"x", 3}}));
  apply_op(s, modular_add_op(lay.qubits("x"), 5));
  EXPECT_EQ(s.data()[lay.index({{"x", 0}})], cplx(1.0));
  Statevector t(lay, lay.index({{"x", 6}, {"c", 1}}));
  apply_op(t, modular_add_op(lay.qubits("x"), 1, {Control{lay.qubit("c", 0), false}}));
  EXPECT_EQ(t.data()[lay.index({{"x", 6}, {"c", 1}})], cplx(1.0));
  Statevector u(lay, lay.index({{"x", 6}}));
  apply_op(u, modular_add_op(lay.qubits("x"), 0));
  EXPECT_EQ(u.data()[lay.index({{"x", 6}})], cplx(1.0));
}

TEST(Simulator, ComparatorPredicateExamples) {
  RegisterLayout lay;
  lay.add("m", 4).add("j", 2).add("mu", 1).add("f", 1);
  auto pred = [](const std::vector<std::uint64_t>& v) {
    return (std::uint64_t{1} << (2 * v[2])) * 16 > v[0] * v[1] * v[1];
  };
  auto run = [&](std::uint64_t m, std::uint64_t j, std::uint64_t mu) {
    Statevector s(lay, lay.index({{"m", m}, {"j", j}, {"mu", mu}}));
    apply_reversible_function(s, {"m", "j", "mu"}, "f", pred);
    return s.data()[lay.index({{"m", m}, {"j", j}, {"mu", mu}, {"f", 1}})] == cplx(1.0);
  };
  EXPECT_TRUE(run(15, 1, 0));
  EXPECT_TRUE(run(9, 2, 1));
  EXPECT_FALSE(run(4, 2, 0));
}

TEST(Simulator, LazyPredicateAgreesWithTable) {
  // 21 inputs exceed the table threshold; 5 inputs stay below it.
  auto parity = [](std::uint64_t v) { return (std::popcount(v) & 1) != 0; };
  for (int w : {5, 21}) {
    RegisterLayout lay;
    lay.add("x", w).add("f", 1);
    const std::uint64_t x = (std::uint64_t{1} << (w - 1)) | 5u;
    Statevector s(lay, lay.index({{"x", x}}));
    apply_op(s, predicate_op(lay.qubits("x"), lay.qubit("f", 0), parity));
    EXPECT_EQ(s.data()[lay.index({{"x", x}, {"f", 1}})], cplx(1.0)) << w;
  }
}

TEST(Simulator, ProjectionProbabilities) {
  RegisterLayout lay;
  lay.add("a", 1).add("b", 2);
  Statevector s(lay);
  apply_gate(s, GateKind::H, 0);
  EXPECT_NEAR(project_and_extract(s, {{"a", 0}}).probability, 0.5, 1e-15);
  Statevector t(lay, lay.index({{"a", 1}, {"b", 2}}));
  EXPECT_NEAR(project_and_extract(t, {{"a", 1}, {"b", 2}}).probability, 1.0, 1e-15);
  EXPECT_THROW(Statevector(RegisterLayout(40).add("big", 27)), ConfigError);
}

TEST(Tally, InequalityFormula) {
  EXPECT_EQ(tally_inequality_cost(5, 5, 2).squarer, 12);
  EXPECT_EQ(tally_inequality_cost(5, 5, 2).total(), 100);
  EXPECT_EQ(tally_inequality_cost(5, 5, 1).total(), 44);
}

// ---------------------------------------------------------------------------

TEST(Prep, BoxesAndAcceptCounts) {
  EXPECT_EQ(box_of(1), 0);
  EXPECT_EQ(box_of(5), 2);
  EXPECT_EQ(box_of(4), 2);
  EXPECT_EQ(accept_count(0, 1, 16, 2), 16);
  EXPECT_EQ(accept_count(1, 3, 16, 2), 8);
  EXPECT_EQ(accept_count(2, 5, 16, 1), 13);
  // Strict inequality count by exhaustive loop.
  for (int order : {1, 2})
    for (std::int64_t j = 1; j < 64; ++j) {
      const int mu = box_of(j);
      const std::int64_t M = 32, lhs = (order == 2 ? (1 << (2 * mu)) : (1 << mu)) * M;
      std::int64_t cnt = 0;
      for (std::int64_t m = 0; m < M; ++m) cnt += lhs > m * (order == 2 ? j * j : j);
      EXPECT_EQ(accept_count(mu, j, M, order), cnt);
    }
}

TEST(Prep, SuccessProbabilityMatchesMLoop) {
  for (int order : {1, 2})
    for (int n : {3, 4, 5})
      for (int nref : {3, 5}) {
        const PrepConfig cfg(n, order, nref);
        EXPECT_NEAR(simulate_prep(cfg).success_probability, oracle::success_probability_mloop(n, order, cfg.M()), 1e-12);
      }
}

TEST(Prep, BranchWeightsFollowTargetProfile) {
  const PrepConfig c2(5, 2, 12);
  const auto o2 = simulate_prep(c2);
  EXPECT_NEAR(o2.weight(0), kPi * kPi / (kPi * kPi + 24.0), 1e-12);
  EXPECT_NEAR(std::sqrt(o2.weight(2) / o2.weight(1)), 0.5, 0.02);
  const PrepConfig c1(5, 1, 12);
  const auto o1 = simulate_prep(c1);
  EXPECT_NEAR(o1.weight(4) / o1.weight(1), 0.25, 0.02);
  EXPECT_EQ(o1.weight(0), 0.0);
  const auto t = analytic_target(2, 4);
  EXPECT_NEAR(t[0] / t[1], std::sqrt(kPi * kPi / 3.0) / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(analytic_target(1, 4)[0], 0.0);
}

TEST(Prep, FiniteMErrorDecreasesAndRespectsBound) {
  for (int order : {1, 2}) {
    double prev = 1.0;
    for (int nref : {4, 8, 12}) {
      const PrepConfig cfg(4, order, nref);
      const auto out = simulate_prep(cfg);
      const double e = prep_error(out);
      EXPECT_LT(e, prev);
      prev = e;
      const auto lim = prep_limit_weights(cfg);
      const double p_lim = std::accumulate(lim.begin(), lim.end(), 0.0);
      EXPECT_LE(std::abs(out.success_probability - p_lim), prep_error_bound(cfg)) << order << " " << nref;
    }
  }
}

}  // namespace
}  // namespace slacq
