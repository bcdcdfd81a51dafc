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

// LCU oracles, assembled encodings, combinations, masking and the wavelet
// transform, compared with dense linear algebra.

#include <gtest/gtest.h>

#include <random>

#include "slacq/acceptance.hpp"

namespace slacq {
namespace {

double max_abs(const CMatrix& A) { return A.cwiseAbs().maxCoeff(); }

RegisterLayout oracle_layout(int n) {
  RegisterLayout lay;
  lay.add("j", n - 1).add("d", 1).add("f", 1).add("C", 1).add("sys", n);
  return lay;
}

TEST(Oracles, SelectRealisesShifts) {
  const auto lay = oracle_layout(3);
  const CMatrix P1 = shift_matrix(8, 1);
  for (std::uint64_t d : {0u, 1u}) {
    Statevector s(lay, lay.index({{"j", 1}, {"d", d}, {"sys", 5}}));
    select_oracle(lay).apply(s);
    const std::uint64_t want = d == 0 ? 6 : 4;
    EXPECT_EQ(s.data()[lay.index({{"j", 1}, {"d", d}, {"sys", want}})], cplx(1.0));
  }
  EXPECT_EQ(P1(6, 5), cplx(1.0));
  // j = 0 acts as the identity for both directions.
  Statevector s(lay, lay.index({{"j", 0}, {"d", 1}, {"sys", 3}}));
  select_oracle(lay).apply(s);
  EXPECT_EQ(s.data()[lay.index({{"j", 0}, {"d", 1}, {"sys", 3}})], cplx(1.0));
}

TEST(Oracles, SignAndPhase) {
  const auto lay = oracle_layout(4);
  const Circuit z = sign_oracle(lay);
  for (std::uint64_t j : {1u, 2u}) {
    Statevector s(lay, lay.index({{"j", j}}));
    z.apply(s);
    // Raw Z phase; the encodings carry the extra global -1 in BlockEncodingSpec::sign.
    EXPECT_EQ(s.data()[lay.index({{"j", j}})], cplx(j == 1 ? -1.0 : 1.0));
    z.apply(s);
    EXPECT_EQ(s.data()[lay.index({{"j", j}})], cplx(1.0));
  }
  EXPECT_EQ(assemble(2, 3).sign, cplx(-1.0));

  const std::int64_t N = 8;
  const auto l3 = oracle_layout(3);
  const Circuit ph = phase_oracle(l3, N);
  const double alpha = kPi * 9.0 / 8.0;
  for (std::uint64_t j = 0; j < 4; ++j)
    for (std::uint64_t d : {0u, 1u}) {
      Statevector s(l3, l3.index({{"j", j}, {"d", d}}));
      ph.apply(s);
      const cplx want = d == 0 ? std::exp(kI * (alpha * double(j))) : -std::exp(-kI * (alpha * double(j)));
      EXPECT_LT(std::abs(s.data()[l3.index({{"j", j}, {"d", d}})] - want), 1e-13);
    }
}

TEST(Oracles, CopyFlagsFailureBranch) {
  const auto lay = oracle_layout(3);
  for (std::uint64_t f : {0u, 1u}) {
    Statevector s(lay, lay.index({{"f", f}}));
    copy_oracle(lay).apply(s);
    EXPECT_EQ(s.data()[lay.index({{"f", f}, {"C", f}})], cplx(1.0));
  }
}

TEST(Encoding, AnalyticBlockEqualsTarget) {
  for (int order : {1, 2})
    for (int n : {3, 4}) {
      const auto be = assemble(order, n);
      EXPECT_NEAR(be.alpha, order == 2 ? (kPi * kPi + 24.0) / 3.0 : 2.0 * (n - 1), 1e-14);
      const CMatrix B = extract_block(be);
      const CMatrix T = to_dense(slac_operator(order, Variant::truncated, LatticeConfig(n)));
      EXPECT_LT(max_abs(be.alpha * B - T), 1e-12) << order << " " << n;
    }
}

TEST(Encoding, GateLevelBlockEqualsLcuContraction) {
  for (int order : {1, 2}) {
    const PrepConfig cfg(3, order, 6);
    const auto be = assemble(order, cfg, PrepMode::gate_level);
    const CMatrix B = extract_block(be);
    const auto w = simulate_prep(cfg).weight_jd;
    // Independent contraction: sum over (j, d) of weight * phase * shift.
    const std::int64_t N = 8;
    CMatrix want = CMatrix::Zero(N, N);
    const double a = kPi * (1.0 + 1.0 / N);
    for (std::int64_t j = 0; j < 4; ++j)
      for (int d = 0; d < 2; ++d) {
        cplx ph;
        if (order == 2) ph = j == 0 ? cplx(-1.0) : cplx(-sign_pow(j));  // Z on the LSB, tracked -1
        else ph = -(d == 0 ? std::exp(kI * (a * double(j))) : -std::exp(-kI * (a * double(j))));
        want += w[j][d] * ph * shift_matrix(N, d == 0 ? j : (N - j) % N);
      }
    EXPECT_LT(max_abs(B - want), 1e-12) << order;
    // The finite-M error shrinks with a larger reference register.
    const CMatrix T = to_dense(slac_operator(order, Variant::truncated, LatticeConfig(3)));
    const auto fine = assemble(order, PrepConfig(3, order, 10), PrepMode::gate_level);
    EXPECT_LT(oracle::op_norm(fine.alpha * extract_block(fine) - T), oracle::op_norm(be.alpha * B - T));
  }
}

TEST(Combination, PairSumDegenerateAndMixed) {
  const auto b2 = assemble(2, 3), b1 = assemble(1, 3);
  const CMatrix B2 = extract_block(b2), B1 = extract_block(b1);
  EXPECT_LT(max_abs(extract_block(pair_sum(b2, b1, 1.0, 0.0)) - B2), 1e-12);
  EXPECT_LT(max_abs(extract_block(pair_sum(b2, b1, 0.0, 1.0)) - B1), 1e-12);
  const auto ps = pair_sum(b2, b1, 0.4, 2.0);
  const CMatrix want = (0.4 * b2.alpha * B2 + 2.0 * b1.alpha * B1) / ps.alpha;
  EXPECT_LT(max_abs(extract_block(ps) - want), 1e-12);
  EXPECT_THROW(pair_sum(b2, b1, -1.0, 1.0), ConfigError);
  EXPECT_THROW(pair_sum(b2, b1, 0.0, 0.0), ConfigError);
  EXPECT_THROW(pair_sum(b2, assemble(2, 4), 1.0, 1.0), ConfigError);
}

TEST(Combination, GeneralCombinationLinearity) {
  const auto b2 = assemble(2, 3);
  const CMatrix T = to_dense(truncated_laplacian(LatticeConfig(3)));
  const auto single = general_combination(LcuCombination{{1.0}, 1.0, {b2}});
  EXPECT_LT(max_abs(single.alpha * extract_block(single) - T), 1e-12);
  const auto twice = general_combination(LcuCombination{{1.0, 1.0}, 2.0, {b2, b2}});
  EXPECT_LT(max_abs(extract_block(twice) - T / b2.alpha), 1e-12);
  EXPECT_THROW(general_combination(LcuCombination{{1.0, 1.0}, 1.0, {b2, b2}}), ConfigError);
}

TEST(Mask, FullEmptyAndSawtooth) {
  const LatticeConfig cfg(3);
  const std::int64_t N = cfg.N();
  for (int order : {1, 2}) {
    const auto op = slac_operator(order, Variant::truncated, cfg);
    MaskSpec full{std::vector<std::int64_t>(N, N / 2)}, empty{std::vector<std::int64_t>(N, 0)}, saw;
    for (std::int64_t k = 0; k < N; ++k) saw.cutoffs.push_back(k % (N / 2));
    CMatrix anti = CMatrix::Zero(N, N);
    for (std::int64_t j = 1; j <= N / 2; ++j) anti += op.coeffs[j] * (shift_matrix(N, j) - shift_matrix(N, N - j));
    EXPECT_LT(max_abs(masked_dense(order, cfg, full) - anti), 1e-14);
    EXPECT_EQ(max_abs(masked_dense(order, cfg, empty)), 0.0);
    for (const auto* m : {&full, &empty, &saw}) {
      const auto mo = masked_operator(order, cfg, *m);
      EXPECT_LT(max_abs(mo.encoding.alpha * extract_block(mo.encoding) - mo.dense), 1e-12);
    }
  }
  EXPECT_THROW(masked_dense(2, cfg, MaskSpec{std::vector<std::int64_t>(N, N)}), ConfigError);
  EXPECT_THROW(masked_dense(2, cfg, MaskSpec{{1, 2}}), ConfigError);
}

TEST(Normalization, LcuBeatsGenericBound) {
  for (const auto& row : normalization_table(4, 10)) {
    EXPECT_NEAR(row.alpha2, (kPi * kPi + 24.0) / 3.0, 1e-14);
    EXPECT_NEAR(row.alpha1, 2.0 * (row.n - 1), 1e-14);
    EXPECT_GE(row.alpha2, row.norm2 - 1e-12);
    EXPECT_GE(row.alpha1, row.norm1 - 1e-12);
    EXPECT_LT(row.alpha2, row.generic2);
  }
}

// ---------------------------------------------------------------------------

TEST(Qswt, UnitaryAndSeparating) {
  for (int n = 2; n <= 7; ++n) {
    const std::int64_t N = std::int64_t{1} << n, h = N / 2;
    const CMatrix S = qswt_dense(n);
    EXPECT_LT(max_abs(S.adjoint() * S - CMatrix::Identity(N, N)), 1e-12);
    const CMatrix A = S * to_dense(truncated_laplacian(LatticeConfig(n))) * S.adjoint();
    EXPECT_LT(max_abs(A.topRightCorner(h, h)), 1e-10);
    // IR block keeps the momenta |k| <= N/4.
    for (std::int64_t k = 0; k < N; ++k) {
      const std::int64_t s = k <= N / 2 ? k : k - N;
      const CVector v = S * dft_column(N, k);
      const double ir = v.head(h).squaredNorm();
      if (std::llabs(s) < N / 4) EXPECT_NEAR(ir, 1.0, 1e-12);
      if (std::llabs(s) > N / 4) EXPECT_NEAR(ir, 0.0, 1e-12);
    }
  }
}

TEST(Qswt, CircuitMatchesDense) {
  for (int n = 2; n <= 5; ++n) {
    RegisterLayout lay;
    lay.add("x", n);
    const std::int64_t N = std::int64_t{1} << n;
    const Circuit c = qswt_circuit(lay.qubits("x"));
    const CMatrix S = qswt_dense(n);
    for (std::int64_t col = 0; col < N; ++col) {
      Statevector s(lay, static_cast<std::uint64_t>(col));
      c.apply(s);
      for (std::int64_t r = 0; r < N; ++r) EXPECT_LT(std::abs(s.data()[r] - S(r, col)), 1e-12);
    }
  }
}

TEST(Multiscale, BlocksCouplingsAndControls) {
  const auto plan = plan_multiscale(6, 5);
  EXPECT_EQ(plan.block_dims, (std::vector<std::int64_t>{2, 2, 4, 8, 16, 32}));
  const CMatrix A = to_dense(truncated_laplacian(LatticeConfig(6)));
  EXPECT_LT(block_coupling_report(plan.W * A * plan.W.adjoint(), plan).maxCoeff(), 1e-10);
  EXPECT_EQ(block_coupling_report(CMatrix::Identity(64, 64), plan).maxCoeff(), 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  CMatrix R(64, 64);
  for (Eigen::Index i = 0; i < R.size(); ++i) R.data()[i] = cplx(g(rng), g(rng));
  const CMatrix H = R + R.adjoint();
  EXPECT_GT(block_coupling_report(plan.W * H * plan.W.adjoint(), plan).maxCoeff(), 1e-3);
  EXPECT_THROW(plan_multiscale(6, 6), ConfigError);
  EXPECT_THROW(plan_multiscale(6, 0), ConfigError);
}

TEST(Multiscale, CoherentEncodingMatchesDense) {
  const int n = 4, r = 3;
  const auto be = assemble(2, n);
  const auto ms = multiscale(be, r);
  const CMatrix W = multiscale_dense(n, r);
  const CMatrix want = W * extract_block(be) * W.adjoint();
  EXPECT_LT(max_abs(extract_block(ms) - want), 1e-12);
  EXPECT_EQ(ms.cost().call_count("qswt"), 2 * r);
}

}  // namespace
}  // namespace slacq
