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

// The twelve acceptance criteria, shared by the selftest command and the
// acceptance test binary. Reference values come from the small oracles in
// slacq::oracle, which are written independently of the library paths they
// check (closed-form spectra, exhaustive loops, dense algebra).

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "slacq/block_encoding.hpp"
#include "slacq/common.hpp"
#include "slacq/precond_solver.hpp"
#include "slacq/qsim.hpp"
#include "slacq/qswt.hpp"
#include "slacq/slac_core.hpp"
#include "slacq/state_prep.hpp"

namespace slacq {

namespace oracle {

inline constexpr double kEulerGamma = 0.57721566490153286061;

// Success probability of the nested-box preparation by direct enumeration of
// every (mu, j, m) triple against the strict inequality.
inline double success_probability_mloop(int n, int order, std::int64_t M) {
  const int k = n - 1;
  const double tail = 1.0 - std::ldexp(1.0, -k);
  double p = 0.0;
  for (int mu = 0; mu < k; ++mu) {
    const double pmu = order == 2 ? std::ldexp(1.0, -mu) / (2.0 * tail) : 1.0 / k;
    const std::int64_t lo = std::int64_t{1} << mu;
    for (std::int64_t j = lo; j < 2 * lo; ++j) {
      std::int64_t pass = 0;
      const std::int64_t lhs = M * (order == 2 ? lo * lo : lo);
      const std::int64_t jj = order == 2 ? j * j : j;
      for (std::int64_t m = 0; m < M; ++m)
        if (lhs > m * jj) ++pass;
      p += pmu / static_cast<double>(lo) * static_cast<double>(pass) / static_cast<double>(M);
    }
  }
  if (order == 2) {
    const double a1 = 24.0 / (kPi * kPi + 24.0);
    p = (1.0 - a1) + a1 * p;
  }
  return p;
}

inline double op_norm(const CMatrix& A) { return A.size() ? singular_values(A)(0) : 0.0; }

// Poisson solution on the periodic unit interval from the continuum spectrum
// -(2 pi k)^2; the k = 0 component is dropped.
inline CVector poisson_1d(const CVector& b) {
  const std::int64_t N = b.size();
  Eigen::FFT<double> fft;
  std::vector<cplx> in(b.data(), b.data() + N), hat;
  fft.fwd(hat, in);
  for (std::int64_t k = 0; k < N; ++k) {
    const double ks = static_cast<double>(k <= N / 2 ? k : k - N);
    hat[k] = k == 0 ? cplx{0.0} : hat[k] / (-(2.0 * kPi * ks) * (2.0 * kPi * ks));
  }
  std::vector<cplx> out;
  fft.inv(out, hat);
  return Eigen::Map<CVector>(out.data(), N);
}

// Same on the 2-torus; b is indexed x * N + y.
inline CVector poisson_2d(const CVector& b, std::int64_t N) {
  Eigen::FFT<double> fft;
  CMatrix B = Eigen::Map<const CMatrix>(b.data(), N, N);  // B(y, x)
  auto fft_cols = [&](CMatrix& X, bool inverse) {
    for (std::int64_t c = 0; c < X.cols(); ++c) {
      std::vector<cplx> in(X.col(c).data(), X.col(c).data() + X.rows()), out;
      if (inverse) fft.inv(out, in);
      else fft.fwd(out, in);
      X.col(c) = Eigen::Map<CVector>(out.data(), X.rows());
    }
  };
  fft_cols(B, false);
  CMatrix T = B.transpose();
  fft_cols(T, false);
  for (std::int64_t kx = 0; kx < N; ++kx)
    for (std::int64_t ky = 0; ky < N; ++ky) {
      const double a = static_cast<double>(ky <= N / 2 ? ky : ky - N);
      const double c = static_cast<double>(kx <= N / 2 ? kx : kx - N);
      const double lam = -4.0 * kPi * kPi * (a * a + c * c);
      T(ky, kx) = (kx == 0 && ky == 0) ? cplx{0.0} : T(ky, kx) / lam;
    }
  fft_cols(T, true);
  B = T.transpose();
  fft_cols(B, true);
  return Eigen::Map<CVector>(B.data(), N * N);
}

inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

inline CVector random_unit(std::int64_t N, std::mt19937_64& rng, bool complex_entries = true) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(N);
  for (std::int64_t i = 0; i < N; ++i) {
    const double re = g(rng);
    const double im = complex_entries ? g(rng) : 0.0;
    v(i) = cplx{re, im};
  }
  return v / v.norm();
}

}  // namespace oracle

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, double>> metrics;
  std::string note;
  double seconds = 0.0;

  void metric(const std::string& k, double v) { metrics.emplace_back(k, v); }
};

struct AcceptanceOptions {
  std::uint64_t seed = 20260101;
  int workers = worker_count();
};

namespace accept {

inline CriterionResult block_identity(int order) {
  CriterionResult r;
  r.id = order == 2 ? 1 : 2;
  r.name = order == 2 ? "block_identity_laplacian" : "block_identity_first_order";
  double worst = 0.0, worst_sv = 0.0;
  for (int n : {3, 4, 5}) {
    const auto be = assemble(order, n);
    const CMatrix B = extract_block(be);
    const CMatrix T = to_dense(slac_operator(order, Variant::truncated, LatticeConfig(n)));
    const double alpha = order == 2 ? (kPi * kPi + 24.0) / 3.0 : 2.0 * (n - 1);
    const double err = oracle::op_norm(alpha * B - T);
    r.metric("error_n" + std::to_string(n), err);
    worst = std::max(worst, err);
    worst_sv = std::max(worst_sv, oracle::op_norm(B));
  }
  r.metric("max_error", worst);
  r.metric("max_singular_value", worst_sv);
  r.pass = worst <= 1e-10 && worst_sv <= 1.0 + 1e-9;
  return r;
}

inline CriterionResult finite_m_slope() {
  CriterionResult r;
  r.id = 3;
  r.name = "finite_m_slope";
  bool ok = true;
  for (int order : {1, 2}) {
    std::vector<double> Ms, errs;
    double bound_ratio = 0.0;
    for (int nref = 6; nref <= 12; ++nref) {
      const PrepConfig cfg(4, order, nref);
      const auto out = simulate_prep(cfg);
      Ms.push_back(static_cast<double>(cfg.M()));
      errs.push_back(prep_error(out));
      double p_lim = 0.0;
      for (double w : prep_limit_weights(cfg)) p_lim += w;
      bound_ratio = std::max(bound_ratio, std::abs(out.success_probability - p_lim) / prep_error_bound(cfg));
      if (nref == 12) {
        std::vector<double> w(out.weight_jd.size());
        for (std::size_t j = 0; j < w.size(); ++j) w[j] = out.weight(static_cast<std::int64_t>(j));
        r.metric("order" + std::to_string(order) + "_target_distance_M4096",
                 amplitude_distance(w, [&] {
                   // Both directions d share |coeff_j| for j >= 1.
                   const auto t = analytic_target(order, 4);
                   std::vector<double> t2(w.size());
                   for (std::size_t j = 0; j < t2.size(); ++j) t2[j] = (j == 0 ? 1.0 : 2.0) * t[j] * t[j];
                   return t2;
                 }()));
      }
    }
    const double slope = oracle::log_log_slope(Ms, errs);
    r.metric("order" + std::to_string(order) + "_slope", slope);
    r.metric("order" + std::to_string(order) + "_mass_deviation_over_bound", bound_ratio);
    r.metric("order" + std::to_string(order) + "_error_M64", errs.front());
    r.metric("order" + std::to_string(order) + "_error_M4096", errs.back());
    ok = ok && std::abs(slope + 1.0) <= 0.2;
  }
  r.pass = ok;
  if (!ok) r.note = "order-2 ceiling remainders fluctuate with M; see README";
  return r;
}

inline CriterionResult success_probabilities() {
  CriterionResult r;
  r.id = 4;
  r.name = "success_probabilities";
  double worst = 0.0;
  for (int order : {1, 2})
    for (int n : {3, 4, 5})
      for (int nref : {4, 6, 8}) {
        const PrepConfig cfg(n, order, nref);
        const double p = simulate_prep(cfg).success_probability;
        worst = std::max(worst, std::abs(p - oracle::success_probability_mloop(n, order, cfg.M())));
      }
  const PrepConfig c2(7, 2, 10), c1(7, 1, 10);
  const double p2 = simulate_prep(c2).success_probability;
  const double p1 = simulate_prep(c1).success_probability;
  worst = std::max(worst, std::abs(p2 - oracle::success_probability_mloop(7, 2, c2.M())));
  worst = std::max(worst, std::abs(p1 - oracle::success_probability_mloop(7, 1, c1.M())));
  const double p1_ref = std::log(2.0) + oracle::kEulerGamma / 7.0;
  r.metric("p2_n7_M1024", p2);
  r.metric("p1_n7_M1024", p1);
  r.metric("p1_reference", p1_ref);
  r.metric("max_oracle_deviation", worst);
  r.pass = std::abs(p2 - 0.874) <= 0.01 && std::abs(p1 - p1_ref) <= 0.02 && worst <= 1e-12;
  return r;
}

inline CriterionResult truncation_halving() {
  CriterionResult r;
  r.id = 5;
  r.name = "truncation_halving";
  bool ok = true;
  for (int order : {1, 2}) {
    double prev = 0.0, lo = 1e300, hi = 0.0;
    for (int n = 4; n <= 9; ++n) {
      const LatticeConfig cfg(n);
      const auto ex = slac_operator(order, Variant::exact, cfg);
      const auto tr = slac_operator(order, Variant::truncated, cfg);
      const double e = order == 1 ? truncation_error(ex, tr, default_projection(cfg.N())) : truncation_error(ex, tr);
      if (n > 4) {
        lo = std::min(lo, prev / e);
        hi = std::max(hi, prev / e);
      }
      prev = e;
    }
    r.metric("order" + std::to_string(order) + "_min_ratio", lo);
    r.metric("order" + std::to_string(order) + "_max_ratio", hi);
    ok = ok && lo >= 1.6 && hi <= 2.4;
  }
  r.pass = ok;
  return r;
}

inline CriterionResult qswt_separation() {
  CriterionResult r;
  r.id = 6;
  r.name = "qswt_separation";
  double unit = 0.0, off = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const std::int64_t N = std::int64_t{1} << n, h = N / 2;
    const CMatrix S = qswt_dense(n);
    unit = std::max(unit, (S.adjoint() * S - CMatrix::Identity(N, N)).cwiseAbs().maxCoeff());
    const CMatrix A = S * to_dense(truncated_laplacian(LatticeConfig(n))) * S.adjoint();
    off = std::max({off, A.topRightCorner(h, h).cwiseAbs().maxCoeff(), A.bottomLeftCorner(h, h).cwiseAbs().maxCoeff()});
  }
  const auto plan = plan_multiscale(9, 8);
  const CMatrix Aw = plan.W * to_dense(truncated_laplacian(LatticeConfig(9))) * plan.W.adjoint();
  const double coupling = block_coupling_report(Aw, plan).maxCoeff();
  const std::vector<std::int64_t> want{2, 2, 4, 8, 16, 32, 64, 128, 256};
  bool calls_ok = true;
  for (int n = 3; n <= 9; ++n) {
    RegisterLayout lay;
    lay.add("sys", n);
    if (n > 2) lay.add("g", n - 2);
    Circuit wc = multiscale_circuit(lay, n - 1);
    Circuit both = wc.adjoint();
    both.append(wc);
    calls_ok = calls_ok && both.cost().call_count("qswt") == 2 * (n - 1);
  }
  const auto enc = multiscale(assemble(2, 5), 4);
  calls_ok = calls_ok && enc.cost().call_count("qswt") == 8;
  r.metric("max_unitarity_error", unit);
  r.metric("max_offblock", off);
  r.metric("max_cross_scale_coupling_N512", coupling);
  r.metric("block_dims_match", plan.block_dims == want ? 1.0 : 0.0);
  r.metric("qswt_call_tally_match", calls_ok ? 1.0 : 0.0);
  r.pass = unit <= 1e-12 && off <= 1e-10 && coupling <= 1e-10 && plan.block_dims == want && calls_ok;
  return r;
}

inline CriterionResult preconditioning(int workers) {
  CriterionResult r;
  r.id = 7;
  r.name = "preconditioning";
  std::vector<double> kl(6), kf(6);
  parallel_for(6, [&](std::int64_t i) {
    const int n = 4 + static_cast<int>(i);
    const LatticeConfig cfg(n);
    kl[i] = condition_number(precondition_dense(to_dense(exact_laplacian(cfg)), build_preconditioner(n, 1.0)), true);
    kf[i] = condition_number(precondition_dense(to_dense(exact_first_order(cfg)), build_preconditioner(n, 0.5)), true);
  }, workers);
  double dev = 0.0, fmax = 0.0;
  for (int i = 0; i < 6; ++i) {
    dev = std::max(dev, std::abs(kl[i] - 4.0));
    fmax = std::max(fmax, kf[i]);
  }
  bool bands_ok = true;
  double band_dev = 0.0;
  for (int n = 4; n <= 9; ++n) {
    // Roundoff scale of the conjugated operator, whose norm is (N/2)^2.
    const double tol = 1e-13 * std::ldexp(1.0, 2 * (n - 1));
    const auto bands = dyadic_band_check(n);
    for (const auto& b : bands) {
      const double dev = std::max({0.0, 0.25 - b.lo, b.hi - 1.0});
      band_dev = std::max(band_dev, dev);
      bands_ok = bands_ok && dev <= tol;
    }
    const auto& fin = bands.back();
    bands_ok = bands_ok && std::abs(fin.lo - 0.25) <= tol && std::abs(fin.hi - 1.0) <= tol;
  }
  r.metric("max_band_excursion", band_dev);
  r.metric("max_laplacian_kappa_p_deviation", dev);
  r.metric("max_first_order_kappa_p", fmax);
  r.metric("bands_ok", bands_ok ? 1.0 : 0.0);
  r.pass = dev <= 1e-6 && fmax <= 2.0 + 1e-6 && bands_ok;
  return r;
}

inline CriterionResult benchmarks(int workers) {
  CriterionResult r;
  r.id = 8;
  r.name = "benchmarks";
  // kappa_p at N = 64 and N = 512, locked from the first run (relative 1e-6).
  const double locked[4][2] = {{5.0172587928430037, 4.9867000846577456},
                               {10.082802121573824, 9.9922477981782283},
                               {7.2556444660767578, 7.4648138929403069},
                               {15.509140459622836, 15.4394205078144}};
  bool ok = true;
  double drift = 0.0;
  for (auto which : {Benchmark::L1, Benchmark::L2, Benchmark::L3, Benchmark::L4}) {
    const auto rows = condition_sweep(which, {6, 9}, 1.0, 0.5, workers);
    for (int i = 0; i < 2; ++i) {
      const double ref = locked[static_cast<int>(which)][i];
      drift = std::max(drift, std::abs(rows[i].kappa_p - ref) / ref);
    }
    const double rk = rows[1].kappa / rows[0].kappa, rp = rows[1].kappa_p / rows[0].kappa_p;
    const std::string nm = benchmark_name(which);
    r.metric(nm + "_kappa_ratio", rk);
    r.metric(nm + "_kappa_p_ratio", rp);
    r.metric(nm + "_kappa_p_N512", rows[1].kappa_p);
    ok = ok && rk >= 8.0 && rp <= 1.5 && rows[0].kappa_p <= rows[0].kappa && rows[1].kappa_p <= rows[1].kappa;
  }
  r.metric("max_regression_drift", drift);
  r.pass = ok && drift <= 1e-6;
  return r;
}

inline CriterionResult solve_pipeline(std::uint64_t seed) {
  CriterionResult r;
  r.id = 9;
  r.name = "solve_pipeline";
  std::mt19937_64 rng(seed);
  double worst_res = 0.0, worst_oracle = 0.0;
  for (int n = 4; n <= 9; ++n) {
    const LatticeConfig cfg(n);
    const double N = static_cast<double>(cfg.N());
    PDEProblem pb;
    pb.n = n;
    pb.op = N * N * to_dense(exact_laplacian(cfg));
    pb.b = oracle::random_unit(cfg.N(), rng, false);
    pb.project_nullspace = true;
    const auto rep = emulated_solve(pb);
    const CVector bp = project_rhs(pb.b, null_vector(cfg.N()));
    const CVector us = oracle::poisson_1d(bp);
    worst_res = std::max(worst_res, rep.residual);
    worst_oracle = std::max(worst_oracle, (rep.u - us).norm() / us.norm());
  }
  {
    const int n = 5;
    const LatticeConfig cfg(n);
    const double N = static_cast<double>(cfg.N());
    PDEProblem pb;
    pb.dim = 2;
    pb.n = n;
    pb.op = N * N * to_dense(exact_laplacian(cfg));
    pb.b = oracle::random_unit(cfg.N() * cfg.N(), rng, false);
    pb.project_nullspace = true;
    const auto rep = emulated_solve(pb);
    const CVector bp = pb.b - CVector::Constant(pb.b.size(), pb.b.mean());
    const CVector us = oracle::poisson_2d(bp, cfg.N());
    r.metric("residual_2d", rep.residual);
    r.metric("oracle_error_2d", (rep.u - us).norm() / us.norm());
    worst_res = std::max(worst_res, rep.residual);
    worst_oracle = std::max(worst_oracle, (rep.u - us).norm() / us.norm());
  }
  double worst_fid = 0.0, worst_prob = 0.0;
  for (int n = 3; n <= 6; ++n)
    for (int t = 0; t < 50; ++t) {
      const CVector b = oracle::random_unit(std::int64_t{1} << n, rng);
      const CVector dense = b - CVector::Constant(b.size(), b.mean());
      const auto st = swap_test_projection(b);
      const double fid = std::norm(st.state.dot(dense)) / dense.squaredNorm();
      worst_fid = std::max(worst_fid, 1.0 - fid);
      worst_prob = std::max(worst_prob, std::abs(st.success_probability - dense.squaredNorm() / 4.0));
    }
  r.metric("max_residual", worst_res);
  r.metric("max_oracle_error", worst_oracle);
  r.metric("max_swap_infidelity", worst_fid);
  r.metric("max_swap_probability_error", worst_prob);
  r.pass = worst_res <= 1e-8 && worst_oracle <= 1e-8 && worst_fid <= 1e-10 && worst_prob <= 1e-12;
  return r;
}

inline CriterionResult cost_accounting() {
  CriterionResult r;
  r.id = 10;
  r.name = "cost_accounting";
  bool exact = true;
  std::vector<double> ns, tot2, tot1;
  for (int n = 3; n <= 10; ++n) {
    const std::int64_t k = n - 1;
    for (int order : {1, 2}) {
      const PrepConfig cfg(n, order, n);
      const auto be = assemble(order, cfg, PrepMode::gate_level, 64);
      const auto prep = prep_circuit(cfg, be.layout).cost();
      const std::int64_t want = order == 2 ? k * k + k + 4 * k * cfg.n_ref : 2 * k * cfg.n_ref + k;
      const auto it = prep.analytic.find("inequality");
      exact = exact && it != prep.analytic.end() && it->second == want &&
              tally_inequality_cost(n, cfg.n_ref, order).total() == want;
      (order == 2 ? tot2 : tot1).push_back(static_cast<double>(be.cost().total_gates()));
    }
    ns.push_back(n);
  }
  // Local exponent over the upper half of the ladder.
  const std::vector<double> nh(ns.begin() + 4, ns.end());
  const double s2 = oracle::log_log_slope(nh, std::vector<double>(tot2.begin() + 4, tot2.end()));
  const double s1 = oracle::log_log_slope(nh, std::vector<double>(tot1.begin() + 4, tot1.end()));
  r.metric("toffoli_formula_match", exact ? 1.0 : 0.0);
  r.metric("order2_total_gate_exponent", s2);
  r.metric("order1_total_gate_exponent", s1);
  r.metric("order2_total_gates_n10", tot2.back());
  r.metric("order1_total_gates_n10", tot1.back());
  r.pass = exact && s2 <= 2.2 && s1 <= 2.2;
  return r;
}

inline CriterionResult masked(std::uint64_t seed) {
  CriterionResult r;
  r.id = 11;
  r.name = "masked_operator";
  const int n = 4;
  const LatticeConfig cfg(n);
  const std::int64_t N = cfg.N();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> u(0, N / 2);
  MaskSpec full, saw, rnd;
  for (std::int64_t k = 0; k < N; ++k) {
    full.cutoffs.push_back(N / 2);
    saw.cutoffs.push_back(k % (N / 2));
    rnd.cutoffs.push_back(u(rng));
  }
  double worst = 0.0;
  bool positive = true;
  for (int order : {1, 2})
    for (const auto* m : {&full, &saw, &rnd}) {
      // Dense reference straight from the row-masked sum.
      const auto op = slac_operator(order, Variant::truncated, cfg);
      CMatrix D = CMatrix::Zero(N, N);
      for (std::int64_t k = 0; k < N; ++k)
        for (std::int64_t j = 1; j <= m->cutoffs[k]; ++j) {
          D(k, ((k - j) % N + N) % N) += op.coeffs[j];
          D(k, (k + j) % N) -= op.coeffs[j];
        }
      const auto mo = masked_operator(order, cfg, *m);
      const CMatrix B = extract_block(mo.encoding);
      const cplx ip = B.cwiseProduct(D.conjugate()).sum();
      const double fid = std::norm(ip) / (B.squaredNorm() * D.squaredNorm());
      worst = std::max(worst, 1.0 - fid);
      positive = positive && ip.real() > 0.0 && std::abs(ip.imag()) <= 1e-9 * std::abs(ip);
    }
  r.metric("max_infidelity", worst);
  r.metric("positive_scale", positive ? 1.0 : 0.0);
  r.pass = worst <= 1e-8 && positive;
  return r;
}

inline CriterionResult combinations() {
  CriterionResult r;
  r.id = 12;
  r.name = "linear_combinations";
  const int n = 4;
  const LatticeConfig cfg(n);
  const CMatrix T2 = to_dense(truncated_laplacian(cfg)), T1 = to_dense(truncated_first_order(cfg));
  const double a2 = (kPi * kPi + 24.0) / 3.0, a1 = 2.0 * (n - 1);
  const auto b2 = assemble(2, n), b1 = assemble(1, n);
  const auto ps = pair_sum(b2, b1, 0.7, 1.3);
  const double e_pair = (extract_block(ps) - (0.7 * T2 + 1.3 * T1) / (0.7 * a2 + 1.3 * a1)).cwiseAbs().maxCoeff();
  const std::vector<cplx> y{0.5, cplx(0.0, -0.3), 0.2};
  const double beta = 1.2;
  const auto gc = general_combination(LcuCombination{y, beta, {b2, b1, b2}});
  const double amax = std::max(a1, a2);
  const CMatrix want = (y[0] * T2 + y[1] * T1 + y[2] * T2) / (amax * beta);
  const double e_gen = (extract_block(gc) - want).cwiseAbs().maxCoeff();
  r.metric("pair_sum_error", e_pair);
  r.metric("general_combination_error", e_gen);
  r.pass = e_pair <= 1e-8 && e_gen <= 1e-8;
  return r;
}

}  // namespace accept

inline std::vector<std::function<CriterionResult()>> acceptance_suite(const AcceptanceOptions& opt) {
  return {
      [] { return accept::block_identity(2); },
      [] { return accept::block_identity(1); },
      [] { return accept::finite_m_slope(); },
      [] { return accept::success_probabilities(); },
      [] { return accept::truncation_halving(); },
      [] { return accept::qswt_separation(); },
      [opt] { return accept::preconditioning(opt.workers); },
      [opt] { return accept::benchmarks(opt.workers); },
      [opt] { return accept::solve_pipeline(opt.seed); },
      [] { return accept::cost_accounting(); },
      [opt] { return accept::masked(opt.seed); },
      [] { return accept::combinations(); },
  };
}

inline CriterionResult run_timed(const std::function<CriterionResult()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r = f();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace slacq
