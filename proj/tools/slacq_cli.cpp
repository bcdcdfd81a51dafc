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

// Batch driver: every command writes one CSV table and an optional key=value
// summary. Exit status 0 = all checks pass, 1 = usage or configuration
// error, 2 = a check failed.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "report.hpp"
#include "slacq/acceptance.hpp"
#include "slacq/block_encoding.hpp"
#include "slacq/precond_solver.hpp"
#include "slacq/qswt.hpp"
#include "slacq/slac_core.hpp"
#include "slacq/state_prep.hpp"

namespace {

using namespace slacq;
using report::Summary;
using report::Table;

constexpr int kExitUsage = 1;
constexpr int kExitCheck = 2;

struct RunOutput {
  Table table;
  Summary summary;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

std::int64_t parse_int(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("'" + s + "' is not an integer");
  }
  if (pos != s.size()) throw ConfigError("'" + s + "' is not an integer");
  return v;
}

// "a..b" (consecutive, or doubling when `doubling`) or a comma list.
std::vector<std::int64_t> parse_ladder(const std::string& s, bool doubling) {
  std::vector<std::int64_t> out;
  if (const auto p = s.find(".."); p != std::string::npos) {
    const std::int64_t lo = parse_int(s.substr(0, p)), hi = parse_int(s.substr(p + 2));
    if (lo > hi) throw ConfigError("empty range '" + s + "'");
    if (doubling) {
      if (!is_power_of_two(lo) || !is_power_of_two(hi)) throw ConfigError("range ends must be powers of two: " + s);
      for (std::int64_t v = lo; v <= hi; v *= 2) out.push_back(v);
    } else {
      for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
    }
  } else {
    for (const auto& t : split(s, ',')) out.push_back(parse_int(t));
  }
  if (out.empty()) throw ConfigError("empty list '" + s + "'");
  if (doubling)
    for (auto v : out)
      if (!is_power_of_two(v)) throw ConfigError(std::to_string(v) + " is not a power of two");
  return out;
}

std::vector<int> parse_orders(const std::string& s) {
  std::vector<int> out;
  for (auto v : parse_ladder(s, false)) {
    if (v != 1 && v != 2) throw ConfigError("order must be 1 or 2");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<int> to_qubits(const std::vector<std::int64_t>& Ns) {
  std::vector<int> n;
  for (auto N : Ns) n.push_back(log2_exact(N));
  return n;
}

std::vector<int> to_int(const std::vector<std::int64_t>& v) { return {v.begin(), v.end()}; }

Variant parse_variant(const std::string& s) {
  if (s == "truncated") return Variant::truncated;
  if (s == "exact") return Variant::exact;
  throw ConfigError("variant must be 'truncated' or 'exact'");
}

double max_abs(const CMatrix& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

CMatrix circuit_unitary(const Circuit& c, const RegisterLayout& lay) {
  const std::int64_t dim = std::int64_t{1} << lay.total();
  CMatrix U(dim, dim);
  parallel_for(dim, [&](std::int64_t col) {
    Statevector s(lay, static_cast<std::uint64_t>(col));
    c.apply(s);
    for (std::int64_t r = 0; r < dim; ++r) U(r, col) = s.data()[r];
  });
  return U;
}

// ---------------------------------------------------------------------------

RunOutput cmd_symbols(int n, int samples) {
  RunOutput out;
  const auto syms = symbol_table(LatticeConfig(n), samples);
  out.table.header = {"q"};
  for (const auto& s : syms) out.table.header.push_back(s.label);
  double dev1 = 0.0, dev2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    std::vector<report::Cell> row{syms[0].q_grid[i]};
    for (const auto& s : syms) row.emplace_back(s.values[i].real());
    out.table.add(std::move(row));
    if (std::abs(syms[0].q_grid[i]) <= kPi / 2) {
      dev1 = std::max(dev1, std::abs(syms[2].values[i].real() - syms[0].values[i].real()));
      dev2 = std::max(dev2, std::abs(syms[5].values[i].real() - syms[3].values[i].real()));
    }
  }
  out.summary.set("n", n);
  out.summary.set("samples", samples);
  out.summary.set("slac_d1_max_deviation_half_zone", dev1);
  out.summary.set("slac_d2_max_deviation_half_zone", dev2);
  return out;
}

RunOutput cmd_trunc_error(const std::vector<int>& orders, const std::vector<std::int64_t>& Ns) {
  RunOutput out;
  out.table.header = {"N", "order", "error"};
  const double lo = 1.6, hi = 2.4;
  out.summary.set("tol.ratio_min", lo);
  out.summary.set("tol.ratio_max", hi);
  out.summary.set("projection", "k_max=floor(N/2.5) for order 1");
  for (int order : orders) {
    std::map<std::int64_t, double> err;
    for (auto N : Ns) {
      const LatticeConfig cfg(log2_exact(N));
      const auto ex = slac_operator(order, Variant::exact, cfg);
      const auto tr = slac_operator(order, Variant::truncated, cfg);
      const double e = order == 1 ? truncation_error(ex, tr, default_projection(N)) : truncation_error(ex, tr);
      err[N] = e;
      out.table.add({N, std::int64_t{order}, e});
    }
    double rmin = 1e300, rmax = 0.0;
    for (auto N : Ns)
      if (N >= 16 && err.count(2 * N)) {
        rmin = std::min(rmin, err[N] / err[2 * N]);
        rmax = std::max(rmax, err[N] / err[2 * N]);
      }
    const std::string p = "order" + std::to_string(order) + "_";
    if (rmax > 0.0) {
      out.summary.set(p + "ratio_min", rmin);
      out.summary.set(p + "ratio_max", rmax);
      out.summary.check(p + "halving", rmin >= lo && rmax <= hi);
    }
  }
  return out;
}

RunOutput cmd_prep_stats(const std::vector<int>& orders, int n, const std::vector<std::int64_t>& Ms) {
  RunOutput out;
  out.table.header = {"order", "n", "M", "success_probability", "oracle_probability", "prep_error", "error_bound",
                      "target_distance"};
  const double tol = 1e-12;
  out.summary.set("n", n);
  out.summary.set("tol.oracle", tol);
  out.summary.set("tol.slope", 0.2);
  for (int order : orders) {
    const auto t = analytic_target(order, n);
    std::vector<double> target(std::size_t{1} << (n - 1));
    for (std::size_t j = 0; j < target.size(); ++j) target[j] = (j == 0 ? 1.0 : 2.0) * t[j] * t[j];
    std::vector<double> xs, ys;
    double worst = 0.0;
    for (auto M : Ms) {
      const PrepConfig cfg(n, order, log2_exact(M));
      const auto res = simulate_prep(cfg);
      const double oracle_p = oracle::success_probability_mloop(n, order, M);
      std::vector<double> w(res.weight_jd.size());
      for (std::size_t j = 0; j < w.size(); ++j) w[j] = res.weight(static_cast<std::int64_t>(j));
      const double e = prep_error(res);
      out.table.add({std::int64_t{order}, std::int64_t{n}, M, res.success_probability, oracle_p, e,
                     prep_error_bound(cfg), amplitude_distance(w, target)});
      worst = std::max(worst, std::abs(res.success_probability - oracle_p));
      xs.push_back(static_cast<double>(M));
      ys.push_back(e);
    }
    const std::string p = "order" + std::to_string(order) + "_";
    out.summary.set(p + "max_oracle_deviation", worst);
    out.summary.check(p + "oracle_agreement", worst <= tol);
    if (xs.size() >= 2) {
      const double slope = oracle::log_log_slope(xs, ys);
      out.summary.set(p + "error_slope", slope);
      out.summary.info(p + "slope_within_tolerance", std::abs(slope + 1.0) <= 0.2);
    }
  }
  return out;
}

RunOutput cmd_be_check(const std::vector<int>& orders, const std::vector<int>& ns, const std::string& mode_s,
                       int n_ref) {
  if (mode_s != "analytic" && mode_s != "gate") throw ConfigError("mode must be 'analytic' or 'gate'");
  const PrepMode mode = mode_s == "gate" ? PrepMode::gate_level : PrepMode::analytic;
  RunOutput out;
  out.table.header = {"order", "n", "mode", "alpha", "block_error", "target_error", "max_singular_value",
                      "symmetry_error", "translation_error", "qubits", "ancilla_qubits"};
  const double tol = 1e-10;
  out.summary.set("mode", mode_s);
  out.summary.set("tol.block", tol);
  out.summary.set("tol.singular_value", 1e-9);
  for (int order : orders)
    for (int n : ns) {
      const PrepConfig cfg(n, order, n_ref);
      const auto be = assemble(order, cfg, mode);
      const CMatrix B = extract_block(be);
      const CMatrix T = to_dense(slac_operator(order, Variant::truncated, LatticeConfig(n)));
      const double target_err = oracle::op_norm(be.alpha * B - T);
      // The gate-level block is compared with the LCU contraction of the
      // simulated preparation weights; the analytic block with the target.
      const double block_err =
          mode == PrepMode::analytic
              ? target_err
              : oracle::op_norm(be.alpha * B - to_dense(lcu_coefficients(order, n, simulate_prep(cfg).weight_jd)));
      const double sv = oracle::op_norm(B);
      const double sym = order == 2 ? max_abs(B - B.adjoint()) : max_abs(B + B.adjoint());
      const CMatrix P = shift_matrix(cfg.N(), 1);
      const double trans = max_abs(P * B * P.adjoint() - B);
      out.table.add({std::int64_t{order}, std::int64_t{n}, mode_s, be.alpha, block_err, target_err, sv, sym, trans,
                     std::int64_t{be.layout.total()}, std::int64_t{be.ancilla_qubits()}});
      const std::string p = "order" + std::to_string(order) + "_n" + std::to_string(n) + "_";
      out.summary.check(p + "block", block_err <= tol);
      out.summary.check(p + "norm", sv <= 1.0 + 1e-9);
      out.summary.check(p + "translation", trans <= tol);
      if (mode == PrepMode::analytic) out.summary.check(p + "symmetry", sym <= tol);
    }
  return out;
}

RunOutput cmd_qswt_check(const std::vector<std::int64_t>& Ns, int circuit_max_n) {
  RunOutput out;
  out.table.header = {"N", "unitarity_error", "offblock_laplacian", "offblock_first_order", "ir_spectrum_error",
                      "circuit_error"};
  const double tol_u = 1e-12, tol_off = 1e-10, tol_spec = 1e-9;
  out.summary.set("tol.unitarity", tol_u);
  out.summary.set("tol.offblock", tol_off);
  out.summary.set("tol.ir_spectrum", tol_spec);
  out.summary.set("tol.circuit", tol_off);
  double wu = 0.0, wo = 0.0, ws = 0.0, wc = 0.0;
  bool any_circuit = false;
  for (auto N : Ns) {
    const int n = log2_exact(N);
    const std::int64_t h = N / 2;
    const CMatrix S = qswt_dense(n);
    const double unit = max_abs(S.adjoint() * S - CMatrix::Identity(N, N));
    const auto lap = truncated_laplacian(LatticeConfig(n));
    const CMatrix A2 = S * to_dense(lap) * S.adjoint();
    const CMatrix A1 = S * to_dense(truncated_first_order(LatticeConfig(n))) * S.adjoint();
    const double off2 = std::max(max_abs(A2.topRightCorner(h, h)), max_abs(A2.bottomLeftCorner(h, h)));
    const double off1 = std::max(max_abs(A1.topRightCorner(h, h)), max_abs(A1.bottomLeftCorner(h, h)));
    // IR block spectrum: momenta |k| < N/4 plus one copy of the k = N/4 value.
    const auto spec = circulant_spectrum(lap);
    std::vector<double> want;
    for (std::int64_t k = 0; k < N; ++k) {
      const auto sk = signed_momentum(k, N);
      if (std::llabs(sk) < N / 4 || sk == N / 4) want.push_back(spec[k].real());
    }
    const CMatrix ir = A2.topLeftCorner(h, h);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(0.5 * (ir + ir.adjoint())), Eigen::EigenvaluesOnly);
    std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + h);
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    double serr = want.size() == got.size() ? 0.0 : 1e300;
    for (std::size_t i = 0; i < std::min(want.size(), got.size()); ++i) serr = std::max(serr, std::abs(want[i] - got[i]));
    double cerr = std::numeric_limits<double>::quiet_NaN();
    if (n <= circuit_max_n) {
      RegisterLayout lay;
      lay.add("sys", n);
      cerr = max_abs(circuit_unitary(qswt_circuit(lay.qubits("sys")), lay) - S);
      wc = std::max(wc, cerr);
      any_circuit = true;
    }
    out.table.add({N, unit, off2, off1, serr, cerr});
    wu = std::max(wu, unit);
    wo = std::max(wo, off2);
    ws = std::max(ws, serr);
  }
  out.summary.set("max_unitarity_error", wu);
  out.summary.set("max_offblock_laplacian", wo);
  out.summary.set("max_ir_spectrum_error", ws);
  out.summary.check("unitarity", wu <= tol_u);
  out.summary.check("separation", wo <= tol_off);
  out.summary.check("ir_spectrum", ws <= tol_spec);
  if (any_circuit) {
    out.summary.set("max_circuit_error", wc);
    out.summary.check("circuit_matches_dense", wc <= tol_off);
  }
  return out;
}

RunOutput cmd_multiscale(int n, int r, int order, const std::string& variant_s) {
  if (r < 0) r = n - 1;
  RunOutput out;
  const LatticeConfig cfg(n);
  if (cfg.N() > kDenseLimit) throw ConfigError("multiscale report needs N <= " + std::to_string(kDenseLimit));
  const auto plan = plan_multiscale(n, r);
  const CMatrix A = to_dense(slac_operator(order, parse_variant(variant_s), cfg));
  const CMatrix Aw = plan.W * A * plan.W.adjoint();
  const RMatrix R = block_coupling_report(Aw, plan);
  out.table.header = {"row_block", "col_block", "row_dim", "col_dim", "max_coupling"};
  for (Eigen::Index a = 0; a < R.rows(); ++a)
    for (Eigen::Index b = 0; b < R.cols(); ++b)
      if (a != b)
        out.table.add({std::int64_t{a}, std::int64_t{b}, plan.block_dims[a], plan.block_dims[b], R(a, b)});

  std::string dims;
  for (auto d : plan.block_dims) dims += (dims.empty() ? "" : ",") + std::to_string(d);
  const double coupling = R.size() ? R.maxCoeff() : 0.0;
  const double unit = max_abs(plan.W.adjoint() * plan.W - CMatrix::Identity(cfg.N(), cfg.N()));
  const RVector s0 = singular_values(A), s1 = singular_values(Aw);
  const double spec = (s0 - s1).cwiseAbs().maxCoeff();

  RegisterLayout lay;
  lay.add("sys", n);
  if (multiscale_ladder_width(r) > 0) lay.add("g", multiscale_ladder_width(r));
  Circuit both = multiscale_circuit(lay, r).adjoint();
  both.append(multiscale_circuit(lay, r));
  const std::int64_t calls = both.cost().call_count("qswt");

  const double tol = 1e-10;
  out.summary.set("n", n);
  out.summary.set("r", r);
  out.summary.set("order", order);
  out.summary.set("variant", variant_s);
  out.summary.set("block_dims", dims);
  out.summary.set("max_cross_scale_coupling", coupling);
  out.summary.set("w_unitarity_error", unit);
  out.summary.set("singular_value_drift", spec);
  out.summary.set("qswt_calls_w_dagger_w", calls);
  out.summary.set("tol.coupling", tol);
  out.summary.check("unitarity", unit <= 1e-12);
  out.summary.check("spectrum_preserved", spec <= 1e-9 * std::max(1.0, s0(0)));
  out.summary.check("qswt_call_tally", calls == 2 * r);
  out.summary.check("block_dims", plan.block_dims == multiscale_block_dims(n, r));
  // Only the even (second-order) operator decouples; first order is reported.
  if (order == 2) out.summary.check("decoupled", coupling <= tol);
  else out.summary.info("decoupled", coupling <= tol);
  return out;
}

RunOutput cmd_precond_sweep(const std::vector<std::string>& ops, const std::vector<std::int64_t>& Ns, double exponent,
                            double eps) {
  RunOutput out;
  out.table.header = {"op", "N", "kappa", "kappa_p"};
  out.summary.set("exponent", exponent);
  out.summary.set("eps", eps);
  out.summary.set("tol.kappa_p_ratio_max", 1.5);
  out.summary.set("tol.kappa_ratio_min", 8.0);
  const auto ns = to_qubits(Ns);
  for (const auto& name : ops) {
    const auto which = parse_benchmark(name);
    const auto rows = condition_sweep(which, ns, exponent, eps);
    bool improves = true;
    for (const auto& r : rows) {
      out.table.add({name, r.N, r.kappa, r.kappa_p});
      improves = improves && r.kappa_p <= r.kappa;
    }
    out.summary.check(name + "_preconditioner_helps", improves);
    const auto lo = std::find_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.N == 64; });
    const auto hi = std::find_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.N == 512; });
    if (lo != rows.end() && hi != rows.end()) {
      const double rk = hi->kappa / lo->kappa, rp = hi->kappa_p / lo->kappa_p;
      out.summary.set(name + "_kappa_ratio_512_64", rk);
      out.summary.set(name + "_kappa_p_ratio_512_64", rp);
      out.summary.check(name + "_kappa_growth", rk >= 8.0);
      out.summary.check(name + "_kappa_p_flat", rp <= 1.5);
    }
  }
  return out;
}

RunOutput cmd_band_check(const std::vector<int>& ns) {
  RunOutput out;
  out.table.header = {"n", "scale", "dim", "lo", "hi"};
  out.summary.set("tol.band", "1e-13*(N/2)^2");
  double worst = 0.0;
  bool ok = true;
  for (int n : ns) {
    const double tol = 1e-13 * std::ldexp(1.0, 2 * (n - 1));
    const auto bands = dyadic_band_check(n);
    for (const auto& b : bands) {
      out.table.add({std::int64_t{n}, std::int64_t{b.scale}, b.dim, b.lo, b.hi});
      const double dev = std::max({0.0, 0.25 - b.lo, b.hi - 1.0});
      worst = std::max(worst, dev);
      ok = ok && dev <= tol;
    }
    const auto& fin = bands.back();
    out.summary.check("n" + std::to_string(n) + "_finest_endpoints",
                      std::abs(fin.lo - 0.25) <= tol && std::abs(fin.hi - 1.0) <= tol);
  }
  out.summary.set("max_band_excursion", worst);
  out.summary.check("bands_inside_quarter_one", ok);
  return out;
}

struct SolveOptions {
  std::string problem = "poisson1d";
  int n = 6;
  std::uint64_t seed = 1;
  std::string rhs = "random";
  int mode_k = 1;
  double exponent = 1.0;
  double eps = 0.5;
  std::string solution_path;
};

RunOutput cmd_solve(const SolveOptions& o) {
  const bool poisson = o.problem == "poisson1d" || o.problem == "poisson2d";
  const int dim = o.problem == "poisson2d" ? 2 : 1;
  const LatticeConfig cfg(o.n);
  const std::int64_t N = cfg.N(), size = dim == 1 ? N : N * N;
  if (size > kDenseLimit) throw ConfigError("grid exceeds the dense limit of " + std::to_string(kDenseLimit));
  PDEProblem pb;
  pb.dim = dim;
  pb.n = o.n;
  pb.exponent = o.exponent;
  if (poisson) {
    pb.op = static_cast<double>(N * N) * to_dense(exact_laplacian(cfg));
    pb.project_nullspace = true;
  } else {
    pb.op = benchmark_operator(parse_benchmark(o.problem), cfg, o.eps).A;
  }
  if (o.rhs == "random") {
    std::mt19937_64 rng(o.seed);
    pb.b = oracle::random_unit(size, rng, false);
  } else if (o.rhs == "mode") {
    pb.b.resize(size);
    for (std::int64_t i = 0; i < size; ++i)
      pb.b(i) = std::cos(2.0 * kPi * static_cast<double>(o.mode_k * (i % N)) / static_cast<double>(N));
  } else {
    throw ConfigError("rhs must be 'random' or 'mode'");
  }
  const auto rep = emulated_solve(pb);

  double oracle_err = std::numeric_limits<double>::quiet_NaN();
  double swap_infid = std::numeric_limits<double>::quiet_NaN(), swap_prob = oracle_err;
  if (poisson && !rep.zero_rhs) {
    const CVector bp = pb.b - CVector::Constant(size, pb.b.mean());
    const CVector us = dim == 1 ? oracle::poisson_1d(bp) : oracle::poisson_2d(bp, N);
    oracle_err = (rep.u - us).norm() / us.norm();
    if (size <= 4096) {
      const auto st = swap_test_projection(pb.b);
      swap_infid = 1.0 - std::norm(st.state.dot(bp)) / bp.squaredNorm();
      swap_prob = st.success_probability;
    }
  }

  RunOutput out;
  out.table.header = {"problem", "n", "dim",           "zero_rhs",     "kappa",         "kappa_p",
                      "residual", "fidelity", "branch_mismatch", "oracle_error", "swap_infidelity", "swap_success_probability",
                      "qswt_calls", "encoding_calls", "precond_calls"};
  out.table.add({o.problem, std::int64_t{o.n}, std::int64_t{dim}, std::int64_t{rep.zero_rhs}, rep.kappa, rep.kappa_p,
                 rep.residual, rep.fidelity, rep.branch_mismatch, oracle_err, swap_infid, swap_prob, rep.qswt_calls,
                 rep.encoding_calls, rep.precond_calls});
  out.summary.set("problem", o.problem);
  out.summary.set("n", o.n);
  out.summary.set("rhs", o.rhs);
  out.summary.set("seed", static_cast<std::int64_t>(o.seed));
  out.summary.set("zero_rhs", rep.zero_rhs);
  out.summary.set("tol.residual", 1e-8);
  out.summary.set("tol.fidelity", 1e-8);
  out.summary.set("tol.branch", 1e-10);
  if (rep.zero_rhs) {
    out.summary.set("note", "right-hand side vanishes after the zero-mode projection; nothing to solve");
  } else {
    out.summary.check("residual", rep.residual <= 1e-8);
    out.summary.check("fidelity", rep.fidelity >= 1.0 - 1e-8);
    out.summary.check("branch_average", rep.branch_mismatch <= 1e-10);
    if (poisson) out.summary.check("spectral_oracle", oracle_err <= 1e-8);
    if (!std::isnan(swap_infid)) out.summary.check("swap_test", swap_infid <= 1e-10);
  }
  if (!o.solution_path.empty()) {
    Table sol;
    sol.header = {"index", "re", "im"};
    for (Eigen::Index i = 0; i < rep.u.size(); ++i) sol.add({std::int64_t{i}, rep.u(i).real(), rep.u(i).imag()});
    report::emit(o.solution_path, [&](std::ostream& os) { sol.write(os); });
  }
  return out;
}

RunOutput cmd_gate_count(const std::vector<int>& orders, const std::vector<int>& ns, int n_ref) {
  RunOutput out;
  out.table.header = {"order", "n", "n_ref", "squarer", "multiplier", "comparator", "inequality_toffoli",
                      "formula_toffoli", "encoding_toffoli", "encoding_total_gates", "qubits"};
  for (int order : orders) {
    std::vector<double> xs, ys;
    bool exact = true;
    for (int n : ns) {
      const PrepConfig cfg(n, order, n_ref);
      const std::int64_t k = n - 1, m = cfg.n_ref;
      const std::int64_t formula = order == 2 ? k * k + k + 4 * k * m : 2 * k * m + k;
      const auto ineq = tally_inequality_cost(n, cfg.n_ref, order);
      const auto be = assemble(order, cfg, PrepMode::gate_level, 64);
      const auto prep = prep_circuit(cfg, be.layout).cost();
      const auto it = prep.analytic.find("inequality");
      const std::int64_t tallied = it == prep.analytic.end() ? -1 : it->second;
      const auto cost = be.cost();
      out.table.add({std::int64_t{order}, std::int64_t{n}, m, ineq.squarer, ineq.multiplier, ineq.comparator, tallied,
                     formula, cost.toffoli_total(), cost.total_gates(), std::int64_t{be.layout.total()}});
      exact = exact && tallied == formula && ineq.total() == formula;
      xs.push_back(n);
      ys.push_back(static_cast<double>(cost.total_gates()));
    }
    const std::string p = "order" + std::to_string(order) + "_";
    out.summary.check(p + "toffoli_formula", exact);
    if (xs.size() >= 2) {
      const std::size_t h = xs.size() / 2;
      const double e = oracle::log_log_slope({xs.begin() + h, xs.end()}, {ys.begin() + h, ys.end()});
      out.summary.set(p + "total_gate_exponent_upper_half", e);
      out.summary.info(p + "quadratic_scaling", e <= 2.2);
    }
  }
  out.summary.set("n_ref", n_ref < 0 ? std::string("n") : std::to_string(n_ref));
  return out;
}

RunOutput cmd_selftest(std::uint64_t seed, const std::vector<int>& only, bool quiet) {
  RunOutput out;
  out.table.header = {"id", "name", "pass", "metric", "value"};
  AcceptanceOptions opt;
  opt.seed = seed;
  const auto suite = acceptance_suite(opt);
  out.summary.set("seed", static_cast<std::int64_t>(seed));
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto r = run_timed(suite[i]);
    for (const auto& [k, v] : r.metrics)
      out.table.add({std::int64_t{r.id}, r.name, std::int64_t{r.pass}, k, v});
    out.summary.check("criterion" + std::to_string(r.id) + "_" + r.name, r.pass);
    if (!quiet) {
      std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name;
      for (const auto& [k, v] : r.metrics) std::cout << "  " << k << '=' << report::format_double(v);
      if (!r.note.empty()) std::cout << "  (" << r.note << ')';
      std::cout << std::endl;
    }
    std::cerr << "criterion " << r.id << " took " << r.seconds << " s\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

struct OutputOptions {
  std::string out = "-";
  std::string summary;
};

void add_output_options(CLI::App* sub, OutputOptions& o) {
  sub->add_option("--out", o.out, "CSV output path ('-' for stdout)")->capture_default_str();
  sub->add_option("--summary", o.summary, "key=value summary path (default: <out>.summary when --out is a file)");
}

int finish(const std::string& command, RunOutput& res, const OutputOptions& o, bool table_to_stdout = true) {
  res.summary.set("command", command);
  res.summary.set("status", res.summary.passed() ? "pass" : "fail");
  if (table_to_stdout || o.out != "-") report::emit(o.out, [&](std::ostream& os) { res.table.write(os); });
  std::string sp = o.summary;
  if (sp.empty() && o.out != "-") sp = o.out + ".summary";
  if (!sp.empty()) report::emit(sp, [&](std::ostream& os) { res.summary.write(os); });
  if (!res.summary.passed()) {
    std::cerr << command << ": one or more checks failed\n";
    return kExitCheck;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slacq: SLAC derivative block encodings, wavelet preconditioning and emulated solves"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "read options from a TOML/INI file; unknown keys are rejected");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::function<int()> run;

  // symbols
  OutputOptions o_sym;
  int sym_n = 6, sym_samples = 256;
  auto* s_sym = app.add_subcommand("symbols", "Fourier symbols of the continuum, finite-difference and SLAC derivatives");
  s_sym->add_option("--n", sym_n, "qubits (N = 2^n)")->capture_default_str();
  s_sym->add_option("--samples", sym_samples, "momentum samples on (-pi, pi]")->capture_default_str();
  add_output_options(s_sym, o_sym);
  s_sym->callback([&] { run = [&] { auto r = cmd_symbols(sym_n, sym_samples); return finish("symbols", r, o_sym); }; });

  // trunc-error
  OutputOptions o_tr;
  std::string tr_orders = "1,2", tr_N = "8..512";
  auto* s_tr = app.add_subcommand("trunc-error", "operator-norm truncation error against N");
  s_tr->add_option("--orders", tr_orders, "derivative orders")->capture_default_str();
  s_tr->add_option("--N", tr_N, "lattice sizes, 'a..b' doubling or a list")->capture_default_str();
  add_output_options(s_tr, o_tr);
  s_tr->callback([&] {
    run = [&] {
      auto r = cmd_trunc_error(parse_orders(tr_orders), parse_ladder(tr_N, true));
      return finish("trunc-error", r, o_tr);
    };
  });

  // prep-stats
  OutputOptions o_ps;
  std::string ps_orders = "1,2", ps_M = "64..4096";
  int ps_n = 4;
  auto* s_ps = app.add_subcommand("prep-stats", "nested-box preparation: success probability and error against M");
  s_ps->add_option("--orders", ps_orders, "derivative orders")->capture_default_str();
  s_ps->add_option("--n", ps_n, "lattice qubits")->capture_default_str();
  s_ps->add_option("--M", ps_M, "reference sizes, powers of two")->capture_default_str();
  add_output_options(s_ps, o_ps);
  s_ps->callback([&] {
    run = [&] {
      auto r = cmd_prep_stats(parse_orders(ps_orders), ps_n, parse_ladder(ps_M, true));
      return finish("prep-stats", r, o_ps);
    };
  });

  // be-check
  OutputOptions o_be;
  std::string be_orders = "1,2", be_n = "3..5", be_mode = "analytic";
  int be_nref = -1;
  auto* s_be = app.add_subcommand("be-check", "extract encoded blocks and compare with the target operators");
  s_be->add_option("--orders", be_orders, "derivative orders")->capture_default_str();
  s_be->add_option("--n", be_n, "lattice qubits, 'a..b' or a list")->capture_default_str();
  s_be->add_option("--mode", be_mode, "analytic or gate")->capture_default_str();
  s_be->add_option("--n-ref", be_nref, "reference qubits for gate mode (default n)");
  add_output_options(s_be, o_be);
  s_be->callback([&] {
    run = [&] {
      auto r = cmd_be_check(parse_orders(be_orders), to_int(parse_ladder(be_n, false)), be_mode, be_nref);
      return finish("be-check", r, o_be);
    };
  });

  // qswt-check
  OutputOptions o_q;
  std::string q_N = "4..256";
  int q_circ = 8;
  auto* s_q = app.add_subcommand("qswt-check", "unitarity and IR/UV separation of the wavelet transform");
  s_q->add_option("--N", q_N, "lattice sizes")->capture_default_str();
  s_q->add_option("--circuit-max-n", q_circ, "largest n checked gate by gate")->capture_default_str();
  add_output_options(s_q, o_q);
  s_q->callback([&] {
    run = [&] {
      auto r = cmd_qswt_check(parse_ladder(q_N, true), q_circ);
      return finish("qswt-check", r, o_q);
    };
  });

  // multiscale
  OutputOptions o_m;
  int m_n = 9, m_r = -1, m_order = 2;
  std::string m_variant = "truncated";
  auto* s_m = app.add_subcommand("multiscale", "block-coupling report of the multiscale representation");
  s_m->add_option("--n", m_n, "lattice qubits")->capture_default_str();
  s_m->add_option("--r", m_r, "wavelet levels (default n-1)");
  s_m->add_option("--order", m_order, "derivative order")->check(CLI::IsMember({1, 2}))->capture_default_str();
  s_m->add_option("--variant", m_variant, "truncated or exact")->capture_default_str();
  add_output_options(s_m, o_m);
  s_m->callback([&] {
    run = [&] {
      auto r = cmd_multiscale(m_n, m_r, m_order, m_variant);
      return finish("multiscale", r, o_m);
    };
  });

  // precond-sweep
  OutputOptions o_pc;
  std::string pc_ops = "L1,L2,L3,L4", pc_N = "64..512";
  double pc_e = 1.0, pc_eps = 0.5;
  auto* s_pc = app.add_subcommand("precond-sweep", "condition numbers with and without the wavelet preconditioner");
  s_pc->add_option("--ops", pc_ops, "benchmark operators")->capture_default_str();
  s_pc->add_option("--N", pc_N, "lattice sizes within 64..512")->capture_default_str();
  s_pc->add_option("--exponent", pc_e, "preconditioner exponent e, weights 2^{-e l}")->capture_default_str();
  s_pc->add_option("--eps", pc_eps, "L4 coefficient amplitude")->capture_default_str();
  add_output_options(s_pc, o_pc);
  s_pc->callback([&] {
    run = [&] {
      auto r = cmd_precond_sweep(split(pc_ops, ','), parse_ladder(pc_N, true), pc_e, pc_eps);
      return finish("precond-sweep", r, o_pc);
    };
  });

  // band-check
  OutputOptions o_b;
  std::string b_n = "4..9";
  auto* s_b = app.add_subcommand("band-check", "dyadic eigenvalue bands of the preconditioned Laplacian");
  s_b->add_option("--n", b_n, "lattice qubits")->capture_default_str();
  add_output_options(s_b, o_b);
  s_b->callback([&] {
    run = [&] {
      auto r = cmd_band_check(to_int(parse_ladder(b_n, false)));
      return finish("band-check", r, o_b);
    };
  });

  // solve
  OutputOptions o_s;
  SolveOptions so;
  auto* s_s = app.add_subcommand("solve", "emulated preconditioned solve with residual and oracle checks");
  s_s->add_option("--problem", so.problem, "poisson1d, poisson2d, L1, L2, L3 or L4")->capture_default_str();
  s_s->add_option("--n", so.n, "qubits per axis")->capture_default_str();
  s_s->add_option("--seed", so.seed, "seed for the random right-hand side")->capture_default_str();
  s_s->add_option("--rhs", so.rhs, "random or mode")->capture_default_str();
  s_s->add_option("--mode-k", so.mode_k, "momentum of the cosine right-hand side")->capture_default_str();
  s_s->add_option("--exponent", so.exponent, "preconditioner exponent")->capture_default_str();
  s_s->add_option("--eps", so.eps, "L4 coefficient amplitude")->capture_default_str();
  s_s->add_option("--solution", so.solution_path, "write the solution vector as CSV");
  add_output_options(s_s, o_s);
  s_s->callback([&] {
    run = [&] {
      auto r = cmd_solve(so);
      return finish("solve", r, o_s);
    };
  });

  // gate-count
  OutputOptions o_g;
  std::string g_orders = "1,2", g_n = "3..10";
  int g_nref = -1;
  auto* s_g = app.add_subcommand("gate-count", "Toffoli and total-gate tallies of the assembled encodings");
  s_g->add_option("--orders", g_orders, "derivative orders")->capture_default_str();
  s_g->add_option("--n", g_n, "lattice qubits")->capture_default_str();
  s_g->add_option("--n-ref", g_nref, "reference qubits (default n)");
  add_output_options(s_g, o_g);
  s_g->callback([&] {
    run = [&] {
      auto r = cmd_gate_count(parse_orders(g_orders), to_int(parse_ladder(g_n, false)), g_nref);
      return finish("gate-count", r, o_g);
    };
  });

  // selftest
  OutputOptions o_st;
  std::uint64_t st_seed = AcceptanceOptions{}.seed;
  std::string st_only;
  bool st_quiet = false;
  auto* s_st = app.add_subcommand("selftest", "run the full acceptance suite");
  s_st->add_option("--seed", st_seed, "seed for randomized probes")->capture_default_str();
  s_st->add_option("--only", st_only, "comma list of criterion ids");
  s_st->add_flag("--quiet", st_quiet, "suppress the per-criterion lines");
  add_output_options(s_st, o_st);
  s_st->callback([&] {
    run = [&] {
      std::vector<int> only;
      if (!st_only.empty()) only = to_int(parse_ladder(st_only, false));
      auto r = cmd_selftest(st_seed, only, st_quiet);
      return finish("selftest", r, o_st, false);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return run();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kExitCheck;
  }
}
