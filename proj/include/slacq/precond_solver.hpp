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

// Diagonal wavelet preconditioner, zero-mode projection, condition numbers,
// benchmark elliptic operators and a classically emulated preconditioned solve.
//
// The solve replaces quantum matrix inversion by an exact pseudo-inverse of the
// dense preconditioned matrix; everything around it (wavelet basis, diagonal
// preconditioner, projection, query counting) follows the coherent pipeline.

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "slacq/block_encoding.hpp"
#include "slacq/common.hpp"
#include "slacq/linalg.hpp"
#include "slacq/qsim.hpp"
#include "slacq/qswt.hpp"
#include "slacq/slac_core.hpp"

namespace slacq {

// Scale of basis index i in the multiscale ordering: 0 for i < 2, else floor(log2 i).
inline int scale_of(std::int64_t i) {
  int l = 0;
  while ((i >> (l + 1)) > 0) ++l;
  return l;
}

struct Preconditioner {
  int n = 0;
  double exponent = 1.0;
  std::vector<double> weights;  // w_l for l = 0..n-1, w_0 = 1

  std::int64_t N() const { return std::int64_t{1} << n; }
  double theta(int l) const { return std::acos(weights.at(l)); }
  RVector diagonal() const {
    RVector d(N());
    for (std::int64_t i = 0; i < N(); ++i) d(i) = weights[scale_of(i)];
    return d;
  }
  CMatrix dense() const { return diagonal().cast<cplx>().asDiagonal(); }
};

inline Preconditioner preconditioner_from_weights(int n, std::vector<double> w, double exponent = 0.0) {
  if (n < 2) throw ConfigError("preconditioner needs n >= 2");
  if (static_cast<int>(w.size()) != n) throw ConfigError("need one weight per scale");
  if (w[0] != 1.0) throw ConfigError("the leading 2x2 block must have weight 1");
  for (double x : w)
    if (!(x > 0.0 && x <= 1.0)) throw ConfigError("weights must lie in (0, 1]");
  return Preconditioner{n, exponent, std::move(w)};
}

inline Preconditioner build_preconditioner(int n, double exponent) {
  if (exponent < 0.0) throw ConfigError("exponent must be non-negative");
  std::vector<double> w(n);
  for (int l = 0; l < n; ++l) w[l] = std::exp2(-exponent * l);
  return preconditioner_from_weights(n, std::move(w), exponent);
}

struct UnitaryPair {
  CVector plus, minus;  // diagonals of exp(+- i arccos P)
};

inline UnitaryPair u_plus_minus(const Preconditioner& pre) {
  const RVector d = pre.diagonal();
  UnitaryPair u{CVector(d.size()), CVector(d.size())};
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double th = std::acos(d(i));
    u.plus(i) = std::exp(kI * th);
    u.minus(i) = std::exp(-kI * th);
  }
  return u;
}

inline int precond_ladder_width(int n) { return std::max(0, n - 2); }

// Ladder h_s = [top s qubits of sys all |0>], s = 1..n-2.
inline Circuit zero_prefix_ladder(const RegisterLayout& lay, int depth, const std::string& sys,
                                  const std::string& ladder) {
  Circuit c;
  if (depth <= 0) return c;
  const auto q = lay.qubits(sys);
  const auto h = lay.qubits(ladder);
  const int n = static_cast<int>(q.size());
  if (static_cast<int>(h.size()) < depth) throw ConfigError("ladder register too small");
  c.add(gate_op(GateKind::X, h[0], {Control{q[n - 1], false}}));
  for (int s = 2; s <= depth; ++s) c.add(gate_op(GateKind::X, h[s - 1], {Control{h[s - 2], true}, Control{q[n - s], false}}));
  return c;
}

// Phase(sign * theta_l) on qubit l when every higher qubit is |0>; with a
// computed ladder this is one singly controlled phase per scale.
inline Circuit precond_phases(const RegisterLayout& lay, const Preconditioner& pre, double sign, Controls extra,
                              const std::string& sys, const std::string& ladder) {
  const auto q = lay.qubits(sys);
  const int n = static_cast<int>(q.size());
  if (n != pre.n) throw ConfigError("preconditioner size does not match the system register");
  std::vector<int> h;
  if (n > 2) h = lay.qubits(ladder);
  Circuit c;
  for (int l = 1; l < n; ++l) {
    const double th = pre.theta(l);
    if (th == 0.0) continue;
    Controls ctl = extra;
    const int s = n - 1 - l;
    if (s >= 1) ctl.push_back(Control{h[s - 1], true});
    c.add(gate_op(GateKind::Phase, q[l], ctl, sign * th));
  }
  return c;
}

// Stand-alone U+ (sign = +1) or U- (sign = -1).
inline Circuit u_circuit(const RegisterLayout& lay, const Preconditioner& pre, double sign,
                         const std::string& sys = "sys", const std::string& ladder = "h") {
  const Circuit lad = zero_prefix_ladder(lay, precond_ladder_width(pre.n), sys, ladder);
  Circuit c;
  c.append(lad);
  c.append(precond_phases(lay, pre, sign, {}, sys, ladder));
  c.append(lad.adjoint());
  return c;
}

// U_P = (H x I) L0(U+) L1(U-) (H x I) on ancilla `anc`.
inline Circuit precond_circuit(const RegisterLayout& lay, const Preconditioner& pre, const std::string& anc,
                               const std::string& sys, const std::string& ladder) {
  const int p = lay.qubit(anc, 0);
  const Circuit lad = zero_prefix_ladder(lay, precond_ladder_width(pre.n), sys, ladder);
  Circuit c;
  c.add(marker_op("precond"));
  c.add(gate_op(GateKind::H, p));
  c.append(lad);
  c.append(precond_phases(lay, pre, +1.0, {Control{p, false}}, sys, ladder));
  c.append(precond_phases(lay, pre, -1.0, {Control{p, true}}, sys, ladder));
  c.append(lad.adjoint());
  c.add(gate_op(GateKind::H, p));
  return c;
}

inline BlockEncodingSpec precond_block_encoding(const Preconditioner& pre) {
  BlockEncodingSpec be;
  be.label = "preconditioner";
  be.layout.add("p", 1);
  const int lw = precond_ladder_width(pre.n);
  if (lw > 0) be.layout.add("h", lw);
  be.layout.add("sys", pre.n);
  be.circuit = precond_circuit(be.layout, pre, "p", "sys", "h");
  be.ancillas = {"p"};
  if (lw > 0) be.scratch = {"h"};
  be.alpha = 1.0;
  return be;
}

// Encoding of P W (A / alpha) W^dagger P from an encoding of A.
inline BlockEncodingSpec preconditioned_encoding(const BlockEncodingSpec& be, int r, const Preconditioner& pre) {
  const int n = be.system_qubits();
  if (n != pre.n) throw ConfigError("preconditioner size does not match the encoding");
  validate_scale(n, r);
  BlockEncodingSpec out;
  out.label = be.label + "_preconditioned";
  auto rename = [&](const std::string& s) { return s == be.system ? std::string("sys") : s; };
  for (const auto& reg : be.layout.registers()) out.layout.add(rename(reg.name), reg.width);
  const int lw = std::max(multiscale_ladder_width(r), precond_ladder_width(n));
  if (lw > 0) out.layout.add("g", lw);
  out.layout.add("p1", 1).add("p2", 1);
  std::vector<int> map(be.layout.total());
  for (const auto& reg : be.layout.registers())
    for (int b = 0; b < reg.width; ++b) map[reg.offset + b] = out.layout.qubit(rename(reg.name), b);

  const Circuit w = multiscale_circuit(out.layout, r, "sys", "g");
  out.circuit.append(precond_circuit(out.layout, pre, "p2", "sys", "g"));
  out.circuit.append(w.adjoint());
  out.circuit.append(be.circuit.remapped(map));
  out.circuit.append(w);
  out.circuit.append(precond_circuit(out.layout, pre, "p1", "sys", "g"));
  out.ancillas = be.ancillas;
  out.ancillas.push_back("p1");
  out.ancillas.push_back("p2");
  out.scratch = be.scratch;
  if (lw > 0) out.scratch.push_back("g");
  out.alpha = be.alpha;
  out.sign = be.sign;
  out.epsilon = be.epsilon;
  return out;
}

// ---------------------------------------------------------------------------
// Zero mode and right-hand-side projection

// k = 0 Fourier mode: the uniform vector H^{x n}|0>.
inline CVector null_vector(std::int64_t N) {
  return CVector::Constant(N, 1.0 / std::sqrt(static_cast<double>(N)));
}

// H applied to qubit 0 only, |0...0> -> (|0> + |1>)/sqrt 2.
inline CVector single_hadamard_vector(std::int64_t N) {
  CVector v = CVector::Zero(N);
  v(0) = v(1) = 1.0 / std::sqrt(2.0);
  return v;
}

inline CVector project_rhs(const CVector& b, const CVector& psi_null) {
  return b - psi_null * psi_null.dot(b);
}

struct SwapTestResult {
  CVector projected;               // dense (I - |psi><psi|) b
  bool zero_rhs = false;           // b has no component outside the zero mode
  double flag_probability = 0.0;   // P(F = 1), reference register traced out
  double success_probability = 0;  // P(F = 1 and reference returned to psi_null)
  CVector state;                   // normalised post-selected system state
  GateTally tally;
};

// Controlled-swap test against psi_null = H^{x n}|0> on a reference register.
inline SwapTestResult swap_test_projection(const CVector& b) {
  const std::int64_t N = b.size();
  const int n = log2_exact(N);
  if (std::abs(b.norm() - 1.0) > 1e-10) throw ConfigError("right-hand side must be unit norm");
  SwapTestResult res;
  res.projected = project_rhs(b, null_vector(N));
  res.zero_rhs = res.projected.norm() <= 1e-12;

  RegisterLayout lay;
  lay.add("F", 1).add("R", n).add("S", n);
  const cplx ph = std::abs(b(0)) > 0.0 ? b(0) / std::abs(b(0)) : cplx{1.0};
  const auto R = lay.qubits("R"), S = lay.qubits("S");
  const int F = lay.qubit("F", 0);
  Circuit c;
  for (int q : R) c.add(gate_op(GateKind::H, q));
  c.add(state_loader_op(S, CVector(b / ph), "rhs_load"));
  c.add(gate_op(GateKind::H, F));
  for (int i = 0; i < n; ++i) c.add(swap_op(R[i], S[i], {Control{F, true}}));
  c.add(gate_op(GateKind::H, F));
  Statevector s(lay);
  c.apply(s);
  res.flag_probability = project_and_extract(s, {{"F", 1}}).probability;
  for (int q : R) apply_gate(s, GateKind::H, q);
  const auto p = project_and_extract(s, {{"F", 1}, {"R", 0}}, true);
  res.success_probability = p.probability;
  if (p.probability > 1e-24) res.state = ph * p.residual;
  res.tally = s.tally();
  res.tally += c.cost();
  return res;
}

// ---------------------------------------------------------------------------
// Condition numbers

// sigma_max / sigma_min. With projection, singular values below
// null_tol * sigma_max are dropped; without it a value that small means the
// matrix is singular and the result is +infinity.
inline double condition_number(const CMatrix& A, bool project_nullspace, double null_tol = 1e-8) {
  const RVector s = singular_values(A);
  if (s.size() == 0 || s(0) == 0.0) throw ConfigError("matrix has no nonzero singular value");
  const double cut = null_tol * s(0);
  if (!project_nullspace) {
    const double smin = s(s.size() - 1);
    return smin <= cut ? std::numeric_limits<double>::infinity() : s(0) / smin;
  }
  double smin = s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) smin = s(i);
  return s(0) / smin;
}

struct Band {
  int scale = 0;
  std::int64_t dim = 0;
  double lo = 0.0, hi = 0.0;
};

// Spectrum of each multiscale block of the exact Laplacian, in units where
// momentum k has eigenvalue k^2, times w_l^2 (w_l = 2^{-l}). The zero mode is
// skipped.
inline std::vector<Band> dyadic_band_check(int n) {
  if (n < 3) throw ConfigError("dyadic_band_check needs n >= 3");
  const LatticeConfig cfg(n);
  const std::int64_t N = cfg.N();
  const double unit = static_cast<double>(N) / (2.0 * kPi);
  const CMatrix A = -unit * unit * to_dense(exact_laplacian(cfg));
  const auto plan = plan_multiscale(n, n - 1);
  const CMatrix Aw = plan.W * A * plan.W.adjoint();
  const auto off = plan.block_offsets();
  std::vector<Band> bands;
  for (std::size_t b = 0; b < plan.block_dims.size(); ++b) {
    const std::int64_t dim = plan.block_dims[b];
    const CMatrix blk = Aw.block(off[b], off[b], dim, dim);
    const CMatrix herm = 0.5 * (blk + blk.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    const int l = scale_of(off[b]);
    const double w2 = std::exp2(-2.0 * l);
    Band band{l, dim, std::numeric_limits<double>::infinity(), 0.0};
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double v = es.eigenvalues()(i);
      if (std::abs(v) < 1e-8) continue;
      band.lo = std::min(band.lo, w2 * v);
      band.hi = std::max(band.hi, w2 * v);
    }
    bands.push_back(band);
  }
  return bands;
}

// ---------------------------------------------------------------------------
// Benchmark operators on the periodic unit interval, x_k = k / N. The unit
// domain derivative is N times the unit-spacing lattice operator.

enum class Benchmark { L1, L2, L3, L4 };

inline Benchmark parse_benchmark(const std::string& s) {
  if (s == "L1") return Benchmark::L1;
  if (s == "L2") return Benchmark::L2;
  if (s == "L3") return Benchmark::L3;
  if (s == "L4") return Benchmark::L4;
  throw ConfigError("unknown benchmark '" + s + "'");
}

inline std::string benchmark_name(Benchmark b) {
  static const char* names[] = {"L1", "L2", "L3", "L4"};
  return names[static_cast<int>(b)];
}

struct Ellipticity {
  double principal_min = 0.0;  // min of the principal coefficient over the grid
  double theta = 0.0;          // analytic lower bound
  bool elliptic = false;
};

struct BenchmarkOperator {
  Benchmark which = Benchmark::L1;
  CMatrix A;
  Ellipticity ellipticity;
};

inline BenchmarkOperator benchmark_operator(Benchmark which, const LatticeConfig& cfg, double eps = 0.5,
                                            Variant variant = Variant::truncated) {
  cfg.validate();
  if (which == Benchmark::L4 && !(eps > 0.0 && eps < 1.0)) throw ConfigError("L4 needs 0 < eps < 1");
  const std::int64_t N = cfg.N();
  const double Nd = static_cast<double>(N);
  const CMatrix D = Nd * to_dense(slac_operator(1, variant, cfg));
  const CMatrix L = Nd * Nd * to_dense(slac_operator(2, variant, cfg));
  const CMatrix I = CMatrix::Identity(N, N);
  auto diag = [&](auto f) {
    CVector v(N);
    for (std::int64_t k = 0; k < N; ++k) v(k) = f(static_cast<double>(k) / Nd);
    return v;
  };
  auto principal = [&](auto f, double theta) {
    double m = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k < N; ++k) m = std::min(m, f(static_cast<double>(k) / Nd));
    return Ellipticity{m, theta, m >= theta - 1e-12 && m > 0.0};
  };
  const auto one = [](double) { return 1.0; };
  BenchmarkOperator out;
  out.which = which;
  switch (which) {
    case Benchmark::L1:
      out.A = L - D + I;
      out.ellipticity = principal(one, 1.0);
      break;
    case Benchmark::L2: {
      const auto ca = [](double x) { return std::cosh(x / 4.0); };
      out.A = -D * diag(ca).asDiagonal() * D;
      out.A += CMatrix(diag([](double x) { return std::exp(x); }).asDiagonal());
      out.ellipticity = principal(ca, 1.0);
      break;
    }
    case Benchmark::L3:
      out.A = -L;
      out.A += CMatrix(diag([](double x) { return 1.0 + std::pow(std::sin(2.0 * kPi * x), 2); }).asDiagonal());
      out.ellipticity = principal(one, 1.0);
      break;
    case Benchmark::L4: {
      const auto ae = [eps](double x) { return 1.0 + eps * std::cos(2.0 * kPi * x); };
      out.A = -D * diag(ae).asDiagonal() * D + I;
      out.ellipticity = principal(ae, 1.0 - eps);
      break;
    }
  }
  return out;
}

// P W A W^dagger P with the full-depth multiscale basis.
inline CMatrix precondition_dense(const CMatrix& A, const Preconditioner& pre, int r = -1) {
  const int n = pre.n;
  const CMatrix W = multiscale_dense(n, r < 0 ? n - 1 : r);
  const RVector d = pre.diagonal();
  return d.cast<cplx>().asDiagonal() * (W * A * W.adjoint()) * d.cast<cplx>().asDiagonal();
}

struct SweepRow {
  int n = 0;
  std::int64_t N = 0;
  double kappa = 0.0, kappa_p = 0.0;
};

inline std::vector<SweepRow> condition_sweep(Benchmark which, const std::vector<int>& ns, double exponent = 1.0,
                                             double eps = 0.5, int workers = worker_count()) {
  std::vector<SweepRow> rows(ns.size());
  for (int n : ns)
    if (n < 6 || n > 9) throw ConfigError("sweep sizes must lie in N = 64..512");
  parallel_for(static_cast<std::int64_t>(ns.size()), [&](std::int64_t i) {
    const LatticeConfig cfg(ns[i]);
    const auto op = benchmark_operator(which, cfg, eps);
    const auto pre = build_preconditioner(cfg.n, exponent);
    rows[i] = SweepRow{cfg.n, cfg.N(), condition_number(op.A, false),
                       condition_number(precondition_dense(op.A, pre), false)};
  }, workers);
  return rows;
}

// ---------------------------------------------------------------------------
// Emulated solve

struct PDEProblem {
  int dim = 1;             // 1 or 2
  int n = 0;               // qubits per axis
  CMatrix op;              // one-axis operator; d = 2 uses the Kronecker sum
  CVector b;               // right-hand side over the full grid
  bool project_nullspace = false;
  double exponent = 1.0;
  double null_tol = 1e-8;
};

struct SolveReport {
  double kappa = 0.0;     // unpreconditioned
  double kappa_p = 0.0;   // preconditioned
  double residual = 0.0;  // |A u - b_proj| / |b_proj|
  double fidelity = 0.0;  // against a direct pseudo-inverse solve
  double branch_mismatch = 0.0;  // |u - (1/4) sum_ab psi_ab|
  bool zero_rhs = false;
  std::int64_t qswt_calls = 0;
  std::int64_t encoding_calls = 0;
  std::int64_t precond_calls = 0;
  CVector u;
};

namespace detail {

inline CMatrix pseudo_inverse(const CMatrix& A, double tol, std::int64_t allowed_null) {
  const Svd svd = full_svd(A);
  const RVector& s = svd.s;
  const double cut = tol * s(0);
  std::int64_t dropped = 0;
  RVector inv(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) inv(i) = 1.0 / s(i);
    else { inv(i) = 0.0; ++dropped; }
  }
  if (dropped > allowed_null) throw std::runtime_error("system is singular after projection");
  return svd.V * inv.cast<cplx>().asDiagonal() * svd.U.adjoint();
}

inline double fidelity(const CVector& a, const CVector& b) {
  const double na = a.squaredNorm(), nb = b.squaredNorm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::norm(a.dot(b)) / (na * nb);
}

}  // namespace detail

inline SolveReport emulated_solve(const PDEProblem& pb) {
  if (pb.dim != 1 && pb.dim != 2) throw ConfigError("dimension must be 1 or 2");
  const std::int64_t Na = std::int64_t{1} << pb.n;
  if (pb.op.rows() != Na || pb.op.cols() != Na) throw ConfigError("operator does not match the grid");
  const std::int64_t dim = pb.dim == 1 ? Na : Na * Na;
  if (pb.b.size() != dim) throw ConfigError("right-hand side does not match the grid");
  if (dim > kDenseLimit) throw std::length_error("dense limit exceeded");

  const auto pre1 = build_preconditioner(pb.n, pb.exponent);
  const CMatrix W1 = multiscale_dense(pb.n, pb.n - 1);
  const RVector d1 = pre1.diagonal();
  const CVector z1 = null_vector(Na);
  CMatrix A, W;
  RVector d;
  CVector z;
  if (pb.dim == 1) {
    A = pb.op;
    W = W1;
    d = d1;
    z = z1;
  } else {
    const CMatrix I = CMatrix::Identity(Na, Na);
    A = Eigen::kroneckerProduct(pb.op, I).eval() + Eigen::kroneckerProduct(I, pb.op).eval();
    W = Eigen::kroneckerProduct(W1, W1).eval();
    z = Eigen::kroneckerProduct(z1, z1).eval();
    // Per-index weight of the coarser scale: the larger level wins.
    d.resize(dim);
    for (std::int64_t x = 0; x < Na; ++x)
      for (std::int64_t y = 0; y < Na; ++y) d(x * Na + y) = std::min(d1(x), d1(y));
  }
  CVector uplus(dim), uminus(dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    const double th = std::acos(d(i));
    uplus(i) = std::exp(kI * th);
    uminus(i) = std::exp(-kI * th);
  }

  SolveReport rep;
  rep.qswt_calls = 2 * pb.dim * (pb.n - 1);
  rep.encoding_calls = 1;
  rep.precond_calls = 2;
  const CVector bp = pb.project_nullspace ? project_rhs(pb.b, z) : pb.b;
  if (bp.norm() <= 1e-12 * std::max(1.0, pb.b.norm())) {
    rep.zero_rhs = true;
    return rep;
  }
  const CMatrix Ap = d.cast<cplx>().asDiagonal() * (W * A * W.adjoint()) * d.cast<cplx>().asDiagonal();
  rep.kappa = condition_number(A, pb.project_nullspace, pb.null_tol);
  rep.kappa_p = condition_number(Ap, pb.project_nullspace, pb.null_tol);
  const std::int64_t allowed = pb.project_nullspace ? 1 : 0;
  const CMatrix Apinv = detail::pseudo_inverse(Ap, pb.null_tol, allowed);

  const CVector wb = W * bp;
  CVector acc = CVector::Zero(dim);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const CVector& ua = a == 0 ? uplus : uminus;
      const CVector& ub = b == 0 ? uplus : uminus;
      acc += W.adjoint() * (ua.asDiagonal() * (Apinv * (ub.asDiagonal() * wb)));
    }
  acc *= 0.25;
  rep.u = W.adjoint() * (d.cast<cplx>().asDiagonal() * (Apinv * (d.cast<cplx>().asDiagonal() * wb)));
  rep.branch_mismatch = (rep.u - acc).norm() / std::max(rep.u.norm(), 1e-300);
  rep.residual = (A * rep.u - bp).norm() / bp.norm();
  const CVector uref = detail::pseudo_inverse(A, pb.null_tol, allowed) * bp;
  rep.fidelity = detail::fidelity(uref, rep.u);
  return rep;
}

}  // namespace slacq
