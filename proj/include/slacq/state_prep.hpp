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

// Nested-box inequality-test state preparation for the SLAC coefficient
// magnitudes. Indices j in [2^mu, 2^{mu+1}) share a box; a geometric (order 2)
// or uniform (order 1) weight is put on mu, j is spread uniformly inside its
// box, and the comparison against a uniform reference register m in [0, M)
// trims each amplitude to 1/j (order 2) or 1/sqrt(j) (order 1).
//
// Register order is (mu, j, d, a, ref, f) followed by (C, sys) when the
// preparation is embedded in an LCU. The a register exists for order 2 only.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "slacq/common.hpp"
#include "slacq/qsim.hpp"
#include "slacq/slac_core.hpp"

namespace slacq {

struct PrepConfig {
  int n = 0;
  int n_ref = 0;
  int order = 2;

  PrepConfig() = default;
  PrepConfig(int n_, int order_, int n_ref_ = -1) : n(n_), n_ref(n_ref_ < 0 ? n_ : n_ref_), order(order_) {
    validate();
  }

  std::int64_t N() const { return std::int64_t{1} << n; }
  std::int64_t M() const { return std::int64_t{1} << n_ref; }

  void validate() const {
    if (order != 1 && order != 2) throw ConfigError("order must be 1 or 2");
    if (n < 3) throw ConfigError("nested-box preparation needs n >= 3");
    if (n_ref < 2) throw ConfigError("reference register needs M >= 4");
  }

  // State angle of the a ancilla: tan(theta_ini) = sqrt(24/pi^2). The Ry gate
  // angle is twice this value.
  double theta_ini() const { return std::atan(std::sqrt(24.0 / (kPi * kPi))); }

  // Ry angle on mu_k deciding "mu == k" against "mu > k".
  double theta(int k) const {
    if (order == 2)
      return 2.0 * std::acos(1.0 / std::sqrt(2.0 * (1.0 - std::ldexp(1.0, -(n - 1 - k)))));
    return 2.0 * std::acos(1.0 / std::sqrt(static_cast<double>(n - 1 - k)));
  }
};

inline int box_of(std::int64_t j) {
  if (j < 1) throw std::invalid_argument("box_of: j must be positive");
  int mu = 0;
  while ((j >> (mu + 1)) != 0) ++mu;
  return mu;
}

// Number of m in [0, M) passing the strict inequality; equals the ceiling form.
inline std::int64_t accept_count(int mu, std::int64_t j, std::int64_t M, int order) {
  if (j < 1 || box_of(j) != mu) throw std::invalid_argument("accept_count: j outside box mu");
  const std::int64_t lhs = (order == 2 ? (std::int64_t{1} << (2 * mu)) : (std::int64_t{1} << mu)) * M;
  const std::int64_t den = order == 2 ? j * j : j;
  return std::min<std::int64_t>(M, (lhs + den - 1) / den);
}

inline RegisterLayout prep_layout(const PrepConfig& cfg, bool with_system = false, const std::string& prefix = "") {
  RegisterLayout lay;
  lay.add(prefix + "mu", cfg.n - 1).add(prefix + "j", cfg.n - 1).add(prefix + "d", 1);
  if (cfg.order == 2) lay.add(prefix + "a", 1);
  lay.add(prefix + "ref", cfg.n_ref).add(prefix + "f", 1);
  if (with_system) lay.add(prefix + "C", 1).add("sys", cfg.n);
  return lay;
}

struct PrepStage {
  std::string name;
  Circuit circuit;
};

// The gate-level preparation, one named stage per logical step.
inline std::vector<PrepStage> prep_stages(const PrepConfig& cfg, const RegisterLayout& lay,
                                          const std::string& prefix = "") {
  cfg.validate();
  const int k = cfg.n - 1;
  const auto mu = lay.qubits(prefix + "mu");
  const auto j = lay.qubits(prefix + "j");
  const int d = lay.qubit(prefix + "d", 0);
  const auto ref = lay.qubits(prefix + "ref");
  const int f = lay.qubit(prefix + "f", 0);
  const bool lap = cfg.order == 2;
  const int a = lap ? lay.qubit(prefix + "a", 0) : -1;

  std::vector<PrepStage> st;

  Circuit rot;
  if (lap) {
    rot.add(gate_op(GateKind::Ry, a, {}, 2.0 * cfg.theta_ini()));
    rot.add(gate_op(GateKind::Ry, mu[0], {Control{a, true}}, cfg.theta(0)));
  } else {
    rot.add(gate_op(GateKind::Ry, mu[0], {}, cfg.theta(0)));
  }
  for (int i = 1; i <= k - 2; ++i) rot.add(gate_op(GateKind::Ry, mu[i], {Control{mu[i - 1], true}}, cfg.theta(i)));
  st.push_back({"rotations", rot});

  Circuit had;
  for (int i = 0; i < k; ++i) had.add(gate_op(GateKind::H, j[i], {Control{mu[i], true}}));
  st.push_back({"hadamards", had});

  Circuit hot;
  for (int i = k - 2; i >= 0; --i) hot.add(gate_op(GateKind::X, mu[i + 1], {Control{mu[i], true}}));
  if (lap) hot.add(gate_op(GateKind::X, mu[0], {Control{a, true}}));
  else hot.add(gate_op(GateKind::X, mu[0]));
  st.push_back({"one_hot", hot});

  Circuit box;
  for (int i = 0; i < k; ++i) box.add(gate_op(GateKind::X, j[i], {Control{mu[i], true}}));
  st.push_back({"box_fit", box});

  Circuit rf;
  for (int q : ref) rf.add(gate_op(GateKind::H, q));
  st.push_back({"reference", rf});

  // f flips when the strict test M * 2^{order*mu} > m * j^order fails. The
  // left side uses the one-hot mu bits relabelled as powers of 2^order.
  std::vector<int> inputs = mu;
  inputs.insert(inputs.end(), j.begin(), j.end());
  inputs.insert(inputs.end(), ref.begin(), ref.end());
  const int order = cfg.order;
  const std::uint64_t M = static_cast<std::uint64_t>(cfg.M());
  const int nref = cfg.n_ref;
  auto fails = [k, nref, order, M](std::uint64_t v) {
    const std::uint64_t muv = v & ((std::uint64_t{1} << k) - 1);
    const std::uint64_t jv = (v >> k) & ((std::uint64_t{1} << k) - 1);
    const std::uint64_t m = (v >> (2 * k)) & ((std::uint64_t{1} << nref) - 1);
    std::uint64_t lhs = 0;
    for (int i = 0; i < k; ++i)
      if ((muv >> i) & 1) lhs += std::uint64_t{1} << (order * i);
    lhs *= M;
    const std::uint64_t rhs = m * (order == 2 ? jv * jv : jv);
    return !(lhs > rhs);
  };
  Circuit ineq;
  ineq.add(predicate_op(inputs, f, fails, lap ? Controls{Control{a, true}} : Controls{}, "inequality",
                        tally_inequality_cost(cfg.n, cfg.n_ref, cfg.order).total()));
  st.push_back({"inequality", ineq});

  Circuit dir;
  dir.add(lap ? gate_op(GateKind::H, d, {Control{a, true}}) : gate_op(GateKind::H, d));
  st.push_back({"direction", dir});
  return st;
}

inline Circuit prep_circuit(const PrepConfig& cfg, const RegisterLayout& lay, const std::string& prefix = "") {
  Circuit c;
  for (const auto& s : prep_stages(cfg, lay, prefix)) c.append(s.circuit);
  return c;
}

struct PrepOutcome {
  PrepConfig cfg;
  double success_probability = 0.0;
  // Success-branch probability mass per (j, d), summed over mu, a and ref.
  std::vector<std::array<double, 2>> weight_jd;
  // Success-branch probability mass per (mu register value, j, d).
  std::vector<double> weight_mujd;
  GateTally tally;

  double weight(std::int64_t j) const { return weight_jd[j][0] + weight_jd[j][1]; }
  double mass(std::uint64_t mu, std::uint64_t j, std::uint64_t d) const {
    const int k = cfg.n - 1;
    return weight_mujd[(mu << (k + 1)) | (j << 1) | d];
  }
};

inline PrepOutcome summarize_prep(const PrepConfig& cfg, const Statevector& s) {
  const auto& lay = s.layout();
  const int k = cfg.n - 1;
  PrepOutcome out;
  out.cfg = cfg;
  out.weight_jd.assign(std::size_t{1} << k, {0.0, 0.0});
  out.weight_mujd.assign(std::size_t{1} << (2 * k + 1), 0.0);
  const auto& amp = s.data();
  const auto& f = lay.reg("f");
  for (std::uint64_t i = 0; i < amp.size(); ++i) {
    if ((i >> f.offset) & 1) continue;
    const double p = std::norm(amp[i]);
    if (p == 0.0) continue;
    const auto mu = lay.value(i, "mu"), j = lay.value(i, "j"), d = lay.value(i, "d");
    out.weight_jd[j][d] += p;
    out.weight_mujd[(mu << (k + 1)) | (j << 1) | d] += p;
    out.success_probability += p;
  }
  out.tally = s.tally();
  return out;
}

inline PrepOutcome simulate_prep(const PrepConfig& cfg) {
  const auto lay = prep_layout(cfg);
  Statevector s(lay);
  prep_circuit(cfg, lay).apply(s);
  return summarize_prep(cfg, s);
}

inline PrepOutcome build_prep_laplacian(const PrepConfig& cfg) {
  if (cfg.order != 2) throw ConfigError("build_prep_laplacian needs order 2");
  return simulate_prep(cfg);
}

inline PrepOutcome build_prep_first_order(const PrepConfig& cfg) {
  if (cfg.order != 1) throw ConfigError("build_prep_first_order needs order 1");
  return simulate_prep(cfg);
}

// Success mass per j (both d values) of the preparation circuit with the
// ceilings dropped, i.e. its M -> infinity limit.
inline std::vector<double> prep_limit_weights(const PrepConfig& cfg) {
  const std::int64_t half = cfg.N() / 2;
  std::vector<double> w(half, 0.0);
  const double tail = 1.0 - std::ldexp(1.0, -(cfg.n - 1));
  for (std::int64_t j = 1; j < half; ++j) {
    const double jd = static_cast<double>(j);
    if (cfg.order == 2) w[j] = 12.0 / ((kPi * kPi + 24.0) * tail * jd * jd);
    else w[j] = 1.0 / ((cfg.n - 1) * jd);
  }
  if (cfg.order == 2) w[0] = kPi * kPi / (kPi * kPi + 24.0);
  return w;
}

// Unit vector over j in [0, N) with entries proportional to sqrt|coeff_j| of
// the truncated operator. Ceiling corrections are not included.
inline std::vector<double> analytic_target(int order, int n) {
  const auto op = slac_operator(order, Variant::truncated, LatticeConfig(n));
  std::vector<double> t(op.coeffs.size());
  double s = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    t[j] = std::sqrt(std::abs(op.coeffs[j]));
    s += t[j] * t[j];
  }
  for (auto& x : t) x /= std::sqrt(s);
  return t;
}

// L2 distance between the normalised square roots of two non-negative weight
// vectors.
inline double amplitude_distance(const std::vector<double>& w, const std::vector<double>& ref) {
  double sw = 0.0, sr = 0.0;
  for (double x : w) sw += x;
  for (double x : ref) sr += x;
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double e = std::sqrt(w[i] / sw) - std::sqrt(ref[i] / sr);
    acc += e * e;
  }
  return std::sqrt(acc);
}

// Finite-M preparation error: distance of the simulated success weights from
// the circuit's own M -> infinity limit.
inline double prep_error(const PrepOutcome& out) {
  std::vector<double> w(out.weight_jd.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = out.weight(static_cast<std::int64_t>(j));
  return amplitude_distance(w, prep_limit_weights(out.cfg));
}

// Upper bound on the finite-M error: the total success mass
// that the ceilings can add, proportional to 1/M.
inline double prep_error_bound(const PrepConfig& cfg) {
  const double M = static_cast<double>(cfg.M());
  double s = 0.0;
  const std::int64_t half = cfg.N() / 2;
  for (std::int64_t j = 1; j < half; ++j) {
    const int mu = box_of(j);
    s += cfg.order == 2 ? std::ldexp(1.0, -2 * mu) : std::ldexp(1.0, -mu);
  }
  if (cfg.order == 2) return 12.0 * s / (M * (kPi * kPi + 24.0) * (1.0 - std::ldexp(1.0, -(cfg.n - 1))));
  return s / (M * (cfg.n - 1));
}

}  // namespace slacq
