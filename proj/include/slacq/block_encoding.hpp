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

// LCU block-encodings of the truncated SLAC operators,
//
//   U = PREP^dagger . COPY . SELECT . SIGN (or PHASE) . PREP,
//
// plus linear combinations of encodings and the row-masked variant.
//
// SELECT adds j to the system register for d = 0 (the shift P^j, which maps
// |c> to |c + j>) and subtracts it for d = 1 (P^{N-j}). Every coefficient of
// both operators carries one common factor of -1 relative to what the oracles
// produce; it is tracked in BlockEncodingSpec::sign instead of being applied as
// a gate.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slacq/common.hpp"
#include "slacq/qsim.hpp"
#include "slacq/slac_core.hpp"
#include "slacq/state_prep.hpp"

namespace slacq {

enum class PrepMode { analytic, gate_level };

inline double alpha_laplacian() { return (kPi * kPi + 24.0) / 3.0; }
inline double alpha_first_order(int n) { return 2.0 * (n - 1); }
inline double lcu_alpha(int order, int n) { return order == 2 ? alpha_laplacian() : alpha_first_order(n); }

struct BlockEncodingSpec {
  std::string label;
  RegisterLayout layout;
  Circuit circuit;
  std::vector<std::string> ancillas;  // projected onto |0...0>
  std::vector<std::string> scratch;   // ladder registers that always return to |0>
  std::string system = "sys";
  double alpha = 1.0;
  cplx sign = 1.0;  // tracked global scalar: block = sign * <0|U|0>
  double epsilon = 0.0;

  int system_qubits() const { return layout.reg(system).width; }
  int ancilla_qubits() const {
    int a = 0;
    for (const auto& r : ancillas) a += layout.reg(r).width;
    return a;
  }
  GateTally cost() const { return circuit.cost(); }
};

// sign * (<0|_anc U |0>_anc), one simulated column per system basis state.
inline CMatrix extract_block(const BlockEncodingSpec& be) {
  const auto& sysreg = be.layout.reg(be.system);
  const std::int64_t dim = std::int64_t{1} << sysreg.width;
  CMatrix B(dim, dim);
  std::map<std::string, std::uint64_t> zero;
  for (const auto& r : be.ancillas) zero[r] = 0;
  for (const auto& r : be.scratch) zero[r] = 0;
  std::vector<std::string> others;
  for (const auto& r : be.layout.registers())
    if (r.name != be.system && !zero.count(r.name)) others.push_back(r.name);
  if (!others.empty()) throw ConfigError("register '" + others.front() + "' is neither system nor ancilla");
  parallel_for(dim, [&](std::int64_t c) {
    Statevector s(be.layout, be.layout.with(0, be.system, static_cast<std::uint64_t>(c)));
    be.circuit.apply(s);
    const auto p = project_and_extract(s, zero);
    B.col(c) = p.probability > 0.0 ? CVector(be.sign * p.residual) : CVector(CVector::Zero(dim));
  });
  return B;
}

// ---------------------------------------------------------------------------
// Oracles

inline Circuit sign_oracle(const RegisterLayout& lay, const std::string& prefix = "") {
  Circuit c;
  c.add(gate_op(GateKind::Z, lay.qubit(prefix + "j", 0)));
  return c;
}

// |j>|d> -> e^{i alpha j}|j>|0> for d = 0 and -e^{-i alpha j}|j>|1> for d = 1,
// alpha = pi (1 + 1/N), built from per-bit phases.
inline Circuit phase_oracle(const RegisterLayout& lay, std::int64_t N, const std::string& prefix = "") {
  const double alpha = kPi * (1.0 + 1.0 / static_cast<double>(N));
  const auto j = lay.qubits(prefix + "j");
  const int d = lay.qubit(prefix + "d", 0);
  Circuit c;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const double phi = alpha * static_cast<double>(std::int64_t{1} << k);
    c.add(gate_op(GateKind::Phase, j[k], {}, phi));
    c.add(gate_op(GateKind::Phase, j[k], {Control{d, true}}, -2.0 * phi));
  }
  c.add(gate_op(GateKind::Z, d));
  return c;
}

inline Circuit copy_oracle(const RegisterLayout& lay, const std::string& prefix = "") {
  Circuit c;
  c.add(gate_op(GateKind::X, lay.qubit(prefix + "C", 0), {Control{lay.qubit(prefix + "f", 0), true}}));
  return c;
}

// Controlled adders: sys += j when d = 0, sys -= j when d = 1.
inline Circuit select_oracle(const RegisterLayout& lay, const std::string& prefix = "",
                             const std::string& sys = "sys") {
  const auto j = lay.qubits(prefix + "j");
  const int d = lay.qubit(prefix + "d", 0);
  const auto s = lay.qubits(sys);
  Circuit c;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::int64_t step = std::int64_t{1} << k;
    c.add(modular_add_op(s, step, {Control{j[k], true}, Control{d, false}}));
    c.add(modular_add_op(s, -step, {Control{j[k], true}, Control{d, true}}));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Assembly

inline void add_lcu_registers(RegisterLayout& lay, int order, const PrepConfig& cfg, PrepMode mode,
                              const std::string& prefix = "") {
  if (mode == PrepMode::gate_level) lay.add(prefix + "mu", cfg.n - 1);
  lay.add(prefix + "j", cfg.n - 1).add(prefix + "d", 1);
  if (order == 2) lay.add(prefix + "a", 1);
  if (mode == PrepMode::gate_level) lay.add(prefix + "ref", cfg.n_ref);
  lay.add(prefix + "f", 1).add(prefix + "C", 1);
}

// Exact target amplitudes over (j, d, [a], f) with the unused mass parked on
// the failure flag.
inline CVector analytic_prep_state(int order, int n) {
  const int k = n - 1;
  const std::int64_t half = std::int64_t{1} << k;
  const double alpha = lcu_alpha(order, n);
  const int abits = order == 2 ? 1 : 0;
  const int fshift = k + 1 + abits;
  CVector t = CVector::Zero(Eigen::Index{1} << (fshift + 1));
  double used = 0.0;
  auto put = [&](std::int64_t j, int d, int a, double w) {
    std::uint64_t v = static_cast<std::uint64_t>(j) | (std::uint64_t(d) << k);
    if (abits) v |= std::uint64_t(a) << (k + 1);
    t(static_cast<Eigen::Index>(v)) = std::sqrt(w);
    used += w;
  };
  if (order == 2) put(0, 0, 0, (kPi * kPi / 3.0) / alpha);
  for (std::int64_t j = 1; j < half; ++j) {
    const double jd = static_cast<double>(j);
    const double mag = order == 2 ? 2.0 / (jd * jd) : 1.0 / jd;
    put(j, 0, 1, mag / alpha);
    put(j, 1, 1, mag / alpha);
  }
  if (used > 1.0 + 1e-12) throw std::logic_error("LCU weights exceed unit norm");
  t(static_cast<Eigen::Index>(std::uint64_t{1} << fshift)) = std::sqrt(std::max(0.0, 1.0 - used));
  return t;
}

inline Circuit analytic_prep(int order, const RegisterLayout& lay, int n, const std::string& prefix = "") {
  std::vector<int> q = lay.qubits(prefix + "j");
  q.push_back(lay.qubit(prefix + "d", 0));
  if (order == 2) q.push_back(lay.qubit(prefix + "a", 0));
  q.push_back(lay.qubit(prefix + "f", 0));
  Circuit c;
  c.add(state_loader_op(q, analytic_prep_state(order, n), "prep_load"));
  return c;
}

inline Circuit lcu_circuit(int order, const PrepConfig& cfg, PrepMode mode, const RegisterLayout& lay,
                           const std::string& prefix = "") {
  const Circuit prep = mode == PrepMode::analytic ? analytic_prep(order, lay, cfg.n, prefix)
                                                  : prep_circuit(cfg, lay, prefix);
  Circuit c;
  c.add(marker_op("encoding"));
  c.append(prep);
  c.append(order == 2 ? sign_oracle(lay, prefix) : phase_oracle(lay, cfg.N(), prefix));
  c.append(select_oracle(lay, prefix));
  c.append(copy_oracle(lay, prefix));
  c.append(prep.adjoint());
  return c;
}

inline std::vector<std::string> lcu_ancillas(const RegisterLayout& lay) {
  std::vector<std::string> a;
  for (const auto& r : lay.registers())
    if (r.name != "sys") a.push_back(r.name);
  return a;
}

// qubit_cap above the simulation cap yields an encoding that can be costed but
// not simulated.
inline BlockEncodingSpec assemble(int order, const PrepConfig& cfg, PrepMode mode = PrepMode::analytic,
                                  int qubit_cap = kDefaultQubitCap) {
  if (order != cfg.order) throw ConfigError("assemble: order does not match the preparation config");
  BlockEncodingSpec be;
  be.layout = RegisterLayout(qubit_cap);
  be.label = order == 2 ? "slac_laplacian" : "slac_first_order";
  add_lcu_registers(be.layout, order, cfg, mode);
  be.layout.add("sys", cfg.n);
  be.circuit = lcu_circuit(order, cfg, mode, be.layout);
  be.ancillas = lcu_ancillas(be.layout);
  be.alpha = lcu_alpha(order, cfg.n);
  be.sign = -1.0;
  be.epsilon = mode == PrepMode::gate_level ? prep_error_bound(cfg) : 0.0;
  return be;
}

inline BlockEncodingSpec assemble(int order, int n, PrepMode mode = PrepMode::analytic, int n_ref = -1,
                                  int qubit_cap = kDefaultQubitCap) {
  return assemble(order, PrepConfig(n, order, n_ref), mode, qubit_cap);
}

// alpha * block of the LCU with the given success mass per (j, d), contracted
// directly: block = sign * sum_x |p_x|^2 phase_x shift_x. Exact for any PREP
// whose success branch is flagged by f = 0.
inline CirculantOperator lcu_coefficients(int order, int n, const std::vector<std::array<double, 2>>& weight_jd) {
  const std::int64_t N = std::int64_t{1} << n;
  const double alpha = lcu_alpha(order, n);
  const double a1 = kPi * (1.0 + 1.0 / static_cast<double>(N));
  CirculantOperator op{std::vector<cplx>(N, 0.0), order, Variant::truncated};
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(weight_jd.size()); ++j) {
    for (int d = 0; d < 2; ++d) {
      const double w = weight_jd[j][d];
      if (w == 0.0) continue;
      const std::int64_t shift = d == 0 ? j : (N - j) % N;
      cplx ph;
      if (order == 2) ph = sign_pow(j);
      else ph = d == 0 ? std::exp(kI * (a1 * j)) : -std::exp(-kI * (a1 * j));
      op.coeffs[shift] += -alpha * w * ph;
    }
  }
  return op;
}

// ---------------------------------------------------------------------------
// Combinations

namespace detail {

// Union of ancilla registers by name (widest wins) so that terms applied under
// mutually exclusive controls can share scratch space.
inline void add_union_ancillas(RegisterLayout& lay, const std::vector<const BlockEncodingSpec*>& terms,
                               const std::string& prefix) {
  std::vector<std::pair<std::string, int>> regs;
  for (const auto* t : terms)
    for (const auto& r : t->layout.registers()) {
      if (r.name == t->system) continue;
      auto it = std::find_if(regs.begin(), regs.end(), [&](const auto& p) { return p.first == r.name; });
      if (it == regs.end()) regs.emplace_back(r.name, r.width);
      else it->second = std::max(it->second, r.width);
    }
  for (const auto& [name, w] : regs) lay.add(prefix + name, w);
}

inline std::vector<int> embed_map(const BlockEncodingSpec& t, const RegisterLayout& lay, const std::string& prefix) {
  std::vector<int> map(t.layout.total());
  for (const auto& r : t.layout.registers()) {
    const std::string dst = r.name == t.system ? std::string("sys") : prefix + r.name;
    for (int b = 0; b < r.width; ++b) map[r.offset + b] = lay.qubit(dst, b);
  }
  return map;
}

inline void check_same_system(const std::vector<const BlockEncodingSpec*>& terms) {
  for (const auto* t : terms)
    if (t->system_qubits() != terms.front()->system_qubits())
      throw ConfigError("combined encodings must act on the same system size");
}

}  // namespace detail

// Block (a A1 + b A2) / (a alpha1 + b alpha2) from two encodings of A1, A2.
inline BlockEncodingSpec pair_sum(const BlockEncodingSpec& be1, const BlockEncodingSpec& be2, double a, double b) {
  if (a < 0.0 || b < 0.0) throw ConfigError("pair_sum weights must be non-negative");
  if (a == 0.0 && b == 0.0) throw ConfigError("pair_sum needs a nonzero weight");
  detail::check_same_system({&be1, &be2});
  const double w1 = a * be1.alpha, w2 = b * be2.alpha;
  BlockEncodingSpec be;
  be.label = "pair_sum";
  be.layout.add("lcu", 1);
  detail::add_union_ancillas(be.layout, {&be1, &be2}, "anc.");
  be.layout.add("sys", be1.system_qubits());
  const int q = be.layout.qubit("lcu", 0);
  const double theta = 2.0 * std::atan2(std::sqrt(w2), std::sqrt(w1));

  Circuit c;
  c.add(gate_op(GateKind::Ry, q, {}, theta));
  c.append(be1.circuit.remapped(detail::embed_map(be1, be.layout, "anc.")).controlled({Control{q, false}}));
  c.append(be2.circuit.remapped(detail::embed_map(be2, be.layout, "anc.")).controlled({Control{q, true}}));
  const cplx rel = be2.sign / be1.sign;
  if (std::abs(rel - 1.0) > 1e-15) c.add(gate_op(GateKind::Phase, q, {}, std::arg(rel)));
  c.add(gate_op(GateKind::Ry, q, {}, -theta));
  be.circuit = std::move(c);
  be.ancillas = lcu_ancillas(be.layout);
  be.alpha = w1 + w2;
  be.sign = be1.sign;
  be.epsilon = (w1 * be1.epsilon / std::max(be1.alpha, 1e-300) + w2 * be2.epsilon / std::max(be2.alpha, 1e-300));
  return be;
}

struct LcuCombination {
  std::vector<cplx> y;
  double beta = 0.0;  // must satisfy sum |y_j| <= beta
  std::vector<BlockEncodingSpec> terms;
};

// Block sum_j y_j A_j / (alpha beta), alpha = max_j alpha_j, through a
// state-preparation pair over a selection register.
inline BlockEncodingSpec general_combination(const LcuCombination& lc) {
  const std::size_t m = lc.terms.size();
  if (m == 0) throw ConfigError("general_combination needs at least one term");
  if (lc.y.size() != m) throw ConfigError("coefficient count does not match term count");
  double l1 = 0.0;
  for (const auto& v : lc.y) l1 += std::abs(v);
  if (l1 > lc.beta * (1.0 + 1e-12)) throw ConfigError("sum |y_j| exceeds beta");
  std::vector<const BlockEncodingSpec*> ptr;
  for (const auto& t : lc.terms) ptr.push_back(&t);
  detail::check_same_system(ptr);

  double amax = 0.0;
  for (const auto& t : lc.terms) amax = std::max(amax, t.alpha);
  std::vector<cplx> yp(m);
  double used = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    yp[j] = lc.terms[j].alpha * lc.y[j] / amax;
    used += std::abs(yp[j]) / lc.beta;
  }
  const bool spare = used < 1.0 - 1e-15;
  int w = 1;
  while ((std::size_t{1} << w) < m + (spare ? 1 : 0)) ++w;

  BlockEncodingSpec be;
  be.label = "combination";
  be.layout.add("sel", w);
  if (spare) be.layout.add("dead", 1);
  detail::add_union_ancillas(be.layout, ptr, "anc.");
  be.layout.add("sys", lc.terms.front().system_qubits());
  const auto sel = be.layout.qubits("sel");

  CVector mag = CVector::Zero(Eigen::Index{1} << w);
  for (std::size_t j = 0; j < m; ++j) mag(static_cast<Eigen::Index>(j)) = std::sqrt(std::abs(yp[j]) / lc.beta);
  if (spare) mag(static_cast<Eigen::Index>(m)) = std::sqrt(std::max(0.0, 1.0 - used));
  mag /= mag.norm();

  auto sel_controls = [&](std::size_t j) {
    Controls ctl;
    for (int b = 0; b < w; ++b) ctl.push_back(Control{sel[b], ((j >> b) & 1) != 0});
    return ctl;
  };

  Circuit c;
  const Op load = state_loader_op(sel, mag, "sel_load");
  c.add(load);
  c.add(diagonal_op(sel, [&](std::uint64_t v) -> cplx {
    if (v >= m) return 1.0;
    const cplx ph = std::abs(yp[v]) > 0.0 ? yp[v] / std::abs(yp[v]) : cplx{1.0};
    return ph * lc.terms[v].sign;
  }, {}, "sel_phase"));
  for (std::size_t j = 0; j < m; ++j)
    c.append(lc.terms[j].circuit.remapped(detail::embed_map(lc.terms[j], be.layout, "anc.")).controlled(sel_controls(j)));
  if (spare) c.add(gate_op(GateKind::X, be.layout.qubit("dead", 0), sel_controls(m)));
  c.add(load.adjoint());
  be.circuit = std::move(c);
  be.ancillas = lcu_ancillas(be.layout);
  be.alpha = amax * lc.beta;
  be.sign = 1.0;
  return be;
}

// ---------------------------------------------------------------------------
// Row-masked operator: sum_j coeff_j M_j (P^j - P^{N-j}), (M_j)_kk = [j <= c_k].

struct MaskSpec {
  std::vector<std::int64_t> cutoffs;  // one per row k
};

inline void validate_mask(const MaskSpec& mask, std::int64_t N) {
  if (static_cast<std::int64_t>(mask.cutoffs.size()) != N) throw ConfigError("mask needs one cutoff per row");
  for (auto c : mask.cutoffs)
    if (c < 0 || c > N / 2) throw ConfigError("mask cutoff out of range [0, N/2]");
}

inline CMatrix masked_dense(int order, const LatticeConfig& cfg, const MaskSpec& mask) {
  const std::int64_t N = cfg.N();
  validate_mask(mask, N);
  const auto op = slac_operator(order, Variant::truncated, cfg);
  CMatrix A = CMatrix::Zero(N, N);
  for (std::int64_t j = 1; j <= N / 2; ++j) {
    const CMatrix D = shift_matrix(N, j) - shift_matrix(N, N - j);
    for (std::int64_t k = 0; k < N; ++k)
      if (j <= mask.cutoffs[k]) A.row(k) += op.coeffs[j] * D.row(k);
  }
  return A;
}

struct MaskedOperator {
  CMatrix dense;
  BlockEncodingSpec encoding;
};

inline MaskedOperator masked_operator(int order, const LatticeConfig& cfg, const MaskSpec& mask) {
  const std::int64_t N = cfg.N();
  validate_mask(mask, N);
  const int n = cfg.n;
  const int k = n - 1;
  const auto op = slac_operator(order, Variant::truncated, cfg);

  BlockEncodingSpec be;
  be.label = "masked";
  be.layout.add("j", k).add("d", 1).add("f", 1).add("C", 1).add("sys", n);
  const auto& lay = be.layout;

  double S = 0.0;
  for (std::int64_t j = 1; j < N / 2; ++j) S += std::abs(op.coeffs[j]);
  std::vector<int> jd = lay.qubits("j");
  jd.push_back(lay.qubit("d", 0));
  CVector t = CVector::Zero(Eigen::Index{1} << (k + 1));
  for (std::int64_t j = 1; j < N / 2; ++j)
    for (int d = 0; d < 2; ++d)
      t(static_cast<Eigen::Index>(j | (std::int64_t(d) << k))) = std::sqrt(std::abs(op.coeffs[j]) / (2.0 * S));
  const Op load = state_loader_op(jd, t, "prep_load");

  const int f = lay.qubit("f", 0);
  std::vector<int> keep_in = lay.qubits("j");
  const auto sysq = lay.qubits("sys");
  keep_in.insert(keep_in.end(), sysq.begin(), sysq.end());
  const auto cut = mask.cutoffs;
  auto keep = [k, cut](std::uint64_t v) {
    const std::uint64_t j = v & ((std::uint64_t{1} << k) - 1);
    const std::uint64_t row = v >> k;
    return static_cast<std::int64_t>(j) <= cut[row];
  };

  Circuit c;
  c.add(marker_op("encoding"));
  c.add(load);
  c.add(diagonal_op(jd, [&](std::uint64_t v) -> cplx {
    const std::uint64_t j = v & ((std::uint64_t{1} << k) - 1);
    const bool minus = (v >> k) & 1;
    const cplx coef = op.coeffs[j];
    const cplx ph = std::abs(coef) > 0.0 ? coef / std::abs(coef) : cplx{1.0};
    return minus ? -ph : ph;
  }, {}, "coeff_phase"));
  c.append(select_oracle(lay));
  // KEEP is evaluated on the destination row, which is what the row mask needs.
  c.add(predicate_op(keep_in, f, keep, {}, "keep", 2 * (k + n)));
  c.add(gate_op(GateKind::X, lay.qubit("C", 0), {Control{f, false}}));
  c.add(gate_op(GateKind::X, f));
  c.add(load.adjoint());
  be.circuit = std::move(c);
  be.ancillas = lcu_ancillas(be.layout);
  be.alpha = 2.0 * S;
  be.sign = 1.0;
  return {masked_dense(order, cfg, mask), std::move(be)};
}

// ---------------------------------------------------------------------------
// Subnormalisation comparison against the generic pseudo-differential bound
// 2^{n/2} C_a with C_a the symbol supremum on the lattice.

struct NormalizationRow {
  int n = 0;
  double alpha1 = 0, norm1 = 0, generic1 = 0;
  double alpha2 = 0, norm2 = 0, generic2 = 0;
};

inline double spectral_norm(const CirculantOperator& op) {
  double m = 0.0;
  for (const auto& v : circulant_spectrum(op)) m = std::max(m, std::abs(v));
  return m;
}

inline std::vector<NormalizationRow> normalization_table(int n_lo, int n_hi) {
  std::vector<NormalizationRow> rows;
  for (int n = n_lo; n <= n_hi; ++n) {
    const LatticeConfig cfg(n);
    NormalizationRow r;
    r.n = n;
    r.alpha1 = alpha_first_order(n);
    r.norm1 = spectral_norm(truncated_first_order(cfg));
    r.generic1 = std::pow(2.0, n / 2.0) * kPi;
    r.alpha2 = alpha_laplacian();
    r.norm2 = spectral_norm(truncated_laplacian(cfg));
    r.generic2 = std::pow(2.0, n / 2.0) * kPi * kPi;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace slacq
