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

// Dense statevector simulator over named registers.
//
// Bit layout: registers are packed in declaration order starting at the least
// significant bit, and each register is little-endian. Arithmetic blocks
// (squarers, multipliers, comparators, adders) are simulated as basis
// functions; their Toffoli cost is recorded from closed-form formulas in
// GateTally::analytic rather than counted from a decomposition.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slacq/common.hpp"

namespace slacq {

inline constexpr int kDefaultQubitCap = 26;

struct Register {
  std::string name;
  int width = 0;
  int offset = 0;
};

class RegisterLayout {
 public:
  explicit RegisterLayout(int cap = kDefaultQubitCap) : cap_(cap) {}

  RegisterLayout& add(const std::string& name, int width) {
    if (width < 1) throw ConfigError("register '" + name + "' needs positive width");
    if (has(name)) throw ConfigError("duplicate register '" + name + "'");
    if (total_ + width > cap_) throw ConfigError("layout exceeds the simulation cap of " + std::to_string(cap_) + " qubits");
    regs_.push_back(Register{name, width, total_});
    total_ += width;
    return *this;
  }

  bool has(std::string_view name) const {
    return std::any_of(regs_.begin(), regs_.end(), [&](const Register& r) { return r.name == name; });
  }
  const Register& reg(std::string_view name) const {
    for (const auto& r : regs_)
      if (r.name == name) return r;
    throw std::out_of_range("unknown register '" + std::string(name) + "'");
  }
  int total() const { return total_; }
  int cap() const { return cap_; }
  const std::vector<Register>& registers() const { return regs_; }

  int qubit(std::string_view name, int bit) const {
    const auto& r = reg(name);
    if (bit < 0 || bit >= r.width) throw std::out_of_range("bit out of range in '" + r.name + "'");
    return r.offset + bit;
  }
  std::vector<int> qubits(std::string_view name) const {
    const auto& r = reg(name);
    std::vector<int> q(r.width);
    for (int b = 0; b < r.width; ++b) q[b] = r.offset + b;
    return q;
  }
  std::uint64_t value(std::uint64_t index, std::string_view name) const {
    const auto& r = reg(name);
    return (index >> r.offset) & ((std::uint64_t{1} << r.width) - 1);
  }
  std::uint64_t with(std::uint64_t index, std::string_view name, std::uint64_t v) const {
    const auto& r = reg(name);
    const std::uint64_t mask = ((std::uint64_t{1} << r.width) - 1) << r.offset;
    if (v >> r.width) throw std::out_of_range("value does not fit register '" + r.name + "'");
    return (index & ~mask) | (v << r.offset);
  }
  std::uint64_t index(const std::map<std::string, std::uint64_t>& assignment) const {
    std::uint64_t idx = 0;
    for (const auto& [name, v] : assignment) idx = with(idx, name, v);
    return idx;
  }

 private:
  std::vector<Register> regs_;
  int total_ = 0;
  int cap_;
};

struct Control {
  int qubit = 0;
  bool on_one = true;
};
using Controls = std::vector<Control>;

struct GateTally {
  std::int64_t toffoli = 0;
  std::int64_t cx = 0;
  std::int64_t clifford1 = 0;
  std::int64_t rotation = 0;
  std::int64_t qft_calls = 0;
  std::map<std::string, std::int64_t> analytic;  // closed-form Toffoli counts per emulated block
  std::map<std::string, std::int64_t> calls;     // subroutine invocations

  std::int64_t analytic_toffoli() const {
    std::int64_t s = 0;
    for (const auto& [k, v] : analytic) s += v;
    return s;
  }
  std::int64_t toffoli_total() const { return toffoli + analytic_toffoli(); }
  std::int64_t total_gates() const { return toffoli_total() + cx + clifford1 + rotation; }
  std::int64_t call_count(const std::string& key) const {
    auto it = calls.find(key);
    return it == calls.end() ? 0 : it->second;
  }

  GateTally& operator+=(const GateTally& o) {
    toffoli += o.toffoli;
    cx += o.cx;
    clifford1 += o.clifford1;
    rotation += o.rotation;
    qft_calls += o.qft_calls;
    for (const auto& [k, v] : o.analytic) analytic[k] += v;
    for (const auto& [k, v] : o.calls) calls[k] += v;
    return *this;
  }
};

class Statevector {
 public:
  explicit Statevector(RegisterLayout layout) : layout_(std::move(layout)) {
    if (layout_.total() > kDefaultQubitCap)
      throw ConfigError("statevector exceeds the simulation cap of " + std::to_string(kDefaultQubitCap) + " qubits");
    amps_.assign(std::size_t{1} << layout_.total(), cplx{0.0, 0.0});
    amps_[0] = 1.0;
  }
  Statevector(RegisterLayout layout, std::uint64_t basis_index) : Statevector(std::move(layout)) {
    set_basis(basis_index);
  }

  const RegisterLayout& layout() const { return layout_; }
  std::vector<cplx>& data() { return amps_; }
  const std::vector<cplx>& data() const { return amps_; }
  std::size_t size() const { return amps_.size(); }
  int qubits() const { return layout_.total(); }

  void set_basis(std::uint64_t index) {
    if (index >= amps_.size()) throw std::out_of_range("basis index out of range");
    std::fill(amps_.begin(), amps_.end(), cplx{0.0, 0.0});
    amps_[index] = 1.0;
  }
  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }
  cplx amplitude(const std::map<std::string, std::uint64_t>& assignment) const {
    return amps_[layout_.index(assignment)];
  }

  GateTally& tally() { return tally_; }
  const GateTally& tally() const { return tally_; }

 private:
  RegisterLayout layout_;
  std::vector<cplx> amps_;
  GateTally tally_;
};

struct Mat2 {
  cplx a00, a01, a10, a11;
  Mat2 adjoint() const { return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)}; }
};

enum class GateKind { X, Y, Z, H, S, Sdg, T, Rx, Ry, Rz, Phase };

inline Mat2 gate_matrix(GateKind k, double angle = 0.0) {
  const double r = 1.0 / std::sqrt(2.0);
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  switch (k) {
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::Y: return {0, -kI, kI, 0};
    case GateKind::Z: return {1, 0, 0, -1};
    case GateKind::H: return {r, r, r, -r};
    case GateKind::S: return {1, 0, 0, kI};
    case GateKind::Sdg: return {1, 0, 0, -kI};
    case GateKind::T: return {1, 0, 0, std::exp(kI * (kPi / 4))};
    case GateKind::Rx: return {c, -kI * s, -kI * s, c};
    case GateKind::Ry: return {c, -s, s, c};
    case GateKind::Rz: return {std::exp(-kI * (angle / 2)), 0, 0, std::exp(kI * (angle / 2))};
    case GateKind::Phase: return {1, 0, 0, std::exp(kI * angle)};
  }
  throw ConfigError("unknown gate");
}

enum class OpKind { unitary1, swap, permutation, diagonal, predicate, householder, marker };
enum class CostClass { pauli_x, clifford, hadamard, rotation, none };

// One circuit element. Multi-qubit elements act on the integer formed by their
// target qubits (targets[0] is the least significant bit).
struct Op {
  OpKind kind = OpKind::unitary1;
  std::string label;
  CostClass cost_class = CostClass::none;
  Mat2 m{};
  std::vector<int> targets;
  std::vector<int> inputs;  // predicate inputs; the flag is targets[0]
  Controls controls;
  std::shared_ptr<const std::vector<std::uint64_t>> perm;
  std::shared_ptr<const std::vector<std::uint64_t>> perm_inv;
  std::shared_ptr<const std::vector<cplx>> phases;
  std::shared_ptr<const std::vector<std::uint8_t>> pred;
  std::shared_ptr<const std::function<bool(std::uint64_t)>> pred_fn;  // used when no table is stored
  std::shared_ptr<const CVector> house;  // unit vector w of I - 2 w w^dagger
  std::int64_t analytic_toffoli = -1;    // closed-form cost when >= 0
  std::string call_key;                  // marker ops count a subroutine call

  Op adjoint() const {
    Op o = *this;
    switch (kind) {
      case OpKind::unitary1: o.m = m.adjoint(); break;
      case OpKind::permutation: std::swap(o.perm, o.perm_inv); break;
      case OpKind::diagonal: {
        auto conj = std::make_shared<std::vector<cplx>>(*phases);
        for (auto& p : *conj) p = std::conj(p);
        o.phases = std::move(conj);
        break;
      }
      default: break;  // swap, predicate, householder and markers are self-inverse
    }
    return o;
  }
};

namespace detail {

// Gathers the bits of an index at the listed qubit positions into a packed
// integer, using runs of consecutive qubits to keep the inner loop short.
class BitGather {
 public:
  explicit BitGather(const std::vector<int>& qubits) {
    int out = 0;
    for (std::size_t i = 0; i < qubits.size();) {
      std::size_t j = i + 1;
      while (j < qubits.size() && qubits[j] == qubits[j - 1] + 1) ++j;
      const int len = static_cast<int>(j - i);
      runs_.push_back({qubits[i], len, out});
      out += len;
      i = j;
    }
  }
  std::uint64_t gather(std::uint64_t index) const {
    std::uint64_t v = 0;
    for (const auto& r : runs_) v |= ((index >> r.src) & ((std::uint64_t{1} << r.len) - 1)) << r.dst;
    return v;
  }
  std::uint64_t scatter(std::uint64_t value) const {
    std::uint64_t idx = 0;
    for (const auto& r : runs_) idx |= ((value >> r.dst) & ((std::uint64_t{1} << r.len) - 1)) << r.src;
    return idx;
  }

 private:
  struct Run {
    int src, len, dst;
  };
  std::vector<Run> runs_;
};

inline void check_qubits(const Statevector& s, const std::vector<int>& targets, const Controls& controls,
                         const std::vector<int>& inputs = {}) {
  const int n = s.qubits();
  std::vector<int> all = targets;
  for (const auto& c : controls) all.push_back(c.qubit);
  for (int q : all)
    if (q < 0 || q >= n) throw std::out_of_range("qubit index out of range");
  for (int q : inputs)
    if (q < 0 || q >= n) throw std::out_of_range("qubit index out of range");
  auto sorted = all;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("targets and controls overlap");
  for (int q : inputs)
    if (q == targets.front()) throw std::invalid_argument("predicate flag is also an input");
}

inline std::pair<std::uint64_t, std::uint64_t> control_mask(const Controls& controls) {
  std::uint64_t mask = 0, value = 0;
  for (const auto& c : controls) {
    mask |= std::uint64_t{1} << c.qubit;
    if (c.on_one) value |= std::uint64_t{1} << c.qubit;
  }
  return {mask, value};
}

// Toffoli-ladder cost of AND-ing c controls into a clean ancilla and back.
inline std::int64_t and_ladder(std::int64_t c) { return c >= 2 ? 2 * (c - 1) : 0; }

inline void add_gate_cost(GateTally& t, const Op& op, std::size_t extra) {
  const std::int64_t c = static_cast<std::int64_t>(op.controls.size() + extra);
  if (op.kind == OpKind::marker) {
    if (op.call_key == "qft") ++t.qft_calls;
    if (!op.call_key.empty()) ++t.calls[op.call_key];
    return;
  }
  if (op.analytic_toffoli >= 0) {
    t.analytic[op.label] += op.analytic_toffoli;
    return;
  }
  switch (op.kind) {
    case OpKind::swap:
      if (c == 0) t.cx += 3;
      else {
        t.toffoli += 1 + and_ladder(c);
        t.cx += 2;
      }
      return;
    case OpKind::unitary1:
      switch (op.cost_class) {
        case CostClass::pauli_x:
          if (c == 0) ++t.clifford1;
          else if (c == 1) ++t.cx;
          else t.toffoli += 2 * c - 3;
          return;
        case CostClass::clifford:
          if (c == 0) ++t.clifford1;
          else if (c == 1) { ++t.cx; t.clifford1 += 2; }
          else { t.toffoli += 2 * c - 3; t.clifford1 += 2; }
          return;
        case CostClass::hadamard:
          // A controlled Hadamard costs one Toffoli with a catalytic state.
          if (c == 0) ++t.clifford1;
          else t.toffoli += 1 + and_ladder(c);
          return;
        case CostClass::rotation:
        case CostClass::none:
          if (c == 0) ++t.rotation;
          else { t.cx += 2; t.rotation += 2; t.toffoli += and_ladder(c); }
          return;
      }
      return;
    default:
      // Unlabelled basis functions and state loaders are counted as one rotation layer.
      t.rotation += 1;
      return;
  }
}

}  // namespace detail

// Applies one op under additional controls. Norm is preserved exactly for every kind.
inline void apply_op(Statevector& s, const Op& op, const Controls& extra = {}) {
  Controls ctl = op.controls;
  ctl.insert(ctl.end(), extra.begin(), extra.end());
  detail::add_gate_cost(s.tally(), op, extra.size());
  if (op.kind == OpKind::marker) return;
  detail::check_qubits(s, op.targets, ctl, op.inputs);
  const auto [cmask, cval] = detail::control_mask(ctl);
  auto& a = s.data();
  const std::uint64_t dim = a.size();

  std::uint64_t tmask = 0;
  for (int q : op.targets) tmask |= std::uint64_t{1} << q;

  switch (op.kind) {
    case OpKind::unitary1: {
      const std::uint64_t bit = std::uint64_t{1} << op.targets[0];
      const Mat2& m = op.m;
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & bit) || (i & cmask) != cval) continue;
        const cplx x0 = a[i], x1 = a[i | bit];
        a[i] = m.a00 * x0 + m.a01 * x1;
        a[i | bit] = m.a10 * x0 + m.a11 * x1;
      }
      return;
    }
    case OpKind::swap: {
      const std::uint64_t b0 = std::uint64_t{1} << op.targets[0];
      const std::uint64_t b1 = std::uint64_t{1} << op.targets[1];
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & tmask) != b0 || (i & cmask) != cval) continue;
        std::swap(a[i], a[(i & ~b0) | b1]);
      }
      return;
    }
    case OpKind::diagonal: {
      const detail::BitGather g(op.targets);
      const auto& ph = *op.phases;
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & cmask) != cval) continue;
        a[i] *= ph[g.gather(i)];
      }
      return;
    }
    case OpKind::predicate: {
      const std::uint64_t fbit = std::uint64_t{1} << op.targets[0];
      const detail::BitGather g(op.inputs);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & fbit) || (i & cmask) != cval) continue;
        const std::uint64_t v = g.gather(i);
        if (op.pred ? (*op.pred)[v] != 0 : (*op.pred_fn)(v)) std::swap(a[i], a[i | fbit]);
      }
      return;
    }
    case OpKind::permutation:
    case OpKind::householder: {
      const detail::BitGather g(op.targets);
      const std::uint64_t sub = std::uint64_t{1} << op.targets.size();
      std::vector<std::uint64_t> offs(sub);
      for (std::uint64_t v = 0; v < sub; ++v) offs[v] = g.scatter(v);
      std::vector<cplx> buf(sub);
      for (std::uint64_t base = 0; base < dim; ++base) {
        if ((base & tmask) || (base & cmask) != cval) continue;
        for (std::uint64_t v = 0; v < sub; ++v) buf[v] = a[base | offs[v]];
        if (op.kind == OpKind::permutation) {
          const auto& p = *op.perm;
          for (std::uint64_t v = 0; v < sub; ++v) a[base | offs[p[v]]] = buf[v];
        } else {
          const CVector& w = *op.house;
          cplx dot = 0.0;
          for (std::uint64_t v = 0; v < sub; ++v) dot += std::conj(w(v)) * buf[v];
          for (std::uint64_t v = 0; v < sub; ++v) a[base | offs[v]] = buf[v] - 2.0 * w(v) * dot;
        }
      }
      return;
    }
    case OpKind::marker: return;
  }
}

// ---------------------------------------------------------------------------
// Op builders

inline Op gate_op(GateKind k, int target, Controls controls = {}, double angle = 0.0) {
  Op op;
  op.kind = OpKind::unitary1;
  op.m = gate_matrix(k, angle);
  op.targets = {target};
  op.controls = std::move(controls);
  switch (k) {
    case GateKind::X: op.cost_class = CostClass::pauli_x; op.label = "x"; break;
    case GateKind::H: op.cost_class = CostClass::hadamard; op.label = "h"; break;
    case GateKind::Y: case GateKind::Z: case GateKind::S: case GateKind::Sdg:
      op.cost_class = CostClass::clifford; op.label = "clifford"; break;
    default: op.cost_class = CostClass::rotation; op.label = "rot"; break;
  }
  return op;
}

inline Op matrix_op(const Mat2& m, int target, Controls controls = {}, std::string label = "u") {
  Op op;
  op.kind = OpKind::unitary1;
  op.m = m;
  op.targets = {target};
  op.controls = std::move(controls);
  op.cost_class = CostClass::rotation;
  op.label = std::move(label);
  return op;
}

inline Op swap_op(int q0, int q1, Controls controls = {}) {
  Op op;
  op.kind = OpKind::swap;
  op.targets = {q0, q1};
  op.controls = std::move(controls);
  op.label = "swap";
  return op;
}

inline Op marker_op(std::string key) {
  Op op;
  op.kind = OpKind::marker;
  op.call_key = std::move(key);
  op.label = "marker";
  return op;
}

// Basis permutation v -> f(v) on the integer held by `targets`.
inline Op permutation_op(const std::vector<int>& targets, const std::function<std::uint64_t(std::uint64_t)>& f,
                         Controls controls = {}, std::string label = "perm", std::int64_t analytic = -1) {
  const std::uint64_t sub = std::uint64_t{1} << targets.size();
  auto p = std::make_shared<std::vector<std::uint64_t>>(sub);
  auto inv = std::make_shared<std::vector<std::uint64_t>>(sub, sub);
  for (std::uint64_t v = 0; v < sub; ++v) {
    const std::uint64_t img = f(v);
    if (img >= sub || (*inv)[img] != sub) throw std::invalid_argument("function is not a permutation");
    (*p)[v] = img;
    (*inv)[img] = v;
  }
  Op op;
  op.kind = OpKind::permutation;
  op.targets = targets;
  op.controls = std::move(controls);
  op.perm = std::move(p);
  op.perm_inv = std::move(inv);
  op.label = std::move(label);
  op.analytic_toffoli = analytic;
  return op;
}

inline Op diagonal_op(const std::vector<int>& targets, const std::function<cplx(std::uint64_t)>& phase,
                      Controls controls = {}, std::string label = "diag") {
  const std::uint64_t sub = std::uint64_t{1} << targets.size();
  auto ph = std::make_shared<std::vector<cplx>>(sub);
  for (std::uint64_t v = 0; v < sub; ++v) {
    (*ph)[v] = phase(v);
    if (std::abs(std::abs((*ph)[v]) - 1.0) > 1e-12) throw std::invalid_argument("diagonal entry is not a phase");
  }
  Op op;
  op.kind = OpKind::diagonal;
  op.targets = targets;
  op.controls = std::move(controls);
  op.phases = std::move(ph);
  op.label = std::move(label);
  return op;
}

// Predicates on more input bits than this are evaluated on the fly.
inline constexpr std::size_t kPredicateTableBits = 20;

// flag ^= pred(inputs). Flag-XOR form is always reversible.
inline Op predicate_op(const std::vector<int>& inputs, int flag, const std::function<bool(std::uint64_t)>& pred,
                       Controls controls = {}, std::string label = "predicate", std::int64_t analytic = -1) {
  Op op;
  if (inputs.size() <= kPredicateTableBits) {
    const std::uint64_t sub = std::uint64_t{1} << inputs.size();
    auto table = std::make_shared<std::vector<std::uint8_t>>(sub);
    for (std::uint64_t v = 0; v < sub; ++v) (*table)[v] = pred(v) ? 1 : 0;
    op.pred = std::move(table);
  } else {
    op.pred_fn = std::make_shared<const std::function<bool(std::uint64_t)>>(pred);
  }
  op.kind = OpKind::predicate;
  op.inputs = inputs;
  op.targets = {flag};
  op.controls = std::move(controls);
  op.label = std::move(label);
  op.analytic_toffoli = analytic;
  return op;
}

// Reflection that maps |0> on `targets` to |t> (t unit norm, t_0 real).
inline Op state_loader_op(const std::vector<int>& targets, const CVector& t, std::string label = "load") {
  const Eigen::Index sub = Eigen::Index{1} << targets.size();
  if (t.size() != sub) throw std::invalid_argument("state size does not match target register");
  if (std::abs(t.norm() - 1.0) > 1e-12) throw std::invalid_argument("state to load is not normalised");
  if (std::abs(t(0).imag()) > 1e-15) throw std::invalid_argument("leading amplitude must be real");
  CVector w = -t;
  w(0) += 1.0;
  const double nw = w.norm();
  auto house = std::make_shared<CVector>(CVector::Zero(sub));
  if (nw > 1e-15) *house = w / nw;
  Op op;
  op.kind = OpKind::householder;
  op.targets = targets;
  op.house = std::move(house);
  op.label = std::move(label);
  if (nw <= 1e-15) {  // t == |0>: identity
    op.kind = OpKind::diagonal;
    op.phases = std::make_shared<std::vector<cplx>>(sub, cplx{1.0, 0.0});
  }
  return op;
}

// ---------------------------------------------------------------------------
// Circuits

class Circuit {
 public:
  Circuit() = default;

  Circuit& add(Op op) {
    ops_.push_back(std::move(op));
    return *this;
  }
  Circuit& append(const Circuit& c) {
    ops_.insert(ops_.end(), c.ops_.begin(), c.ops_.end());
    return *this;
  }
  const std::vector<Op>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }

  void apply(Statevector& s, const Controls& extra = {}) const {
    for (const auto& op : ops_) apply_op(s, op, extra);
  }

  Circuit adjoint() const {
    Circuit c;
    c.ops_.reserve(ops_.size());
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) c.ops_.push_back(it->adjoint());
    return c;
  }
  Circuit controlled(const Controls& extra) const {
    Circuit c = *this;
    for (auto& op : c.ops_)
      if (op.kind != OpKind::marker) op.controls.insert(op.controls.end(), extra.begin(), extra.end());
    return c;
  }
  // Relabels qubit q as map[q].
  Circuit remapped(const std::vector<int>& map) const {
    Circuit c = *this;
    for (auto& op : c.ops_) {
      for (auto& q : op.targets) q = map.at(q);
      for (auto& q : op.inputs) q = map.at(q);
      for (auto& ct : op.controls) ct.qubit = map.at(ct.qubit);
    }
    return c;
  }

  GateTally cost() const {
    GateTally t;
    for (const auto& op : ops_) detail::add_gate_cost(t, op, 0);
    return t;
  }

 private:
  std::vector<Op> ops_;
};

// QFT with kernel exp(+2 pi i x y / 2^w) on the listed qubits (qubits[0] = LSB).
inline Circuit qft_circuit(const std::vector<int>& qubits, bool inverse = false) {
  const int w = static_cast<int>(qubits.size());
  Circuit c;
  c.add(marker_op("qft"));
  for (int i = w - 1; i >= 0; --i) {
    c.add(gate_op(GateKind::H, qubits[i]));
    for (int j = i - 1; j >= 0; --j)
      c.add(gate_op(GateKind::Phase, qubits[i], {Control{qubits[j], true}}, kPi / static_cast<double>(1 << (i - j))));
  }
  for (int k = 0; k < w / 2; ++k) c.add(swap_op(qubits[k], qubits[w - 1 - k]));
  if (!inverse) return c;
  Circuit inv = c.adjoint();
  return inv;
}

// Closed-form Toffoli count of a controlled constant adder on w bits, modelled
// as a ripple increment ladder over the bits at and above the lowest set bit
// of the constant, plus the AND of the extra controls.
inline std::int64_t adder_toffoli(int width, std::uint64_t constant, std::size_t ncontrols) {
  if (constant == 0) return 0;
  int low = 0;
  while (!((constant >> low) & 1)) ++low;
  const std::int64_t m = width - low;
  const std::int64_t c = static_cast<std::int64_t>(ncontrols);
  return std::max<std::int64_t>(0, 2 * (m + c) - 4);
}

inline Op modular_add_op(const std::vector<int>& qubits, std::int64_t constant, Controls controls = {}) {
  const int w = static_cast<int>(qubits.size());
  const std::uint64_t mod = std::uint64_t{1} << w;
  const std::uint64_t c = static_cast<std::uint64_t>(((constant % static_cast<std::int64_t>(mod)) +
                                                      static_cast<std::int64_t>(mod)) % static_cast<std::int64_t>(mod));
  const std::size_t nc = controls.size();
  return permutation_op(qubits, [c, mod](std::uint64_t x) { return (x + c) % mod; }, std::move(controls), "adder",
                        adder_toffoli(w, c, nc));
}

// ---------------------------------------------------------------------------
// Direct-application API

inline void apply_gate(Statevector& s, GateKind k, int target, const Controls& controls = {}, double angle = 0.0) {
  apply_op(s, gate_op(k, target, controls, angle));
}

inline void apply_qft(Statevector& s, const std::string& reg, bool inverse = false) {
  qft_circuit(s.layout().qubits(reg), inverse).apply(s);
}

inline void apply_modular_add_const(Statevector& s, const std::string& reg, std::int64_t constant,
                                    const Controls& controls = {}) {
  apply_op(s, modular_add_op(s.layout().qubits(reg), constant, controls));
}

// flag ^= pred(values of in_regs...), pred receives one value per register.
inline void apply_reversible_function(Statevector& s, const std::vector<std::string>& in_regs, const std::string& flag,
                                      const std::function<bool(const std::vector<std::uint64_t>&)>& pred,
                                      const std::string& label = "predicate", std::int64_t analytic = -1) {
  if (s.layout().reg(flag).width != 1) throw std::invalid_argument("flag register must be one qubit");
  std::vector<int> inputs;
  std::vector<int> widths;
  for (const auto& r : in_regs) {
    if (r == flag) throw std::invalid_argument("flag listed as an input");
    auto q = s.layout().qubits(r);
    inputs.insert(inputs.end(), q.begin(), q.end());
    widths.push_back(static_cast<int>(q.size()));
  }
  auto unpack = [widths](std::uint64_t v) {
    std::vector<std::uint64_t> vals;
    for (int w : widths) {
      vals.push_back(v & ((std::uint64_t{1} << w) - 1));
      v >>= w;
    }
    return vals;
  };
  apply_op(s, predicate_op(inputs, s.layout().qubit(flag, 0), [&](std::uint64_t v) { return pred(unpack(v)); }, {},
                           label, analytic));
}

// Toffoli accounting for the inequality test of the nested-box preparation.
struct InequalityCost {
  std::int64_t squarer = 0;
  std::int64_t multiplier = 0;
  std::int64_t comparator = 0;
  std::int64_t ancillas = 0;
  std::int64_t total() const { return squarer + multiplier + comparator; }
};

inline InequalityCost tally_inequality_cost(int n, int n_ref, int order) {
  if (n < 2) throw ConfigError("tally_inequality_cost needs n >= 2");
  const std::int64_t k = n - 1;
  InequalityCost c;
  if (order == 2) {
    c.squarer = k * k - k;                 // squaring the (n-1)-bit j register
    c.multiplier = 4 * k * n_ref - n_ref;  // m * j^2 with a 2(n-1)-bit square
    c.comparator = 2 * k + n_ref;          // compare against the relabelled 2^{2mu} M
    c.ancillas = 2 * k + n_ref;
  } else if (order == 1) {
    c.multiplier = 2 * k * n_ref - n_ref;  // m * j
    c.comparator = k + n_ref;
    c.ancillas = k + n_ref;
  } else {
    throw ConfigError("order must be 1 or 2");
  }
  return c;
}

inline GateTally inequality_tally(int n, int n_ref, int order) {
  const auto c = tally_inequality_cost(n, n_ref, order);
  GateTally t;
  if (c.squarer) t.analytic["squarer"] = c.squarer;
  t.analytic["multiplier"] = c.multiplier;
  t.analytic["comparator"] = c.comparator;
  return t;
}

struct Projection {
  double probability = 0.0;
  CVector residual;  // amplitudes over the unassigned qubits, packed in layout order
};

inline Projection project_and_extract(const Statevector& s, const std::map<std::string, std::uint64_t>& assignment,
                                      bool renormalize = false) {
  const auto& lay = s.layout();
  std::uint64_t fixed_mask = 0, fixed_val = 0;
  for (const auto& [name, v] : assignment) {
    const auto& r = lay.reg(name);
    fixed_mask |= ((std::uint64_t{1} << r.width) - 1) << r.offset;
    fixed_val = lay.with(fixed_val, name, v);
  }
  std::vector<int> rest;
  for (int q = 0; q < lay.total(); ++q)
    if (!((fixed_mask >> q) & 1)) rest.push_back(q);
  const detail::BitGather g(rest);
  Projection p;
  p.residual = CVector::Zero(Eigen::Index{1} << rest.size());
  const auto& a = s.data();
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if ((i & fixed_mask) != fixed_val) continue;
    p.residual(static_cast<Eigen::Index>(g.gather(i))) = a[i];
  }
  p.probability = p.residual.squaredNorm();
  if (p.probability == 0.0) {
    p.residual.resize(0);
    return p;
  }
  if (renormalize) p.residual /= std::sqrt(p.probability);
  return p;
}

}  // namespace slacq
