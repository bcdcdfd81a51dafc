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

// Shannon wavelet transform S = IQFT_half . U_block . U_split . U_mix . U_shift . QFT,
// which splits momenta into an IR half (indices [0, N/2)) and a UV half, and
// the recursive multiscale conjugation W built from it.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "slacq/block_encoding.hpp"
#include "slacq/common.hpp"
#include "slacq/qsim.hpp"
#include "slacq/slac_core.hpp"

namespace slacq {

// Unitary DFT with kernel exp(+2 pi i x y / N).
inline CMatrix dft_matrix(std::int64_t N) {
  if (N > kDenseLimit) throw std::length_error("dense limit exceeded");
  CMatrix F(N, N);
  const double s = 1.0 / std::sqrt(static_cast<double>(N));
  for (std::int64_t a = 0; a < N; ++a)
    for (std::int64_t b = 0; b < N; ++b)
      F(a, b) = s * std::exp(kI * (2.0 * kPi * static_cast<double>((a * b) % N) / static_cast<double>(N)));
  return F;
}

// Permutation sending basis state |x> to |x - shift mod N>.
inline CMatrix cyclic_lead(std::int64_t N, std::int64_t shift) {
  CMatrix P = CMatrix::Zero(N, N);
  for (std::int64_t r = 0; r < N; ++r) P(r, ((r + shift) % N + N) % N) = 1.0;
  return P;
}

struct QswtPlan {
  int n = 0;
  CMatrix qft, u_shift, u_mix, u_split, u_block, iqft_half;

  std::int64_t N() const { return std::int64_t{1} << n; }
  CMatrix compose() const { return iqft_half * u_block * u_split * u_mix * u_shift * qft; }
};

inline QswtPlan build_qswt(int n) {
  if (n < 2) throw ConfigError("QSWT needs n >= 2");
  QswtPlan p;
  p.n = n;
  const std::int64_t N = p.N(), h = N / 2, q = N / 4;
  p.qft = dft_matrix(N);
  p.u_shift = cyclic_lead(N, h);
  p.u_mix = CMatrix::Identity(N, N);
  const double s = 1.0 / std::sqrt(2.0);
  p.u_mix(q, q) = s;
  p.u_mix(q, 3 * q) = s;
  p.u_mix(3 * q, q) = kI * s;
  p.u_mix(3 * q, 3 * q) = -kI * s;
  p.u_split = cyclic_lead(N, q);
  p.u_block = CMatrix::Zero(N, N);
  p.u_block.topLeftCorner(h, h) = cyclic_lead(h, q);
  p.u_block.bottomRightCorner(h, h) = cyclic_lead(h, q);
  p.u_block.col(3 * q) *= -1.0;
  const CMatrix fi = dft_matrix(h).adjoint();
  p.iqft_half = CMatrix::Zero(N, N);
  p.iqft_half.topLeftCorner(h, h) = fi;
  p.iqft_half.bottomRightCorner(h, h) = fi;
  return p;
}

// Dense S from its components.
inline CMatrix qswt_dense(int n) { return build_qswt(n).compose(); }

// Gate-level S on `qubits` (qubits[0] = LSB).
inline Circuit qswt_circuit(const std::vector<int>& qubits) {
  const int n = static_cast<int>(qubits.size());
  if (n < 2) throw ConfigError("QSWT needs n >= 2");
  const int msb = qubits[n - 1];
  const std::vector<int> low(qubits.begin(), qubits.end() - 1);
  // Selects the pair (N/4, 3N/4): bit n-2 set, bits below clear.
  Controls pair{Control{qubits[n - 2], true}};
  for (int b = 0; b < n - 2; ++b) pair.push_back(Control{qubits[b], false});
  const double s = 1.0 / std::sqrt(2.0);

  Circuit c;
  c.add(marker_op("qswt"));
  c.append(qft_circuit(qubits));
  c.add(gate_op(GateKind::X, msb));
  c.add(matrix_op(Mat2{s, s, kI * s, -kI * s}, msb, pair, "mix"));
  c.add(modular_add_op(qubits, -(std::int64_t{1} << (n - 2))));
  c.add(gate_op(GateKind::Z, msb, pair));
  c.add(modular_add_op(low, -(std::int64_t{1} << (n - 2))));
  c.append(qft_circuit(low, true));
  return c;
}

// ---------------------------------------------------------------------------
// Multiscale conjugation W = S_(r-1) ... S_(0), S_(s) acting on the lowest
// n - s qubits when the top s qubits are all |0>.

struct MultiscalePlan {
  int n = 0;
  int r = 0;
  std::vector<std::int64_t> block_dims;  // IR block first, then finer scales
  CMatrix W;                             // empty when the lattice exceeds the dense limit

  std::vector<std::int64_t> block_offsets() const {
    std::vector<std::int64_t> o{0};
    for (auto d : block_dims) o.push_back(o.back() + d);
    return o;
  }
};

inline void validate_scale(int n, int r) {
  if (n < 2) throw ConfigError("multiscale needs n >= 2");
  if (r < 1 || r > n - 1) throw ConfigError("scale r must lie in [1, n-1]");
}

inline std::vector<std::int64_t> multiscale_block_dims(int n, int r) {
  validate_scale(n, r);
  std::vector<std::int64_t> d{std::int64_t{1} << (n - r)};
  for (int s = r; s >= 1; --s) d.push_back(std::int64_t{1} << (n - s));
  return d;
}

inline CMatrix multiscale_dense(int n, int r) {
  validate_scale(n, r);
  const std::int64_t N = std::int64_t{1} << n;
  CMatrix W = CMatrix::Identity(N, N);
  for (int s = 0; s < r; ++s) {
    const std::int64_t m = N >> s;
    const CMatrix top = qswt_dense(n - s) * W.topRows(m);
    W.topRows(m) = top;
  }
  return W;
}

inline MultiscalePlan plan_multiscale(int n, int r, bool dense = true) {
  MultiscalePlan p;
  p.n = n;
  p.r = r;
  p.block_dims = multiscale_block_dims(n, r);
  if (dense) p.W = multiscale_dense(n, r);
  return p;
}

// Ladder-register width used by the coherent W.
inline int multiscale_ladder_width(int r) { return std::max(0, r - 1); }

// Gate-level W on register `sys` with the AND ladder `ladder` (r - 1 qubits,
// returned to |0>).
inline Circuit multiscale_circuit(const RegisterLayout& lay, int r, const std::string& sys = "sys",
                                  const std::string& ladder = "g") {
  const auto q = lay.qubits(sys);
  const int n = static_cast<int>(q.size());
  validate_scale(n, r);
  std::vector<int> g;
  if (r > 1) g = lay.qubits(ladder);
  if (static_cast<int>(g.size()) < r - 1) throw ConfigError("ladder register too small");

  Circuit c, compute;
  c.append(qswt_circuit(q));
  for (int s = 1; s < r; ++s) {
    Op step = s == 1 ? gate_op(GateKind::X, g[0], {Control{q[n - 1], false}})
                     : gate_op(GateKind::X, g[s - 1], {Control{g[s - 2], true}, Control{q[n - s], false}});
    c.add(step);
    compute.add(step);
    const std::vector<int> sub(q.begin(), q.begin() + (n - s));
    c.append(qswt_circuit(sub).controlled({Control{g[s - 1], true}}));
  }
  c.append(compute.adjoint());
  return c;
}

// Encoding of W (A / alpha) W^dagger from an encoding of A.
inline BlockEncodingSpec multiscale(const BlockEncodingSpec& be, int r) {
  const int n = be.system_qubits();
  validate_scale(n, r);
  BlockEncodingSpec out;
  out.label = be.label + "_multiscale";
  std::vector<int> map(be.layout.total());
  for (const auto& reg : be.layout.registers()) {
    const std::string name = reg.name == be.system ? std::string("sys") : reg.name;
    out.layout.add(name, reg.width);
  }
  const int lw = multiscale_ladder_width(r);
  if (lw > 0) out.layout.add("g", lw);
  for (const auto& reg : be.layout.registers()) {
    const std::string name = reg.name == be.system ? std::string("sys") : reg.name;
    for (int b = 0; b < reg.width; ++b) map[reg.offset + b] = out.layout.qubit(name, b);
  }
  const Circuit w = multiscale_circuit(out.layout, r);
  out.circuit.append(w.adjoint());
  out.circuit.append(be.circuit.remapped(map));
  out.circuit.append(w);
  out.ancillas = be.ancillas;
  out.scratch = be.scratch;
  if (lw > 0) out.scratch.push_back("g");
  out.alpha = be.alpha;
  out.sign = be.sign;
  out.epsilon = be.epsilon;
  return out;
}

// Max |entry| of every off-diagonal block rectangle; diagonal entries are 0.
inline RMatrix block_coupling_report(const CMatrix& A, const MultiscalePlan& plan) {
  const auto off = plan.block_offsets();
  const std::size_t m = plan.block_dims.size();
  if (A.rows() != off.back() || A.cols() != off.back()) throw ConfigError("matrix does not match the plan");
  RMatrix R = RMatrix::Zero(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      R(a, b) = A.block(off[a], off[b], plan.block_dims[a], plan.block_dims[b]).cwiseAbs().maxCoeff();
    }
  return R;
}

}  // namespace slacq
