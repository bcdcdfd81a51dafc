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

// Dense complex SVD through LAPACK's QR-iteration driver (zgesvd). Eigen's
// divide-and-conquer SVD misplaces small singular values of some of the
// preconditioned operators, which matters for condition numbers.

#include <complex>
#include <stdexcept>
#include <vector>

#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include "slacq/common.hpp"

namespace slacq {

struct Svd {
  RVector s;  // descending
  CMatrix U, V;
};

namespace detail {

inline Svd gesvd(const CMatrix& A, bool vectors) {
  CMatrix a = A;
  const lapack_int m = static_cast<lapack_int>(a.rows()), n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  Svd out;
  out.s.resize(k);
  std::vector<double> superb(std::max<lapack_int>(1, k - 1));
  const char job = vectors ? 'A' : 'N';
  if (vectors) {
    out.U.resize(m, m);
    out.V.resize(n, n);
  }
  CMatrix vt(vectors ? n : 1, vectors ? n : 1);
  const lapack_int info =
      LAPACKE_zgesvd(LAPACK_COL_MAJOR, job, job, m, n, a.data(), m, out.s.data(), vectors ? out.U.data() : nullptr,
                     vectors ? m : 1, vectors ? vt.data() : nullptr, vectors ? n : 1, superb.data());
  if (info != 0) throw std::runtime_error("zgesvd failed to converge");
  if (vectors) out.V = vt.adjoint();
  return out;
}

}  // namespace detail

inline RVector singular_values(const CMatrix& A) {
  if (A.size() == 0) return RVector();
  return detail::gesvd(A, false).s;
}

inline Svd full_svd(const CMatrix& A) { return detail::gesvd(A, true); }

}  // namespace slacq
