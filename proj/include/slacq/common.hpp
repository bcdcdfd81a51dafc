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

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace slacq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Dense paths refuse anything larger than this many rows.
inline constexpr std::int64_t kDenseLimit = 4096;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Worker count for internal sweeps; SLACQ_WORKERS overrides the default of 1.
inline int worker_count() {
  if (const char* env = std::getenv("SLACQ_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

// Runs body(i) for i in [0, count). Each index is handled exactly once and
// callers write results into slot i, so output order never depends on the
// number of workers.
template <class Body>
void parallel_for(std::int64_t count, Body&& body, int workers = worker_count()) {
  if (workers <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  const int w = static_cast<int>(std::min<std::int64_t>(workers, count));
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      for (std::int64_t i = t; i < count; i += w) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline bool is_power_of_two(std::int64_t x) { return x > 0 && (x & (x - 1)) == 0; }

inline int log2_exact(std::int64_t x) {
  if (!is_power_of_two(x)) throw ConfigError("size is not a power of two");
  int n = 0;
  while ((std::int64_t{1} << n) < x) ++n;
  return n;
}

inline double sign_pow(std::int64_t j) { return (j % 2 == 0) ? 1.0 : -1.0; }

}  // namespace slacq
