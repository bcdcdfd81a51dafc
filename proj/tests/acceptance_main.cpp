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

// Runs every acceptance criterion and prints one PASS/FAIL line each. Exit
// status is nonzero iff any criterion fails.

#include <cstdio>
#include <iostream>

#include "slacq/acceptance.hpp"

int main() {
  using namespace slacq;
  const auto suite = acceptance_suite(AcceptanceOptions{});
  int failed = 0;
  for (const auto& f : suite) {
    const CriterionResult r = run_timed(f);
    std::printf("%s criterion %2d %-28s (%.1f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    for (const auto& [k, v] : r.metrics) std::printf(" %s=%.6g", k.c_str(), v);
    if (!r.note.empty()) std::printf(" [%s]", r.note.c_str());
    std::printf("\n");
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(suite.size()) - failed, suite.size());
  return failed == 0 ? 0 : 1;
}
