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

// CSV tables with 17-significant-digit numbers and key=value run summaries.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace slacq::report {

using Cell = std::variant<std::int64_t, double, std::string>;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != header.size()) throw std::logic_error("row width does not match the header");
    rows.push_back(std::move(row));
  }

  void write(std::ostream& os) const {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_cell(r[i]);
      os << '\n';
    }
  }
};

// Ordered key=value lines. Keys prefixed "check." are asserted by the
// command; "info." flags are reported only.
class Summary {
 public:
  void set(const std::string& k, const std::string& v) { kv_.emplace_back(k, v); }
  void set(const std::string& k, const char* v) { set(k, std::string(v)); }
  void set(const std::string& k, double v) { set(k, format_double(v)); }
  void set(const std::string& k, std::int64_t v) { set(k, std::to_string(v)); }
  void set(const std::string& k, int v) { set(k, static_cast<std::int64_t>(v)); }
  void set(const std::string& k, bool v) { set(k, std::string(v ? "true" : "false")); }

  // Records an asserted check and returns its outcome.
  bool check(const std::string& name, bool ok) {
    set("check." + name, std::string(ok ? "pass" : "fail"));
    all_ &= ok;
    return ok;
  }
  void info(const std::string& name, bool ok) { set("info." + name, std::string(ok ? "pass" : "fail")); }
  bool passed() const { return all_; }

  void write(std::ostream& os) const {
    for (const auto& [k, v] : kv_) os << k << '=' << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> kv_;
  bool all_ = true;
};

// Writes to `path`, or to stdout when path is "-".
template <class Writer>
void emit(const std::string& path, const Writer& w) {
  if (path == "-") {
    w(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  w(f);
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace slacq::report
