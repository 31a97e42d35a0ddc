// Copyright 2026 The admarket Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADMARKET_NUMERIC_HPP
#define ADMARKET_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace admarket {

// All engine math runs in IEEE double; comparisons use an
// absolute-plus-relative band: |a-b| <= tol * (1 + max(|a|,|b|)).
inline constexpr double kDefaultTolerance = 1e-9;

inline bool close(double a, double b, double tol = kDefaultTolerance) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Reads a 1-based sequence that is implicitly zero beyond its stored
// length (scores of absent competitors, CTRs of nonexistent slots).
inline double padded_at(const std::vector<double>& v, std::size_t index1) {
  if (index1 == 0 || index1 > v.size()) return 0.0;
  return v[index1 - 1];
}

// Report numbers are rendered with 12 significant digits.
inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace admarket

#endif  // ADMARKET_NUMERIC_HPP
