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

#ifndef ADMARKET_CTR_CURVE_HPP
#define ADMARKET_CTR_CURVE_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "admarket/errors.hpp"

namespace admarket {

/// Position-effect CTR curve gamma_1 > gamma_2 > ... > gamma_K > 0, with
/// gamma_j == 0 for every slot j > K. Entries must lie in (0, 1].
class CtrCurve {
 public:
  explicit CtrCurve(std::vector<double> gammas) : gammas_(std::move(gammas)) {
    if (gammas_.empty()) {
      throw ValidationError(Errc::empty_gammas, "CTR curve needs at least one slot");
    }
    for (std::size_t i = 0; i < gammas_.size(); ++i) {
      const double g = gammas_[i];
      if (!std::isfinite(g)) {
        throw ValidationError(Errc::nonfinite_number,
                              "gamma_" + std::to_string(i + 1) + " is not finite");
      }
      if (g <= 0.0 || g > 1.0) {
        throw ValidationError(Errc::gamma_out_of_range,
                              "gamma_" + std::to_string(i + 1) + " = " +
                                  std::to_string(g) + " outside (0, 1]");
      }
      if (i > 0 && gammas_[i - 1] <= g) {
        throw ValidationError(Errc::gammas_not_decreasing,
                              "gamma_" + std::to_string(i) + " <= gamma_" +
                                  std::to_string(i + 1));
      }
    }
  }

  std::size_t slots() const { return gammas_.size(); }

  // 1-based; zero for any slot beyond K.
  double gamma(std::size_t slot) const {
    if (slot == 0 || slot > gammas_.size()) return 0.0;
    return gammas_[slot - 1];
  }

  // gamma_j - gamma_{j+1}, the marginal exposure of slot j.
  double gap(std::size_t slot) const { return gamma(slot) - gamma(slot + 1); }

  // The curve restricted to its first `count` slots.
  CtrCurve truncated(std::size_t count) const {
    if (count == 0 || count > gammas_.size()) {
      throw ValidationError(Errc::slot_out_of_range,
                            "cannot truncate curve of " + std::to_string(gammas_.size()) +
                                " slots to " + std::to_string(count));
    }
    return CtrCurve(std::vector<double>(gammas_.begin(), gammas_.begin() + count));
  }

  const std::vector<double>& gammas() const { return gammas_; }

  friend bool operator==(const CtrCurve&, const CtrCurve&) = default;

 private:
  std::vector<double> gammas_;
};

/// Validating factory matching the wire-level entry point; identical to
/// constructing a CtrCurve directly.
inline CtrCurve validate_ctr_curve(std::vector<double> gammas) {
  return CtrCurve(std::move(gammas));
}

}  // namespace admarket

#endif  // ADMARKET_CTR_CURVE_HPP
