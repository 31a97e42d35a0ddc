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

#ifndef ADMARKET_MEDIATOR_MODEL_HPP
#define ADMARKET_MEDIATOR_MODEL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "admarket/agents.hpp"
#include "admarket/auction_core.hpp"
#include "admarket/ctr_curve.hpp"
#include "admarket/errors.hpp"
#include "admarket/numeric.hpp"

namespace admarket {

/// End-to-end noticing probabilities of the mediator's secondary slots:
/// a click must first land on her primary slot l, then notice slot j on
/// her page, so gamma_tilde_j = gamma_l * f * gamma_j for j <= L (and 0
/// beyond). Strictly decreasing over 1..L like any CTR curve.
struct EffectiveCtrCurve {
  CtrCurve base;
  std::size_t primary_slot;  // l
  double fitness;            // f
  std::size_t num_slots;     // L

  double gamma(std::size_t j) const {
    if (j == 0 || j > num_slots) return 0.0;
    return base.gamma(primary_slot) * fitness * base.gamma(j);
  }

  std::vector<double> gammas() const {
    std::vector<double> out;
    out.reserve(num_slots);
    for (std::size_t j = 1; j <= num_slots; ++j) out.push_back(gamma(j));
    return out;
  }
};

inline EffectiveCtrCurve effective_ctr(const CtrCurve& ctr, std::size_t primary_slot,
                                       const MediatorProfile& mediator) {
  if (primary_slot < 1 || primary_slot > ctr.slots()) {
    throw ValidationError(Errc::slot_out_of_range,
                          "primary slot " + std::to_string(primary_slot) +
                              " outside 1.." + std::to_string(ctr.slots()));
  }
  if (mediator.num_secondary_slots > ctr.slots()) {
    throw ValidationError(Errc::secondary_slots_out_of_range,
                          "mediator forks more slots than the curve has");
  }
  return EffectiveCtrCurve{ctr, primary_slot, mediator.fitness(),
                           mediator.num_secondary_slots};
}

/// Equilibrium price scores r^s_2 ... r^s_{L+1} of the sub-auction.
///
/// The effective-CTR recursion reduces to
///   gamma_i r^s_{i+1} = sum_{j=i..L-1} (gamma_j - gamma_{j+1}) s_{j+1}
///                       + gamma_L s_{L+1},
/// which is the base recursion on the curve truncated to L slots: the
/// gamma_l * f factor cancels, so sub-auction prices are independent of
/// which primary slot the mediator holds and of her fitness.
inline std::vector<double> s_auction_price_scores(const CtrCurve& ctr, std::size_t num_s_slots,
                                                  const std::vector<double>& ranked_s_scores) {
  if (num_s_slots < 1 || num_s_slots > ctr.slots()) {
    throw ValidationError(Errc::secondary_slots_out_of_range,
                          "sub-auction slot count outside 1..K");
  }
  return sne_price_scores(ctr.truncated(num_s_slots), ranked_s_scores);
}

/// Expected sub-auction revenue per primary impression and unit fitness:
/// sum_{j=1..L} gamma_j r^s_{j+1}. The mediator's primary score is her
/// fitness times this.
inline double mediator_resale_per_fitness(const CtrCurve& ctr, std::size_t num_s_slots,
                                          const std::vector<double>& ranked_s_scores) {
  const std::vector<double> prices = s_auction_price_scores(ctr, num_s_slots, ranked_s_scores);
  double per_impression = 0.0;
  for (std::size_t j = num_s_slots; j >= 1; --j) {
    per_impression += ctr.gamma(j) * prices[j - 1];
  }
  return per_impression;
}

/// The mediator's ranking weight in the primary auction: her expected
/// sub-auction revenue per primary impression, scaled by fitness.
///
///   s_M = f * sum_{j=1..L} gamma_j r^s_{j+1}
///       = f * (sum_{j=1..L-1} (gamma_j - gamma_{j+1}) j s_{j+1}
///              + gamma_L L s_{L+1})
///
/// Both forms are evaluated and must agree; the result never depends on
/// the primary slot, so it is computable before the primary auction runs.
inline double mediator_score(const CtrCurve& ctr, const MediatorProfile& mediator,
                             const std::vector<double>& ranked_s_scores) {
  const std::size_t num_s_slots = mediator.num_secondary_slots;
  const double fitness = mediator.fitness();
  const double direct =
      fitness * mediator_resale_per_fitness(ctr, num_s_slots, ranked_s_scores);

  double telescoped = ctr.gamma(num_s_slots) * static_cast<double>(num_s_slots) *
                      padded_at(ranked_s_scores, num_s_slots + 1);
  for (std::size_t j = num_s_slots - 1; j >= 1; --j) {
    telescoped += ctr.gap(j) * static_cast<double>(j) * padded_at(ranked_s_scores, j + 1);
  }
  telescoped *= fitness;

  if (!close(direct, telescoped, 1e-9)) {
    throw InvariantViolation("mediator score forms disagree: " + format_number(direct) +
                             " vs " + format_number(telescoped));
  }
  return direct;
}

/// Equilibrium payoff of a mediator holding primary slot l:
/// u_M = gamma_l * s_M - sum_{j=l..K} (gamma_j - gamma_{j+1}) s_{sigma(j+1)}
///     = gamma_l * (s_M - r^p_{l+1}).
/// `ranked_p_scores_below` are the primary scores ranked after her,
/// s_{sigma(l+1)}, s_{sigma(l+2)}, ... A mediator holding no slot earns 0.
inline double mediator_payoff(const CtrCurve& ctr, std::size_t primary_slot, double s_m_p,
                              const std::vector<double>& ranked_p_scores_below) {
  if (primary_slot < 1 || primary_slot > ctr.slots()) return 0.0;
  detail::check_ranked_scores(ranked_p_scores_below);
  double charge = 0.0;  // gamma_l * r^p_{l+1}
  for (std::size_t j = ctr.slots(); j >= primary_slot; --j) {
    charge += ctr.gap(j) * padded_at(ranked_p_scores_below, j - primary_slot + 1);
  }
  return ctr.gamma(primary_slot) * s_m_p - charge;
}

}  // namespace admarket

#endif  // ADMARKET_MEDIATOR_MODEL_HPP
