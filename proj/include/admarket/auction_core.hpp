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

#ifndef ADMARKET_AUCTION_CORE_HPP
#define ADMARKET_AUCTION_CORE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "admarket/ctr_curve.hpp"
#include "admarket/errors.hpp"
#include "admarket/numeric.hpp"
#include "admarket/ranking.hpp"

namespace admarket {

namespace detail {

inline void check_ranked_scores(const std::vector<double>& scores) {
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw ValidationError(Errc::nonfinite_number, "score is not finite");
    }
    if (scores[i] < 0.0) {
      throw ValidationError(Errc::negative_score, "ranked score < 0");
    }
    if (i > 0 && scores[i] > scores[i - 1]) {
      throw ValidationError(Errc::unsorted_scores,
                            "scores increase at position " + std::to_string(i + 1));
    }
  }
}

}  // namespace detail

/// Symmetric-equilibrium price scores for a position auction.
///
/// Solves gamma_i * r_{i+1} = sum_{j=i..K} (gamma_j - gamma_{j+1}) * s_{j+1}
/// by backward accumulation and returns the K values r_2 ... r_{K+1}.
/// r_{j+1} is what the slot-j occupant pays per unit of her relevance;
/// `ranked_scores` must be non-increasing, implicitly zero beyond its end.
inline std::vector<double> sne_price_scores(const CtrCurve& ctr,
                                            const std::vector<double>& ranked_scores) {
  detail::check_ranked_scores(ranked_scores);
  const std::size_t num_slots = ctr.slots();
  std::vector<double> prices(num_slots, 0.0);
  double tail = 0.0;  // sum_{j=i..K} (gamma_j - gamma_{j+1}) * s_{j+1}
  for (std::size_t i = num_slots; i >= 1; --i) {
    tail += ctr.gap(i) * padded_at(ranked_scores, i + 1);
    prices[i - 1] = tail / ctr.gamma(i);
  }
  return prices;
}

/// Raw next-score GSP prices: the slot-i occupant pays s_{i+1} / e_i per
/// click; the last one pays nothing. Kept for completeness of the basic
/// mechanism; equilibrium analytics use sne_price_scores instead.
inline std::vector<double> gsp_next_score_prices(
    const std::vector<std::pair<double, double>>& ranked_score_relevance) {
  std::vector<double> prices;
  prices.reserve(ranked_score_relevance.size());
  for (std::size_t i = 0; i < ranked_score_relevance.size(); ++i) {
    const auto& [score, relevance] = ranked_score_relevance[i];
    if (i > 0 && score > ranked_score_relevance[i - 1].first) {
      throw ValidationError(Errc::unsorted_scores, "GSP input not sorted");
    }
    if (relevance <= 0.0) {
      throw ValidationError(Errc::relevance_out_of_range,
                            "GSP price undefined for zero relevance");
    }
    const double next_score = i + 1 < ranked_score_relevance.size()
                                  ? ranked_score_relevance[i + 1].first
                                  : 0.0;
    prices.push_back(next_score / relevance);
  }
  return prices;
}

/// Auctioneer revenue R = sum_j gamma_j * r_{j+1} over the K slots.
inline double auction_revenue(const CtrCurve& ctr, const std::vector<double>& price_scores) {
  if (price_scores.size() != ctr.slots()) {
    throw ValidationError(Errc::length_mismatch,
                          "expected " + std::to_string(ctr.slots()) + " price scores, got " +
                              std::to_string(price_scores.size()));
  }
  double revenue = 0.0;
  for (std::size_t j = ctr.slots(); j >= 1; --j) {
    revenue += ctr.gamma(j) * price_scores[j - 1];
  }
  return revenue;
}

/// Same revenue without materializing prices:
/// R = sum_j (gamma_j - gamma_{j+1}) * j * s_{j+1}. Agrees with
/// auction_revenue(sne_price_scores(...)) up to roundoff; the pair is
/// kept as a cross-check of the recursion.
inline double revenue_closed_form(const CtrCurve& ctr, const std::vector<double>& ranked_scores) {
  detail::check_ranked_scores(ranked_scores);
  double revenue = 0.0;
  for (std::size_t j = ctr.slots(); j >= 1; --j) {
    revenue += ctr.gap(j) * static_cast<double>(j) * padded_at(ranked_scores, j + 1);
  }
  return revenue;
}

/// gamma_j * (s - r): expected payoff of holding a slot with exposure
/// `ctr_at_slot` at price score `price_score`. Negative values are
/// meaningful for out-of-equilibrium probes.
inline double slot_payoff(double score, double ctr_at_slot, double price_score) {
  return ctr_at_slot * (score - price_score);
}

/// Outcome of one auction tier at equilibrium.
struct SneOutcome {
  Ranking ranking;
  std::vector<double> price_scores;      // r_2 ... r_{K+1}
  std::vector<double> per_click_prices;  // slot j pays r_{j+1} / e_{sigma(j)}
  std::vector<double> derived_bids;      // b_{sigma(j)}; top bid reported as v

  // r_j with the tier's indexing (j in 2..K+1), zero beyond.
  double price_score(std::size_t j) const {
    if (j < 2 || j > price_scores.size() + 1) return 0.0;
    return price_scores[j - 2];
  }
};

/// Assembles the full tier outcome for a ranking: equilibrium price
/// scores, per-click prices for the occupied slots, and the bid profile
/// they derive from. The recursion never pins the top bid (r_1 is not a
/// price), so the top agent's bid is reported as her value; bids of
/// agents ranked past K+1 are not pinned either and are left out.
template <typename RelevanceOf, typename ValueOf>
SneOutcome build_sne_outcome(const CtrCurve& ctr, Ranking ranking, RelevanceOf&& relevance_of,
                             ValueOf&& value_of) {
  std::vector<double> prices = sne_price_scores(ctr, ranking.scores());
  SneOutcome out;
  const std::size_t occupied = std::min(ranking.size(), ctr.slots());
  out.per_click_prices.reserve(occupied);
  for (std::size_t j = 1; j <= occupied; ++j) {
    const double r_next = j <= prices.size() ? prices[j - 1] : 0.0;
    out.per_click_prices.push_back(r_next / relevance_of(ranking.agent_at(j)));
  }
  const std::size_t bid_count = std::min(ranking.size(), ctr.slots() + 1);
  out.derived_bids.reserve(bid_count);
  for (std::size_t j = 1; j <= bid_count; ++j) {
    const AgentId& id = ranking.agent_at(j);
    out.derived_bids.push_back(j == 1 ? value_of(id) : prices[j - 2] / relevance_of(id));
  }
  out.ranking = std::move(ranking);
  out.price_scores = std::move(prices);
  return out;
}

struct SneViolation {
  std::size_t position;   // 1-based rank of the envious agent
  std::size_t alt_slot;   // slot she would rather hold (0 = drop out)
  double current_payoff;
  double alternative_payoff;
};

struct SneVerdict {
  std::optional<SneViolation> violation;
  bool ok() const { return !violation.has_value(); }
};

/// Independent equilibrium check: every ranked agent (winners and
/// losers) must weakly prefer her own slot, at its current price, to
/// every other slot at that slot's current price — including dropping
/// out (exposure 0, price 0). Returns the first (position, slot) pair
/// that fails by more than `tolerance`.
inline SneVerdict verify_sne(const CtrCurve& ctr, const std::vector<double>& ranked_scores,
                             const std::vector<double>& price_scores,
                             double tolerance = kDefaultTolerance) {
  detail::check_ranked_scores(ranked_scores);
  if (price_scores.size() != ctr.slots()) {
    throw ValidationError(Errc::length_mismatch,
                          "price vector does not match the CTR curve");
  }
  const std::size_t num_slots = ctr.slots();
  auto price_after = [&](std::size_t slot) {  // r_{slot+1}
    return slot < 1 || slot > num_slots ? 0.0 : price_scores[slot - 1];
  };
  for (std::size_t pos = 1; pos <= ranked_scores.size(); ++pos) {
    const double score = ranked_scores[pos - 1];
    const double current =
        pos <= num_slots ? slot_payoff(score, ctr.gamma(pos), price_after(pos)) : 0.0;
    // Alternative slot 0 stands for losing: payoff 0.
    for (std::size_t alt = 0; alt <= num_slots; ++alt) {
      if (alt == pos) continue;
      const double other =
          alt == 0 ? 0.0 : slot_payoff(score, ctr.gamma(alt), price_after(alt));
      if (current < other - tolerance) {
        return SneVerdict{SneViolation{pos, alt, current, other}};
      }
    }
  }
  return SneVerdict{};
}

}  // namespace admarket

#endif  // ADMARKET_AUCTION_CORE_HPP
