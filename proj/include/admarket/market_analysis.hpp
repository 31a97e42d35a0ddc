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

#ifndef ADMARKET_MARKET_ANALYSIS_HPP
#define ADMARKET_MARKET_ANALYSIS_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "admarket/auction_core.hpp"
#include "admarket/mediator_model.hpp"
#include "admarket/numeric.hpp"
#include "admarket/ranking.hpp"
#include "admarket/scenario.hpp"

namespace admarket {

struct AgentPayoff {
  double p_payoff = 0.0;
  double s_payoff = 0.0;
  std::optional<std::size_t> p_slot;
  std::optional<std::size_t> s_slot;

  double total() const { return p_payoff + s_payoff; }
};

/// Market equilibrium without the mediator.
struct BaselineOutcome {
  SneOutcome p;
  double revenue = 0.0;     // R0
  double efficiency = 0.0;  // E0
  std::map<AgentId, AgentPayoff> payoffs;  // every advertiser, zero if idle
};

/// Market equilibrium with the mediator bidding. If her score ranks past
/// the last slot she wins nothing, no sub-auction takes place, and the
/// outcome coincides with the baseline (only her score and would-be rank
/// are retained for reporting).
struct MediatorOutcome {
  SneOutcome p;
  double s_m_p = 0.0;                        // mediator's primary score
  std::optional<std::size_t> mediator_rank;  // position her score earns, if she bids
  bool mediator_won = false;
  std::size_t slot = 0;                      // l, meaningful iff mediator_won
  std::optional<SneOutcome> s;               // sub-auction, iff mediator_won
  double mediator_utility = 0.0;             // u_M
  double revenue = 0.0;                      // R
  double efficiency = 0.0;                   // E
  std::map<AgentId, AgentPayoff> payoffs;
};

namespace detail {

inline Ranking p_ranking_of_advertisers(const MarketScenario& scenario) {
  std::vector<Ranking::Entry> entries;
  for (const auto& a : scenario.advertisers()) {
    if (a.in_p_auction()) entries.push_back({a.id, a.score_p()});
  }
  return rank_by_score(std::move(entries));
}

inline Ranking s_ranking_of_advertisers(const MarketScenario& scenario) {
  std::vector<Ranking::Entry> entries;
  for (const auto& a : scenario.advertisers()) {
    if (a.in_s_auction()) entries.push_back({a.id, a.score_s()});
  }
  return rank_by_score(std::move(entries));
}

inline double total_payoff(const std::map<AgentId, AgentPayoff>& payoffs) {
  double sum = 0.0;
  for (const auto& [id, u] : payoffs) sum += u.total();
  return sum;
}

}  // namespace detail

/// Primary auction among the advertisers alone: the reference point for
/// every delta. R0 uses the closed revenue form, cross-checked against
/// the price-sum form.
inline BaselineOutcome run_baseline(const MarketScenario& scenario) {
  const CtrCurve& ctr = scenario.ctr();
  Ranking sigma = detail::p_ranking_of_advertisers(scenario);

  BaselineOutcome out;
  out.p = build_sne_outcome(
      ctr, std::move(sigma),
      [&](const AgentId& id) { return scenario.find_advertiser(id)->e_p; },
      [&](const AgentId& id) { return scenario.find_advertiser(id)->v_p; });

  out.revenue = auction_revenue(ctr, out.p.price_scores);
  const double closed = revenue_closed_form(ctr, out.p.ranking.scores());
  if (!close(out.revenue, closed)) {
    throw InvariantViolation("baseline revenue forms disagree: " + format_number(out.revenue) +
                             " vs " + format_number(closed));
  }

  for (std::size_t j = 1; j <= ctr.slots(); ++j) {
    out.efficiency += ctr.gamma(j) * out.p.ranking.score_at(j);
  }

  for (const auto& a : scenario.advertisers()) {
    AgentPayoff u;
    if (auto pos = out.p.ranking.position_of(a.id); pos && *pos <= ctr.slots()) {
      u.p_slot = *pos;
      u.p_payoff = slot_payoff(a.score_p(), ctr.gamma(*pos), out.p.price_score(*pos + 1));
    }
    out.payoffs.emplace(a.id, u);
  }
  return out;
}

/// Full pipeline with the mediator:
///   1. rank the secondary demand and price the sub-auction;
///   2. derive the mediator's primary score from her expected resale
///      revenue (independent of the slot she ends up with);
///   3. rank her against the advertisers, price the primary auction;
///   4. settle payoffs on both tiers.
inline MediatorOutcome run_with_mediator(const MarketScenario& scenario) {
  if (!scenario.mediator()) {
    throw ValidationError(Errc::mediator_required,
                          "scenario has no mediator; use run_baseline");
  }
  const CtrCurve& ctr = scenario.ctr();
  const MediatorProfile& mediator = *scenario.mediator();
  const std::size_t num_slots = ctr.slots();
  const std::size_t num_s_slots = mediator.num_secondary_slots;
  const double fitness = mediator.fitness();

  Ranking tau = detail::s_ranking_of_advertisers(scenario);
  const std::vector<double> s_prices = s_auction_price_scores(ctr, num_s_slots, tau.scores());

  MediatorOutcome out;
  out.s_m_p = mediator_score(ctr, mediator, tau.scores());

  std::vector<Ranking::Entry> p_entries;
  for (const auto& a : scenario.advertisers()) {
    if (a.in_p_auction()) p_entries.push_back({a.id, a.score_p()});
  }
  // A zero score is a zero valuation, i.e. she does not bid at all.
  if (out.s_m_p > 0.0) p_entries.push_back({mediator.id, out.s_m_p});
  Ranking sigma = rank_by_score(std::move(p_entries));
  out.mediator_rank = sigma.position_of(mediator.id);
  out.mediator_won = out.mediator_rank && *out.mediator_rank <= num_slots;

  if (!out.mediator_won) {
    // She holds no slot: the market clears exactly as if she never bid.
    BaselineOutcome base = run_baseline(scenario);
    out.p = std::move(base.p);
    out.revenue = base.revenue;
    out.efficiency = base.efficiency;
    out.payoffs = std::move(base.payoffs);
    return out;
  }

  const std::size_t l = *out.mediator_rank;
  out.slot = l;
  out.p = build_sne_outcome(
      ctr, std::move(sigma),
      [&](const AgentId& id) {
        return id == mediator.id ? mediator.relevance_p : scenario.find_advertiser(id)->e_p;
      },
      [&](const AgentId& id) {
        // The mediator's per-click value is her score net of relevance.
        return id == mediator.id ? out.s_m_p / mediator.relevance_p
                                 : scenario.find_advertiser(id)->v_p;
      });

  out.revenue = auction_revenue(ctr, out.p.price_scores);
  const double closed = revenue_closed_form(ctr, out.p.ranking.scores());
  if (!close(out.revenue, closed)) {
    throw InvariantViolation("revenue forms disagree: " + format_number(out.revenue) + " vs " +
                             format_number(closed));
  }

  // E counts advertiser value on the slots they hold plus the attention
  // value the mediator's page forwards to the secondary winners.
  double resale_value = 0.0;  // sum_j gamma_j s^s_{tau(j)}
  for (std::size_t j = 1; j <= num_s_slots; ++j) {
    resale_value += ctr.gamma(j) * tau.score_at(j);
  }
  for (std::size_t j = 1; j <= num_slots; ++j) {
    if (j == l) continue;
    out.efficiency += ctr.gamma(j) * out.p.ranking.score_at(j);
  }
  out.efficiency += ctr.gamma(l) * fitness * resale_value;

  const std::vector<double> p_scores = out.p.ranking.scores();
  const std::vector<double> below(p_scores.begin() + static_cast<std::ptrdiff_t>(l),
                                  p_scores.end());
  out.mediator_utility = mediator_payoff(ctr, l, out.s_m_p, below);
  const double direct_utility =
      ctr.gamma(l) * (out.s_m_p - out.p.price_score(l + 1));
  if (!close(out.mediator_utility, direct_utility)) {
    throw InvariantViolation("mediator payoff forms disagree: " +
                             format_number(out.mediator_utility) + " vs " +
                             format_number(direct_utility));
  }

  out.s = build_sne_outcome(
      ctr.truncated(num_s_slots), tau,
      [&](const AgentId& id) { return scenario.find_advertiser(id)->e_s; },
      [&](const AgentId& id) { return scenario.find_advertiser(id)->v_s; });

  for (const auto& a : scenario.advertisers()) {
    AgentPayoff u;
    if (auto pos = out.p.ranking.position_of(a.id); pos && *pos <= num_slots) {
      u.p_slot = *pos;
      u.p_payoff = slot_payoff(a.score_p(), ctr.gamma(*pos), out.p.price_score(*pos + 1));
    }
    if (auto pos = tau.position_of(a.id); pos && *pos <= num_s_slots) {
      u.s_slot = *pos;
      // Effective exposure of her secondary slot: gamma_l f gamma_t.
      const double exposure = ctr.gamma(l) * fitness * ctr.gamma(*pos);
      const double r_next = *pos <= s_prices.size() ? s_prices[*pos - 1] : 0.0;
      u.s_payoff = slot_payoff(a.score_s(), exposure, r_next);
    }
    out.payoffs.emplace(a.id, u);
  }
  return out;
}

/// A quantity computed two algebraically-equal ways; both are reported
/// and must agree within tolerance.
struct DualValue {
  double direct = 0.0;
  double closed_form = 0.0;

  double value() const { return direct; }
};

/// R - R0, directly and via the telescoped gap sum
///   sum_{j=max(1,l-1)..K} (gamma_j - gamma_{j+1}) j (s_{sigma(j+1)} - s_{sigma(j+2)}).
/// Non-negative at equilibrium: the mediator only ever tightens the
/// score ladder below her.
inline DualValue revenue_delta(const MarketScenario& scenario, const BaselineOutcome& baseline,
                               const MediatorOutcome& with_mediator,
                               double tol = kDefaultTolerance) {
  DualValue delta;
  delta.direct = with_mediator.revenue - baseline.revenue;
  if (with_mediator.mediator_won) {
    const CtrCurve& ctr = scenario.ctr();
    const Ranking& sigma = with_mediator.p.ranking;
    const std::size_t start = std::max<std::size_t>(1, with_mediator.slot - 1);
    for (std::size_t j = ctr.slots(); j >= start; --j) {
      delta.closed_form += ctr.gap(j) * static_cast<double>(j) *
                           (sigma.score_at(j + 1) - sigma.score_at(j + 2));
    }
  }
  if (!close(delta.direct, delta.closed_form, tol)) {
    throw InvariantViolation("revenue delta forms disagree: " + format_number(delta.direct) +
                             " vs " + format_number(delta.closed_form));
  }
  if (delta.direct < -tol) {
    throw InvariantViolation("revenue decreased with the mediator: delta = " +
                             format_number(delta.direct));
  }
  return delta;
}

/// E - E0, directly and via the identity
///   E - E0 = gamma_l f sum_j gamma_j s^s_{tau(j)} - gamma_l r^p_{l+1}:
/// the attention the mediator resells, net of the attention value the
/// displaced score ladder was charging for her slot.
inline DualValue efficiency_delta(const MarketScenario& scenario, const BaselineOutcome& baseline,
                                  const MediatorOutcome& with_mediator,
                                  double tol = kDefaultTolerance) {
  DualValue delta;
  delta.direct = with_mediator.efficiency - baseline.efficiency;
  if (with_mediator.mediator_won) {
    const CtrCurve& ctr = scenario.ctr();
    const std::size_t l = with_mediator.slot;
    const double fitness = scenario.mediator()->fitness();
    double resale_value = 0.0;
    for (std::size_t j = 1; j <= scenario.mediator()->num_secondary_slots; ++j) {
      resale_value += ctr.gamma(j) * with_mediator.s->ranking.score_at(j);
    }
    delta.closed_form =
        ctr.gamma(l) * fitness * resale_value - ctr.gamma(l) * with_mediator.p.price_score(l + 1);
  }
  if (!close(delta.direct, delta.closed_form, tol)) {
    throw InvariantViolation("efficiency delta forms disagree: " + format_number(delta.direct) +
                             " vs " + format_number(delta.closed_form));
  }
  if (delta.direct < -tol) {
    throw InvariantViolation("efficiency decreased with the mediator: delta = " +
                             format_number(delta.direct));
  }
  return delta;
}

/// Change in one advertiser's total payoff, directly and via the closed
/// form u^s - sum_{i=max(l-1,j-1)..K} (gamma_i - gamma_{i+1})
/// (s_{sigma(i+1)} - s_{sigma(i+2)}): her secondary winnings minus the
/// extra price pressure the mediator's score puts on her slot.
inline DualValue advertiser_payoff_delta(const MarketScenario& scenario,
                                         const BaselineOutcome& baseline,
                                         const MediatorOutcome& with_mediator, const AgentId& id,
                                         double tol = kDefaultTolerance) {
  if (!scenario.find_advertiser(id)) {
    throw ValidationError(Errc::agent_not_found, "no advertiser '" + id + "' in the scenario");
  }
  DualValue delta;
  delta.direct = with_mediator.payoffs.at(id).total() - baseline.payoffs.at(id).total();
  if (with_mediator.mediator_won) {
    const CtrCurve& ctr = scenario.ctr();
    const Ranking& sigma = with_mediator.p.ranking;
    const std::size_t l = with_mediator.slot;
    std::size_t start = ctr.slots() + 1;  // absent from the tier: no price pressure
    if (auto pos = sigma.position_of(id)) {
      start = std::max<std::size_t>(1, std::max(l - 1, *pos - 1));
    }
    double pressure = 0.0;
    for (std::size_t i = ctr.slots(); i >= start; --i) {
      pressure += ctr.gap(i) * (sigma.score_at(i + 1) - sigma.score_at(i + 2));
    }
    delta.closed_form = with_mediator.payoffs.at(id).s_payoff - pressure;
  }
  if (!close(delta.direct, delta.closed_form, tol)) {
    throw InvariantViolation("payoff delta forms disagree for '" + id +
                             "': " + format_number(delta.direct) + " vs " +
                             format_number(delta.closed_form));
  }
  return delta;
}

/// Everything the market creates goes somewhere: E = R + sum_i u_i + u_M.
/// Returns the residual, which should vanish within tolerance.
inline double accounting_check(const MediatorOutcome& outcome) {
  return outcome.efficiency -
         (outcome.revenue + detail::total_payoff(outcome.payoffs) + outcome.mediator_utility);
}

inline double accounting_check(const BaselineOutcome& outcome) {
  return outcome.efficiency - (outcome.revenue + detail::total_payoff(outcome.payoffs));
}

/// The per-advertiser fitness-threshold analysis needs the special
/// regime where the mediator forks the full curve (L = K) and secondary
/// demand ranks exactly like the baseline primary ranking.
inline bool extreme_case_applies(const MarketScenario& scenario) {
  if (!scenario.mediator()) return false;
  if (scenario.mediator()->num_secondary_slots != scenario.ctr().slots()) return false;
  Ranking sigma0 = detail::p_ranking_of_advertisers(scenario);
  Ranking tau = detail::s_ranking_of_advertisers(scenario);
  if (sigma0.size() != tau.size()) return false;
  for (std::size_t j = 1; j <= sigma0.size(); ++j) {
    if (sigma0.agent_at(j) != tau.agent_at(j)) return false;
  }
  return true;
}

struct ThresholdResult {
  enum class Kind { value, undefined, inapplicable };

  Kind kind = Kind::inapplicable;
  double value = 0.0;           // meaningful iff kind == value
  std::size_t regime_slot = 0;  // mediator slot l at the threshold (0: no loss anywhere)
  // True when the payoff delta crosses zero strictly inside the regime;
  // false when the loss only resolves at a regime boundary.
  bool interior_crossing = false;
  std::string note;

  bool defined() const { return kind == Kind::value; }
};

/// Smallest fitness at which advertiser `id` stops losing, i.e. the
/// supremum of the fitness set where her total payoff delta is negative.
///
/// Within the regime where the mediator holds slot l, the delta is
/// linear in f: her secondary compensation is gamma_l f G while the
/// price pressure is constant below the mediator and affine (through the
/// mediator's own score f V) above her. The routine scans the regimes in
/// ascending fitness, solving each linear piece exactly. A root strictly
/// inside a regime is self-consistent by construction: the regime's
/// bounds are exactly the condition that the mediator's score ranks l-th.
///
/// Returns `undefined` when the loss persists all the way to the fitness
/// cap 1/gamma_1, and `inapplicable` when the scenario is not in the
/// extreme case.
inline ThresholdResult min_fitness_for_no_loss(const MarketScenario& scenario, const AgentId& id) {
  if (!scenario.find_advertiser(id)) {
    throw ValidationError(Errc::agent_not_found, "no advertiser '" + id + "' in the scenario");
  }
  auto inapplicable = [](std::string why) {
    return ThresholdResult{ThresholdResult::Kind::inapplicable, 0.0, 0, false, std::move(why)};
  };
  auto no_loss = [](std::string why) {
    return ThresholdResult{ThresholdResult::Kind::value, 0.0, 0, false, std::move(why)};
  };
  if (!scenario.mediator()) return inapplicable("scenario has no mediator");
  const CtrCurve& ctr = scenario.ctr();
  const std::size_t num_slots = ctr.slots();
  if (scenario.mediator()->num_secondary_slots != num_slots) {
    return inapplicable("mediator must fork the full curve (L = K)");
  }
  Ranking sigma0 = detail::p_ranking_of_advertisers(scenario);
  Ranking tau = detail::s_ranking_of_advertisers(scenario);
  if (sigma0.size() != tau.size()) {
    return inapplicable("secondary ranking must list the same agents as the baseline");
  }
  for (std::size_t j = 1; j <= sigma0.size(); ++j) {
    if (sigma0.agent_at(j) != tau.agent_at(j)) {
      return inapplicable("secondary ranking must order agents like the baseline");
    }
  }

  auto rank0_opt = sigma0.position_of(id);
  if (!rank0_opt) return no_loss("agent participates in neither tier");
  const std::size_t rank0 = *rank0_opt;
  if (rank0 > num_slots) return no_loss("baseline loser; any secondary winnings are pure gain");

  const double unit_value =
      mediator_resale_per_fitness(ctr, num_slots, tau.scores());  // V: s_M = f V
  if (unit_value <= 0.0) return no_loss("mediator has no resale value and never wins");

  const double fitness_cap = 1.0 / ctr.gamma(1);  // exclusive

  // gamma_l f G is the agent's secondary payoff; G fixed by her s-slot.
  double compensation = 0.0;  // G
  for (std::size_t i = rank0; i <= num_slots; ++i) {
    compensation += ctr.gap(i) * (tau.score_at(rank0) - tau.score_at(i + 1));
  }
  // Price pressure from the advertiser-only part of the ladder.
  auto ladder_pressure = [&](std::size_t start) {
    double sum = 0.0;
    for (std::size_t i = start; i <= num_slots; ++i) {
      sum += ctr.gap(i) * (sigma0.score_at(i) - sigma0.score_at(i + 1));
    }
    return sum;
  };

  bool any_loss = false;
  double threshold = 0.0;
  std::size_t regime_slot = 0;
  bool interior = false;
  bool loss_at_cap = false;

  for (std::size_t l = num_slots; l >= 1; --l) {
    const double lo = sigma0.score_at(l) / unit_value;
    double hi = l >= 2 ? sigma0.score_at(l - 1) / unit_value : fitness_cap;
    hi = std::min(hi, fitness_cap);
    if (!(lo < hi)) continue;  // tied scores or entirely beyond the cap

    // delta(f) = intercept + slope * f on (lo, hi)
    double slope, intercept;
    if (rank0 + 1 <= l) {  // agent ranked above the mediator
      slope = ctr.gamma(l) * compensation - ctr.gap(l - 1) * unit_value;
      intercept = ctr.gap(l - 1) * sigma0.score_at(l) - ladder_pressure(l);
    } else {  // agent pushed one slot down (or out)
      slope = ctr.gamma(l) * compensation;
      intercept = -ladder_pressure(rank0);
    }

    // Supremum of {f in (lo, hi) : delta(f) < 0}.
    double neg_sup;
    bool neg_interior;
    if (slope > 0.0) {
      const double root = -intercept / slope;
      if (root <= lo) continue;  // non-negative throughout
      neg_interior = root < hi;
      neg_sup = std::min(root, hi);
    } else if (slope < 0.0) {
      const double root = -intercept / slope;
      if (root >= hi) continue;  // delta stays >= 0 until the regime ends
      neg_sup = hi;
      neg_interior = false;
    } else {
      if (intercept >= 0.0) continue;
      neg_sup = hi;
      neg_interior = false;
    }
    any_loss = true;
    threshold = neg_sup;
    regime_slot = l;
    interior = neg_interior;
    loss_at_cap = !neg_interior && hi >= fitness_cap * (1.0 - 1e-15);
  }

  if (!any_loss) return no_loss("no loss at any feasible fitness");
  if (loss_at_cap) {
    return ThresholdResult{ThresholdResult::Kind::undefined, 0.0, regime_slot, false,
                           "loss persists up to the fitness cap; cannot be compensated"};
  }
  return ThresholdResult{ThresholdResult::Kind::value, threshold, regime_slot, interior, ""};
}

/// Paired with/without-mediator results plus every delta and identity
/// the engine certifies.
struct ComparisonReport {
  MarketScenario scenario;
  BaselineOutcome baseline;
  MediatorOutcome with_mediator;
  DualValue revenue_change;
  DualValue efficiency_change;
  std::map<AgentId, DualValue> payoff_deltas;
  std::map<AgentId, ThresholdResult> fitness_thresholds;  // extreme case only
  double accounting_residual = 0.0;
  double baseline_accounting_residual = 0.0;
};

inline ComparisonReport compare(const MarketScenario& scenario) {
  if (!scenario.mediator()) {
    throw ValidationError(Errc::mediator_required, "mediator required for compare");
  }
  ComparisonReport report{scenario, run_baseline(scenario), run_with_mediator(scenario),
                          {},       {},                     {},
                          {},       0.0,                    0.0};
  report.revenue_change = revenue_delta(scenario, report.baseline, report.with_mediator);
  report.efficiency_change = efficiency_delta(scenario, report.baseline, report.with_mediator);
  for (const auto& a : scenario.advertisers()) {
    report.payoff_deltas.emplace(
        a.id, advertiser_payoff_delta(scenario, report.baseline, report.with_mediator, a.id));
  }
  if (extreme_case_applies(scenario)) {
    for (const auto& a : scenario.advertisers()) {
      report.fitness_thresholds.emplace(a.id, min_fitness_for_no_loss(scenario, a.id));
    }
  }
  report.accounting_residual = accounting_check(report.with_mediator);
  report.baseline_accounting_residual = accounting_check(report.baseline);
  return report;
}

/// Report shape for a market that has no mediator: both sides of the
/// pair are the baseline and every delta is zero.
inline ComparisonReport baseline_only_report(const MarketScenario& scenario) {
  BaselineOutcome base = run_baseline(scenario);
  MediatorOutcome mirror;
  mirror.p = base.p;
  mirror.revenue = base.revenue;
  mirror.efficiency = base.efficiency;
  mirror.payoffs = base.payoffs;
  ComparisonReport report{scenario, std::move(base), std::move(mirror), {}, {}, {}, {}, 0.0, 0.0};
  for (const auto& a : scenario.advertisers()) {
    report.payoff_deltas.emplace(a.id, DualValue{});
  }
  report.accounting_residual = accounting_check(report.with_mediator);
  report.baseline_accounting_residual = accounting_check(report.baseline);
  return report;
}

/// Re-checks every certified property of a finished report; returns a
/// human-readable line per violation (empty means the report is sound).
inline std::vector<std::string> report_violations(const ComparisonReport& report,
                                                  double tol = kDefaultTolerance) {
  std::vector<std::string> bad;
  const CtrCurve& ctr = report.scenario.ctr();

  if (report.revenue_change.direct < -tol) {
    bad.push_back("revenue delta negative: " + format_number(report.revenue_change.direct));
  }
  if (report.efficiency_change.direct < -tol) {
    bad.push_back("efficiency delta negative: " + format_number(report.efficiency_change.direct));
  }
  if (!close(report.revenue_change.direct, report.revenue_change.closed_form, tol)) {
    bad.push_back("revenue delta dual-form mismatch");
  }
  if (!close(report.efficiency_change.direct, report.efficiency_change.closed_form, tol)) {
    bad.push_back("efficiency delta dual-form mismatch");
  }
  for (const auto& [id, d] : report.payoff_deltas) {
    if (!close(d.direct, d.closed_form, tol)) {
      bad.push_back("payoff delta dual-form mismatch for '" + id + "'");
    }
  }
  if (std::abs(report.accounting_residual) >
      tol * (1.0 + std::abs(report.with_mediator.efficiency))) {
    bad.push_back("conservation residual " + format_number(report.accounting_residual));
  }
  if (std::abs(report.baseline_accounting_residual) >
      tol * (1.0 + std::abs(report.baseline.efficiency))) {
    bad.push_back("baseline conservation residual " +
                  format_number(report.baseline_accounting_residual));
  }

  auto check_tier = [&](const CtrCurve& curve, const SneOutcome& tier, const std::string& name) {
    const auto verdict = verify_sne(curve, tier.ranking.scores(), tier.price_scores, tol);
    if (!verdict.ok()) {
      const auto& v = *verdict.violation;
      bad.push_back(name + " violates equilibrium: rank " + std::to_string(v.position) +
                    " prefers slot " + std::to_string(v.alt_slot));
    }
    for (std::size_t i = 0; i + 1 < tier.price_scores.size(); ++i) {
      if (tier.price_scores[i] < tier.price_scores[i + 1] - tol) {
        bad.push_back(name + " price scores not monotone");
        break;
      }
    }
    for (std::size_t j = 1; j <= tier.price_scores.size(); ++j) {
      const double r = tier.price_scores[j - 1];
      if (r < -tol || r > tier.ranking.score_at(j + 1) + tol * (1.0 + tier.ranking.score_at(j + 1))) {
        bad.push_back(name + " price score " + std::to_string(j + 1) + " outside [0, s]");
        break;
      }
    }
  };
  check_tier(ctr, report.baseline.p, "baseline primary tier");
  check_tier(ctr, report.with_mediator.p, "primary tier");
  if (report.with_mediator.mediator_won) {
    check_tier(ctr.truncated(report.scenario.mediator()->num_secondary_slots),
               *report.with_mediator.s, "secondary tier");
    if (report.with_mediator.mediator_utility < -tol) {
      bad.push_back("mediator payoff negative at equilibrium");
    }
  }
  return bad;
}

}  // namespace admarket

#endif  // ADMARKET_MARKET_ANALYSIS_HPP
