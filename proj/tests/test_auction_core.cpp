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

#include <algorithm>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "admarket/auction_core.hpp"
#include "admarket/random.hpp"
#include "support/oracles.hpp"

using namespace admarket;
using Catch::Matchers::WithinAbs;

namespace {

// Random sorted market: decreasing gammas in (0,1], decreasing scores.
struct RandomTier {
  CtrCurve ctr;
  std::vector<double> scores;
};

RandomTier random_tier(Rng& rng) {
  const std::size_t num_slots = static_cast<std::size_t>(rng.uniform_int(1, 8));
  std::vector<double> gammas(num_slots);
  double g = rng.uniform(0.5, 1.0);
  const double ratio = rng.uniform(0.3, 0.9);
  for (auto& x : gammas) {
    x = g;
    g *= ratio;
  }
  const std::size_t participants = static_cast<std::size_t>(rng.uniform_int(0, 12));
  std::vector<double> scores(participants);
  for (auto& s : scores) s = rng.uniform(0.0, 10.0);
  std::sort(scores.begin(), scores.end(), std::greater<>());
  return {CtrCurve(std::move(gammas)), std::move(scores)};
}

}  // namespace

TEST_CASE("equilibrium price scores match hand-solved recursions") {
  SECTION("two slots, three bidders") {
    const auto r = sne_price_scores(CtrCurve({1.0, 0.5}), {10.0, 6.0, 4.0});
    REQUIRE(r.size() == 2);
    CHECK_THAT(r[0], WithinAbs(5.0, 1e-12));  // r_2 = (0.5*6 + 0.5*4) / 1.0
    CHECK_THAT(r[1], WithinAbs(4.0, 1e-12));  // r_3 = (0.5*4) / 0.5
  }
  SECTION("with an interloper at 4.4") {
    const auto r = sne_price_scores(CtrCurve({1.0, 0.5}), {10.0, 4.4, 4.0, 3.0});
    CHECK_THAT(r[0], WithinAbs(4.2, 1e-12));
    CHECK_THAT(r[1], WithinAbs(4.0, 1e-12));
  }
  SECTION("no competition means a free slot") {
    const auto r = sne_price_scores(CtrCurve({0.8}), {7.0});
    REQUIRE(r.size() == 1);
    CHECK(r[0] == 0.0);
  }
  SECTION("unsorted scores are rejected") {
    CHECK_THROWS_AS(sne_price_scores(CtrCurve({1.0, 0.5}), {4.0, 6.0}), ValidationError);
  }
}

TEST_CASE("raw GSP next-score prices") {
  SECTION("unit relevances") {
    const auto p = gsp_next_score_prices({{10.0, 1.0}, {6.0, 1.0}});
    REQUIRE(p.size() == 2);
    CHECK(p[0] == 6.0);
    CHECK(p[1] == 0.0);
  }
  SECTION("price scales by own relevance") {
    const auto p = gsp_next_score_prices({{10.0, 0.5}, {6.0, 1.0}, {4.0, 1.0}});
    CHECK(p[0] == 12.0);
    CHECK(p[1] == 4.0);
    CHECK(p[2] == 0.0);
  }
  SECTION("single bidder pays nothing") {
    const auto p = gsp_next_score_prices({{10.0, 0.7}});
    CHECK(p[0] == 0.0);
  }
  SECTION("zero relevance is rejected") {
    CHECK_THROWS_AS(gsp_next_score_prices({{10.0, 0.0}}), ValidationError);
  }
}

TEST_CASE("revenue, priced and closed-form") {
  const CtrCurve ctr({1.0, 0.5});
  CHECK_THAT(auction_revenue(ctr, {5.0, 4.0}), WithinAbs(7.0, 1e-12));
  CHECK_THAT(auction_revenue(ctr, {4.2, 4.0}), WithinAbs(6.2, 1e-12));
  CHECK(auction_revenue(ctr, {0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(auction_revenue(ctr, {1.0}), ValidationError);

  CHECK_THAT(revenue_closed_form(ctr, {10.0, 6.0, 4.0}), WithinAbs(7.0, 1e-12));
  CHECK_THAT(revenue_closed_form(ctr, {10.0, 4.4, 4.0, 3.0}), WithinAbs(6.2, 1e-12));
  CHECK(revenue_closed_form(ctr, {5.0}) == 0.0);
}

TEST_CASE("slot payoff") {
  CHECK(slot_payoff(10.0, 1.0, 5.0) == 5.0);
  CHECK(slot_payoff(10.0, 0.0, 123.0) == 0.0);
  CHECK(slot_payoff(4.0, 0.5, 4.0) == 0.0);
  CHECK(slot_payoff(3.0, 0.5, 4.0) < 0.0);  // out-of-equilibrium probe
}

TEST_CASE("verifier accepts the recursion and rejects a broken ladder") {
  const CtrCurve ctr({1.0, 0.5});
  const std::vector<double> scores{10.0, 6.0, 4.0};
  CHECK(verify_sne(ctr, scores, sne_price_scores(ctr, scores)).ok());

  // Non-monotone prices: the slot-2 occupant would rather hold slot 1.
  const auto verdict = verify_sne(ctr, scores, {3.0, 4.0});
  REQUIRE_FALSE(verdict.ok());
  CHECK(verdict.violation->position == 2);
  CHECK(verdict.violation->alt_slot == 1);

  CHECK(verify_sne(CtrCurve({1.0}), {7.0}, {0.0}).ok());
  CHECK_THROWS_AS(verify_sne(ctr, scores, {1.0}), ValidationError);
}

TEST_CASE("verifier agrees with brute-force deviation enumeration") {
  Rng rng(0xabcdef12345ULL);
  int rejected = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    auto [ctr, scores] = random_tier(rng);
    auto prices = sne_price_scores(ctr, scores);
    // Half the trials keep the equilibrium, half perturb it.
    if (trial % 2 == 1 && !prices.empty()) {
      const std::size_t k = static_cast<std::size_t>(
          rng.uniform_int(0, prices.size() - 1));
      prices[k] = std::max(0.0, prices[k] + rng.uniform(-3.0, 3.0));
      std::sort(prices.begin(), prices.end(), std::greater<>());  // keep monotone shape
    }
    const auto verdict = verify_sne(ctr, scores, prices, 1e-9);
    const auto oracle =
        testing::brute_force_sne_violation(ctr.gammas(), scores, prices, 1e-9);
    CAPTURE(trial);
    REQUIRE(verdict.ok() == !oracle.has_value());
    if (!verdict.ok()) {
      ++rejected;
      CHECK(verdict.violation->position == oracle->first);
      CHECK(verdict.violation->alt_slot == oracle->second);
    }
  }
  CHECK(rejected > 100);  // the perturbations must actually bite
}

TEST_CASE("recursion output satisfies equilibrium on a thousand random tiers") {
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [ctr, scores] = random_tier(rng);
    const auto prices = sne_price_scores(ctr, scores);
    CAPTURE(trial);
    REQUIRE(verify_sne(ctr, scores, prices, 1e-9).ok());
  }
}

TEST_CASE("price ladder properties") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [ctr, scores] = random_tier(rng);
    const auto prices = sne_price_scores(ctr, scores);
    CAPTURE(trial);
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) {
      REQUIRE(prices[i] >= prices[i + 1] - 1e-12);
    }
    for (std::size_t i = 0; i < prices.size(); ++i) {
      REQUIRE(prices[i] >= 0.0);
      const double next_score = i + 1 < scores.size() ? scores[i + 1] : 0.0;
      REQUIRE(prices[i] <= next_score + 1e-9 * (1.0 + next_score));
    }

    const double revenue = auction_revenue(ctr, prices);
    const double closed = revenue_closed_form(ctr, scores);
    REQUIRE_THAT(revenue, WithinAbs(closed, 1e-9 * (1.0 + std::abs(closed))));
  }
}

TEST_CASE("prices and revenue scale with the scores") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto [ctr, scores] = random_tier(rng);
    const double c = rng.uniform(0.1, 5.0);
    std::vector<double> scaled = scores;
    for (auto& s : scaled) s *= c;
    const auto base = sne_price_scores(ctr, scores);
    const auto big = sne_price_scores(ctr, scaled);
    CAPTURE(trial, c);
    for (std::size_t i = 0; i < base.size(); ++i) {
      REQUIRE_THAT(big[i], WithinAbs(c * base[i], 1e-9 * (1.0 + c * base[i])));
    }
    const double r1 = auction_revenue(ctr, base);
    const double r2 = auction_revenue(ctr, big);
    REQUIRE_THAT(r2, WithinAbs(c * r1, 1e-9 * (1.0 + std::abs(c * r1))));
  }
}

TEST_CASE("outcome builder derives prices and bids") {
  const CtrCurve ctr({1.0, 0.5});
  Ranking ranking = rank_by_score({{"A", 10.0}, {"B", 6.0}, {"C", 4.0}});
  auto relevance = [](const AgentId& id) { return id == "A" ? 0.5 : 1.0; };
  auto value = [&](const AgentId& id) {
    return id == "A" ? 20.0 : (id == "B" ? 6.0 : 4.0);
  };
  const SneOutcome out = build_sne_outcome(ctr, std::move(ranking), relevance, value);
  REQUIRE(out.price_scores.size() == 2);
  CHECK_THAT(out.per_click_prices[0], WithinAbs(10.0, 1e-12));  // r_2 / e_A = 5 / 0.5
  CHECK_THAT(out.per_click_prices[1], WithinAbs(4.0, 1e-12));
  REQUIRE(out.derived_bids.size() == 3);
  CHECK(out.derived_bids[0] == 20.0);                        // top bid = value
  CHECK_THAT(out.derived_bids[1], WithinAbs(5.0, 1e-12));    // r_2 / e_B
  CHECK_THAT(out.derived_bids[2], WithinAbs(4.0, 1e-12));    // r_3 / e_C
  CHECK(out.price_score(2) == out.price_scores[0]);
  CHECK(out.price_score(4) == 0.0);
}
