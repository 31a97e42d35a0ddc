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

#ifndef ADMARKET_SCENARIO_HPP
#define ADMARKET_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "admarket/agents.hpp"
#include "admarket/ctr_curve.hpp"
#include "admarket/errors.hpp"

namespace admarket {

/// Knobs for the seeded scenario generator. Distributions: valuations
/// uniform on [0,10], relevances uniform on [0.1,1], CTR curves geometric
/// with ratio uniform on [0.3,0.9], mediator fitness resampled until
/// f * gamma_1 < 1.
struct GeneratorParams {
  std::uint64_t max_advertisers = 50;
  std::uint64_t max_slots = 10;
  double p_participation = 0.8;  // chance an advertiser enters the primary tier
  double s_participation = 0.8;  // chance an advertiser enters the secondary tier
  bool with_mediator = true;
  // Forces L = K and secondary scores ordered like the baseline primary
  // ranking, the regime where per-advertiser fitness thresholds exist.
  bool extreme_case = false;

  void validate() const {
    if (max_advertisers < 1) {
      throw ValidationError(Errc::invalid_params, "max_advertisers must be >= 1");
    }
    if (max_slots < 1) {
      throw ValidationError(Errc::invalid_params, "max_slots must be >= 1");
    }
    if (p_participation < 0.0 || p_participation > 1.0 || s_participation < 0.0 ||
        s_participation > 1.0) {
      throw ValidationError(Errc::invalid_params, "participation rates must be in [0,1]");
    }
    if (extreme_case && !with_mediator) {
      throw ValidationError(Errc::invalid_params, "extreme_case requires a mediator");
    }
  }

  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

/// Provenance of a generated scenario: enough to regenerate it exactly.
struct GeneratorStamp {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  GeneratorParams params;

  friend bool operator==(const GeneratorStamp&, const GeneratorStamp&) = default;
};

/// A complete market instance: slot curve, advertisers, and optionally a
/// mediator. All cross-field constraints are enforced on construction,
/// so a MarketScenario in hand is always runnable.
class MarketScenario {
 public:
  MarketScenario(CtrCurve ctr, std::vector<AdvertiserProfile> advertisers,
                 std::optional<MediatorProfile> mediator = std::nullopt,
                 std::optional<GeneratorStamp> provenance = std::nullopt)
      : ctr_(std::move(ctr)),
        advertisers_(std::move(advertisers)),
        mediator_(std::move(mediator)),
        provenance_(std::move(provenance)) {
    if (advertisers_.empty()) {
      throw ValidationError(Errc::no_advertisers, "scenario needs at least one advertiser");
    }
    std::unordered_set<AgentId> seen;
    for (const auto& a : advertisers_) {
      if (!seen.insert(a.id).second) {
        throw ValidationError(Errc::duplicate_agent_id, "duplicate agent id '" + a.id + "'");
      }
    }
    if (mediator_) {
      if (!seen.insert(mediator_->id).second) {
        throw ValidationError(Errc::duplicate_agent_id,
                              "mediator id '" + mediator_->id + "' collides with an advertiser");
      }
      if (mediator_->num_secondary_slots > ctr_.slots()) {
        throw ValidationError(Errc::secondary_slots_out_of_range,
                              "mediator forks " + std::to_string(mediator_->num_secondary_slots) +
                                  " slots but the curve has " + std::to_string(ctr_.slots()));
      }
      // f * gamma_1 is the chance a secondary ad is noticed at all; it
      // must stay a probability, strictly.
      if (mediator_->fitness() * ctr_.gamma(1) >= 1.0) {
        throw ValidationError(Errc::fitness_exceeds_ctr,
                              "mediator fitness " + std::to_string(mediator_->fitness()) +
                                  " * gamma_1 >= 1");
      }
    }
  }

  const CtrCurve& ctr() const { return ctr_; }
  const std::vector<AdvertiserProfile>& advertisers() const { return advertisers_; }
  const std::optional<MediatorProfile>& mediator() const { return mediator_; }
  const std::optional<GeneratorStamp>& provenance() const { return provenance_; }

  const AdvertiserProfile* find_advertiser(const AgentId& id) const {
    for (const auto& a : advertisers_) {
      if (a.id == id) return &a;
    }
    return nullptr;
  }

  // Same market with the mediator retuned to fitness `f`.
  MarketScenario with_fitness(double f) const {
    if (!mediator_) {
      throw ValidationError(Errc::mediator_required, "scenario has no mediator to retune");
    }
    return MarketScenario(ctr_, advertisers_, mediator_->with_fitness(f), provenance_);
  }

  friend bool operator==(const MarketScenario& a, const MarketScenario& b) {
    return a.ctr_ == b.ctr_ && a.advertisers_ == b.advertisers_ &&
           a.mediator_ == b.mediator_ && a.provenance_ == b.provenance_;
  }

 private:
  CtrCurve ctr_;
  std::vector<AdvertiserProfile> advertisers_;
  std::optional<MediatorProfile> mediator_;
  std::optional<GeneratorStamp> provenance_;
};

}  // namespace admarket

#endif  // ADMARKET_SCENARIO_HPP
