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

#ifndef ADMARKET_AGENTS_HPP
#define ADMARKET_AGENTS_HPP

#include <cmath>
#include <cstddef>
#include <string>

#include "admarket/errors.hpp"

namespace admarket {

using AgentId = std::string;

namespace detail {

inline void check_valuation(double v, const AgentId& id, const char* field) {
  if (!std::isfinite(v)) {
    throw ValidationError(Errc::nonfinite_number,
                          "agent '" + id + "': " + field + " is not finite");
  }
  if (v < 0.0) {
    throw ValidationError(Errc::negative_valuation,
                          "agent '" + id + "': " + field + " < 0");
  }
}

inline void check_relevance(double e, const AgentId& id, const char* field) {
  if (!std::isfinite(e)) {
    throw ValidationError(Errc::nonfinite_number,
                          "agent '" + id + "': " + field + " is not finite");
  }
  if (e <= 0.0 || e > 1.0) {
    throw ValidationError(Errc::relevance_out_of_range,
                          "agent '" + id + "': " + field + " outside (0, 1]");
  }
}

}  // namespace detail

/// One advertiser's per-click valuations and relevances for the primary
/// auction and the mediator's secondary auction. A zero valuation in a
/// tier means the advertiser sits that tier out.
struct AdvertiserProfile {
  AgentId id;
  double v_p = 0.0;  // per-click value, primary tier
  double e_p = 1.0;  // relevance, primary tier
  double v_s = 0.0;  // per-click value, secondary tier
  double e_s = 1.0;  // relevance, secondary tier

  AdvertiserProfile(AgentId agent_id, double vp, double ep, double vs = 0.0,
                    double es = 1.0)
      : id(std::move(agent_id)), v_p(vp), e_p(ep), v_s(vs), e_s(es) {
    if (id.empty()) throw ValidationError(Errc::empty_agent_id, "advertiser id empty");
    detail::check_valuation(v_p, id, "v_p");
    detail::check_relevance(e_p, id, "e_p");
    detail::check_valuation(v_s, id, "v_s");
    detail::check_relevance(e_s, id, "e_s");
  }

  double score_p() const { return v_p * e_p; }
  double score_s() const { return v_s * e_s; }
  bool in_p_auction() const { return v_p > 0.0; }
  bool in_s_auction() const { return v_s > 0.0; }

  friend bool operator==(const AdvertiserProfile&, const AdvertiserProfile&) = default;
};

/// The reseller. Her quality is the fitness f = relevance_p * alpha; the
/// effective CTR of her secondary slots scales by f, so f * gamma_1 must
/// stay below 1 (a probability). She derives no value of her own from
/// secondary slots and never bids in her own sub-auction.
struct MediatorProfile {
  AgentId id;
  double relevance_p = 1.0;       // e_M
  double alpha = 1.0;             // position-CTR amplification
  std::size_t num_secondary_slots = 1;  // L

  MediatorProfile(AgentId agent_id, double relevance, double amplification,
                  std::size_t secondary_slots)
      : id(std::move(agent_id)),
        relevance_p(relevance),
        alpha(amplification),
        num_secondary_slots(secondary_slots) {
    if (id.empty()) throw ValidationError(Errc::empty_agent_id, "mediator id empty");
    detail::check_relevance(relevance_p, id, "relevance_p");
    if (!std::isfinite(alpha)) {
      throw ValidationError(Errc::nonfinite_number, "mediator '" + id + "': alpha not finite");
    }
    if (alpha <= 0.0) {
      throw ValidationError(Errc::alpha_nonpositive, "mediator '" + id + "': alpha <= 0");
    }
    if (num_secondary_slots == 0) {
      throw ValidationError(Errc::secondary_slots_out_of_range,
                            "mediator '" + id + "': needs at least one secondary slot");
    }
  }

  // f = e_M * alpha; may exceed 1 on its own, but f * gamma_1 < 1.
  double fitness() const { return relevance_p * alpha; }

  // Same mediator retuned to a target fitness (relevance held fixed).
  MediatorProfile with_fitness(double f) const {
    if (!std::isfinite(f) || f <= 0.0) {
      throw ValidationError(Errc::invalid_params, "fitness must be positive");
    }
    return MediatorProfile(id, relevance_p, f / relevance_p, num_secondary_slots);
  }

  friend bool operator==(const MediatorProfile&, const MediatorProfile&) = default;
};

}  // namespace admarket

#endif  // ADMARKET_AGENTS_HPP
