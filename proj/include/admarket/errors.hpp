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

#ifndef ADMARKET_ERRORS_HPP
#define ADMARKET_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace admarket {

// Machine-readable reasons for rejecting an input. Every semantic
// validation failure maps to exactly one code so callers (and tests)
// can distinguish them without parsing messages.
enum class Errc {
  empty_gammas,
  gammas_not_decreasing,
  gamma_out_of_range,
  duplicate_agent_id,
  empty_agent_id,
  no_advertisers,
  negative_valuation,
  relevance_out_of_range,
  alpha_nonpositive,
  fitness_exceeds_ctr,        // f * gamma_1 >= 1
  secondary_slots_out_of_range,
  negative_score,
  unsorted_scores,
  length_mismatch,
  slot_out_of_range,
  agent_not_found,
  mediator_required,
  mediator_not_allowed,
  nonfinite_number,
  syntax_error,
  unknown_schema_version,
  missing_field,
  wrong_field_type,
  unknown_field,
  invalid_params,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::empty_gammas: return "empty_gammas";
    case Errc::gammas_not_decreasing: return "gammas_not_decreasing";
    case Errc::gamma_out_of_range: return "gamma_out_of_range";
    case Errc::duplicate_agent_id: return "duplicate_agent_id";
    case Errc::empty_agent_id: return "empty_agent_id";
    case Errc::no_advertisers: return "no_advertisers";
    case Errc::negative_valuation: return "negative_valuation";
    case Errc::relevance_out_of_range: return "relevance_out_of_range";
    case Errc::alpha_nonpositive: return "alpha_nonpositive";
    case Errc::fitness_exceeds_ctr: return "fitness_exceeds_ctr";
    case Errc::secondary_slots_out_of_range: return "secondary_slots_out_of_range";
    case Errc::negative_score: return "negative_score";
    case Errc::unsorted_scores: return "unsorted_scores";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::slot_out_of_range: return "slot_out_of_range";
    case Errc::agent_not_found: return "agent_not_found";
    case Errc::mediator_required: return "mediator_required";
    case Errc::mediator_not_allowed: return "mediator_not_allowed";
    case Errc::nonfinite_number: return "nonfinite_number";
    case Errc::syntax_error: return "syntax_error";
    case Errc::unknown_schema_version: return "unknown_schema_version";
    case Errc::missing_field: return "missing_field";
    case Errc::wrong_field_type: return "wrong_field_type";
    case Errc::unknown_field: return "unknown_field";
    case Errc::invalid_params: return "invalid_params";
  }
  return "unknown";
}

// Rejected input: bad scenario data, malformed documents, misuse of an
// operation's preconditions. CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(Errc code, std::string message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + std::move(message)),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// A computed result failed one of the engine's internal cross-checks
// (dual-form agreement, equilibrium dominance, conservation). This is
// never caused by bad input; it signals a defect. CLI maps these to
// exit code 2.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(std::string message)
      : std::runtime_error(std::move(message)) {}
};

}  // namespace admarket

#endif  // ADMARKET_ERRORS_HPP
