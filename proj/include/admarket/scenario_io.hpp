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

#ifndef ADMARKET_SCENARIO_IO_HPP
#define ADMARKET_SCENARIO_IO_HPP

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "admarket/market_analysis.hpp"
#include "admarket/numeric.hpp"
#include "admarket/random.hpp"
#include "admarket/scenario.hpp"

namespace admarket {

// Scenario documents are JSON with a pinned key order and a version
// gate. Doubles round-trip exactly (shortest-representation encoding),
// so parse(serialize(s)) == s bit for bit.
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

namespace io_detail {

inline void expect_object(const Json& node, const std::string& path) {
  if (!node.is_object()) {
    throw ValidationError(Errc::wrong_field_type, path + " must be an object");
  }
}

inline void reject_unknown_keys(const Json& obj, const std::string& path,
                                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError(Errc::unknown_field, path + ": unknown field '" + key + "'");
    }
  }
}

inline const Json& require(const Json& obj, const std::string& path, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(Errc::missing_field, path + ": missing '" + std::string(key) + "'");
  }
  return *it;
}

inline double as_number(const Json& node, const std::string& path) {
  if (!node.is_number()) {
    throw ValidationError(Errc::wrong_field_type, path + " must be a number");
  }
  return node.get<double>();
}

inline std::uint64_t as_uint(const Json& node, const std::string& path) {
  if (!node.is_number_unsigned() && !(node.is_number_integer() && node.get<std::int64_t>() >= 0)) {
    throw ValidationError(Errc::wrong_field_type, path + " must be a non-negative integer");
  }
  return node.get<std::uint64_t>();
}

inline std::string as_string(const Json& node, const std::string& path) {
  if (!node.is_string()) {
    throw ValidationError(Errc::wrong_field_type, path + " must be a string");
  }
  return node.get<std::string>();
}

inline bool as_bool(const Json& node, const std::string& path) {
  if (!node.is_boolean()) {
    throw ValidationError(Errc::wrong_field_type, path + " must be a boolean");
  }
  return node.get<bool>();
}

inline double field_number(const Json& obj, const std::string& path, std::string_view key,
                           double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, path + "." + std::string(key));
}

inline Json params_to_json(const GeneratorParams& p) {
  Json j;
  j["max_advertisers"] = p.max_advertisers;
  j["max_slots"] = p.max_slots;
  j["p_participation"] = p.p_participation;
  j["s_participation"] = p.s_participation;
  j["with_mediator"] = p.with_mediator;
  j["extreme_case"] = p.extreme_case;
  return j;
}

inline GeneratorParams params_from_json(const Json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown_keys(j, path,
                      {"max_advertisers", "max_slots", "p_participation", "s_participation",
                       "with_mediator", "extreme_case"});
  GeneratorParams p;
  p.max_advertisers = as_uint(require(j, path, "max_advertisers"), path + ".max_advertisers");
  p.max_slots = as_uint(require(j, path, "max_slots"), path + ".max_slots");
  p.p_participation = as_number(require(j, path, "p_participation"), path + ".p_participation");
  p.s_participation = as_number(require(j, path, "s_participation"), path + ".s_participation");
  p.with_mediator = as_bool(require(j, path, "with_mediator"), path + ".with_mediator");
  p.extreme_case = as_bool(require(j, path, "extreme_case"), path + ".extreme_case");
  p.validate();
  return p;
}

}  // namespace io_detail

inline Json scenario_to_json(const MarketScenario& scenario) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["ctr"] = Json{{"gammas", scenario.ctr().gammas()}};
  Json agents = Json::array();
  for (const auto& a : scenario.advertisers()) {
    Json row;
    row["id"] = a.id;
    row["v_p"] = a.v_p;
    row["e_p"] = a.e_p;
    row["v_s"] = a.v_s;
    row["e_s"] = a.e_s;
    agents.push_back(std::move(row));
  }
  doc["advertisers"] = std::move(agents);
  if (scenario.mediator()) {
    const auto& m = *scenario.mediator();
    Json row;
    row["id"] = m.id;
    row["relevance_p"] = m.relevance_p;
    row["alpha"] = m.alpha;
    row["secondary_slots"] = m.num_secondary_slots;
    doc["mediator"] = std::move(row);
  }
  if (scenario.provenance()) {
    const auto& g = *scenario.provenance();
    Json row;
    row["seed"] = g.seed;
    row["index"] = g.index;
    row["params"] = io_detail::params_to_json(g.params);
    doc["generator"] = std::move(row);
  }
  return doc;
}

inline MarketScenario scenario_from_json(const Json& doc) {
  using namespace io_detail;
  expect_object(doc, "document");
  reject_unknown_keys(doc, "document",
                      {"schema_version", "ctr", "advertisers", "mediator", "generator"});

  const Json& version = require(doc, "document", "schema_version");
  if (!version.is_number_integer() || version.get<std::int64_t>() != kSchemaVersion) {
    throw ValidationError(Errc::unknown_schema_version,
                          "expected schema_version " + std::to_string(kSchemaVersion));
  }

  const Json& ctr_node = require(doc, "document", "ctr");
  expect_object(ctr_node, "ctr");
  reject_unknown_keys(ctr_node, "ctr", {"gammas"});
  const Json& gammas_node = require(ctr_node, "ctr", "gammas");
  if (!gammas_node.is_array()) {
    throw ValidationError(Errc::wrong_field_type, "ctr.gammas must be an array");
  }
  std::vector<double> gammas;
  gammas.reserve(gammas_node.size());
  for (std::size_t i = 0; i < gammas_node.size(); ++i) {
    gammas.push_back(as_number(gammas_node[i], "ctr.gammas[" + std::to_string(i) + "]"));
  }
  CtrCurve ctr(std::move(gammas));

  const Json& agents_node = require(doc, "document", "advertisers");
  if (!agents_node.is_array()) {
    throw ValidationError(Errc::wrong_field_type, "advertisers must be an array");
  }
  std::vector<AdvertiserProfile> advertisers;
  advertisers.reserve(agents_node.size());
  for (std::size_t i = 0; i < agents_node.size(); ++i) {
    const Json& row = agents_node[i];
    const std::string path = "advertisers[" + std::to_string(i) + "]";
    expect_object(row, path);
    reject_unknown_keys(row, path, {"id", "v_p", "e_p", "v_s", "e_s"});
    advertisers.emplace_back(as_string(require(row, path, "id"), path + ".id"),
                             field_number(row, path, "v_p", 0.0),
                             field_number(row, path, "e_p", 1.0),
                             field_number(row, path, "v_s", 0.0),
                             field_number(row, path, "e_s", 1.0));
  }

  std::optional<MediatorProfile> mediator;
  if (auto it = doc.find("mediator"); it != doc.end()) {
    const Json& row = *it;
    expect_object(row, "mediator");
    reject_unknown_keys(row, "mediator", {"id", "relevance_p", "alpha", "secondary_slots"});
    mediator.emplace(
        as_string(require(row, "mediator", "id"), "mediator.id"),
        as_number(require(row, "mediator", "relevance_p"), "mediator.relevance_p"),
        as_number(require(row, "mediator", "alpha"), "mediator.alpha"),
        static_cast<std::size_t>(
            as_uint(require(row, "mediator", "secondary_slots"), "mediator.secondary_slots")));
  }

  std::optional<GeneratorStamp> stamp;
  if (auto it = doc.find("generator"); it != doc.end()) {
    const Json& row = *it;
    expect_object(row, "generator");
    reject_unknown_keys(row, "generator", {"seed", "index", "params"});
    GeneratorStamp g;
    g.seed = as_uint(require(row, "generator", "seed"), "generator.seed");
    g.index = as_uint(require(row, "generator", "index"), "generator.index");
    g.params = params_from_json(require(row, "generator", "params"), "generator.params");
    stamp = std::move(g);
  }

  return MarketScenario(std::move(ctr), std::move(advertisers), std::move(mediator),
                        std::move(stamp));
}

/// Serializes to the canonical form: fixed key order, shortest
/// round-trip numbers, newline-terminated. `pretty` switches between an
/// indented file shape and the one-line stream shape.
inline std::string serialize_scenario(const MarketScenario& scenario, bool pretty = true) {
  return scenario_to_json(scenario).dump(pretty ? 2 : -1) + "\n";
}

inline MarketScenario parse_scenario(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(Errc::syntax_error, e.what());
  }
  return scenario_from_json(doc);
}

/// Deterministic scenario stream: element `index` depends only on
/// (seed, index, params), so prefixes of longer streams match shorter
/// ones and campaigns can be replayed per element.
class ScenarioGenerator {
 public:
  ScenarioGenerator(std::uint64_t seed, GeneratorParams params = {})
      : seed_(seed), params_(std::move(params)) {
    params_.validate();
  }

  MarketScenario at(std::uint64_t index) const {
    Rng rng(child_seed(seed_, index));

    const std::size_t num_slots =
        static_cast<std::size_t>(rng.uniform_int(1, params_.max_slots));
    const double gamma_1 = rng.uniform(0.5, 1.0);
    const double ratio = rng.uniform(0.3, 0.9);
    std::vector<double> gammas(num_slots);
    double g = gamma_1;
    for (std::size_t j = 0; j < num_slots; ++j, g *= ratio) gammas[j] = g;
    CtrCurve ctr(std::move(gammas));

    const std::size_t num_advertisers =
        static_cast<std::size_t>(rng.uniform_int(1, params_.max_advertisers));
    std::vector<AdvertiserProfile> advertisers;
    advertisers.reserve(num_advertisers);
    for (std::size_t i = 0; i < num_advertisers; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "a%03zu", i + 1);
      if (params_.extreme_case) {
        // Everyone bids both tiers; secondary scores are assigned below.
        advertisers.emplace_back(buf, rng.uniform(0.1, 10.0), rng.uniform(0.1, 1.0), 1.0, 1.0);
      } else {
        const double v_p = rng.bernoulli(params_.p_participation) ? rng.uniform(0.0, 10.0) : 0.0;
        const double e_p = rng.uniform(0.1, 1.0);
        const double v_s = rng.bernoulli(params_.s_participation) ? rng.uniform(0.0, 10.0) : 0.0;
        const double e_s = rng.uniform(0.1, 1.0);
        advertisers.emplace_back(buf, v_p, e_p, v_s, e_s);
      }
    }

    if (params_.extreme_case) {
      // Secondary demand must rank exactly like the primary demand: give
      // the k-th strongest primary bidder the k-th largest secondary
      // score (relevance 1, so score == valuation).
      std::vector<double> s_scores(num_advertisers);
      for (auto& s : s_scores) s = rng.uniform(0.1, 10.0);
      std::sort(s_scores.begin(), s_scores.end(), std::greater<>());
      std::vector<Ranking::Entry> entries;
      entries.reserve(num_advertisers);
      for (const auto& a : advertisers) entries.push_back({a.id, a.score_p()});
      const Ranking by_p = rank_by_score(std::move(entries));
      for (std::size_t j = 1; j <= by_p.size(); ++j) {
        for (auto& a : advertisers) {
          if (a.id == by_p.agent_at(j)) {
            a.v_s = s_scores[j - 1];
            break;
          }
        }
      }
    }

    std::optional<MediatorProfile> mediator;
    if (params_.with_mediator) {
      const std::size_t num_s_slots =
          params_.extreme_case ? ctr.slots()
                               : static_cast<std::size_t>(rng.uniform_int(1, ctr.slots()));
      const double relevance = rng.uniform(0.1, 1.0);
      double alpha, fitness;
      do {
        alpha = rng.uniform(0.05, 2.0) / relevance;
        fitness = relevance * alpha;
      } while (fitness * ctr.gamma(1) >= 1.0 - 1e-12);
      mediator.emplace("m", relevance, alpha, num_s_slots);
    }

    return MarketScenario(std::move(ctr), std::move(advertisers), std::move(mediator),
                          GeneratorStamp{seed_, index, params_});
  }

  const GeneratorParams& params() const { return params_; }

 private:
  std::uint64_t seed_;
  GeneratorParams params_;
};

inline std::vector<MarketScenario> generate_scenarios(std::uint64_t seed, std::uint64_t count,
                                                      const GeneratorParams& params = {}) {
  if (count < 1) {
    throw ValidationError(Errc::invalid_params, "count must be >= 1");
  }
  ScenarioGenerator gen(seed, params);
  std::vector<MarketScenario> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(gen.at(i));
  return out;
}

enum class ReportFormat { table, structured };

inline ReportFormat report_format_from_string(const std::string& name) {
  if (name == "table") return ReportFormat::table;
  if (name == "structured") return ReportFormat::structured;
  throw ValidationError(Errc::invalid_params, "unknown format '" + name + "'");
}

namespace io_detail {

inline std::string slot_cell(const std::optional<std::size_t>& slot) {
  return slot ? std::to_string(*slot) : "-";
}

inline Json payoffs_to_json(const std::map<AgentId, AgentPayoff>& payoffs) {
  Json j;
  for (const auto& [id, u] : payoffs) {
    Json row;
    row["p_slot"] = u.p_slot ? Json(*u.p_slot) : Json(nullptr);
    row["s_slot"] = u.s_slot ? Json(*u.s_slot) : Json(nullptr);
    row["p_payoff"] = u.p_payoff;
    row["s_payoff"] = u.s_payoff;
    row["total"] = u.total();
    j[id] = std::move(row);
  }
  return j;
}

inline Json tier_to_json(const SneOutcome& tier) {
  Json j;
  Json ranking = Json::array();
  for (const auto& e : tier.ranking.entries()) {
    ranking.push_back(Json{{"id", e.id}, {"score", e.score}});
  }
  j["ranking"] = std::move(ranking);
  j["price_scores"] = tier.price_scores;
  j["per_click_prices"] = tier.per_click_prices;
  j["derived_bids"] = tier.derived_bids;
  return j;
}

inline Json dual_to_json(const DualValue& d) {
  return Json{{"direct", d.direct}, {"closed_form", d.closed_form}};
}

inline std::string threshold_cell(const ThresholdResult& t) {
  switch (t.kind) {
    case ThresholdResult::Kind::value: return format_number(t.value);
    case ThresholdResult::Kind::undefined: return "undefined";
    case ThresholdResult::Kind::inapplicable: return "";
  }
  return "";
}

inline Json threshold_to_json(const ThresholdResult& t) {
  Json j;
  switch (t.kind) {
    case ThresholdResult::Kind::value:
      j["kind"] = "value";
      j["value"] = t.value;
      j["regime_slot"] = t.regime_slot;
      j["interior_crossing"] = t.interior_crossing;
      break;
    case ThresholdResult::Kind::undefined:
      j["kind"] = "undefined";
      break;
    case ThresholdResult::Kind::inapplicable:
      j["kind"] = "inapplicable";
      break;
  }
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

}  // namespace io_detail

/// Comma-separated report: one row per advertiser, then a key,value
/// summary table. Numbers carry 12 significant digits.
inline std::string write_report_table(const ComparisonReport& report) {
  std::ostringstream out;
  out << "id,baseline_slot,new_slot,u0,u,delta,u_s,min_fitness\n";
  for (const auto& a : report.scenario.advertisers()) {
    const AgentPayoff& before = report.baseline.payoffs.at(a.id);
    const AgentPayoff& after = report.with_mediator.payoffs.at(a.id);
    out << a.id << ',' << io_detail::slot_cell(before.p_slot) << ','
        << io_detail::slot_cell(after.p_slot) << ',' << format_number(before.total()) << ','
        << format_number(after.total()) << ','
        << format_number(report.payoff_deltas.at(a.id).direct) << ','
        << format_number(after.s_payoff) << ',';
    if (auto it = report.fitness_thresholds.find(a.id); it != report.fitness_thresholds.end()) {
      out << io_detail::threshold_cell(it->second);
    }
    out << '\n';
  }
  out << '\n';
  out << "key,value\n";
  out << "R," << format_number(report.with_mediator.revenue) << '\n';
  out << "R0," << format_number(report.baseline.revenue) << '\n';
  out << "E," << format_number(report.with_mediator.efficiency) << '\n';
  out << "E0," << format_number(report.baseline.efficiency) << '\n';
  out << "u_M," << format_number(report.with_mediator.mediator_utility) << '\n';
  out << "s_M_p," << format_number(report.with_mediator.s_m_p) << '\n';
  out << "l,"
      << (report.with_mediator.mediator_won ? std::to_string(report.with_mediator.slot) : "lost")
      << '\n';
  out << "revenue_delta," << format_number(report.revenue_change.direct) << '\n';
  out << "efficiency_delta," << format_number(report.efficiency_change.direct) << '\n';
  out << "accounting_residual," << format_number(report.accounting_residual) << '\n';
  return std::move(out).str();
}

/// Full nested report as JSON.
inline std::string write_report_structured(const ComparisonReport& report) {
  using namespace io_detail;
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["scenario"] = scenario_to_json(report.scenario);

  Json base = tier_to_json(report.baseline.p);
  base["revenue"] = report.baseline.revenue;
  base["efficiency"] = report.baseline.efficiency;
  base["payoffs"] = payoffs_to_json(report.baseline.payoffs);
  doc["baseline"] = std::move(base);

  Json with = tier_to_json(report.with_mediator.p);
  with["mediator_rank"] = report.with_mediator.mediator_rank
                              ? Json(*report.with_mediator.mediator_rank)
                              : Json(nullptr);
  with["mediator_won"] = report.with_mediator.mediator_won;
  with["slot"] = report.with_mediator.mediator_won ? Json(report.with_mediator.slot) : Json(nullptr);
  with["s_m_p"] = report.with_mediator.s_m_p;
  with["mediator_utility"] = report.with_mediator.mediator_utility;
  with["s_auction"] =
      report.with_mediator.s ? tier_to_json(*report.with_mediator.s) : Json(nullptr);
  with["revenue"] = report.with_mediator.revenue;
  with["efficiency"] = report.with_mediator.efficiency;
  with["payoffs"] = payoffs_to_json(report.with_mediator.payoffs);
  doc["with_mediator"] = std::move(with);

  Json deltas;
  deltas["revenue"] = dual_to_json(report.revenue_change);
  deltas["efficiency"] = dual_to_json(report.efficiency_change);
  Json per_agent;
  for (const auto& [id, d] : report.payoff_deltas) per_agent[id] = dual_to_json(d);
  deltas["payoffs"] = std::move(per_agent);
  doc["deltas"] = std::move(deltas);

  Json thresholds;
  for (const auto& [id, t] : report.fitness_thresholds) thresholds[id] = threshold_to_json(t);
  doc["fitness_thresholds"] = std::move(thresholds);

  doc["accounting_residual"] = report.accounting_residual;
  doc["baseline_accounting_residual"] = report.baseline_accounting_residual;
  return doc.dump(2) + "\n";
}

inline std::string write_report(const ComparisonReport& report, ReportFormat format) {
  return format == ReportFormat::table ? write_report_table(report)
                                       : write_report_structured(report);
}

}  // namespace admarket

#endif  // ADMARKET_SCENARIO_IO_HPP
