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

#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "admarket/scenario_io.hpp"
#include "support/oracles.hpp"

using namespace admarket;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

Errc parse_code(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.code();
  }
  FAIL("expected a ValidationError");
  return Errc::invalid_params;
}

}  // namespace

TEST_CASE("golden scenario file parses to the worked market") {
  const MarketScenario sc =
      parse_scenario(read_file(std::string(ADMARKET_SCENARIO_DIR) + "/worked_example.json"));
  CHECK(sc == testing::worked_scenario());
  CHECK(sc.ctr().slots() == 2);
  CHECK(sc.advertisers().size() == 6);
  REQUIRE(sc.mediator().has_value());
  CHECK(sc.mediator()->fitness() == 0.8);
  CHECK(sc.mediator()->num_secondary_slots == 2);
}

TEST_CASE("documents without a mediator are baseline-only") {
  const MarketScenario sc =
      parse_scenario(read_file(std::string(ADMARKET_SCENARIO_DIR) + "/baseline_only.json"));
  CHECK_FALSE(sc.mediator().has_value());
  CHECK(sc.advertisers().size() == 3);
}

TEST_CASE("each rejection carries its own error code") {
  CHECK(parse_code("{nope") == Errc::syntax_error);
  CHECK(parse_code(R"({"schema_version": 99, "ctr": {"gammas": [1.0]}, "advertisers": []})") ==
        Errc::unknown_schema_version);
  CHECK(parse_code(R"({"ctr": {"gammas": [1.0]}, "advertisers": []})") == Errc::missing_field);
  CHECK(parse_code(
            R"({"schema_version": 1, "ctr": {"gammas": [0.5, 0.5]}, "advertisers": [{"id": "a", "v_p": 1.0}]})") ==
        Errc::gammas_not_decreasing);
  CHECK(parse_code(
            R"({"schema_version": 1, "ctr": {"gammas": [1.0]}, "advertisers": [{"id": "a", "v_p": "x"}]})") ==
        Errc::wrong_field_type);
  CHECK(parse_code(
            R"({"schema_version": 1, "ctr": {"gammas": [1.0]}, "advertisers": [{"id": "a", "oops": 1}]})") ==
        Errc::unknown_field);
  CHECK(parse_code(
            R"({"schema_version": 1, "ctr": {"gammas": [1.0]}, "advertisers": [{"id": "a"}, {"id": "a"}]})") ==
        Errc::duplicate_agent_id);
  CHECK(parse_code(
            R"({"schema_version": 1, "ctr": {"gammas": [1.0]}, "advertisers": [{"id": "a", "e_p": 1.5}]})") ==
        Errc::relevance_out_of_range);
  CHECK(parse_code(
            R"({"schema_version": 1, "ctr": {"gammas": [1.0]}, "advertisers": [{"id": "a", "v_p": -2.0}]})") ==
        Errc::negative_valuation);
  CHECK(parse_code(R"({"schema_version": 1, "ctr": {"gammas": [1.0]}, "advertisers": []})") ==
        Errc::no_advertisers);
  // f * gamma_1 = 1.2: the forked slots would be "noticed" more than surely.
  CHECK(parse_code(
            R"({"schema_version": 1, "ctr": {"gammas": [1.0]}, "advertisers": [{"id": "a", "v_p": 1.0}],
                "mediator": {"id": "m", "relevance_p": 1.0, "alpha": 1.2, "secondary_slots": 1}})") ==
        Errc::fitness_exceeds_ctr);
  CHECK(parse_code(
            R"({"schema_version": 1, "ctr": {"gammas": [1.0]}, "advertisers": [{"id": "a", "v_p": 1.0}],
                "mediator": {"id": "m", "relevance_p": 1.0, "alpha": 0.5, "secondary_slots": 2}})") ==
        Errc::secondary_slots_out_of_range);
}

TEST_CASE("serialize-parse is the identity on generated scenarios") {
  const auto scenarios = generate_scenarios(2026, 300);
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    CAPTURE(i);
    REQUIRE(parse_scenario(serialize_scenario(scenarios[i], true)) == scenarios[i]);
    REQUIRE(parse_scenario(serialize_scenario(scenarios[i], false)) == scenarios[i]);
  }
}

TEST_CASE("generation is deterministic and prefix-stable") {
  const auto first = generate_scenarios(1, 2);
  const auto second = generate_scenarios(1, 2);
  REQUIRE(first.size() == 2);
  CHECK(first == second);

  const auto longer = generate_scenarios(1, 5);
  CHECK(longer[0] == first[0]);
  CHECK(longer[1] == first[1]);

  std::string stream_a, stream_b;
  for (const auto& s : generate_scenarios(99, 50)) stream_a += serialize_scenario(s, false);
  for (const auto& s : generate_scenarios(99, 50)) stream_b += serialize_scenario(s, false);
  CHECK(stream_a == stream_b);
}

TEST_CASE("generated scenarios respect their own contracts") {
  const auto scenarios = generate_scenarios(5, 300);
  for (const auto& sc : scenarios) {
    REQUIRE(sc.mediator().has_value());
    REQUIRE(sc.mediator()->fitness() * sc.ctr().gamma(1) < 1.0);
    REQUIRE(sc.ctr().slots() <= 10);
    REQUIRE(sc.advertisers().size() <= 50);
    REQUIRE(sc.provenance().has_value());
  }

  GeneratorParams single;
  single.max_slots = 1;
  for (const auto& sc : generate_scenarios(5, 50, single)) {
    REQUIRE(sc.ctr().slots() == 1);
  }

  GeneratorParams extreme;
  extreme.extreme_case = true;
  int applies = 0;
  for (const auto& sc : generate_scenarios(5, 50, extreme)) {
    REQUIRE(sc.mediator()->num_secondary_slots == sc.ctr().slots());
    applies += extreme_case_applies(sc) ? 1 : 0;
  }
  CHECK(applies == 50);

  CHECK_THROWS_AS(generate_scenarios(5, 0), ValidationError);
  GeneratorParams bad;
  bad.max_advertisers = 0;
  CHECK_THROWS_AS(generate_scenarios(5, 1, bad), ValidationError);
  bad = GeneratorParams{};
  bad.p_participation = 1.5;
  CHECK_THROWS_AS(generate_scenarios(5, 1, bad), ValidationError);
}

TEST_CASE("table report carries the golden numbers") {
  const ComparisonReport report = compare(testing::worked_scenario());
  const std::string table = write_report_table(report);
  CHECK_THAT(table, ContainsSubstring("id,baseline_slot,new_slot,u0,u,delta,u_s,min_fitness\n"));
  CHECK_THAT(table, ContainsSubstring("A,1,1,6.5,5.8,-0.7,0,"));
  CHECK_THAT(table, ContainsSubstring("D,-,-,0,1.6,1.6,1.6,"));
  CHECK_THAT(table, ContainsSubstring("\nR,6.2\n"));
  CHECK_THAT(table, ContainsSubstring("\nR0,5\n"));
  CHECK_THAT(table, ContainsSubstring("\nE,14.2\n"));
  CHECK_THAT(table, ContainsSubstring("\nE0,12\n"));
  CHECK_THAT(table, ContainsSubstring("\nu_M,0.2\n"));
  CHECK_THAT(table, ContainsSubstring("\ns_M_p,4.4\n"));
  CHECK_THAT(table, ContainsSubstring("\nl,2\n"));
  CHECK_THAT(table, ContainsSubstring("\nrevenue_delta,1.2\n"));
  CHECK(table.back() == '\n');
}

TEST_CASE("baseline-only report zeroes the delta and u_s columns") {
  MarketScenario sc(CtrCurve({1.0, 0.5}),
                    {AdvertiserProfile("a", 10.0, 1.0), AdvertiserProfile("b", 4.0, 1.0)});
  const std::string table = write_report_table(baseline_only_report(sc));
  CHECK_THAT(table, ContainsSubstring("a,1,1,8,8,0,0,"));
  CHECK_THAT(table, ContainsSubstring("b,2,2,2,2,0,0,"));
  CHECK_THAT(table, ContainsSubstring("\nl,lost\n"));
  CHECK_THAT(table, ContainsSubstring("\nrevenue_delta,0\n"));
}

TEST_CASE("structured report round-trips the scenario it describes") {
  const ComparisonReport report = compare(testing::full_fork_scenario());
  const std::string text = write_report_structured(report);
  const auto doc = nlohmann::ordered_json::parse(text);
  CHECK(doc.at("schema_version") == kSchemaVersion);
  CHECK(scenario_from_json(doc.at("scenario")) == report.scenario);
  CHECK(doc.at("with_mediator").at("mediator_won") == true);
  CHECK(doc.at("deltas").at("revenue").contains("direct"));
  CHECK(doc.at("fitness_thresholds").contains("Y"));
  CHECK(write_report(report, ReportFormat::structured) == text);
  CHECK_THROWS_AS(report_format_from_string("fancy"), ValidationError);
}
