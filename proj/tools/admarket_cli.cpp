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

// Operator entry point. Exit codes: 0 success, 1 input/usage error,
// 2 invariant violation. Reports go to stdout, diagnostics to stderr.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "admarket/admarket.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInvariantViolation = 2;

admarket::MarketScenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw admarket::ValidationError(admarket::Errc::invalid_params,
                                    "cannot open scenario file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return admarket::parse_scenario(std::move(buf).str());
}

std::string rank_cell(const admarket::MediatorOutcome& outcome, std::size_t num_slots) {
  // Show the rank while the mediator's score is price-relevant (at or
  // above position K+1); deeper ranks change nothing and print as lost.
  if (outcome.mediator_rank && *outcome.mediator_rank <= num_slots + 1) {
    return std::to_string(*outcome.mediator_rank);
  }
  return "lost";
}

int cmd_run(const std::string& path, admarket::ReportFormat format, double tol) {
  const auto scenario = load_scenario(path);
  const auto report = scenario.mediator() ? admarket::compare(scenario)
                                          : admarket::baseline_only_report(scenario);
  const auto violations = admarket::report_violations(report, tol);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
    return kExitInvariantViolation;
  }
  std::cout << admarket::write_report(report, format);
  return kExitOk;
}

int cmd_compare(const std::string& path, admarket::ReportFormat format, double tol) {
  const auto scenario = load_scenario(path);
  const auto report = admarket::compare(scenario);  // rejects mediator-less scenarios
  const auto violations = admarket::report_violations(report, tol);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
    return kExitInvariantViolation;
  }
  std::cout << admarket::write_report(report, format);
  return kExitOk;
}

int cmd_sweep(const std::string& path, double f_min, double f_max, std::uint64_t steps,
              double tol) {
  const auto scenario = load_scenario(path);
  if (!scenario.mediator()) {
    throw admarket::ValidationError(admarket::Errc::mediator_required,
                                    "sweep needs a mediator to retune");
  }
  if (!(f_min > 0.0) || !(f_min <= f_max)) {
    throw admarket::ValidationError(admarket::Errc::invalid_params,
                                    "need 0 < f-min <= f-max");
  }
  if (f_max * scenario.ctr().gamma(1) >= 1.0) {
    throw admarket::ValidationError(admarket::Errc::fitness_exceeds_ctr,
                                    "f-max * gamma_1 must stay below 1");
  }
  if (steps < 1) {
    throw admarket::ValidationError(admarket::Errc::invalid_params, "steps must be >= 1");
  }

  std::cout << "f,l,s_M_p,revenue_delta,efficiency_delta,u_M,min_advertiser_delta,flag\n";
  for (std::uint64_t i = 0; i < steps; ++i) {
    const double f =
        steps == 1 ? f_min : f_min + (f_max - f_min) * static_cast<double>(i) /
                                         static_cast<double>(steps - 1);
    const auto report = admarket::compare(scenario.with_fitness(f));
    double min_delta = 0.0;
    bool first = true;
    for (const auto& [id, d] : report.payoff_deltas) {
      if (first || d.direct < min_delta) min_delta = d.direct;
      first = false;
    }
    const bool win_win = min_delta >= -tol;
    std::cout << admarket::format_number(f) << ','
              << rank_cell(report.with_mediator, scenario.ctr().slots()) << ','
              << admarket::format_number(report.with_mediator.s_m_p) << ','
              << admarket::format_number(report.revenue_change.direct) << ','
              << admarket::format_number(report.efficiency_change.direct) << ','
              << admarket::format_number(report.with_mediator.mediator_utility) << ','
              << admarket::format_number(min_delta) << ',' << (win_win ? "WIN-WIN" : "")
              << '\n';
  }
  return kExitOk;
}

// All structural checks for one scenario; returns violation lines.
std::vector<std::string> verify_scenario(const admarket::MarketScenario& scenario, double tol) {
  if (scenario.mediator()) {
    return admarket::report_violations(admarket::compare(scenario), tol);
  }
  const auto report = admarket::baseline_only_report(scenario);
  return admarket::report_violations(report, tol);
}

int cmd_verify(const std::optional<std::string>& path, std::uint64_t seed, std::uint64_t count,
               bool inject_corruption, double tol) {
  if (path) {
    const auto scenario = load_scenario(*path);
    if (inject_corruption) {
      // Negative control: deliberately overcharge the top slot so the
      // verifier must produce a witness.
      const auto outcome = scenario.mediator() ? admarket::run_with_mediator(scenario).p
                                               : admarket::run_baseline(scenario).p;
      if (outcome.ranking.empty()) {
        throw admarket::ValidationError(admarket::Errc::invalid_params,
                                        "nothing to corrupt: primary tier is empty");
      }
      auto corrupted = outcome.price_scores;
      corrupted[0] = outcome.ranking.score_at(1) + 1.0;
      const auto verdict =
          admarket::verify_sne(scenario.ctr(), outcome.ranking.scores(), corrupted, tol);
      if (verdict.ok()) {
        std::cerr << "corrupted price vector was not rejected\n";
        return kExitInvariantViolation;
      }
      const auto& v = *verdict.violation;
      std::cout << "corruption detected: rank " << v.position << " prefers slot " << v.alt_slot
                << " (payoff " << admarket::format_number(v.current_payoff) << " vs "
                << admarket::format_number(v.alternative_payoff) << ")\n";
      return kExitInvariantViolation;
    }
    const auto violations = verify_scenario(scenario, tol);
    if (!violations.empty()) {
      for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
      return kExitInvariantViolation;
    }
    std::cout << "1/1 pass\n";
    return kExitOk;
  }

  if (count < 1) {
    throw admarket::ValidationError(admarket::Errc::invalid_params,
                                    "campaign needs --count >= 1");
  }
  if (inject_corruption) {
    throw admarket::ValidationError(admarket::Errc::invalid_params,
                                    "--inject-corruption needs --scenario");
  }
  admarket::ScenarioGenerator gen(seed);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto scenario = gen.at(i);
    std::vector<std::string> violations;
    try {
      violations = verify_scenario(scenario, tol);
    } catch (const admarket::InvariantViolation& e) {
      violations.push_back(e.what());
    }
    if (!violations.empty()) {
      std::cerr << "scenario " << i << " of seed " << seed << " failed:\n";
      for (const auto& v : violations) std::cerr << "  " << v << "\n";
      std::cerr << admarket::serialize_scenario(scenario);
      std::cout << i << "/" << count << " pass\n";
      return kExitInvariantViolation;
    }
  }
  std::cout << count << "/" << count << " pass\n";
  return kExitOk;
}

int cmd_gen(std::uint64_t seed, std::uint64_t count, const admarket::GeneratorParams& params,
            const std::optional<std::string>& out_dir) {
  if (count < 1) {
    throw admarket::ValidationError(admarket::Errc::invalid_params, "count must be >= 1");
  }
  admarket::ScenarioGenerator gen(seed, params);
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    for (std::uint64_t i = 0; i < count; ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "scenario_%06llu.json",
                    static_cast<unsigned long long>(i));
      std::ofstream out(std::filesystem::path(*out_dir) / name, std::ios::binary);
      out << admarket::serialize_scenario(gen.at(i), /*pretty=*/true);
    }
    return kExitOk;
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    std::cout << admarket::serialize_scenario(gen.at(i), /*pretty=*/false);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Position-auction equilibrium analytics for sponsored search with a "
      "reselling mediator"};
  app.require_subcommand(1);

  double tolerance = admarket::kDefaultTolerance;
  app.add_option("--tolerance", tolerance, "numeric tolerance for all checks")
      ->envname("ADMARKET_TOLERANCE")
      ->capture_default_str();

  std::string scenario_path;
  std::string format_name = "table";
  std::optional<std::string> verify_path;
  std::optional<std::string> out_dir;
  double f_min = 0.0, f_max = 0.0;
  std::uint64_t steps = 1, seed = 0, count = 1;
  bool inject_corruption = false;
  admarket::GeneratorParams gen_params;
  bool no_mediator = false;

  auto* run = app.add_subcommand("run", "run one scenario and print its outcome report");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--format", format_name, "table|structured");

  auto* cmp = app.add_subcommand("compare", "with/without-mediator comparison report");
  cmp->add_option("--scenario", scenario_path, "scenario file")->required();
  cmp->add_option("--format", format_name, "table|structured");

  auto* sweep = app.add_subcommand("sweep", "sweep the mediator fitness over a range");
  sweep->add_option("--scenario", scenario_path, "scenario file")->required();
  sweep->add_option("--f-min", f_min, "lowest fitness")->required();
  sweep->add_option("--f-max", f_max, "highest fitness")->required();
  sweep->add_option("--steps", steps, "number of rows");

  auto* verify = app.add_subcommand("verify", "check equilibrium and market invariants");
  verify->add_option("--scenario", verify_path, "scenario file to verify");
  verify->add_option("--seed", seed, "campaign seed");
  verify->add_option("--count", count, "campaign size");
  verify->add_flag("--inject-corruption", inject_corruption,
                   "negative control: corrupt the computed prices and expect a witness");

  auto* gen = app.add_subcommand("gen", "emit seeded random scenarios");
  gen->add_option("--seed", seed, "stream seed")->required();
  gen->add_option("--count", count, "how many scenarios");
  gen->add_option("--out", out_dir, "write pretty files into this directory");
  gen->add_option("--max-advertisers", gen_params.max_advertisers, "advertiser cap");
  gen->add_option("--max-slots", gen_params.max_slots, "slot cap");
  gen->add_flag("--extreme", gen_params.extreme_case,
                "full-fork scenarios with aligned secondary demand");
  gen->add_flag("--no-mediator", no_mediator, "generate baseline-only scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*run) {
      return cmd_run(scenario_path, admarket::report_format_from_string(format_name), tolerance);
    }
    if (*cmp) {
      return cmd_compare(scenario_path, admarket::report_format_from_string(format_name),
                         tolerance);
    }
    if (*sweep) {
      return cmd_sweep(scenario_path, f_min, f_max, steps, tolerance);
    }
    if (*verify) {
      const std::uint64_t campaign_count = verify->count("--count") ? count : 1000;
      return cmd_verify(verify_path, seed, campaign_count, inject_corruption, tolerance);
    }
    if (*gen) {
      gen_params.with_mediator = !no_mediator;
      if (gen_params.extreme_case && no_mediator) {
        throw admarket::ValidationError(admarket::Errc::invalid_params,
                                        "--extreme requires a mediator");
      }
      return cmd_gen(seed, count, gen_params, out_dir);
    }
  } catch (const admarket::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariantViolation;
  } catch (const admarket::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
