// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tsm/balance.hpp"
#include "tsm/bench.hpp"
#include "tsm/errors.hpp"
#include "tsm/factor_revealing.hpp"
#include "tsm/generators.hpp"
#include "tsm/instance_io.hpp"
#include "tsm/parallel.hpp"
#include "tsm/policies.hpp"
#include "tsm/pricing.hpp"
#include "tsm/report.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNoConvergence = 4;

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arithmetic on decimals, e, + - * / and parentheses, e.g. "1/(e-1)".
class Expr {
 public:
  explicit Expr(const std::string& s) : s_(s) {}
  double parse() {
    const double v = sum();
    skip();
    if (p_ != s_.size()) fail();
    return v;
  }

 private:
  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  [[noreturn]] void fail() { throw CLI::ValidationError("bad number: " + s_); }
  double sum() {
    double v = product();
    for (;;) {
      skip();
      if (p_ < s_.size() && (s_[p_] == '+' || s_[p_] == '-')) {
        const char op = s_[p_++];
        const double r = product();
        v = op == '+' ? v + r : v - r;
      } else {
        return v;
      }
    }
  }
  double product() {
    double v = atom();
    for (;;) {
      skip();
      if (p_ < s_.size() && (s_[p_] == '*' || s_[p_] == '/')) {
        const char op = s_[p_++];
        const double r = atom();
        v = op == '*' ? v * r : v / r;
      } else {
        return v;
      }
    }
  }
  double atom() {
    skip();
    if (p_ >= s_.size()) fail();
    if (s_[p_] == '(') {
      ++p_;
      const double v = sum();
      skip();
      if (p_ >= s_.size() || s_[p_] != ')') fail();
      ++p_;
      return v;
    }
    if (s_[p_] == '-') {
      ++p_;
      return -atom();
    }
    if (s_[p_] == 'e' && (p_ + 1 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[p_ + 1])))) {
      ++p_;
      return M_E;
    }
    const char* begin = s_.c_str() + p_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail();
    p_ += static_cast<std::size_t>(end - begin);
    return v;
  }
  std::string s_;
  std::size_t p_ = 0;
};

double parse_number(const std::string& text) { return Expr(text).parse(); }

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tsm::ConfigError("cannot write " + path);
  out << text;
}

std::string pretty(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int resolve_threads(int t) { return t > 0 ? t : tsm::default_threads(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage stochastic matching toolkit"};
  app.require_subcommand(1);
  int threads = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance JSON");
  gen->require_subcommand(1);
  std::string gen_out;
  gen->add_option("-o,--output", gen_out, "Output path (default stdout)");

  auto* g_wc = gen->add_subcommand("worst-case", "Worst-case family");
  int wc_n = 1;
  g_wc->add_option("--n", wc_n)->required()->check(CLI::PositiveNumber);

  auto* g_rand = gen->add_subcommand("random", "Random bipartite instance");
  tsm::RandomInstanceSpec rspec;
  std::optional<uint64_t> gen_seed;
  g_rand->add_option("--n1", rspec.first_stage)->check(CLI::PositiveNumber);
  g_rand->add_option("--n2", rspec.second_stage)->check(CLI::PositiveNumber);
  g_rand->add_option("--ns", rspec.supplies)->check(CLI::PositiveNumber);
  g_rand->add_option("--edge-prob", rspec.edge_prob)->check(CLI::Range(0.0, 1.0));
  g_rand->add_option("--w-lo", rspec.weight_lo);
  g_rand->add_option("--w-hi", rspec.weight_hi);
  g_rand->add_option("--pi-lo", rspec.pi_lo)->check(CLI::Range(0.0, 1.0));
  g_rand->add_option("--pi-hi", rspec.pi_hi)->check(CLI::Range(0.0, 1.0));
  g_rand->add_flag("--edge-weighted", rspec.edge_weighted);
  g_rand->add_option("--seed", gen_seed)->required();

  auto* g_geo = gen->add_subcommand("geo", "Synthetic geospatial instance");
  tsm::GeoSpec gspec;
  std::string geo_mode = "unit";
  g_geo->add_option("--riders1", gspec.riders_first)->check(CLI::NonNegativeNumber);
  g_geo->add_option("--riders2", gspec.riders_second)->check(CLI::NonNegativeNumber);
  g_geo->add_option("--drivers", gspec.drivers)->check(CLI::NonNegativeNumber);
  g_geo->add_option("--radius", gspec.radius)->check(CLI::PositiveNumber);
  g_geo->add_option("--region", gspec.region_side)->check(CLI::PositiveNumber);
  g_geo->add_option("--weight-mode", geo_mode)->check(CLI::IsMember({"unit", "idle-quantile"}));
  g_geo->add_option("--days", gspec.scenario_days, "Scenario mode with this many days")
      ->check(CLI::NonNegativeNumber);
  g_geo->add_option("--pi", gspec.pi)->check(CLI::Range(0.0, 1.0));
  g_geo->add_option("--seed", gen_seed)->required();

  double gen_eps = 0.05;
  auto* g_pt = gen->add_subcommand("pricing-tight", "Pricing tight instance");
  g_pt->add_option("--eps", gen_eps)->check(CLI::Range(0.0, 1.0));
  auto* g_et = gen->add_subcommand("edge-tight", "Edge-weighted tight instance");
  g_et->add_option("--eps", gen_eps)->check(CLI::Range(0.0, 1.0));
  auto* g_pe = gen->add_subcommand("pricing-example", "Two-buyer pricing example");
  auto* g_rp = gen->add_subcommand("random-pricing", "Random pricing instance");
  tsm::RandomPricingSpec pspec;
  std::string family = "uniform";
  g_rp->add_option("--n1", pspec.first_stage)->check(CLI::NonNegativeNumber);
  g_rp->add_option("--n2", pspec.second_stage)->check(CLI::NonNegativeNumber);
  g_rp->add_option("--ns", pspec.supplies)->check(CLI::PositiveNumber);
  g_rp->add_option("--edge-prob", pspec.edge_prob)->check(CLI::Range(0.0, 1.0));
  g_rp->add_option("--family", family)
      ->check(CLI::IsMember({"uniform", "exponential", "two-point", "mixed"}));
  g_rp->add_option("--seed", gen_seed)->required();

  for (auto* sub : gen->get_subcommands({})) sub->fallthrough();

  // solve-balance
  auto* sb = app.add_subcommand("solve-balance", "Balanced utilization marginals and levels");
  std::string input, output;
  std::string g_name = "quad";
  double tol = 1e-12;
  int max_iter = 20000;
  sb->add_option("instance", input)->required();
  sb->add_option("--g", g_name)->check(CLI::IsMember({"quad", "exp"}));
  sb->add_option("--tol", tol)->check(CLI::PositiveNumber);
  sb->add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);
  sb->add_option("-o,--output", output);

  // simulate
  auto* sim = app.add_subcommand("simulate", "One policy run");
  std::string policy_text = "wbu";
  std::optional<uint64_t> seed;
  uint64_t trial = 0;
  int sim_trials = 0;
  sim->add_option("instance", input)->required();
  sim->add_option("--policy", policy_text);
  sim->add_option("--seed", seed)->required();
  sim->add_option("--trial", trial, "Trial index of the reported run");
  sim->add_option("--trials", sim_trials, "Also estimate the mean over this many trials")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--threads", threads)->check(CLI::NonNegativeNumber);
  sim->add_option("-o,--output", output);

  // bench
  auto* bench = app.add_subcommand("bench", "Compare policies with benchmarks");
  std::vector<std::string> policies;
  int trials = 10000;
  std::string format = "csv";
  bench->add_option("instance", input)->required();
  bench->add_option("--policy", policies, "Repeatable")->required();
  bench->add_option("--trials", trials)->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed)->required();
  bench->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--threads", threads)->check(CLI::NonNegativeNumber);
  bench->add_option("-o,--output", output);

  // fr
  auto* fr = app.add_subcommand("fr", "Factor-revealing program minimum");
  std::string lambda_text;
  bool weighted = false, unweighted = false;
  int grid = 2000;
  fr->add_option("--lambda", lambda_text)->required();
  auto* wflag = fr->add_flag("--weighted", weighted);
  auto* uflag = fr->add_flag("--unweighted", unweighted);
  wflag->excludes(uflag);
  fr->add_option("--grid", grid)->check(CLI::Range(10, 100000));
  fr->add_option("-o,--output", output);

  // price
  auto* price = app.add_subcommand("price", "Ex-ante prices and one contention-resolution run");
  price->add_option("instance", input)->required();
  price->add_option("--seed", seed)->required();
  price->add_option("--trial", trial);
  price->add_option("--tol", tol)->check(CLI::PositiveNumber);
  price->add_option("-o,--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*gen) {
      tsm::TwoStageInstance inst = [&] {
        if (*g_wc) return tsm::gen_worst_case(wc_n);
        if (*g_rand) return tsm::gen_random(rspec, *gen_seed);
        if (*g_geo) {
          gspec.weight_mode = geo_mode == "unit" ? tsm::GeoWeightMode::kUnit
                                                 : tsm::GeoWeightMode::kIdleQuantile;
          return tsm::gen_geo(gspec, *gen_seed);
        }
        if (*g_pt) return tsm::gen_pricing_tight(gen_eps);
        if (*g_et) return tsm::gen_edge_weighted_tight(gen_eps);
        if (*g_pe) return tsm::gen_pricing_example();
        if (family == "exponential") pspec.family = tsm::ValuationFamily::kExponential;
        if (family == "two-point") pspec.family = tsm::ValuationFamily::kTwoPoint;
        if (family == "mixed") pspec.family = tsm::ValuationFamily::kMixed;
        return tsm::gen_random_pricing(pspec, *gen_seed);
      }();
      emit(tsm::dump_instance(inst), gen_out);
      return 0;
    }

    if (*fr) {
      const double lambda = parse_number(lambda_text);
      if (!(lambda >= 0.0 && lambda <= 1.0)) {
        std::cerr << "error: --lambda must lie in [0,1]\n";
        return kExitUsage;
      }
      const tsm::FrResult r = tsm::fr_solve(lambda, weighted, grid);
      if (output.empty()) {
        std::cout << tsm::fmt9(r.value) << "\n";
      } else {
        emit(pretty(tsm::to_json(r)), output);
      }
      return 0;
    }

    const tsm::TwoStageInstance inst = tsm::load_instance(input);

    if (*sb) {
      tsm::ConvexG g{g_name == "quad" ? tsm::GKind::kQuadratic : tsm::GKind::kExponential};
      const tsm::BalanceSolution sol = tsm::solve_balance(inst, g, tol, max_iter);
      const tsm::Decomposition dec = tsm::decompose(inst, sol);
      nlohmann::json doc = tsm::to_json(inst, sol);
      doc["g"] = g_name;
      doc["decomposition"] = tsm::to_json(inst, dec);
      doc["checks"] = tsm::to_json(tsm::verify_decomposition(inst, sol, dec));
      doc["instance_digest"] = tsm::instance_digest(inst);
      emit(pretty(doc), output);
      if (!sol.converged) throw NoConvergence("balance solver did not reach the tolerance");
      return 0;
    }

    if (*sim) {
      const tsm::PolicySpec spec = tsm::PolicySpec::parse(policy_text);
      const tsm::PolicyPlan plan = tsm::make_plan(spec, inst, *seed);
      const tsm::PolicyRun run = tsm::run_trial(plan, inst, *seed, trial);
      nlohmann::json doc = tsm::to_json(inst, run);
      doc["policy"] = spec.name();
      doc["seed"] = *seed;
      doc["trial"] = trial;
      if (sim_trials > 0) {
        const tsm::ValueEstimate est =
            tsm::expected_value(spec, inst, sim_trials, *seed, resolve_threads(threads));
        doc["estimate"] = {{"trials", est.trials},
                           {"mean", tsm::round9(est.mean)},
                           {"stderr", tsm::round9(est.stderr_)}};
      }
      emit(pretty(doc), output);
      return 0;
    }

    if (*bench) {
      std::vector<tsm::PolicySpec> specs;
      for (const auto& p : policies) specs.push_back(tsm::PolicySpec::parse(p));
      const tsm::SimReport rep =
          tsm::compare(inst, specs, trials, *seed, resolve_threads(threads));
      emit(format == "csv" ? tsm::to_csv(rep) : pretty(tsm::to_json(rep)), output);
      return 0;
    }

    if (*price) {
      const tsm::EarSolution ear = tsm::solve_ear(inst, tol);
      tsm::Rng rng(*seed, trial, tsm::Stream::kDiscard);
      const tsm::PricingRun run = tsm::ocrs_two_stage(inst, ear, rng);
      tsm::PolicyRun as_policy{run.first_stage, run.realization, run.second_stage, run.prices,
                               run.value};
      nlohmann::json doc = {{"instance_digest", tsm::instance_digest(inst)},
                            {"ear", tsm::to_json(inst, ear)},
                            {"run", tsm::to_json(inst, as_policy)},
                            {"seed", *seed},
                            {"trial", trial}};
      emit(pretty(doc), output);
      if (!ear.converged) throw NoConvergence("ex-ante relaxation did not reach the tolerance");
      return 0;
    }
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tsm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tsm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const tsm::SizeGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
