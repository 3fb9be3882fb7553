// stg2: solve, verify, generate and bench entry points.

#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stg2/instance_io.h"
#include "stg2/parallel.h"
#include "stg2/planner.h"
#include "stg2/verifier.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitInput = 4;

struct RunConfig {
  std::string instance_path;
  std::string solution_path;
  std::string out_path;
  stg2::CostParams cost;
  stg2::ParallelParams parallel;
  uint64_t seed = 1;
  double time_limit_s = 0;
  int64_t pop_limit = 5'000'000;
  stg2::GeneratorConfig gen;
  int bench_seeds = 3;
  std::vector<int> bench_threads = {1, 2, 4, 8};
};

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

stg2::SolveResult Solve(const stg2::NetworkInstance& instance,
                        const RunConfig& cfg, int threads) {
  stg2::SolveParams params;
  params.cost = cfg.cost;
  params.pop_limit = cfg.pop_limit;
  params.time_limit_s = cfg.time_limit_s;
  if (threads <= 1) return stg2::solve(instance, params);
  stg2::ParallelParams p = cfg.parallel;
  p.threads = threads;
  return stg2::solve_parallel(instance, params, p);
}

void PrintStats(const stg2::SolveStats& s, std::ostream& os) {
  double hit = s.reuse_attempts > 0
                   ? static_cast<double>(s.reuse_hits) / s.reuse_attempts
                   : 0.0;
  os << "objective=" << s.lightpaths << '\n'
     << "lightpaths=" << s.lightpaths << '\n'
     << "demands=" << s.original_demands << '\n'
     << "aggregates=" << s.aggregates << '\n'
     << "time_aggregation=" << Fixed(s.aggregation_seconds) << '\n'
     << "time_working=" << Fixed(s.working_seconds) << '\n'
     << "time_level1=" << Fixed(s.level1_seconds) << '\n'
     << "time_level2=" << Fixed(s.level2_seconds) << '\n'
     << "time_total=" << Fixed(s.total_seconds) << '\n'
     << "labeling_calls=" << s.labeling_calls << '\n'
     << "label_pops=" << s.label_pops << '\n'
     << "reuse_attempts=" << s.reuse_attempts << '\n'
     << "reuse_hits=" << s.reuse_hits << '\n'
     << "reuse_hit_rate=" << Fixed(hit) << '\n'
     << "level1_scenarios=" << s.level1_scenarios << '\n'
     << "level2_scenarios=" << s.level2_scenarios << '\n'
     << "level2_routes=" << s.level2_routes << '\n'
     << "pool_routes=" << s.pool_routes << '\n'
     << "iterations=" << s.iterations.size() << '\n';
  for (size_t i = 0; i < s.iterations.size(); ++i) {
    const stg2::IterationStats& it = s.iterations[i];
    std::string p = "iteration." + std::to_string(i + 1) + ".";
    os << p << "pooled=" << it.pooled << '\n'
       << p << "planned=" << it.planned << '\n'
       << p << "blocked=" << it.blocked << '\n'
       << p << "new_routes=" << it.new_routes << '\n'
       << p << "master_new_lightpaths=" << it.master_new_lightpaths << '\n'
       << p << "frozen_ok=" << (it.frozen_ok ? 1 : 0) << '\n';
  }
}

int CmdSolve(const RunConfig& cfg) {
  stg2::NetworkInstance instance;
  try {
    instance = stg2::parse_instance(stg2::read_file(cfg.instance_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  try {
    stg2::SolveResult result = Solve(instance, cfg, cfg.parallel.threads);
    if (!cfg.out_path.empty()) {
      stg2::write_file(cfg.out_path, stg2::write_solution(result.solution));
    }
    std::cout << "status=feasible\n";
    PrintStats(result.stats, std::cout);
    return kExitOk;
  } catch (const stg2::InfeasibleError& e) {
    std::cout << "status=infeasible\n"
              << "blocking_demand=" << e.demand() << '\n'
              << "blocking_scenario=" << stg2::to_string(e.scenario()) << '\n';
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const stg2::TimeoutError& e) {
    std::cout << "status=timeout\n";
    std::cerr << "timeout: " << e.what() << '\n';
    return kExitTimeout;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const stg2::StructuralError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

int CmdVerify(const RunConfig& cfg) {
  stg2::NetworkInstance instance;
  stg2::Solution solution;
  try {
    instance = stg2::parse_instance(stg2::read_file(cfg.instance_path));
    solution =
        stg2::read_solution(stg2::read_file(cfg.solution_path), instance);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  stg2::VerifyReport report = stg2::verify(instance, solution);
  std::cout << stg2::report_text(report) << stg2::report_key_values(report);
  return report.feasible ? kExitOk : kExitInfeasible;
}

int CmdGenerate(const RunConfig& cfg) {
  stg2::GeneratorConfig gen = cfg.gen;
  gen.seed = cfg.seed;
  stg2::GeneratedInstance g;
  try {
    g = stg2::generate_instance(gen);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  std::string text = stg2::serialize_instance(g.instance);
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    try {
      stg2::write_file(cfg.out_path, text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInput;
    }
  }
  std::cerr << "survivable=" << (g.survivable ? 1 : 0) << '\n'
            << "fragile_demands=" << g.fragile_demands << '\n';
  return kExitOk;
}

int CmdBench(const RunConfig& cfg) {
  std::ostringstream table;
  table << "seed threads objective time_total time_level2 feasible\n";
  int status = kExitOk;
  for (int i = 0; i < cfg.bench_seeds; ++i) {
    stg2::GeneratorConfig gen = cfg.gen;
    gen.seed = cfg.seed + i;
    stg2::NetworkInstance instance;
    try {
      instance = stg2::generate_instance(gen).instance;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInput;
    }
    for (int m : cfg.bench_threads) {
      std::string row = std::to_string(gen.seed) + " " + std::to_string(m);
      try {
        stg2::SolveResult r = Solve(instance, cfg, m);
        bool clean = stg2::verify(instance, r.solution).feasible;
        table << row << ' ' << r.stats.lightpaths << ' '
              << Fixed(r.stats.total_seconds) << ' '
              << Fixed(r.stats.level2_seconds) << ' ' << (clean ? 1 : 0)
              << '\n';
        if (!clean) status = kExitInfeasible;
      } catch (const stg2::InfeasibleError&) {
        table << row << " - - - 0\n";
        status = kExitInfeasible;
      } catch (const stg2::TimeoutError&) {
        table << row << " - - - timeout\n";
        if (status == kExitOk) status = kExitTimeout;
      }
      std::cout << table.str();
      table.str("");
      std::cout.flush();
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Survivable traffic grooming under double-link failures"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_cost = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", cfg.cost.alpha, "transmitter arc cost");
    cmd->add_option("--beta", cfg.cost.beta, "wavelength usage weight");
    cmd->add_option("--gamma", cfg.cost.gamma,
                    "penalty per unprotected working link");
    cmd->add_option("--theta", cfg.cost.theta, "wavelength usage exponent");
    cmd->add_option("--pop-limit", cfg.pop_limit, "label pops per search")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--time-limit", cfg.time_limit_s, "seconds, 0 = none")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--pool-size", cfg.parallel.pool_size, "scenario pool size")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--nf", cfg.parallel.max_failed, "failed demands per stop")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--nr", cfg.parallel.max_routes, "new routes per stop")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--cs", cfg.parallel.check_scenarios,
                    "scenarios between stop checks")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--cr", cfg.parallel.check_routes,
                    "routes between stop checks")
        ->check(CLI::PositiveNumber);
  };
  auto add_gen = [&](CLI::App* cmd) {
    cmd->add_option("--seed", cfg.seed, "generator seed");
    cmd->add_option("--nodes", cfg.gen.nodes);
    cmd->add_option("--links", cfg.gen.links);
    cmd->add_option("--demands", cfg.gen.demands);
    cmd->add_option("--wavelengths", cfg.gen.wavelengths);
    cmd->add_option("--capacity", cfg.gen.capacity);
    cmd->add_option("--reach", cfg.gen.reach_km);
    cmd->add_option("--volumes", cfg.gen.volumes, "demand volumes to draw from")
        ->delimiter(',');
  };

  CLI::App* solve = app.add_subcommand("solve", "plan an instance");
  solve->add_option("instance", cfg.instance_path)->required();
  solve->add_option("--out", cfg.out_path, "solution file");
  solve->add_option("--threads", cfg.parallel.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  add_cost(solve);

  CLI::App* verify = app.add_subcommand("verify", "check a solution");
  verify->add_option("instance", cfg.instance_path)->required();
  verify->add_option("solution", cfg.solution_path)->required();

  CLI::App* generate = app.add_subcommand("generate", "write a random instance");
  generate->add_option("--out", cfg.out_path, "instance file (default stdout)");
  add_gen(generate);

  CLI::App* bench = app.add_subcommand("bench", "solve seeded instances");
  bench->add_option("--seeds", cfg.bench_seeds, "number of instances")
      ->check(CLI::PositiveNumber);
  bench->add_option("--threads", cfg.bench_threads, "thread counts")
      ->delimiter(',');
  add_gen(bench);
  add_cost(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (*solve) return CmdSolve(cfg);
  if (*verify) return CmdVerify(cfg);
  if (*generate) return CmdGenerate(cfg);
  return CmdBench(cfg);
}
