// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors
//
// Command-line front end: runs (K, D) sweeps, emits the default fronthaul
// topology, and solves LP/MILP files with the built-in solver.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cfran/experiment.hpp"
#include "cfran/lp_format.hpp"
#include "cfran/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfigError = 2;

cfran::ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return cfran::ExperimentConfig::from_json(buf.str());
}

}  //  namespace

int main(int argc, char** argv) {
  CLI::App app{"cell-free massive MIMO PHY and fronthaul planning tool"};
  app.set_version_flag("--version", std::string("cfran ") + cfran::kVersion);
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a (K, D) sweep and write CSV results");
  std::string config_path, out_dir, topology_path, solver_kind, preset;
  std::vector<int> k_list;
  std::vector<double> d_ratios;
  std::uint64_t seed = 0;
  int realizations = -1, drops = -1, threads = -1;
  double time_limit = -1.0;
  long node_limit = -1;
  bool dump_links = false;
  bool seed_set = false;
  run->add_option("-c,--config", config_path, "JSON config file");
  run->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_option("-o,--out", out_dir, "output directory");
  run->add_option("--k", k_list, "user counts to sweep")->delimiter(',');
  run->add_option("--d-ratios", d_ratios, "distortion ratios D/sigma2_min")
      ->delimiter(',');
  run->add_option("--realizations", realizations, "channel realizations per drop");
  run->add_option("--drops", drops, "independent drops");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");
  run->add_option("--topology", topology_path, "fronthaul topology JSON file");
  run->add_option("--solver", solver_kind, "builtin or external");
  run->add_option("--time-limit", time_limit, "solver time limit in seconds");
  run->add_option("--node-limit", node_limit, "branch-and-bound node limit");
  run->add_option("--preset", preset, "desk (20 realizations, 1 drop) or paper");
  run->add_flag("--dump-link-loads", dump_links, "write per-link load CSV");

  // topology
  auto* topo = app.add_subcommand("topology", "emit the default fronthaul topology");
  std::string topo_config, topo_out;
  topo->add_option("-c,--config", topo_config, "JSON config file");
  topo->add_option("-o,--out", topo_out, "output file (default stdout)");

  // solve-lp
  auto* solve = app.add_subcommand("solve-lp", "solve an LP/MILP file");
  std::string lp_path, sol_path;
  double lp_time_limit = 300.0;
  long lp_node_limit = 10000;
  solve->add_option("file", lp_path, "LP-format model file")->required();
  solve->add_option("-o,--out", sol_path, "solution file (name value lines)");
  solve->add_option("--time-limit", lp_time_limit, "time limit in seconds");
  solve->add_option("--node-limit", lp_node_limit, "node limit");

  // print-config
  auto* print_cfg = app.add_subcommand("print-config", "print the default config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*print_cfg) {
      std::cout << cfran::ExperimentConfig{}.to_json();
      return kExitOk;
    }

    if (*topo) {
      const cfran::ExperimentConfig cfg = load_config(topo_config);
      cfran::NetworkLayout layout;
      layout.area = cfg.area;
      layout.antennas_per_ru = cfg.antennas_per_ru;
      layout.ru = cfran::place_rus_grid(cfg.num_rus, cfg.grid_rows, cfg.grid_cols,
                                        cfg.area);
      const auto graph =
          cfran::default_topology(layout, cfg.num_routers, cfg.num_dus);
      const std::string text = cfran::topology_to_json(graph);
      if (topo_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(topo_out);
        out << text;
      }
      return kExitOk;
    }

    if (*solve) {
      std::ifstream in(lp_path);
      if (!in) throw std::invalid_argument("cannot open " + lp_path);
      std::stringstream buf;
      buf << in.rdbuf();
      const cfran::MilpModel model = cfran::parse_lp(buf.str());
      cfran::SolverConfig scfg;
      scfg.time_limit_s = lp_time_limit;
      scfg.node_limit = lp_node_limit;
      const cfran::MilpSolution sol = cfran::solve_milp(model, scfg);
      std::cout << "status " << cfran::to_string(sol.status) << "\n";
      if (sol.status == cfran::MilpStatus::kInfeasible) {
        return kExitFailure;
      }
      std::cout << "objective " << sol.objective << "\n";
      if (!sol_path.empty()) {
        std::ofstream out(sol_path);
        out << "status " << cfran::to_string(sol.status) << "\n";
        out << "objective " << sol.objective << "\n";
        for (int j = 0; j < model.num_vars(); ++j) {
          out << model.var_names[j] << " " << sol.values[j] << "\n";
        }
      }
      return kExitOk;
    }

    // run
    cfran::ExperimentConfig cfg = load_config(config_path);
    if (preset == "desk") {
      cfg.realizations = 20;
      cfg.drops = 1;
    } else if (!preset.empty() && preset != "paper") {
      throw std::invalid_argument("unknown preset: " + preset);
    }
    if (seed_set) cfg.seed = seed;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!k_list.empty()) cfg.k_list = k_list;
    if (!d_ratios.empty()) cfg.d_ratios = d_ratios;
    if (realizations > 0) cfg.realizations = realizations;
    if (drops > 0) cfg.drops = drops;
    if (threads >= 0) cfg.threads = threads;
    if (!topology_path.empty()) cfg.topology_file = topology_path;
    if (!solver_kind.empty()) {
      if (solver_kind == "builtin") {
        cfg.solver.kind = cfran::SolverConfig::Kind::kBuiltin;
      } else if (solver_kind == "external") {
        cfg.solver.kind = cfran::SolverConfig::Kind::kExternal;
      } else {
        throw std::invalid_argument("unknown solver kind: " + solver_kind);
      }
    }
    if (time_limit > 0.0) cfg.solver.time_limit_s = time_limit;
    if (node_limit > 0) cfg.solver.node_limit = node_limit;
    cfg.dump_link_loads = cfg.dump_link_loads || dump_links;

    const cfran::SweepResult result = cfran::run_sweep(cfg);
    cfran::write_outputs(result, cfg);

    int solver_failures = 0;
    for (const auto& row : result.rows) {
      if (row.solver_status == "infeasible") ++solver_failures;
    }
    std::cout << "wrote " << result.rows.size() << " rows to " << cfg.output_dir
              << "/results.csv\n";
    if (!result.rows.empty() &&
        solver_failures == static_cast<int>(result.rows.size())) {
      std::cerr << "every solver call failed\n";
      return kExitFailure;
    }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
