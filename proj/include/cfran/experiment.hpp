// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfran/geometry.hpp"
#include "cfran/milp_solver.hpp"
#include "cfran/uplink.hpp"

namespace cfran {

// Full experiment description. The defaults reproduce the reference setup:
// 20 RUs with 10 antennas on a 4 x 5 grid over a 200 x 200 m torus, both
// sweep grids, the TDD split and the fronthaul sizing rules.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  int drops = 1;
  int realizations = 100;
  int threads = 0;  // 0 = hardware concurrency

  NetworkArea area;
  int num_rus = 20;
  int antennas_per_ru = 10;
  int grid_rows = 4;
  int grid_cols = 5;
  double angular_spread = 0.39269908169872414;  // pi/8
  int tau_p = 20;
  int coherence_block = 200;  // T signal dimensions
  double gamma_dl = 0.8;
  int c_max = 7;
  double eta = 1.0;
  PathlossConfig pathloss;

  std::vector<int> k_list = {75, 100, 125, 150, 175, 200};
  std::vector<double> d_ratios = {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};

  int num_routers = 5;
  int num_dus = 4;
  ObjectiveWeights weights;
  std::string topology_file;  // empty = shipped default topology

  SolverConfig solver;

  std::string output_dir = "out";
  bool dump_link_loads = false;

  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
  // FNV-1a hash of the canonical serialized config, for row provenance.
  std::string hash() const;
};

struct SweepRow {
  int drop = 0;
  int num_ues = 0;
  double d_ratio = 0.0;
  double d_abs = 0.0;
  double se_ul = 0.0;
  double se_dl = 0.0;
  double se_tot = 0.0;
  double fh_objective = 0.0;
  double c_l = 0.0;
  double c_q = 0.0;
  double c_d = 0.0;
  double mean_cluster_size = 0.0;
  double p5_dl_se = 0.0;
  double p5_ul_se = 0.0;
  int unserved = 0;
  std::string solver_status;
  bool validated = false;
  double wall_time_s = 0.0;  // reported in run metadata, not in the CSV
  std::vector<LinkLoadReport::Entry> link_loads;  // filled when dumping loads
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string config_hash;
  std::uint64_t seed = 0;
};

// Per-(drop, K) physical-layer state shared by the distortion sweep; exposed
// for tests and for the acceptance suite.
struct DropPhyState {
  NetworkLayout layout;
  Eigen::MatrixXd lsfc;
  SnrCalibration cal;
  ClusterGraph clusters;
  BasisTable bases;
  PilotAssignment pilots;
  ObservationStats stats;
  double sigma2_min = 0.0;
};

DropPhyState prepare_drop(const ExperimentConfig& cfg, int num_ues, int drop);

// Linear-interpolation percentile with inclusive endpoints: rank p*(n-1) on
// the sorted values. p in [0, 1]; the list must be non-empty.
double percentile(std::vector<double> values, double p);

SweepResult run_sweep(const ExperimentConfig& cfg);

// results.csv (fixed column set), run_meta.json, and optionally
// link_loads.csv under cfg.output_dir.
void write_outputs(const SweepResult& result, const ExperimentConfig& cfg);

std::string results_csv(const SweepResult& result);

}  // namespace cfran
