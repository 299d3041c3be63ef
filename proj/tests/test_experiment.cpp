// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cfran/experiment.hpp"

using namespace cfran;

namespace {

// Small, fast configuration for pipeline tests.
ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.seed = 7;
  cfg.drops = 1;
  cfg.realizations = 4;
  cfg.threads = 2;
  cfg.num_rus = 4;
  cfg.antennas_per_ru = 4;
  cfg.grid_rows = 2;
  cfg.grid_cols = 2;
  cfg.tau_p = 5;
  cfg.coherence_block = 50;
  cfg.c_max = 3;
  cfg.k_list = {6};
  cfg.d_ratios = {1.0, 10.0};
  cfg.num_routers = 2;
  cfg.num_dus = 2;
  cfg.solver.node_limit = 2000;
  return cfg;
}

}  // namespace

TEST_CASE("percentile") {
  SUBCASE("interpolated rank on 1..100") {
    std::vector<double> values;
    for (int i = 1; i <= 100; ++i) values.push_back(i);
    CHECK(percentile(values, 0.05) == doctest::Approx(5.95));
  }
  SUBCASE("single element") {
    CHECK(percentile({42.0}, 0.0) == 42.0);
    CHECK(percentile({42.0}, 0.5) == 42.0);
    CHECK(percentile({42.0}, 1.0) == 42.0);
  }
  SUBCASE("endpoints") {
    std::vector<double> values{3.0, 1.0, 2.0};
    CHECK(percentile(values, 1.0) == 3.0);
    CHECK(percentile(values, 0.0) == 1.0);
  }
  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(percentile({}, 0.5), std::invalid_argument);
  }
}

TEST_CASE("config round trip and hashing") {
  ExperimentConfig cfg = tiny_config();
  const std::string text = cfg.to_json();
  const ExperimentConfig back = ExperimentConfig::from_json(text);
  CHECK(back.to_json() == text);
  CHECK(back.hash() == cfg.hash());

  ExperimentConfig other = cfg;
  other.seed = 8;
  CHECK(other.hash() != cfg.hash());

  CHECK_THROWS_AS(ExperimentConfig::from_json("{\"ran\": {\"gamma_dl\": 1.5}}"),
                  std::invalid_argument);
}

TEST_CASE("sweep output invariants") {
  const ExperimentConfig cfg = tiny_config();
  const SweepResult result = run_sweep(cfg);
  REQUIRE(result.rows.size() == 2);

  const double overhead = 1.0 - static_cast<double>(cfg.tau_p) / cfg.coherence_block;
  for (const auto& row : result.rows) {
    CHECK(row.se_tot == doctest::Approx(row.se_ul + row.se_dl).epsilon(1e-12));
    CHECK(row.se_ul >= 0.0);
    CHECK(row.se_dl >= 0.0);
    CHECK(row.mean_cluster_size <= cfg.c_max + 1e-12);
    CHECK(row.solver_status == "optimal");
    CHECK(row.validated);
    // The percentile SE cannot exceed the per-user average SE.
    CHECK(row.p5_dl_se <= cfg.gamma_dl * overhead * 10.0);
  }
  // Larger distortion prunes more and cannot grow the fronthaul objective.
  CHECK(result.rows[1].fh_objective <= result.rows[0].fh_objective + 1e-6);
  CHECK(result.rows[1].mean_cluster_size <= result.rows[0].mean_cluster_size);
}

TEST_CASE("sweeps are deterministic") {
  const ExperimentConfig cfg = tiny_config();
  const SweepResult a = run_sweep(cfg);
  ExperimentConfig cfg_serial = cfg;
  cfg_serial.threads = 1;
  const SweepResult b = run_sweep(cfg_serial);
  // Same seed, different thread counts: byte-identical CSV text.
  CHECK(results_csv(a) == results_csv(b));

  ExperimentConfig other = cfg;
  other.seed = 1234;
  const SweepResult c = run_sweep(other);
  CHECK(results_csv(a) != results_csv(c));
}

TEST_CASE("csv schema") {
  const ExperimentConfig cfg = tiny_config();
  const SweepResult result = run_sweep(cfg);
  const std::string csv = results_csv(result);
  CHECK(csv.rfind("config_hash,seed,drop,K,D_ratio,D_abs,SE_ul,SE_dl,SE_tot,"
                  "fh_objective,C_L,C_Q,C_D,mean_cluster_size,p5_dl_se,"
                  "p5_ul_se,unserved,solver_status,validated\n",
                  0) == 0);
  // One header plus one line per row.
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(result.rows.size()) + 1);
}

TEST_CASE("prepare_drop exposes consistent physical state") {
  const ExperimentConfig cfg = tiny_config();
  const DropPhyState state = prepare_drop(cfg, 6, 0);
  CHECK(state.layout.num_ues() == 6);
  CHECK(state.lsfc.rows() == cfg.num_rus);
  CHECK(state.sigma2_min > 0.0);
  CHECK(state.stats.sample_count == cfg.realizations);
  // sigma2_min is the minimum over association edges.
  double smallest = 1e300;
  for (int l = 0; l < cfg.num_rus; ++l) {
    for (int k : state.clusters.served(l)) {
      smallest = std::min(smallest, state.stats.sigma2(l, k));
    }
  }
  CHECK(state.sigma2_min == doctest::Approx(smallest));
}
