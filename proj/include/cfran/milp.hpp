// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "cfran/clustering.hpp"
#include "cfran/fronthaul_graph.hpp"
#include "cfran/simplex.hpp"

namespace cfran {

// Per-RB fronthaul traffic. ul_bits(l, k) is the quantization rate of the
// surviving association edge (zero elsewhere), dl_bits(k) the DL information
// rate. The TDD split gamma_dl weighs DL demands; (1 - gamma_dl) the UL ones.
struct TrafficDemand {
  Eigen::MatrixXd ul_bits;                // L x K
  Eigen::VectorXd dl_bits;                // K
  double gamma_dl = 0.8;
  std::vector<std::vector<int>> serving;  // pruned cluster per UE
};

struct ObjectiveWeights {
  double ru_router = 1.0;   // eta_L
  double router_router = 1.0;  // eta_Q
  double router_du = 1.0;   // eta_D
};

// Joint cluster-processor placement and fronthaul routing model. Variables:
// binary placements b(k,n); per-user UL unicast flows on RU-router,
// router-router (both directions) and router-DU links; per-user DL multicast
// flows on the reverse legs; and the three class-maximum loads C_L, C_Q, C_D
// that form the objective. Constraint rows follow the flow model: per-router
// UL flow conservation, per-edge UL source demands (their per-link caps are
// kept as variable bounds), exactly-one placement, per-DU computation limits,
// placement-coupled DU ingress/egress rows, per-output DL multicast rows, DL
// RU demand rows, and half-duplex link capacity rows that sum UL and DL (and
// both directions on router-router links) against the class maxima.
struct MilpModel {
  std::vector<std::string> var_names;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::uint8_t> is_binary;

  struct Row {
    std::string name;
    lp::RowSense sense = lp::RowSense::kLe;
    double rhs = 0.0;
    std::vector<std::pair<int, double>> terms;
  };
  std::vector<Row> rows;

  // Physical links for load reporting: class 0 = RU-router, 1 =
  // router-router, 2 = router-DU; vars lists every flow variable on the link.
  struct Link {
    int link_class = 0;
    int a = 0;
    int b = 0;
    std::vector<int> vars;
  };
  std::vector<Link> links;

  int c_l_var = -1;
  int c_q_var = -1;
  int c_d_var = -1;
  ObjectiveWeights weights;

  std::vector<int> users;               // UEs instantiated in the model
  std::vector<std::vector<int>> b_vars; // per instantiated user, N entries

  bool infeasible_at_build = false;
  std::string build_diagnostic;

  int num_vars() const { return static_cast<int>(var_names.size()); }
  double objective_value(const std::vector<double>& x) const;
};

// Emits the flow/placement model for the given demands. du_capacity holds
// Z_n per DU. Users with an empty pruned cluster carry no demand and are
// left out of the model.
MilpModel build_milp(const FronthaulGraph& graph, const TrafficDemand& demand,
                     const std::vector<double>& du_capacity,
                     const ObjectiveWeights& weights);

enum class MilpStatus { kOptimal, kFeasibleWithGap, kInfeasible, kTimeLimit };

std::string to_string(MilpStatus status);

struct MilpSolution {
  MilpStatus status = MilpStatus::kInfeasible;
  double objective = 0.0;
  double best_bound = 0.0;
  std::vector<double> values;
  long nodes = 0;
  long lp_iterations = 0;
};

// Re-checks a solution against every row, bound and integrality requirement
// and recomputes the objective and the per-class maximum loads. Never
// mutates; violations are reported with the offending row name.
struct ValidationReport {
  struct Violation {
    std::string what;
    double amount = 0.0;
  };
  std::vector<Violation> violations;
  double objective_recomputed = 0.0;
  double objective_reported = 0.0;
  double max_load_ru_router = 0.0;
  double max_load_router_router = 0.0;
  double max_load_router_du = 0.0;
  int rows_checked = 0;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate_solution(const MilpModel& model,
                                   const MilpSolution& solution, double tol);

// Per-physical-link loads (UL plus DL, both directions on router-router
// links), the per-class maxima and the weighted objective they induce.
struct LinkLoadReport {
  struct Entry {
    int link_class = 0;
    int a = 0;
    int b = 0;
    double load = 0.0;
  };
  std::vector<Entry> per_link;
  double c_l = 0.0;
  double c_q = 0.0;
  double c_d = 0.0;
  double objective = 0.0;
};

LinkLoadReport link_load_report(const MilpModel& model,
                                const MilpSolution& solution);

}  // namespace cfran
