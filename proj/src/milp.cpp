// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include "cfran/milp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

namespace cfran {

namespace {

std::string idx2(const char* base, int a, int b) {
  return std::string(base) + "_" + std::to_string(a) + "_" + std::to_string(b);
}

std::string idx3(const char* base, int a, int b, int c) {
  return idx2(base, a, b) + "_" + std::to_string(c);
}

}  // namespace

double MilpModel::objective_value(const std::vector<double>& x) const {
  double obj = 0.0;
  for (std::size_t j = 0; j < objective.size(); ++j) obj += objective[j] * x[j];
  return obj;
}

std::string to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal: return "optimal";
    case MilpStatus::kFeasibleWithGap: return "feasible-with-gap";
    case MilpStatus::kInfeasible: return "infeasible";
    case MilpStatus::kTimeLimit: return "time-limit";
  }
  return "unknown";
}

MilpModel build_milp(const FronthaulGraph& graph, const TrafficDemand& demand,
                     const std::vector<double>& du_capacity,
                     const ObjectiveWeights& weights) {
  if (static_cast<int>(du_capacity.size()) != graph.num_dus) {
    throw std::invalid_argument("build_milp: du_capacity size mismatch");
  }
  const int K = static_cast<int>(demand.serving.size());
  const double g_dl = demand.gamma_dl;
  const double g_ul = 1.0 - g_dl;

  MilpModel model;
  model.weights = weights;

  auto add_var = [&](std::string name, double lb, double ub, bool binary) {
    model.var_names.push_back(std::move(name));
    model.objective.push_back(0.0);
    model.lower.push_back(lb);
    model.upper.push_back(ub);
    model.is_binary.push_back(binary ? 1 : 0);
    return static_cast<int>(model.var_names.size()) - 1;
  };

  for (int k = 0; k < K; ++k) {
    if (!demand.serving[k].empty()) model.users.push_back(k);
  }

  // Reachability diagnostic: every instantiated user needs a router path
  // from its serving RUs to at least one DU.
  {
    std::vector<char> seen(static_cast<std::size_t>(graph.num_routers), 0);
    for (int k : model.users) {
      std::fill(seen.begin(), seen.end(), 0);
      std::queue<int> frontier;
      for (int l : demand.serving[k]) {
        for (int q : graph.routers_of_ru(l)) {
          if (!seen[q]) {
            seen[q] = 1;
            frontier.push(q);
          }
        }
      }
      while (!frontier.empty()) {
        const int q = frontier.front();
        frontier.pop();
        for (int nb : graph.router_neighbors(q)) {
          if (!seen[nb]) {
            seen[nb] = 1;
            frontier.push(nb);
          }
        }
      }
      bool reaches_du = false;
      for (const auto& [q, n] : graph.router_du) reaches_du |= seen[q] != 0;
      if (!reaches_du) {
        model.infeasible_at_build = true;
        model.build_diagnostic =
            "user " + std::to_string(k) + " has no fronthaul path to any DU";
      }
    }
  }

  // Directed router-router arcs, one per direction of each physical link.
  std::vector<std::pair<int, int>> rr_arcs;
  for (const auto& [a, b] : graph.router_router) {
    rr_arcs.emplace_back(a, b);
    rr_arcs.emplace_back(b, a);
  }
  std::sort(rr_arcs.begin(), rr_arcs.end());

  model.c_l_var = add_var("C_L", 0.0, lp::kInf, false);
  model.c_q_var = add_var("C_Q", 0.0, lp::kInf, false);
  model.c_d_var = add_var("C_D", 0.0, lp::kInf, false);
  model.objective[model.c_l_var] = weights.ru_router;
  model.objective[model.c_q_var] = weights.router_router;
  model.objective[model.c_d_var] = weights.router_du;

  // Per-user variables. UL RU egress gets its per-link cap as an upper bound.
  const int nu = static_cast<int>(model.users.size());
  std::vector<std::map<std::pair<int, int>, int>> xru(nu), xfh(nu), xdu(nu);
  std::vector<std::map<std::pair<int, int>, int>> yru(nu), yfh(nu), ydu(nu);
  model.b_vars.assign(static_cast<std::size_t>(nu), {});

  for (int u = 0; u < nu; ++u) {
    const int k = model.users[u];
    for (int l : demand.serving[k]) {
      const double cap = g_ul * demand.ul_bits(l, k);
      for (int q : graph.routers_of_ru(l)) {
        xru[u][{l, q}] = add_var(idx3("xru", k, l, q), 0.0, cap, false);
        yru[u][{q, l}] = add_var(idx3("yru", k, q, l), 0.0, lp::kInf, false);
      }
    }
    for (const auto& arc : rr_arcs) {
      xfh[u][arc] = add_var(idx3("xfh", k, arc.first, arc.second), 0.0, lp::kInf, false);
      yfh[u][arc] = add_var(idx3("yfh", k, arc.first, arc.second), 0.0, lp::kInf, false);
    }
    for (const auto& [q, n] : graph.router_du) {
      xdu[u][{q, n}] = add_var(idx3("xdu", k, q, n), 0.0, lp::kInf, false);
      ydu[u][{n, q}] = add_var(idx3("ydu", k, n, q), 0.0, lp::kInf, false);
    }
    for (int n = 0; n < graph.num_dus; ++n) {
      model.b_vars[u].push_back(add_var(idx2("b", k, n), 0.0, 1.0, true));
    }
  }

  auto add_row = [&](std::string name, lp::RowSense sense, double rhs) {
    model.rows.push_back({std::move(name), sense, rhs, {}});
    return &model.rows.back();
  };

  for (int u = 0; u < nu; ++u) {
    const int k = model.users[u];
    const double source_sum = [&] {
      double s = 0.0;
      for (int l : demand.serving[k]) s += g_ul * demand.ul_bits(l, k);
      return s;
    }();
    const double dl_demand = g_dl * demand.dl_bits(k);

    // UL flow conservation at every router.
    for (int q = 0; q < graph.num_routers; ++q) {
      auto* row = add_row(idx2("ul_conserve", k, q), lp::RowSense::kEq, 0.0);
      for (const auto& [arc, var] : xru[u]) {
        if (arc.second == q) row->terms.emplace_back(var, 1.0);
      }
      for (const auto& [arc, var] : xfh[u]) {
        if (arc.second == q) row->terms.emplace_back(var, 1.0);
        if (arc.first == q) row->terms.emplace_back(var, -1.0);
      }
      for (const auto& [arc, var] : xdu[u]) {
        if (arc.first == q) row->terms.emplace_back(var, -1.0);
      }
      if (row->terms.empty()) model.rows.pop_back();
    }

    // UL source demand per serving RU.
    for (int l : demand.serving[k]) {
      auto* row = add_row(idx2("ul_source", k, l), lp::RowSense::kGe,
                          g_ul * demand.ul_bits(l, k));
      for (const auto& [arc, var] : xru[u]) {
        if (arc.first == l) row->terms.emplace_back(var, 1.0);
      }
    }

    // Exactly one hosting DU.
    {
      auto* row = add_row("place_" + std::to_string(k), lp::RowSense::kEq, 1.0);
      for (int var : model.b_vars[u]) row->terms.emplace_back(var, 1.0);
    }

    // DU ingress: at least the summed source rates when hosting, and per
    // link at most the summed source rates when hosting (zero otherwise).
    for (int n = 0; n < graph.num_dus; ++n) {
      auto* row = add_row(idx2("ul_sink", k, n), lp::RowSense::kGe, 0.0);
      for (const auto& [arc, var] : xdu[u]) {
        if (arc.second == n) row->terms.emplace_back(var, 1.0);
      }
      row->terms.emplace_back(model.b_vars[u][n], -source_sum);
    }
    for (const auto& [arc, var] : xdu[u]) {
      auto* row = add_row(idx3("ul_sink_link", k, arc.first, arc.second),
                          lp::RowSense::kLe, 0.0);
      row->terms.emplace_back(var, 1.0);
      row->terms.emplace_back(model.b_vars[u][arc.second], -source_sum);
    }

    // DL multicast relaxation: each single router output is covered by the
    // router's total input, per output link.
    for (const auto& [arc, var] : yru[u]) {
      const int q = arc.first;
      auto* row = add_row(idx3("dl_copy_ru", k, q, arc.second),
                          lp::RowSense::kGe, 0.0);
      for (const auto& [darc, dvar] : ydu[u]) {
        if (darc.second == q) row->terms.emplace_back(dvar, 1.0);
      }
      for (const auto& farc_var : yfh[u]) {
        if (farc_var.first.second == q) row->terms.emplace_back(farc_var.second, 1.0);
      }
      row->terms.emplace_back(var, -1.0);
    }
    for (const auto& [arc, var] : yfh[u]) {
      const int q = arc.first;
      auto* row = add_row(idx3("dl_copy_fh", k, q, arc.second),
                          lp::RowSense::kGe, 0.0);
      for (const auto& [darc, dvar] : ydu[u]) {
        if (darc.second == q) row->terms.emplace_back(dvar, 1.0);
      }
      for (const auto& farc_var : yfh[u]) {
        if (farc_var.first.second == q) row->terms.emplace_back(farc_var.second, 1.0);
      }
      row->terms.emplace_back(var, -1.0);
    }

    // DL DU egress: the hosting DU transmits at least the DL rate in total
    // and at most the DL rate per link; non-hosting DUs transmit nothing.
    for (int n = 0; n < graph.num_dus; ++n) {
      auto* row = add_row(idx2("dl_source", k, n), lp::RowSense::kGe, 0.0);
      for (const auto& [arc, var] : ydu[u]) {
        if (arc.first == n) row->terms.emplace_back(var, 1.0);
      }
      row->terms.emplace_back(model.b_vars[u][n], -dl_demand);
    }
    for (const auto& [arc, var] : ydu[u]) {
      auto* row = add_row(idx3("dl_source_link", k, arc.first, arc.second),
                          lp::RowSense::kLe, 0.0);
      row->terms.emplace_back(var, 1.0);
      row->terms.emplace_back(model.b_vars[u][arc.first], -dl_demand);
    }

    // Every serving RU receives the DL bits.
    for (int l : demand.serving[k]) {
      auto* row = add_row(idx2("dl_ru", k, l), lp::RowSense::kGe, dl_demand);
      for (const auto& [arc, var] : yru[u]) {
        if (arc.second == l) row->terms.emplace_back(var, 1.0);
      }
    }
  }

  // Per-DU computation limits.
  for (int n = 0; n < graph.num_dus; ++n) {
    auto* row = add_row("du_capacity_" + std::to_string(n), lp::RowSense::kLe,
                        du_capacity[n]);
    for (int u = 0; u < nu; ++u) row->terms.emplace_back(model.b_vars[u][n], 1.0);
    if (row->terms.empty()) model.rows.pop_back();
  }

  // Half-duplex capacity rows and the link bookkeeping for load reports.
  for (const auto& [l, q] : graph.ru_router) {
    MilpModel::Link link{0, l, q, {}};
    auto* row = add_row(idx2("cap_lq", l, q), lp::RowSense::kLe, 0.0);
    for (int u = 0; u < nu; ++u) {
      if (auto it = xru[u].find({l, q}); it != xru[u].end()) {
        row->terms.emplace_back(it->second, 1.0);
        link.vars.push_back(it->second);
      }
      if (auto it = yru[u].find({q, l}); it != yru[u].end()) {
        row->terms.emplace_back(it->second, 1.0);
        link.vars.push_back(it->second);
      }
    }
    row->terms.emplace_back(model.c_l_var, -1.0);
    model.links.push_back(std::move(link));
  }
  for (const auto& [a, b] : graph.router_router) {
    MilpModel::Link link{1, a, b, {}};
    auto* row = add_row(idx2("cap_qq", a, b), lp::RowSense::kLe, 0.0);
    for (int u = 0; u < nu; ++u) {
      for (const auto arc : {std::pair{a, b}, std::pair{b, a}}) {
        if (auto it = xfh[u].find(arc); it != xfh[u].end()) {
          row->terms.emplace_back(it->second, 1.0);
          link.vars.push_back(it->second);
        }
        if (auto it = yfh[u].find(arc); it != yfh[u].end()) {
          row->terms.emplace_back(it->second, 1.0);
          link.vars.push_back(it->second);
        }
      }
    }
    row->terms.emplace_back(model.c_q_var, -1.0);
    model.links.push_back(std::move(link));
  }
  for (const auto& [q, n] : graph.router_du) {
    MilpModel::Link link{2, q, n, {}};
    auto* row = add_row(idx2("cap_qn", q, n), lp::RowSense::kLe, 0.0);
    for (int u = 0; u < nu; ++u) {
      if (auto it = xdu[u].find({q, n}); it != xdu[u].end()) {
        row->terms.emplace_back(it->second, 1.0);
        link.vars.push_back(it->second);
      }
      if (auto it = ydu[u].find({n, q}); it != ydu[u].end()) {
        row->terms.emplace_back(it->second, 1.0);
        link.vars.push_back(it->second);
      }
    }
    row->terms.emplace_back(model.c_d_var, -1.0);
    model.links.push_back(std::move(link));
  }

  return model;
}

ValidationReport validate_solution(const MilpModel& model,
                                   const MilpSolution& solution, double tol) {
  ValidationReport report;
  const auto& x = solution.values;
  if (static_cast<int>(x.size()) != model.num_vars()) {
    report.violations.push_back({"solution size mismatch", 0.0});
    return report;
  }

  for (int j = 0; j < model.num_vars(); ++j) {
    if (x[j] < model.lower[j] - tol) {
      report.violations.push_back(
          {"lower bound of " + model.var_names[j], model.lower[j] - x[j]});
    }
    if (x[j] > model.upper[j] + tol) {
      report.violations.push_back(
          {"upper bound of " + model.var_names[j], x[j] - model.upper[j]});
    }
    if (model.is_binary[j]) {
      const double frac = std::abs(x[j] - std::round(x[j]));
      if (frac > 1e-6) {
        report.violations.push_back({"integrality of " + model.var_names[j], frac});
      }
    }
  }

  for (const auto& row : model.rows) {
    double activity = 0.0;
    for (const auto& [j, a] : row.terms) activity += a * x[j];
    double excess = 0.0;
    switch (row.sense) {
      case lp::RowSense::kLe: excess = activity - row.rhs; break;
      case lp::RowSense::kGe: excess = row.rhs - activity; break;
      case lp::RowSense::kEq: excess = std::abs(activity - row.rhs); break;
    }
    if (excess > tol) report.violations.push_back({"row " + row.name, excess});
    ++report.rows_checked;
  }

  report.objective_recomputed = model.objective_value(x);
  report.objective_reported = solution.objective;
  if (std::abs(report.objective_recomputed - solution.objective) > tol) {
    report.violations.push_back(
        {"objective mismatch",
         std::abs(report.objective_recomputed - solution.objective)});
  }

  const LinkLoadReport loads = link_load_report(model, solution);
  report.max_load_ru_router = loads.c_l;
  report.max_load_router_router = loads.c_q;
  report.max_load_router_du = loads.c_d;
  const double c_l = model.c_l_var >= 0 ? x[model.c_l_var] : 0.0;
  const double c_q = model.c_q_var >= 0 ? x[model.c_q_var] : 0.0;
  const double c_d = model.c_d_var >= 0 ? x[model.c_d_var] : 0.0;
  if (loads.c_l > c_l + tol) {
    report.violations.push_back({"C_L below the maximum RU-router load",
                                 loads.c_l - c_l});
  }
  if (loads.c_q > c_q + tol) {
    report.violations.push_back({"C_Q below the maximum router-router load",
                                 loads.c_q - c_q});
  }
  if (loads.c_d > c_d + tol) {
    report.violations.push_back({"C_D below the maximum router-DU load",
                                 loads.c_d - c_d});
  }
  return report;
}

LinkLoadReport link_load_report(const MilpModel& model,
                                const MilpSolution& solution) {
  LinkLoadReport report;
  for (const auto& link : model.links) {
    double load = 0.0;
    for (int var : link.vars) load += solution.values[var];
    report.per_link.push_back({link.link_class, link.a, link.b, load});
    if (link.link_class == 0) report.c_l = std::max(report.c_l, load);
    if (link.link_class == 1) report.c_q = std::max(report.c_q, load);
    if (link.link_class == 2) report.c_d = std::max(report.c_d, load);
  }
  report.objective = model.weights.ru_router * report.c_l +
                     model.weights.router_router * report.c_q +
                     model.weights.router_du * report.c_d;
  return report;
}

}  // namespace cfran
