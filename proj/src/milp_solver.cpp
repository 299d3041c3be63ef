// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include "cfran/milp_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <queue>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "cfran/lp_format.hpp"
#include "cfran/simplex.hpp"

namespace cfran {

namespace {

constexpr double kIntTol = 1e-6;

lp::Problem to_lp(const MilpModel& model) {
  lp::Problem p;
  p.num_vars = model.num_vars();
  p.objective = model.objective;
  p.lower = model.lower;
  p.upper = model.upper;
  p.rows.reserve(model.rows.size());
  for (const auto& row : model.rows) {
    p.rows.push_back({row.sense, row.rhs, row.terms});
  }
  return p;
}

struct Node {
  double bound = 0.0;
  int depth = 0;
  long seq = 0;
  std::vector<std::pair<int, int>> fixings;  // (b var, value)
  lp::Basis basis;
};

struct NodeOrder {
  bool operator()(const std::shared_ptr<Node>& a,
                  const std::shared_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;  // min bound first
    if (a->depth != b->depth) return a->depth < b->depth;  // deeper first
    return a->seq > b->seq;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const SolverConfig& config)
      : model_(model),
        config_(config),
        solver_(to_lp(model)),
        deadline_(std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(config.time_limit_s))) {
    for (const auto& per_user : model.b_vars) {
      for (int var : per_user) binaries_.push_back(var);
    }
  }

  MilpSolution run() {
    MilpSolution out;
    if (model_.infeasible_at_build) {
      out.status = MilpStatus::kInfeasible;
      return out;
    }

    auto root = std::make_shared<Node>();
    apply_fixings(root->fixings);
    lp::LpResult root_lp = solver_.solve(nullptr, 0);
    lp_iterations_ += root_lp.iterations;
    if (root_lp.status == lp::LpStatus::kInfeasible) {
      out.status = MilpStatus::kInfeasible;
      return out;
    }
    if (root_lp.status != lp::LpStatus::kOptimal) {
      out.status = MilpStatus::kTimeLimit;
      return out;
    }

    root->bound = root_lp.objective;
    root->basis = root_lp.basis;
    heap_.push(root);
    dive(root_lp, root->fixings, root->basis);

    bool hit_node_limit = false;
    bool hit_time_limit = false;
    while (!heap_.empty()) {
      if (have_incumbent_ &&
          heap_.top()->bound >= incumbent_obj_ - config_.abs_gap) {
        // Every open node is already within the gap of the incumbent.
        heap_ = {};
        break;
      }
      if (nodes_ >= config_.node_limit) {
        hit_node_limit = true;
        break;
      }
      if (std::chrono::steady_clock::now() > deadline_) {
        hit_time_limit = true;
        break;
      }

      auto node = heap_.top();
      heap_.pop();
      ++nodes_;

      apply_fixings(node->fixings);
      lp::LpResult res = solver_.solve(&node->basis, 0);
      lp_iterations_ += res.iterations;
      if (res.status == lp::LpStatus::kInfeasible) continue;
      if (res.status != lp::LpStatus::kOptimal) {
        hit_time_limit = true;  // LP iteration limit: report honestly below
        break;
      }
      if (have_incumbent_ && res.objective >= incumbent_obj_ - config_.abs_gap) {
        continue;
      }

      const int branch_var = most_fractional(res.x);
      if (branch_var < 0) {
        // Integral relaxation: re-solve with the placements pinned so the
        // incumbent carries exactly integral values.
        dive(res, node->fixings, res.basis);
        continue;
      }
      if (nodes_ % 8 == 0) dive(res, node->fixings, res.basis);

      for (int value : {1, 0}) {
        auto child = std::make_shared<Node>();
        child->bound = res.objective;
        child->depth = node->depth + 1;
        child->seq = ++seq_;
        child->fixings = node->fixings;
        child->fixings.emplace_back(branch_var, value);
        child->basis = res.basis;
        heap_.push(child);
      }
    }

    double best_open = std::numeric_limits<double>::infinity();
    if (!heap_.empty()) best_open = heap_.top()->bound;

    out.nodes = nodes_;
    out.lp_iterations = lp_iterations_;
    if (!have_incumbent_) {
      // Limits hit before any integral solution: force one from a dive off
      // the root relaxation so callers always get usable values.
      apply_fixings({});
      lp::LpResult res = solver_.solve(nullptr, 0);
      lp_iterations_ += res.iterations;
      if (res.status == lp::LpStatus::kOptimal) dive(res, {}, res.basis);
    }
    if (!have_incumbent_) {
      out.status = hit_time_limit ? MilpStatus::kTimeLimit : MilpStatus::kInfeasible;
      return out;
    }

    out.objective = incumbent_obj_;
    out.values = incumbent_x_;
    out.best_bound = std::min(best_open, incumbent_obj_);
    if (hit_time_limit) {
      out.status = MilpStatus::kTimeLimit;
    } else if (hit_node_limit &&
               best_open < incumbent_obj_ - config_.abs_gap) {
      out.status = MilpStatus::kFeasibleWithGap;
    } else {
      out.status = MilpStatus::kOptimal;
    }
    return out;
  }

 private:
  void apply_fixings(const std::vector<std::pair<int, int>>& fixings) {
    for (int var : binaries_) solver_.set_bounds(var, 0.0, 1.0);
    for (const auto& [var, value] : fixings) {
      solver_.set_bounds(var, value, value);
    }
  }

  int most_fractional(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = kIntTol;
    for (int var : binaries_) {
      const double frac = std::min(x[var], 1.0 - x[var]);
      if (frac > best_frac) {
        best_frac = frac;
        best = var;
      }
    }
    return best;
  }

  void update_incumbent(double objective, const std::vector<double>& x) {
    if (!have_incumbent_ || objective < incumbent_obj_) {
      have_incumbent_ = true;
      incumbent_obj_ = objective;
      incumbent_x_ = x;
    }
  }

  // LP-rounding dive: assign every user to its largest fractional placement
  // respecting the DU capacities, re-solve the routing LP with the
  // placements fixed and take the result as an incumbent candidate.
  void dive(const lp::LpResult& relax,
            const std::vector<std::pair<int, int>>& fixings,
            const lp::Basis& basis) {
    if (model_.b_vars.empty()) {
      if (most_fractional(relax.x) < 0) update_incumbent(relax.objective, relax.x);
      return;
    }
    const int num_dus = static_cast<int>(model_.b_vars[0].size());
    std::vector<double> capacity(du_capacities());
    std::vector<int> choice(model_.b_vars.size(), -1);

    for (std::size_t u = 0; u < model_.b_vars.size(); ++u) {
      std::vector<int> order(static_cast<std::size_t>(num_dus));
      for (int n = 0; n < num_dus; ++n) order[n] = n;
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return relax.x[model_.b_vars[u][a]] > relax.x[model_.b_vars[u][b]];
      });
      for (int n : order) {
        if (capacity[n] >= 1.0) {
          choice[u] = n;
          capacity[n] -= 1.0;
          break;
        }
      }
      if (choice[u] < 0) return;  // capacities exhausted; no dive
    }

    // Respect existing branch fixings: a conflicting assignment would make
    // the dive LP infeasible anyway, so just skip it.
    for (const auto& [var, value] : fixings) {
      for (std::size_t u = 0; u < model_.b_vars.size(); ++u) {
        for (int n = 0; n < num_dus; ++n) {
          if (model_.b_vars[u][n] != var) continue;
          if (value == 1 && choice[u] != n) return;
          if (value == 0 && choice[u] == n) return;
        }
      }
    }

    std::vector<std::pair<int, int>> fixed;
    for (std::size_t u = 0; u < model_.b_vars.size(); ++u) {
      for (int n = 0; n < num_dus; ++n) {
        fixed.emplace_back(model_.b_vars[u][n], n == choice[u] ? 1 : 0);
      }
    }
    apply_fixings(fixed);
    lp::LpResult res = solver_.solve(&basis, 0);
    lp_iterations_ += res.iterations;
    if (res.status == lp::LpStatus::kOptimal) {
      update_incumbent(res.objective, res.x);
    }
  }

  std::vector<double> du_capacities() const {
    // Recover Z_n from the du_capacity rows; default to +inf when a DU has
    // no capacity row (no users instantiated).
    const int num_dus = model_.b_vars.empty()
                            ? 0
                            : static_cast<int>(model_.b_vars[0].size());
    std::vector<double> cap(static_cast<std::size_t>(num_dus),
                            std::numeric_limits<double>::infinity());
    for (const auto& row : model_.rows) {
      if (row.name.rfind("du_capacity_", 0) == 0) {
        const int n = std::stoi(row.name.substr(12));
        if (n >= 0 && n < num_dus) cap[n] = row.rhs;
      }
    }
    return cap;
  }

  const MilpModel& model_;
  SolverConfig config_;
  lp::SimplexSolver solver_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<int> binaries_;
  std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>,
                      NodeOrder>
      heap_;
  bool have_incumbent_ = false;
  double incumbent_obj_ = 0.0;
  std::vector<double> incumbent_x_;
  long nodes_ = 0;
  long seq_ = 0;
  long lp_iterations_ = 0;
};

std::string substitute(std::string tmpl, const std::string& key,
                       const std::string& value) {
  const std::string token = "{" + key + "}";
  for (std::size_t pos = tmpl.find(token); pos != std::string::npos;
       pos = tmpl.find(token)) {
    tmpl.replace(pos, token.size(), value);
  }
  return tmpl;
}

MilpSolution solve_external(const MilpModel& model, const SolverConfig& config) {
  if (config.command.empty()) {
    throw std::invalid_argument("external solver requested without a command");
  }
  const std::string dir = config.work_dir.empty() ? "." : config.work_dir;
  const std::string lp_path = dir + "/cfran_model.lp";
  const std::string sol_path = dir + "/cfran_model.sol";

  std::ofstream lp_file(lp_path);
  if (!lp_file) throw std::runtime_error("cannot write " + lp_path);
  lp_file << write_lp(model);
  lp_file.close();
  std::remove(sol_path.c_str());

  std::string cmd = substitute(config.command, "lp", lp_path);
  cmd = substitute(cmd, "sol", sol_path);
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    throw std::runtime_error("external solver failed with exit code " +
                             std::to_string(rc));
  }

  std::ifstream sol_file(sol_path);
  if (!sol_file) throw std::runtime_error("external solver wrote no " + sol_path);
  std::stringstream buffer;
  buffer << sol_file.rdbuf();
  return parse_solution_file(model, buffer.str());
}

}  // namespace

MilpSolution parse_solution_file(const MilpModel& model,
                                 const std::string& text) {
  MilpSolution sol;
  sol.values.assign(static_cast<std::size_t>(model.num_vars()), 0.0);
  sol.status = MilpStatus::kOptimal;

  std::map<std::string, int> index;
  for (int j = 0; j < model.num_vars(); ++j) index[model.var_names[j]] = j;

  const auto assign = [&](const std::string& name, double value) {
    if (auto it = index.find(name); it != index.end()) {
      sol.values[static_cast<std::size_t>(it->second)] = value;
    }
  };

  if (text.find("<?xml") != std::string::npos ||
      text.find("<CPLEXSolution") != std::string::npos) {
    static const std::regex var_re(
        "<variable[^>]*name=\"([^\"]+)\"[^>]*value=\"([^\"]+)\"");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), var_re);
         it != std::sregex_iterator(); ++it) {
      assign((*it)[1].str(), std::stod((*it)[2].str()));
    }
  } else {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::string name;
      ls >> name;
      if (name == "status") {
        std::string status;
        ls >> status;
        if (status == "optimal") sol.status = MilpStatus::kOptimal;
        else if (status == "infeasible") sol.status = MilpStatus::kInfeasible;
        else if (status == "time-limit") sol.status = MilpStatus::kTimeLimit;
        else sol.status = MilpStatus::kFeasibleWithGap;
        continue;
      }
      if (name == "objective") continue;  // recomputed from the model
      double value = 0.0;
      if (ls >> value) assign(name, value);
    }
  }

  sol.objective = model.objective_value(sol.values);
  sol.best_bound = sol.objective;
  return sol;
}

MilpSolution solve_milp(const MilpModel& model, const SolverConfig& config) {
  if (model.infeasible_at_build) {
    MilpSolution sol;
    sol.status = MilpStatus::kInfeasible;
    return sol;
  }
  if (config.kind == SolverConfig::Kind::kExternal) {
    return solve_external(model, config);
  }
  BranchAndBound bb(model, config);
  return bb.run();
}

}  // namespace cfran
