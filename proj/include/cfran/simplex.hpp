// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace cfran::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { kLe, kGe, kEq };

// Linear program  min c'x  s.t.  rows, lb <= x <= ub.
struct Problem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;

  struct Row {
    RowSense sense = RowSense::kLe;
    double rhs = 0.0;
    std::vector<std::pair<int, double>> terms;  // (column, coefficient)
  };
  std::vector<Row> rows;

  int add_var(double cost, double lb, double ub) {
    objective.push_back(cost);
    lower.push_back(lb);
    upper.push_back(ub);
    return num_vars++;
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterLimit };

// Basis snapshot for warm starts across related solves.
struct Basis {
  std::vector<int> basic;          // column index per row
  std::vector<std::uint8_t> state; // per column: 0 = at lower, 1 = at upper, 2 = basic
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;  // structural variables only
  Basis basis;
  long iterations = 0;
};

// Bounded-variable two-phase revised primal simplex. The basis inverse is
// maintained as a sparse LU factorization plus product-form eta updates and
// refactorized periodically. Pricing is Dantzig with a Bland least-index
// fallback that engages after a long run of degenerate pivots, which
// guarantees termination. Feasibility is restored by a composite phase 1
// that minimizes the total bound violation of the basic variables, so the
// solver can start from an arbitrary (e.g. parent-node) basis.
class SimplexSolver {
 public:
  explicit SimplexSolver(const Problem& problem);
  ~SimplexSolver();

  SimplexSolver(const SimplexSolver&) = delete;
  SimplexSolver& operator=(const SimplexSolver&) = delete;

  // Adjusts the bounds of a structural variable between solves.
  void set_bounds(int var, double lb, double ub);
  std::pair<double, double> bounds(int var) const;

  LpResult solve(const Basis* warm_start = nullptr, long iteration_limit = 0);

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace cfran::lp
