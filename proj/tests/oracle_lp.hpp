// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors
//
// Test-only dense LP machinery. This is a deliberately independent oracle:
// a classic full-tableau two-phase simplex with artificial variables, plus a
// brute-force enumerator over integral placements. It shares no code with
// the production solver so disagreements point at real bugs.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cfran/milp.hpp"

namespace oracle {

struct DenseLp {
  int num_vars = 0;  // all variables >= 0; upper bounds must be added as rows
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<char> sense;  // '<', '>', '='
  std::vector<double> rhs;
};

enum class DenseStatus { kOptimal, kInfeasible, kUnbounded };

struct DenseResult {
  DenseStatus status = DenseStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

inline DenseResult solve_dense(DenseLp lp) {
  constexpr double kTol = 1e-9;
  const int m = static_cast<int>(lp.a.size());

  // Normalize to rhs >= 0.
  for (int i = 0; i < m; ++i) {
    if (lp.rhs[i] < 0.0) {
      lp.rhs[i] = -lp.rhs[i];
      for (auto& v : lp.a[i]) v = -v;
      lp.sense[i] = lp.sense[i] == '<' ? '>' : (lp.sense[i] == '>' ? '<' : '=');
    }
  }

  // Columns: structural, then one slack/surplus per inequality, then one
  // artificial per '>' or '=' row.
  int num_slack = 0;
  for (char s : lp.sense) num_slack += s == '=' ? 0 : 1;
  int num_art = 0;
  for (char s : lp.sense) num_art += s == '<' ? 0 : 1;
  const int total = lp.num_vars + num_slack + num_art;

  std::vector<std::vector<double>> tab(m, std::vector<double>(total + 1, 0.0));
  std::vector<int> basis(m, -1);
  int slack_at = lp.num_vars;
  int art_at = lp.num_vars + num_slack;
  const int art_begin = art_at;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < lp.num_vars; ++j) tab[i][j] = lp.a[i][j];
    tab[i][total] = lp.rhs[i];
    if (lp.sense[i] == '<') {
      tab[i][slack_at] = 1.0;
      basis[i] = slack_at++;
    } else if (lp.sense[i] == '>') {
      tab[i][slack_at] = -1.0;
      ++slack_at;
      tab[i][art_at] = 1.0;
      basis[i] = art_at++;
    } else {
      tab[i][art_at] = 1.0;
      basis[i] = art_at++;
    }
  }

  std::vector<char> banned(static_cast<std::size_t>(total), 0);

  const auto pivot = [&](int row, int col) {
    const double p = tab[row][col];
    for (double& v : tab[row]) v /= p;
    for (int i = 0; i < static_cast<int>(tab.size()); ++i) {
      if (i == row || tab[i][col] == 0.0) continue;
      const double f = tab[i][col];
      for (int j = 0; j <= total; ++j) tab[i][j] -= f * tab[row][j];
    }
    basis[row] = col;
  };

  // Price with Bland's rule against an explicit cost vector.
  const auto run = [&](const std::vector<double>& cost) -> DenseStatus {
    for (long iter = 0; iter < 100000; ++iter) {
      // Reduced costs d_j = c_j - c_B' B^-1 A_j computed from scratch.
      std::vector<double> dual(tab.size());
      for (std::size_t i = 0; i < tab.size(); ++i) dual[i] = cost[basis[i]];
      int enter = -1;
      for (int j = 0; j < total; ++j) {
        if (banned[j]) continue;
        double d = cost[j];
        for (std::size_t i = 0; i < tab.size(); ++i) d -= dual[i] * tab[i][j];
        if (d < -kTol) {
          enter = j;
          break;  // Bland: lowest index
        }
      }
      if (enter < 0) return DenseStatus::kOptimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < tab.size(); ++i) {
        if (tab[i][enter] > kTol) {
          const double ratio = tab[i][total] / tab[i][enter];
          if (ratio < best - kTol ||
              (ratio < best + kTol && (leave < 0 || basis[i] < basis[leave]))) {
            best = ratio;
            leave = static_cast<int>(i);
          }
        }
      }
      if (leave < 0) return DenseStatus::kUnbounded;
      pivot(leave, enter);
    }
    return DenseStatus::kUnbounded;  // iteration safety valve
  };

  // Phase 1.
  {
    std::vector<double> cost(static_cast<std::size_t>(total), 0.0);
    for (int j = art_begin; j < total; ++j) cost[j] = 1.0;
    run(cost);
    double infeas = 0.0;
    for (std::size_t i = 0; i < tab.size(); ++i) {
      if (basis[i] >= art_begin) infeas += tab[i][total];
    }
    if (infeas > 1e-7) return {DenseStatus::kInfeasible, 0.0, {}};

    // Drive leftover artificials out of the basis; delete redundant rows.
    for (int i = static_cast<int>(tab.size()) - 1; i >= 0; --i) {
      if (basis[i] < art_begin) continue;
      int col = -1;
      for (int j = 0; j < art_begin; ++j) {
        if (std::abs(tab[i][j]) > kTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        tab.erase(tab.begin() + i);
        basis.erase(basis.begin() + i);
      }
    }
    for (int j = art_begin; j < total; ++j) banned[j] = 1;
  }

  // Phase 2.
  std::vector<double> cost(static_cast<std::size_t>(total), 0.0);
  for (int j = 0; j < lp.num_vars; ++j) cost[j] = lp.c[j];
  const DenseStatus status = run(cost);
  if (status == DenseStatus::kUnbounded) return {status, 0.0, {}};

  DenseResult result;
  result.status = DenseStatus::kOptimal;
  result.x.assign(static_cast<std::size_t>(lp.num_vars), 0.0);
  for (std::size_t i = 0; i < tab.size(); ++i) {
    if (basis[i] < lp.num_vars) result.x[basis[i]] = tab[i][total];
  }
  for (int j = 0; j < lp.num_vars; ++j) result.objective += lp.c[j] * result.x[j];
  return result;
}

// Substitutes fixed binary values into a MILP, turning it into a pure LP over
// the continuous variables (finite upper bounds become rows). Returns false
// when a constant row is violated by the assignment.
inline bool reduce_with_fixed_binaries(const cfran::MilpModel& model,
                                       const std::vector<double>& b_values,
                                       DenseLp& out,
                                       std::vector<int>& dense_of_model) {
  constexpr double kTol = 1e-9;
  dense_of_model.assign(static_cast<std::size_t>(model.num_vars()), -1);
  out = DenseLp{};
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.is_binary[j]) continue;
    dense_of_model[j] = out.num_vars++;
    out.c.push_back(model.objective[j]);
  }
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.is_binary[j] || std::isinf(model.upper[j])) continue;
    std::vector<double> row(static_cast<std::size_t>(out.num_vars), 0.0);
    row[dense_of_model[j]] = 1.0;
    out.a.push_back(std::move(row));
    out.sense.push_back('<');
    out.rhs.push_back(model.upper[j]);
  }
  for (const auto& mrow : model.rows) {
    std::vector<double> row(static_cast<std::size_t>(out.num_vars), 0.0);
    double rhs = mrow.rhs;
    bool empty = true;
    for (const auto& [j, coef] : mrow.terms) {
      if (model.is_binary[j]) {
        rhs -= coef * b_values[j];
      } else {
        row[dense_of_model[j]] += coef;
        empty = false;
      }
    }
    if (empty) {
      const bool ok = mrow.sense == cfran::lp::RowSense::kLe ? 0.0 <= rhs + kTol
                      : mrow.sense == cfran::lp::RowSense::kGe
                          ? 0.0 >= rhs - kTol
                          : std::abs(rhs) <= kTol;
      if (!ok) return false;
      continue;
    }
    out.a.push_back(std::move(row));
    out.sense.push_back(mrow.sense == cfran::lp::RowSense::kLe   ? '<'
                        : mrow.sense == cfran::lp::RowSense::kGe ? '>'
                                                                 : '=');
    out.rhs.push_back(rhs);
  }
  return true;
}

// Minimum objective over every integral placement (each model user hosted by
// exactly one DU), each evaluated with the dense routing LP.
inline DenseResult enumerate_placements(const cfran::MilpModel& model) {
  const int users = static_cast<int>(model.b_vars.size());
  const int dus = users > 0 ? static_cast<int>(model.b_vars[0].size()) : 0;

  DenseResult best;
  best.status = DenseStatus::kInfeasible;

  std::vector<int> choice(static_cast<std::size_t>(users), 0);
  while (true) {
    std::vector<double> b(static_cast<std::size_t>(model.num_vars()), 0.0);
    for (int u = 0; u < users; ++u) b[model.b_vars[u][choice[u]]] = 1.0;

    DenseLp lp;
    std::vector<int> remap;
    if (reduce_with_fixed_binaries(model, b, lp, remap)) {
      const DenseResult r = solve_dense(lp);
      if (r.status == DenseStatus::kOptimal &&
          (best.status != DenseStatus::kOptimal || r.objective < best.objective)) {
        best = r;
      }
    }

    if (users == 0) break;
    int pos = 0;
    while (pos < users) {
      if (++choice[pos] < dus) break;
      choice[pos] = 0;
      ++pos;
    }
    if (pos == users) break;
  }
  return best;
}

}  // namespace oracle
