// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include "cfran/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfran::lp {

namespace {

constexpr double kFeasTol = 1e-9;    // bound violation tolerance
constexpr double kDualTol = 1e-9;    // reduced-cost tolerance
constexpr double kPivotTol = 1e-9;   // smallest usable ratio-test pivot
constexpr double kDegenTol = 1e-11;  // step sizes below this count as degenerate
constexpr int kRefactorEvery = 48;
constexpr long kBlandTrigger = 3000;  // degenerate pivots before Bland kicks in
constexpr double kDevexReset = 1e8;   // weight ceiling before a new framework

enum : std::uint8_t { kAtLower = 0, kAtUpper = 1, kIsBasic = 2, kFreeNb = 3 };

bool finite(double v) { return std::isfinite(v); }

}  // namespace

struct SimplexSolver::Impl {
  int m = 0;         // rows
  int n_struct = 0;  // structural columns
  int n = 0;         // structural + slack columns

  // CSC storage of [A | I], one slack per row, plus a row-major copy used to
  // scatter sparse dual vectors across columns.
  std::vector<int> col_start;
  std::vector<int> row_idx;
  std::vector<double> values;
  std::vector<int> rm_start;
  std::vector<int> rm_col;
  std::vector<double> rm_val;

  std::vector<double> cost;  // per column; slacks cost 0
  std::vector<double> lb;
  std::vector<double> ub;
  std::vector<double> rhs;   // per row

  std::vector<int> basic;           // per row
  std::vector<std::uint8_t> state;  // per column
  Eigen::VectorXd xb;               // basic values per row

  Eigen::SparseMatrix<double> bmat;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  struct Eta {
    int row;
    double diag;
    std::vector<std::pair<int, double>> entries;  // off-diagonal nonzeros
  };
  std::vector<Eta> etas;
  int pivots_since_refactor = 0;
  bool bland = false;
  long degen_run = 0;
  long iterations = 0;

  // Phase-2 reduced costs, maintained incrementally between refactors.
  std::vector<double> dual;
  bool dual_fresh = false;

  std::vector<double> devex;  // reference weights per column

  // Work buffers.
  Eigen::VectorXd work_col;
  Eigen::VectorXd work_cb;
  Eigen::VectorXd work_unit;
  std::vector<double> work_alpha;   // pivot-row coefficients per column
  std::vector<int> work_touched;    // columns touched by the last scatter

  explicit Impl(const Problem& p) {
    m = static_cast<int>(p.rows.size());
    n_struct = p.num_vars;
    n = n_struct + m;

    cost = p.objective;
    cost.resize(static_cast<std::size_t>(n), 0.0);
    lb = p.lower;
    ub = p.upper;
    lb.resize(static_cast<std::size_t>(n));
    ub.resize(static_cast<std::size_t>(n));
    rhs.resize(static_cast<std::size_t>(m));

    std::vector<std::vector<std::pair<int, double>>> cols(
        static_cast<std::size_t>(n_struct));
    std::vector<int> row_nnz(static_cast<std::size_t>(m), 1);  // slack included
    for (int i = 0; i < m; ++i) {
      const auto& row = p.rows[i];
      rhs[i] = row.rhs;
      for (const auto& [j, a] : row.terms) {
        if (j < 0 || j >= n_struct) {
          throw std::invalid_argument("simplex: row references unknown column");
        }
        if (a != 0.0) {
          cols[static_cast<std::size_t>(j)].emplace_back(i, a);
          ++row_nnz[i];
        }
      }
      const int slack = n_struct + i;
      switch (row.sense) {
        case RowSense::kLe:
          lb[slack] = 0.0;
          ub[slack] = kInf;
          break;
        case RowSense::kGe:
          lb[slack] = -kInf;
          ub[slack] = 0.0;
          break;
        case RowSense::kEq:
          lb[slack] = 0.0;
          ub[slack] = 0.0;
          break;
      }
    }

    col_start.reserve(static_cast<std::size_t>(n) + 1);
    col_start.push_back(0);
    for (int j = 0; j < n_struct; ++j) {
      auto& entries = cols[static_cast<std::size_t>(j)];
      std::sort(entries.begin(), entries.end());
      for (const auto& [i, a] : entries) {
        row_idx.push_back(i);
        values.push_back(a);
      }
      col_start.push_back(static_cast<int>(row_idx.size()));
    }
    for (int i = 0; i < m; ++i) {
      row_idx.push_back(i);
      values.push_back(1.0);
      col_start.push_back(static_cast<int>(row_idx.size()));
    }

    // Row-major mirror.
    rm_start.assign(static_cast<std::size_t>(m) + 1, 0);
    for (int i = 0; i < m; ++i) rm_start[i + 1] = rm_start[i] + row_nnz[i];
    rm_col.resize(static_cast<std::size_t>(rm_start[m]));
    rm_val.resize(static_cast<std::size_t>(rm_start[m]));
    std::vector<int> fill(rm_start.begin(), rm_start.end() - 1);
    for (int j = 0; j < n; ++j) {
      for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
        const int i = row_idx[p];
        rm_col[fill[i]] = j;
        rm_val[fill[i]] = values[p];
        ++fill[i];
      }
    }

    basic.resize(static_cast<std::size_t>(m));
    state.resize(static_cast<std::size_t>(n));
    xb.resize(m);
    dual.assign(static_cast<std::size_t>(n), 0.0);
    devex.assign(static_cast<std::size_t>(n), 1.0);
    work_col.setZero(m);
    work_cb.resize(m);
    work_unit.setZero(m);
    work_alpha.assign(static_cast<std::size_t>(n), 0.0);
    work_touched.reserve(static_cast<std::size_t>(n));
  }

  double nonbasic_value(int j) const {
    switch (state[j]) {
      case kAtLower:
        return finite(lb[j]) ? lb[j] : 0.0;
      case kAtUpper:
        return finite(ub[j]) ? ub[j] : 0.0;
      default:
        return 0.0;
    }
  }

  void normalize_states() {
    for (int j = 0; j < n; ++j) {
      if (state[j] == kIsBasic) continue;
      if (state[j] == kAtLower && !finite(lb[j])) {
        state[j] = finite(ub[j]) ? kAtUpper : kFreeNb;
      } else if (state[j] == kAtUpper && !finite(ub[j])) {
        state[j] = finite(lb[j]) ? kAtLower : kFreeNb;
      } else if (state[j] == kFreeNb && finite(lb[j])) {
        state[j] = kAtLower;
      }
    }
  }

  void default_basis() {
    std::fill(state.begin(), state.end(), kAtLower);
    for (int i = 0; i < m; ++i) {
      basic[i] = n_struct + i;
      state[n_struct + i] = kIsBasic;
    }
    normalize_states();
  }

  bool load_basis(const Basis& b) {
    if (static_cast<int>(b.basic.size()) != m ||
        static_cast<int>(b.state.size()) != n) {
      return false;
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < m; ++i) {
      const int j = b.basic[i];
      if (j < 0 || j >= n || seen[j]) return false;
      seen[j] = 1;
    }
    basic = b.basic;
    state = b.state;
    for (int i = 0; i < m; ++i) state[basic[i]] = kIsBasic;
    int basics = 0;
    for (int j = 0; j < n; ++j) basics += state[j] == kIsBasic ? 1 : 0;
    if (basics != m) return false;
    normalize_states();
    return true;
  }

  Eigen::VectorXd effective_rhs() const {
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) b(i) = rhs[i];
    for (int j = 0; j < n; ++j) {
      if (state[j] == kIsBasic) continue;
      const double v = nonbasic_value(j);
      if (v == 0.0) continue;
      for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
        b(row_idx[p]) -= values[p] * v;
      }
    }
    return b;
  }

  bool refactor() {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(values.size());
    for (int r = 0; r < m; ++r) {
      const int j = basic[r];
      for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
        trip.emplace_back(row_idx[p], r, values[p]);
      }
    }
    bmat.resize(m, m);
    bmat.setFromTriplets(trip.begin(), trip.end());
    lu.compute(bmat);
    if (lu.info() != Eigen::Success) return false;
    etas.clear();
    pivots_since_refactor = 0;
    xb = ftran(effective_rhs());
    dual_fresh = false;
    return true;
  }

  Eigen::VectorXd ftran(const Eigen::VectorXd& v) {
    Eigen::VectorXd x = lu.solve(v);
    for (const Eta& e : etas) {
      const double piv = x(e.row) / e.diag;
      if (piv != 0.0) {
        for (const auto& [i, w] : e.entries) x(i) -= w * piv;
      }
      x(e.row) = piv;
    }
    return x;
  }

  Eigen::VectorXd btran(const Eigen::VectorXd& v) {
    Eigen::VectorXd z = v;
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = z(it->row);
      for (const auto& [i, w] : it->entries) s -= w * z(i);
      z(it->row) = s / it->diag;
    }
    return lu.adjoint().solve(z);
  }

  Eigen::VectorXd ftran_column(int j) {
    for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
      work_col(row_idx[p]) = values[p];
    }
    Eigen::VectorXd out = ftran(work_col);
    for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
      work_col(row_idx[p]) = 0.0;
    }
    return out;
  }

  double column_dot(int j, const Eigen::VectorXd& y) const {
    double s = 0.0;
    for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
      s += values[p] * y(row_idx[p]);
    }
    return s;
  }

  // alpha[j] += y' A_j for all columns, exploiting the sparsity of y by
  // scattering row-wise. Touched column ids are appended to work_touched.
  void scatter_product(const Eigen::VectorXd& y) {
    work_touched.clear();
    for (int i = 0; i < m; ++i) {
      const double yi = y(i);
      if (yi == 0.0) continue;
      for (int p = rm_start[i]; p < rm_start[i + 1]; ++p) {
        const int j = rm_col[p];
        if (work_alpha[j] == 0.0) work_touched.push_back(j);
        work_alpha[j] += yi * rm_val[p];
      }
    }
  }

  void clear_scatter() {
    for (int j : work_touched) work_alpha[j] = 0.0;
    work_touched.clear();
  }

  double violation(int r) const {
    const int j = basic[r];
    const double v = xb(r);
    if (finite(lb[j]) && v < lb[j] - kFeasTol) return lb[j] - v;
    if (finite(ub[j]) && v > ub[j] + kFeasTol) return v - ub[j];
    return 0.0;
  }

  bool primal_feasible() const {
    for (int r = 0; r < m; ++r) {
      if (violation(r) > 0.0) return false;
    }
    return true;
  }

  void refresh_phase2_duals() {
    for (int r = 0; r < m; ++r) work_cb(r) = cost[basic[r]];
    const Eigen::VectorXd y = btran(work_cb);
    scatter_product(y);
    for (int j = 0; j < n; ++j) {
      dual[j] = cost[j] - work_alpha[j];
    }
    clear_scatter();
    for (int r = 0; r < m; ++r) dual[basic[r]] = 0.0;
    dual_fresh = true;
  }

  struct Candidate {
    int column = -1;
    int direction = 0;
    double reduced_cost = 0.0;
  };

  int eligible_direction(int j, double d) const {
    if (state[j] == kAtLower && d < -kDualTol) return +1;
    if (state[j] == kAtUpper && d > kDualTol) return -1;
    if (state[j] == kFreeNb && std::abs(d) > kDualTol) return d < 0.0 ? +1 : -1;
    return 0;
  }

  // Phase-1 pricing: composite duals recomputed from the violated set.
  Candidate price_phase1() {
    for (int r = 0; r < m; ++r) {
      const int j = basic[r];
      const double v = xb(r);
      if (finite(ub[j]) && v > ub[j] + kFeasTol) {
        work_cb(r) = 1.0;
      } else if (finite(lb[j]) && v < lb[j] - kFeasTol) {
        work_cb(r) = -1.0;
      } else {
        work_cb(r) = 0.0;
      }
    }
    const Eigen::VectorXd y = btran(work_cb);
    scatter_product(y);

    Candidate best;
    double best_score = 0.0;
    for (int j = 0; j < n; ++j) {
      if (state[j] == kIsBasic) continue;
      if (lb[j] == ub[j] && state[j] != kFreeNb) continue;
      const double d = -work_alpha[j];
      const int dir = eligible_direction(j, d);
      if (dir == 0) continue;
      if (bland) {
        clear_scatter();
        return {j, dir, d};
      }
      const double score = d * d / devex[j];
      if (score > best_score) {
        best_score = score;
        best = {j, dir, d};
      }
    }
    clear_scatter();
    return best;
  }

  // Phase-2 pricing from the cached reduced costs.
  Candidate price_phase2() {
    if (!dual_fresh) refresh_phase2_duals();
    Candidate best;
    double best_score = 0.0;
    for (int j = 0; j < n; ++j) {
      if (state[j] == kIsBasic) continue;
      if (lb[j] == ub[j] && state[j] != kFreeNb) continue;
      const double d = dual[j];
      const int dir = eligible_direction(j, d);
      if (dir == 0) continue;
      if (bland) return {j, dir, d};
      const double score = d * d / devex[j];
      if (score > best_score) {
        best_score = score;
        best = {j, dir, d};
      }
    }
    return best;
  }

  struct Ratio {
    double step = kInf;
    int row = -1;           // blocking row, -1 for a bound flip
    bool to_upper = false;  // which bound the leaving variable hits
  };

  // Phase-2 two-pass Harris ratio test.
  Ratio ratio_test_phase2(const Eigen::VectorXd& w, int enter, int dir) {
    Ratio best;
    const double relax = bland ? 0.0 : kFeasTol;

    double relaxed_min = kInf;
    for (int r = 0; r < m; ++r) {
      if (std::abs(w(r)) <= kPivotTol) continue;
      const double rate = -dir * w(r);
      const int j = basic[r];
      const double bound = rate > 0.0 ? ub[j] : lb[j];
      if (!finite(bound)) continue;
      const double slack = bound + (rate > 0.0 ? relax : -relax) - xb(r);
      relaxed_min = std::min(relaxed_min, std::max(0.0, slack / rate));
    }

    double flip = kInf;
    if (state[enter] != kFreeNb && finite(lb[enter]) && finite(ub[enter])) {
      flip = ub[enter] - lb[enter];
    }

    double best_pivot = 0.0;
    for (int r = 0; r < m; ++r) {
      if (std::abs(w(r)) <= kPivotTol) continue;
      const double rate = -dir * w(r);
      const int j = basic[r];
      const double bound = rate > 0.0 ? ub[j] : lb[j];
      if (!finite(bound)) continue;
      const double step = std::max(0.0, (bound - xb(r)) / rate);
      if (step > relaxed_min + kDegenTol) continue;
      bool better;
      if (bland) {
        better = best.row < 0 || basic[r] < basic[best.row];
      } else {
        better = std::abs(w(r)) > best_pivot;
      }
      if (better) {
        best_pivot = std::abs(w(r));
        best.row = r;
        best.step = step;
        best.to_upper = rate > 0.0;
      }
    }

    if (flip < best.step || (best.row < 0 && finite(flip))) {
      best.step = flip;
      best.row = -1;
    }
    return best;
  }

  // Phase-1 long-step ratio test. The total infeasibility is piecewise
  // linear in the step; every bound crossing raises its slope by the pivot
  // magnitude, so the walk continues through breakpoints until the slope
  // turns nonnegative. Under Bland's rule the classic single-breakpoint rule
  // is used instead so the anti-cycling argument holds.
  Ratio ratio_test_phase1(const Eigen::VectorXd& w, int enter, int dir,
                          double reduced_cost) {
    struct Breakpoint {
      double step;
      double gain;
      int row;
      bool to_upper;
    };
    std::vector<Breakpoint> bps;
    bps.reserve(64);

    for (int r = 0; r < m; ++r) {
      if (std::abs(w(r)) <= kPivotTol) continue;
      const double rate = -dir * w(r);
      const double gain = std::abs(w(r));
      const int j = basic[r];
      const double v = xb(r);
      // Up to two crossings per basic variable: the near bound ahead and,
      // for doubly bounded variables approached from the infeasible side,
      // the far bound after it. Fixed variables (lb == ub) produce both at
      // the same step, doubling the slope change there.
      if (rate > 0.0) {
        if (finite(lb[j]) && v < lb[j] - kFeasTol) {
          bps.push_back({std::max(0.0, (lb[j] - v) / rate), gain, r, false});
          if (finite(ub[j])) {
            bps.push_back({std::max(0.0, (ub[j] - v) / rate), gain, r, true});
          }
        } else if (finite(ub[j]) && v > ub[j] + kFeasTol) {
          // moving further above: no breakpoint
        } else if (finite(ub[j])) {
          bps.push_back({std::max(0.0, (ub[j] - v) / rate), gain, r, true});
        }
      } else {
        if (finite(ub[j]) && v > ub[j] + kFeasTol) {
          bps.push_back({std::max(0.0, (ub[j] - v) / rate), gain, r, true});
          if (finite(lb[j])) {
            bps.push_back({std::max(0.0, (lb[j] - v) / rate), gain, r, false});
          }
        } else if (finite(lb[j]) && v < lb[j] - kFeasTol) {
          // moving further below: no breakpoint
        } else if (finite(lb[j])) {
          bps.push_back({std::max(0.0, (lb[j] - v) / rate), gain, r, false});
        }
      }
    }

    double flip = kInf;
    if (state[enter] != kFreeNb && finite(lb[enter]) && finite(ub[enter])) {
      flip = ub[enter] - lb[enter];
    }

    Ratio out;
    if (bps.empty()) {
      if (finite(flip)) {
        out.step = flip;
        out.row = -1;
      }
      return out;
    }

    std::sort(bps.begin(), bps.end(), [](const Breakpoint& a, const Breakpoint& b) {
      if (a.step != b.step) return a.step < b.step;
      return a.gain > b.gain;
    });

    if (bland) {
      // Classic single-breakpoint rule with the least-index tie break.
      const Breakpoint* chosen = &bps.front();
      for (const auto& bp : bps) {
        if (bp.step > bps.front().step + kDegenTol) break;
        if (basic[bp.row] < basic[chosen->row]) chosen = &bp;
      }
      if (flip < chosen->step) {
        out.step = flip;
        out.row = -1;
      } else {
        out.step = chosen->step;
        out.row = chosen->row;
        out.to_upper = chosen->to_upper;
      }
      return out;
    }

    double slope = -std::abs(reduced_cost);
    std::size_t stop = bps.size();
    for (std::size_t i = 0; i < bps.size(); ++i) {
      if (flip <= bps[i].step) {
        // The entering variable reaches its opposite bound while the
        // infeasibility is still descending: flip there.
        out.step = flip;
        out.row = -1;
        return out;
      }
      slope += bps[i].gain;
      if (slope >= -kDualTol) {
        stop = i;
        break;
      }
    }
    if (stop == bps.size()) {
      // Descending past every breakpoint; only the flip can stop the ray.
      if (finite(flip)) {
        out.step = flip;
        out.row = -1;
      }
      return out;
    }
    // Prefer the largest pivot among breakpoints tied with the stopping one.
    std::size_t chosen = stop;
    for (std::size_t i = stop; i-- > 0;) {
      if (bps[i].step < bps[stop].step - kDegenTol) break;
      if (bps[i].gain > bps[chosen].gain) chosen = i;
    }
    out.step = bps[chosen].step;
    out.row = bps[chosen].row;
    out.to_upper = bps[chosen].to_upper;
    return out;
  }

  // Devex weights and cached phase-2 reduced costs after a pivot at row r.
  void update_pricing_after_pivot(int r, int q, const Eigen::VectorXd& w) {
    const double alpha_q = w(r);
    if (alpha_q == 0.0) return;
    work_unit(r) = 1.0;
    const Eigen::VectorXd rho = btran(work_unit);
    work_unit(r) = 0.0;
    scatter_product(rho);

    const double gamma_q = devex[q];
    const double theta = dual_fresh ? dual[q] / alpha_q : 0.0;
    double max_weight = 0.0;
    for (int j : work_touched) {
      if (state[j] == kIsBasic || j == q) continue;
      const double alpha_j = work_alpha[j];
      const double cand = (alpha_j / alpha_q) * (alpha_j / alpha_q) * gamma_q;
      if (cand > devex[j]) devex[j] = cand;
      if (devex[j] > max_weight) max_weight = devex[j];
      if (dual_fresh) dual[j] -= theta * alpha_j;
    }
    clear_scatter();

    const int leave = basic[r];
    devex[leave] = std::max(gamma_q / (alpha_q * alpha_q), 1.0);
    if (dual_fresh) {
      dual[leave] = -theta;
      dual[q] = 0.0;
    }
    if (max_weight > kDevexReset) {
      std::fill(devex.begin(), devex.end(), 1.0);
    }
  }

  void apply_step(int enter, int dir, const Eigen::VectorXd& w, const Ratio& r,
                  bool phase1) {
    const double step = r.step;
    if (step != 0.0) {
      xb -= (dir * step) * w;
    }
    if (r.row < 0) {
      state[enter] = state[enter] == kAtLower ? kAtUpper : kAtLower;
      return;
    }

    // Pivots taken while primal-infeasible invalidate the phase-2 cache.
    if (phase1) dual_fresh = false;
    update_pricing_after_pivot(r.row, enter, w);

    const int leave = basic[r.row];
    state[leave] = r.to_upper ? kAtUpper : kAtLower;

    const double enter_value = nonbasic_value(enter) + dir * step;
    basic[r.row] = enter;
    state[enter] = kIsBasic;
    xb(r.row) = enter_value;

    Eta eta;
    eta.row = r.row;
    eta.diag = w(r.row);
    for (int i = 0; i < m; ++i) {
      if (i != r.row && std::abs(w(i)) > 1e-13) eta.entries.emplace_back(i, w(i));
    }
    etas.push_back(std::move(eta));
    ++pivots_since_refactor;
  }
};

SimplexSolver::SimplexSolver(const Problem& problem) : impl_(new Impl(problem)) {}

SimplexSolver::~SimplexSolver() { delete impl_; }

void SimplexSolver::set_bounds(int var, double lower, double upper) {
  if (var < 0 || var >= impl_->n_struct) {
    throw std::invalid_argument("set_bounds: not a structural variable");
  }
  impl_->lb[var] = lower;
  impl_->ub[var] = upper;
}

std::pair<double, double> SimplexSolver::bounds(int var) const {
  return {impl_->lb[var], impl_->ub[var]};
}

LpResult SimplexSolver::solve(const Basis* warm_start, long iteration_limit) {
  Impl& s = *impl_;
  if (iteration_limit <= 0) {
    iteration_limit = 20000 + 30L * (s.m + s.n);
  }

  if (warm_start == nullptr || !s.load_basis(*warm_start)) {
    s.default_basis();
  }
  if (!s.refactor()) {
    s.default_basis();
    if (!s.refactor()) throw std::runtime_error("simplex: identity basis failed");
  }

  LpResult result;
  s.bland = false;
  s.degen_run = 0;
  s.iterations = 0;
  s.dual_fresh = false;
  std::fill(s.devex.begin(), s.devex.end(), 1.0);
  int stalled_ratio_tests = 0;

  while (true) {
    if (s.iterations >= iteration_limit) {
      result.status = LpStatus::kIterLimit;
      break;
    }
    if (s.pivots_since_refactor >= kRefactorEvery) {
      if (!s.refactor()) {
        s.default_basis();
        s.refactor();
      }
    }

    const bool phase1 = !s.primal_feasible();
    const Impl::Candidate cand = phase1 ? s.price_phase1() : s.price_phase2();
    if (cand.column < 0) {
      result.status = phase1 ? LpStatus::kInfeasible : LpStatus::kOptimal;
      break;
    }

    const Eigen::VectorXd w = s.ftran_column(cand.column);
    const Impl::Ratio ratio =
        phase1 ? s.ratio_test_phase1(w, cand.column, cand.direction,
                                     cand.reduced_cost)
               : s.ratio_test_phase2(w, cand.column, cand.direction);
    if (!finite(ratio.step)) {
      if (!phase1) {
        result.status = LpStatus::kUnbounded;
        break;
      }
      if (++stalled_ratio_tests > 3) {
        result.status = LpStatus::kInfeasible;
        break;
      }
      s.refactor();
      ++s.iterations;
      continue;
    }
    stalled_ratio_tests = 0;

    s.apply_step(cand.column, cand.direction, w, ratio, phase1);
    ++s.iterations;

    if (ratio.step <= kDegenTol) {
      if (++s.degen_run > kBlandTrigger) s.bland = true;
    } else {
      s.degen_run = 0;
      s.bland = false;
    }
  }

  result.iterations = s.iterations;
  result.basis.basic = s.basic;
  result.basis.state = s.state;

  result.x.assign(static_cast<std::size_t>(s.n_struct), 0.0);
  std::vector<double> full(static_cast<std::size_t>(s.n), 0.0);
  for (int j = 0; j < s.n; ++j) {
    if (s.state[j] != kIsBasic) full[j] = s.nonbasic_value(j);
  }
  for (int r = 0; r < s.m; ++r) full[s.basic[r]] = s.xb(r);
  double obj = 0.0;
  for (int j = 0; j < s.n_struct; ++j) {
    result.x[j] = full[j];
    obj += s.cost[j] * full[j];
  }
  result.objective = obj;
  return result;
}

}  // namespace cfran::lp
