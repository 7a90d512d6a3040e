#include "bellbound/simplex.hpp"

#include <cmath>
#include <vector>

namespace bellbound {

namespace {

struct Tableau {
  Eigen::MatrixXd body;        // m x (n_total + 1), last column is rhs
  Eigen::VectorXd cost;        // reduced-cost row for the active objective
  double cost_rhs = 0.0;       // negative of current objective value
  std::vector<int> basis;      // basis[i] = column basic in row i
  int m = 0;
  int n_total = 0;

  double rhs(int i) const { return body(i, n_total); }

  void pivot(int row, int col) {
    body.row(row) /= body(row, col);
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = body(i, col);
      if (f != 0.0) body.row(i) -= f * body.row(row);
    }
    const double fc = cost(col);
    if (fc != 0.0) {
      cost -= fc * body.row(row).head(n_total).transpose();
      cost_rhs -= fc * rhs(row);
    }
    basis[row] = col;
  }
};

// Lowest-basis-label ratio test (Bland compatible).
int ratio_test(const Tableau& t, int col, double pivot_tol) {
  int row = -1;
  double best = 0.0;
  for (int i = 0; i < t.m; ++i) {
    const double a = t.body(i, col);
    if (a <= pivot_tol) continue;
    const double ratio = t.rhs(i) / a;
    if (row < 0 || ratio < best - 1e-12 ||
        (ratio <= best + 1e-12 && t.basis[i] < t.basis[row])) {
      row = i;
      best = ratio;
    }
  }
  return row;
}

// Runs the pivot loop on the active cost row over columns [0, n_active).
// Columns with allowed[j] == false never enter the basis.
LpResult::Status run_simplex(Tableau& t, int n_active, const std::vector<char>& allowed,
                             const LpOptions& opt, int max_iter, int& iter_count) {
  int stall = 0;
  double last_obj = -t.cost_rhs;
  bool bland = false;
  while (true) {
    if (iter_count >= max_iter) return LpResult::Status::IterationLimit;
    int enter = -1;
    if (!bland) {
      double best = -opt.cost_tol;
      for (int j = 0; j < n_active; ++j) {
        if (!allowed[j]) continue;
        if (t.cost(j) < best) {
          best = t.cost(j);
          enter = j;
        }
      }
    } else {
      for (int j = 0; j < n_active; ++j) {
        if (allowed[j] && t.cost(j) < -opt.cost_tol) {
          enter = j;
          break;
        }
      }
    }
    if (enter < 0) return LpResult::Status::Optimal;
    const int leave = ratio_test(t, enter, opt.pivot_tol);
    if (leave < 0) return LpResult::Status::Unbounded;
    t.pivot(leave, enter);
    ++iter_count;
    const double obj = -t.cost_rhs;
    if (obj < last_obj - 1e-12) {
      stall = 0;
      last_obj = obj;
    } else if (++stall > opt.stall_limit) {
      bland = true;
    }
  }
}

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in,
                  const Eigen::VectorXd& c, const LpOptions& opt) {
  const int n = static_cast<int>(A_in.cols());
  int m = static_cast<int>(A_in.rows());
  if (b_in.size() != m || c.size() != n) {
    throw ValidationError("solve_lp: dimension mismatch");
  }

  Eigen::MatrixXd A = A_in;
  Eigen::VectorXd b = b_in;
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0) {
      A.row(i) = -A.row(i);
      b(i) = -b(i);
    }
  }

  Tableau t;
  t.m = m;
  t.n_total = n + m;  // artificials appended
  t.body.resize(m, t.n_total + 1);
  t.body.leftCols(n) = A;
  t.body.middleCols(n, m) = Eigen::MatrixXd::Identity(m, m);
  t.body.col(t.n_total) = b;
  t.basis.resize(m);
  for (int i = 0; i < m; ++i) t.basis[i] = n + i;

  // Phase 1: minimize the sum of artificials.
  t.cost = Eigen::VectorXd::Zero(t.n_total);
  t.cost.head(n) = -A.colwise().sum().transpose();
  t.cost_rhs = -b.sum();

  const int max_iter = opt.max_iterations > 0 ? opt.max_iterations : 200 * (m + n);
  int iters = 0;
  std::vector<char> allowed(t.n_total, 1);

  LpResult result;
  auto status = run_simplex(t, n, allowed, opt, max_iter, iters);
  result.iterations = iters;
  const double phase1 = -t.cost_rhs;
  if (status == LpResult::Status::IterationLimit) {
    result.status = status;
    return result;
  }
  if (phase1 > opt.feas_tol) {
    result.status = LpResult::Status::Infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis; rows that cannot be
  // pivoted are redundant equalities and get deactivated.
  std::vector<char> active_row(m, 1);
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t.body(i, j)) > opt.pivot_tol) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      t.pivot(i, col);
    } else {
      active_row[i] = 0;
    }
  }
  if (!std::all_of(active_row.begin(), active_row.end(), [](char a) { return a == 1; })) {
    // Rebuild the tableau without redundant rows.
    int keep = 0;
    for (int i = 0; i < m; ++i) keep += active_row[i];
    Eigen::MatrixXd body(keep, t.n_total + 1);
    std::vector<int> basis(keep);
    int r = 0;
    for (int i = 0; i < m; ++i) {
      if (!active_row[i]) continue;
      body.row(r) = t.body.row(i);
      basis[r] = t.basis[i];
      ++r;
    }
    t.body = std::move(body);
    t.basis = std::move(basis);
    t.m = m = keep;
  }

  // Phase 2 over the original columns only.
  for (int j = n; j < t.n_total; ++j) allowed[j] = 0;
  t.cost = Eigen::VectorXd::Zero(t.n_total);
  t.cost.head(n) = c;
  t.cost_rhs = 0.0;
  for (int i = 0; i < m; ++i) {
    const double cb = t.basis[i] < n ? c(t.basis[i]) : 0.0;
    if (cb != 0.0) {
      t.cost -= cb * t.body.row(i).head(t.n_total).transpose();
      t.cost_rhs -= cb * t.rhs(i);
    }
  }

  status = run_simplex(t, n, allowed, opt, max_iter, iters);
  result.iterations = iters;
  result.status = status;
  if (status != LpResult::Status::Optimal) return result;

  result.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n) result.x(t.basis[i]) = t.rhs(i);
  }
  result.objective = c.dot(result.x);
  result.residual = (A_in * result.x - b_in).cwiseAbs().maxCoeff();
  return result;
}

}  // namespace bellbound
