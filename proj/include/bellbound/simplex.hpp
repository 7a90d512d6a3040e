#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "bellbound/common.hpp"

namespace bellbound {

// Dense two-phase primal simplex for standard-form problems
//
//     minimize c.x   subject to   A x = b,  x >= 0.
//
// Pivot selection is deterministic: most negative reduced cost with
// lowest-index tie-breaking, falling back to Bland's rule (lowest eligible
// index, lowest basis label on ratio ties) after a stall, which rules out
// cycling. Redundant equality rows are detected in phase 1 and dropped.

struct LpOptions {
  double pivot_tol = 1e-9;
  double cost_tol = 1e-9;
  double feas_tol = 1e-7;   // accepted phase-1 objective
  int max_iterations = 0;   // 0 -> 200 * (m + n)
  int stall_limit = 120;    // non-improving pivots before switching to Bland
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };
  Status status = Status::IterationLimit;
  double objective = 0.0;
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;  // ||A x - b||_inf at the returned point
};

LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c, const LpOptions& options = {});

}  // namespace bellbound
