#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellbound/linalg.hpp"
#include "bellbound/quantum.hpp"

namespace bellbound {

// Self-adjoint unit-trace dilation of a base state to the copied space
// H_1^{x S_1} x ... x H_N^{x S_N}. Factor order: party-major, copy-minor
// (party 1 copies 1..S_1 first).
struct SourceOperator {
  std::vector<int> site_dims;  // d_n
  std::vector<int> copies;     // S_n
  CMat matrix;                 // on dimension prod_n d_n^{S_n}
  CMat base_state;             // the dilated rho, on dimension prod_n d_n

  std::vector<int> factor_dims() const;
  // Factor index of copy `s` at site `n`.
  int factor_of(int site, int copy) const;
};

struct DilationCheck {
  bool ok = false;
  double max_residual = 0.0;
};

// Verifies that for every copy selection (s_1..s_N) the partial trace onto
// the selected copies equals the base state (1e-9 per entry), and tr T = 1.
DilationCheck check_dilation(const SourceOperator& t);

// T = x_n (rho_n)^{x S_n}; positive semidefinite by construction.
SourceOperator product_source_operator(const std::vector<CMat>& site_states,
                                       const std::vector<int>& copies,
                                       std::uint64_t space_cap = kDefaultCopiedSpaceCap);

enum class SourceObjective {
  MinFrobenius,  // least-norm solution of the marginal constraints
  MinTraceNorm,  // iteratively reweighted least squares toward min nuclear norm
};

struct SourceSolveOptions {
  SourceObjective objective = SourceObjective::MinFrobenius;
  int irls_iterations = 150;
  double irls_floor = 1e-9;
  std::uint64_t space_cap = kDefaultCopiedSpaceCap;
};

// Constructive solve for a source operator with the requested objective.
// The constraints are always consistent, so failure signals numerics.
SourceOperator solve_source_operator(const DensityState& state, const std::vector<int>& copies,
                                     const SourceSolveOptions& options = {});

// --- tensor positivity ------------------------------------------------------

enum class TensorPositivityStatus { PsdCertified, NoViolationFound, Violated };

struct TensorPositivityVerdict {
  TensorPositivityStatus status = TensorPositivityStatus::NoViolationFound;
  double value = 0.0;                // best (lowest) product expectation found
  std::vector<CVec> witness;         // product unit vectors attaining `value`
};

struct AlternatingOptions {
  int restarts = 32;
  int max_sweeps = 200;
  double convergence_tol = 1e-10;
  std::uint64_t seed = 1;
};

// PSD test first (eigenvalue floor -1e-10); otherwise alternating
// minimization of the product-vector expectation. `Violated` requires the
// recomputed witness value below -1e-8; `NoViolationFound` is heuristic.
TensorPositivityVerdict tensor_positivity_check(const CMat& w, const std::vector<int>& dims,
                                                const AlternatingOptions& options = {});

// --- covering norm ----------------------------------------------------------

struct CoveringInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<CMat> lower_witness;  // operators 0 <= X_i <= I attaining `lower`
  bool psd_certified = false;
  std::string method = "alternating";
};

// Certified interval around the covering norm: the upper end is the trace
// norm (collapsing to tr W when W is PSD); the lower end is an alternating
// maximization of |tr[W (X_1 x...x X_m)]| over 0 <= X_i <= I, floored at
// |tr W|.
CoveringInterval covering_norm_interval(const CMat& w, const std::vector<int>& dims,
                                        const AlternatingOptions& options = {});

// --- dilation-based bound on the maximal violation --------------------------

struct DilationCandidate {
  int site = 0;              // the site whose copy count is reduced to one
  std::string name;          // "product" | "solve-frobenius" | "solve-tracenorm"
  CoveringInterval interval;
  std::vector<int> copies;
};

struct UpsilonBoundReport {
  double bound = 0.0;  // min over candidates of the interval upper ends
  std::vector<DilationCandidate> candidates;
  int best_candidate = -1;
};

struct UpsilonBoundOptions {
  bool try_product = true;
  bool try_frobenius = true;
  bool try_trace_norm = true;
  AlternatingOptions alternating;
  std::uint64_t space_cap = kDefaultCopiedSpaceCap;
};

// For each site n, builds candidate source operators with the n-th copy
// count reduced to one and takes the best covering interval upper end. The
// result is a certified upper bound on the maximal violation for the given
// setting counts (an upper bound on the infimum over all dilations).
UpsilonBoundReport upsilon_upper_bound(const DensityState& state, const std::vector<int>& settings,
                                       const UpsilonBoundOptions& options = {});

// Explicit product-form dilation when every eigenvector of the state factors
// across sites (product states, classically correlated mixtures). Returns
// nothing when the eigenbasis is not a product basis.
std::optional<SourceOperator> separable_eigenbasis_dilation(
    const DensityState& state, const std::vector<int>& copies,
    std::uint64_t space_cap = kDefaultCopiedSpaceCap);

}  // namespace bellbound
