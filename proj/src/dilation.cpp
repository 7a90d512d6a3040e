#include "bellbound/dilation.hpp"

#include <algorithm>
#include <cmath>

namespace bellbound {

std::vector<int> SourceOperator::factor_dims() const {
  std::vector<int> dims;
  for (std::size_t n = 0; n < site_dims.size(); ++n) {
    for (int s = 0; s < copies[n]; ++s) dims.push_back(site_dims[n]);
  }
  return dims;
}

int SourceOperator::factor_of(int site, int copy) const {
  int idx = 0;
  for (int n = 0; n < site; ++n) idx += copies[n];
  return idx + copy;
}

namespace {

void check_shapes(const SourceOperator& t) {
  if (t.site_dims.size() != t.copies.size()) {
    throw ValidationError("source operator: site/copy count mismatch");
  }
  for (int s : t.copies) {
    if (s < 1) throw ValidationError("source operator: copy counts must be >= 1");
  }
  const auto dims = t.factor_dims();
  const std::int64_t dim = space_dim(dims);
  if (t.matrix.rows() != dim || t.matrix.cols() != dim) {
    throw ValidationError("source operator: matrix size does not match copied space");
  }
  const std::int64_t base_dim = space_dim(t.site_dims);
  if (t.base_state.rows() != base_dim || t.base_state.cols() != base_dim) {
    throw ValidationError("source operator: base state size mismatch");
  }
}

}  // namespace

DilationCheck check_dilation(const SourceOperator& t) {
  check_shapes(t);
  const auto dims = t.factor_dims();
  DilationCheck result;
  result.max_residual = std::abs(t.matrix.trace() - Complex(1.0, 0.0));

  const int n_sites = static_cast<int>(t.site_dims.size());
  std::vector<int> selection(n_sites, 0);
  while (true) {
    std::vector<int> keep(n_sites);
    for (int n = 0; n < n_sites; ++n) keep[n] = t.factor_of(n, selection[n]);
    const CMat marginal = partial_trace(t.matrix, dims, keep);
    result.max_residual =
        std::max(result.max_residual, (marginal - t.base_state).cwiseAbs().maxCoeff());
    int n = n_sites - 1;
    while (n >= 0 && ++selection[n] == t.copies[n]) selection[n--] = 0;
    if (n < 0) break;
  }
  result.ok = result.max_residual <= tol::feasibility;
  return result;
}

SourceOperator product_source_operator(const std::vector<CMat>& site_states,
                                       const std::vector<int>& copies,
                                       std::uint64_t space_cap) {
  if (site_states.size() != copies.size()) {
    throw ValidationError("product_source_operator: sites/copies mismatch");
  }
  SourceOperator t;
  t.copies = copies;
  std::vector<CMat> factors;
  std::vector<CMat> base_factors;
  std::uint64_t dim = 1;
  for (std::size_t n = 0; n < site_states.size(); ++n) {
    const auto& rho = site_states[n];
    if (rho.rows() != rho.cols()) {
      throw ValidationError("product_source_operator: site state not square");
    }
    t.site_dims.push_back(static_cast<int>(rho.rows()));
    base_factors.push_back(rho);
    for (int s = 0; s < copies[n]; ++s) {
      dim *= static_cast<std::uint64_t>(rho.rows());
      if (dim > space_cap) {
        throw ValidationError("product_source_operator: copied space exceeds cap");
      }
      factors.push_back(rho);
    }
  }
  t.matrix = kron_list(factors);
  t.base_state = kron_list(base_factors);
  return t;
}

namespace {

// 0/1 marginal-constraint matrix in column-major vec convention: row index
// runs over (selection, marginal entry), column over (r + c * D).
struct MarginalSystem {
  Eigen::MatrixXcd a;
  Eigen::VectorXcd b;
};

MarginalSystem marginal_system(const DensityState& state, const std::vector<int>& copies,
                               const std::vector<int>& factor_dims) {
  const std::int64_t dim = space_dim(factor_dims);
  const std::int64_t base_dim = space_dim(state.dims);
  const int n_sites = static_cast<int>(state.dims.size());

  std::vector<std::int64_t> stride(factor_dims.size());
  {
    std::int64_t s = 1;
    for (int f = static_cast<int>(factor_dims.size()) - 1; f >= 0; --f) {
      stride[f] = s;
      s *= factor_dims[f];
    }
  }
  std::vector<int> offsets(n_sites, 0);
  for (int n = 1; n < n_sites; ++n) offsets[n] = offsets[n - 1] + copies[n - 1];

  std::int64_t n_selections = 1;
  for (int s : copies) n_selections *= s;

  MarginalSystem sys;
  sys.a = Eigen::MatrixXcd::Zero(n_selections * base_dim * base_dim, dim * dim);
  sys.b = Eigen::VectorXcd::Zero(n_selections * base_dim * base_dim);

  std::vector<int> selection(n_sites, 0);
  std::vector<int> rd(factor_dims.size()), cd(factor_dims.size());
  for (std::int64_t sel = 0;; ++sel) {
    std::vector<int> keep(n_sites);
    for (int n = 0; n < n_sites; ++n) keep[n] = offsets[n] + selection[n];
    std::vector<std::int64_t> kept_stride(n_sites);
    {
      std::int64_t s = 1;
      for (int n = n_sites - 1; n >= 0; --n) {
        kept_stride[n] = s;
        s *= state.dims[n];
      }
    }
    for (std::int64_t r = 0; r < dim; ++r) {
      std::int64_t rr = r;
      for (std::size_t f = 0; f < factor_dims.size(); ++f) {
        rd[f] = static_cast<int>(rr / stride[f]);
        rr %= stride[f];
      }
      for (std::int64_t c = 0; c < dim; ++c) {
        std::int64_t cc = c;
        bool diag = true;
        for (std::size_t f = 0; f < factor_dims.size(); ++f) {
          cd[f] = static_cast<int>(cc / stride[f]);
          cc %= stride[f];
        }
        for (std::size_t f = 0; f < factor_dims.size() && diag; ++f) {
          if (std::find(keep.begin(), keep.end(), static_cast<int>(f)) == keep.end() &&
              rd[f] != cd[f]) {
            diag = false;
          }
        }
        if (!diag) continue;
        std::int64_t mr = 0, mc = 0;
        for (int n = 0; n < n_sites; ++n) {
          mr += kept_stride[n] * rd[keep[n]];
          mc += kept_stride[n] * cd[keep[n]];
        }
        sys.a(sel * base_dim * base_dim + mr + mc * base_dim, r + c * dim) += 1.0;
      }
    }
    for (std::int64_t e = 0; e < base_dim * base_dim; ++e) {
      sys.b(sel * base_dim * base_dim + e) =
          state.matrix(e % base_dim, e / base_dim);  // column-major entry
    }
    int n = n_sites - 1;
    while (n >= 0 && ++selection[n] == copies[n]) selection[n--] = 0;
    if (n < 0) break;
  }
  return sys;
}

CMat unvec(const Eigen::VectorXcd& x, std::int64_t dim) {
  CMat t(dim, dim);
  for (std::int64_t c = 0; c < dim; ++c) t.col(c) = x.segment(c * dim, dim);
  return t;
}

Eigen::VectorXcd vec(const CMat& t) {
  Eigen::VectorXcd x(t.rows() * t.cols());
  for (Eigen::Index c = 0; c < t.cols(); ++c) x.segment(c * t.rows(), t.rows()) = t.col(c);
  return x;
}

}  // namespace

SourceOperator solve_source_operator(const DensityState& state, const std::vector<int>& copies,
                                     const SourceSolveOptions& opt) {
  validate_state(state);
  if (copies.size() != state.dims.size()) {
    throw ValidationError("solve_source_operator: copies/site count mismatch");
  }
  SourceOperator t;
  t.site_dims = state.dims;
  t.copies = copies;
  t.base_state = state.matrix;
  const auto factor_dims = t.factor_dims();
  const std::uint64_t dim_u = checked_count(factor_dims, opt.space_cap);
  const auto dim = static_cast<std::int64_t>(dim_u);

  // Unit copy counts leave nothing to solve.
  if (dim == static_cast<std::int64_t>(space_dim(state.dims))) {
    t.matrix = state.matrix;
    return t;
  }

  const MarginalSystem sys = marginal_system(state, copies, factor_dims);

  if (opt.objective == SourceObjective::MinFrobenius) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(sys.a);
    const Eigen::VectorXcd x = cod.solve(sys.b);
    t.matrix = hermitize(unvec(x, dim));
  } else {
    // IRLS toward the minimal nuclear norm: x = x0 + N z with N a null-space
    // basis, weight W_k = (T_k^2 + g^2 I)^{-1/2}, quadratic solve per sweep.
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(sys.a, Eigen::ComputeFullV | Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cutoff =
        std::max(sys.a.rows(), sys.a.cols()) * 1e-14 * (sv.size() > 0 ? sv(0) : 1.0);
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    Eigen::VectorXcd x0 = Eigen::VectorXcd::Zero(dim * dim);
    {
      const Eigen::VectorXcd proj = svd.matrixU().leftCols(rank).adjoint() * sys.b;
      for (int k = 0; k < rank; ++k) {
        x0 += (proj(k) / sv(k)) * svd.matrixV().col(k);
      }
    }
    const Eigen::MatrixXcd null_basis = svd.matrixV().rightCols(svd.matrixV().cols() - rank);
    const auto k = static_cast<int>(null_basis.cols());

    Eigen::VectorXcd x = x0;
    double gamma = 1.0;
    CMat current = hermitize(unvec(x, dim));
    for (int it = 0; it < opt.irls_iterations; ++it) {
      Eigen::SelfAdjointEigenSolver<CMat> es(current * current);
      Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
      for (int i = 0; i < w.size(); ++i) w(i) = 1.0 / std::sqrt(w(i) + gamma * gamma);
      const CMat weight = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();

      // Column-major vec: the quadratic form tr[T^H W T] acts blockwise.
      Eigen::MatrixXcd wn(dim * dim, k);
      Eigen::VectorXcd wx0(dim * dim);
      for (std::int64_t c = 0; c < dim; ++c) {
        wn.middleRows(c * dim, dim) = weight * null_basis.middleRows(c * dim, dim);
        wx0.segment(c * dim, dim) = weight * x0.segment(c * dim, dim);
      }
      const Eigen::MatrixXcd h = null_basis.adjoint() * wn;
      const Eigen::VectorXcd g = null_basis.adjoint() * wx0;
      const Eigen::VectorXcd z = (h + 1e-14 * Eigen::MatrixXcd::Identity(k, k)).ldlt().solve(-g);
      const Eigen::VectorXcd xn = x0 + null_basis * z;
      const double delta = (xn - x).cwiseAbs().maxCoeff();
      x = xn;
      current = hermitize(unvec(x, dim));
      gamma = std::max(gamma * 0.7, opt.irls_floor);
      if (delta < 1e-11 && gamma <= 10 * opt.irls_floor) break;
    }
    t.matrix = current;
  }

  const auto check = check_dilation(t);
  if (!check.ok) {
    throw NumericError("solve_source_operator: residual " + std::to_string(check.max_residual) +
                       " exceeds tolerance (constraints are consistent, numerics failed)");
  }
  return t;
}

// --- tensor positivity ------------------------------------------------------

namespace {

double alternating_min_expectation(const CMat& w, const std::vector<int>& dims,
                                   std::vector<CVec>& vectors, const AlternatingOptions& opt) {
  const int m = static_cast<int>(dims.size());
  std::vector<CMat> projectors(m);
  std::vector<const CMat*> ops(m);
  double value = product_expectation(w, dims, vectors);
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    for (int f = 0; f < m; ++f) {
      for (int j = 0; j < m; ++j) {
        projectors[j] = vectors[j] * vectors[j].adjoint();
        ops[j] = &projectors[j];
      }
      const CMat k = hermitize(contract_all_but(w, dims, ops, f));
      Eigen::SelfAdjointEigenSolver<CMat> es(k);
      vectors[f] = es.eigenvectors().col(0);
    }
    const double next = product_expectation(w, dims, vectors);
    if (value - next < opt.convergence_tol) {
      value = std::min(value, next);
      break;
    }
    value = next;
  }
  return value;
}

}  // namespace

TensorPositivityVerdict tensor_positivity_check(const CMat& w_in, const std::vector<int>& dims,
                                                const AlternatingOptions& opt) {
  const CMat w = hermitize(w_in);
  if (w.rows() != space_dim(dims)) {
    throw ValidationError("tensor_positivity_check: matrix/dims mismatch");
  }
  TensorPositivityVerdict verdict;
  const double min_eig = min_eigenvalue(w);
  if (min_eig >= -tol::psd) {
    verdict.status = TensorPositivityStatus::PsdCertified;
    verdict.value = min_eig;
    return verdict;
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<CVec> best_vectors;
  for (int r = 0; r < opt.restarts; ++r) {
    Prng prng = Prng::stream(opt.seed, static_cast<std::uint64_t>(r));
    std::vector<CVec> vectors;
    vectors.reserve(dims.size());
    for (int d : dims) vectors.push_back(random_unit_vector(d, prng));
    const double value = alternating_min_expectation(w, dims, vectors, opt);
    if (value < best - 1e-15) {
      best = value;
      best_vectors = vectors;
    }
  }
  // Recompute through the canonical evaluator so the stored value is exactly
  // reproducible from the witness.
  verdict.value = product_expectation(w, dims, best_vectors);
  verdict.witness = std::move(best_vectors);
  verdict.status = verdict.value < -1e-8 ? TensorPositivityStatus::Violated
                                         : TensorPositivityStatus::NoViolationFound;
  return verdict;
}

// --- covering norm ----------------------------------------------------------

namespace {

// Maximize dir * tr[W (X_1 x...x X_m)] over 0 <= X_i <= I by coordinate
// ascent; each step takes the positive-eigenspace projector of the
// contracted operator.
double alternating_operator_max(const CMat& w, const std::vector<int>& dims, double dir,
                                std::vector<CMat>& x, const AlternatingOptions& opt) {
  const int m = static_cast<int>(dims.size());
  std::vector<const CMat*> ops(m);
  double value = -std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    for (int f = 0; f < m; ++f) {
      for (int j = 0; j < m; ++j) ops[j] = &x[j];
      const CMat k = hermitize(contract_all_but(w, dims, ops, f));
      x[f] = positive_part_projector(dir * k);
    }
    for (int j = 0; j < m; ++j) ops[j] = &x[j];
    const double next = dir * product_trace(w, dims, ops).real();
    if (next - value < opt.convergence_tol) {
      value = std::max(value, next);
      break;
    }
    value = next;
  }
  return value;
}

}  // namespace

CoveringInterval covering_norm_interval(const CMat& w_in, const std::vector<int>& dims,
                                        const AlternatingOptions& opt) {
  const CMat w = hermitize(w_in);
  if (w.rows() != space_dim(dims)) {
    throw ValidationError("covering_norm_interval: matrix/dims mismatch");
  }
  CoveringInterval interval;
  const double trace = w.trace().real();
  const double min_eig = min_eigenvalue(w);
  if (min_eig >= -tol::psd) {
    interval.lower = interval.upper = trace;
    interval.psd_certified = true;
    interval.method = "psd-certified";
    interval.lower_witness.reserve(dims.size());
    for (int d : dims) interval.lower_witness.push_back(CMat::Identity(d, d));
    return interval;
  }

  interval.upper = trace_norm(w);

  const int m = static_cast<int>(dims.size());
  double best = std::abs(trace);
  std::vector<CMat> best_x;
  best_x.reserve(m);
  for (int d : dims) best_x.push_back(CMat::Identity(d, d));

  for (double dir : {+1.0, -1.0}) {
    for (int r = 0; r < opt.restarts; ++r) {
      std::vector<CMat> x;
      x.reserve(m);
      if (r == 0) {
        for (int d : dims) x.push_back(CMat::Identity(d, d));
      } else {
        Prng prng = Prng::stream(opt.seed ^ (dir > 0 ? 0x0ULL : 0x5a5a5a5aULL),
                                 static_cast<std::uint64_t>(r));
        for (int d : dims) x.push_back(positive_part_projector(random_hermitian(d, prng)));
      }
      const double value = alternating_operator_max(w, dims, dir, x, opt);
      if (value > best + 1e-15) {
        best = value;
        best_x = x;
      }
    }
  }
  interval.lower = std::min(best, interval.upper);  // numerical guard
  interval.lower_witness = std::move(best_x);
  return interval;
}

// --- dilation-based upper bound ----------------------------------------------

std::optional<SourceOperator> separable_eigenbasis_dilation(const DensityState& state,
                                                            const std::vector<int>& copies,
                                                            std::uint64_t space_cap) {
  validate_state(state);
  const int n_sites = static_cast<int>(state.dims.size());
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(state.matrix));

  SourceOperator t;
  t.site_dims = state.dims;
  t.copies = copies;
  t.base_state = state.matrix;
  const auto factor_dims = t.factor_dims();
  const std::uint64_t dim = checked_count(factor_dims, space_cap);
  t.matrix = CMat::Zero(dim, dim);

  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double p = es.eigenvalues()(k);
    if (p < 1e-12) continue;
    const CVec psi = es.eigenvectors().col(k);
    // Extract per-site factors; reject if any reduced state is not pure.
    std::vector<CVec> site_vectors(n_sites);
    CMat full = psi * psi.adjoint();
    for (int n = 0; n < n_sites; ++n) {
      const std::vector<int> keep{n};
      const CMat red = partial_trace(full, state.dims, keep);
      Eigen::SelfAdjointEigenSolver<CMat> res(hermitize(red));
      const double top = res.eigenvalues().maxCoeff();
      if (top < 1.0 - 1e-10) return std::nullopt;
      site_vectors[n] = res.eigenvectors().col(res.eigenvalues().size() - 1);
    }
    std::vector<CVec> copied;
    for (int n = 0; n < n_sites; ++n) {
      for (int s = 0; s < copies[n]; ++s) copied.push_back(site_vectors[n]);
    }
    const CVec v = kron_vec_list(copied);
    t.matrix += p * (v * v.adjoint());
  }

  if (!check_dilation(t).ok) return std::nullopt;
  return t;
}

UpsilonBoundReport upsilon_upper_bound(const DensityState& state,
                                       const std::vector<int>& settings,
                                       const UpsilonBoundOptions& opt) {
  validate_state(state);
  if (settings.size() != state.dims.size()) {
    throw ValidationError("upsilon_upper_bound: settings/site count mismatch");
  }
  for (int s : settings) {
    if (s < 1) throw ValidationError("upsilon_upper_bound: settings must be >= 1");
  }

  UpsilonBoundReport report;
  report.bound = std::numeric_limits<double>::infinity();
  const int n_sites = static_cast<int>(state.dims.size());

  for (int n = 0; n < n_sites; ++n) {
    std::vector<int> copies = settings;
    copies[n] = 1;

    std::vector<std::pair<std::string, std::optional<SourceOperator>>> attempts;
    if (opt.try_product) {
      attempts.emplace_back("product",
                            separable_eigenbasis_dilation(state, copies, opt.space_cap));
    }
    if (opt.try_frobenius) {
      SourceSolveOptions so;
      so.objective = SourceObjective::MinFrobenius;
      so.space_cap = opt.space_cap;
      attempts.emplace_back("solve-frobenius", solve_source_operator(state, copies, so));
    }
    if (opt.try_trace_norm) {
      SourceSolveOptions so;
      so.objective = SourceObjective::MinTraceNorm;
      so.space_cap = opt.space_cap;
      attempts.emplace_back("solve-tracenorm", solve_source_operator(state, copies, so));
    }

    for (auto& [name, maybe_t] : attempts) {
      if (!maybe_t.has_value()) continue;
      DilationCandidate cand;
      cand.site = n;
      cand.name = name;
      cand.copies = copies;
      cand.interval =
          covering_norm_interval(maybe_t->matrix, maybe_t->factor_dims(), opt.alternating);
      if (cand.interval.upper < report.bound) {
        report.bound = cand.interval.upper;
        report.best_candidate = static_cast<int>(report.candidates.size());
      }
      report.candidates.push_back(std::move(cand));
    }
  }
  if (report.candidates.empty()) {
    throw NumericError("upsilon_upper_bound: no dilation candidate available");
  }
  return report;
}

}  // namespace bellbound
