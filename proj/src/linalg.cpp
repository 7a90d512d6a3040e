#include "bellbound/linalg.hpp"

#include <cmath>
#include <numbers>

namespace bellbound {

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMat kron_list(std::span<const CMat> factors) {
  CMat out = CMat::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

CVec kron_vec_list(std::span<const CVec> factors) {
  CVec out = CVec::Ones(1);
  for (const auto& f : factors) {
    CVec next(out.size() * f.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      next.segment(i * f.size(), f.size()) = out(i) * f;
    }
    out = std::move(next);
  }
  return out;
}

std::int64_t space_dim(std::span<const int> dims) {
  std::int64_t d = 1;
  for (int x : dims) {
    if (x < 1) throw ValidationError("space_dim: dimensions must be positive");
    d *= x;
  }
  return d;
}

namespace {

// Strides for row-major factor decomposition of a full-space index.
std::vector<std::int64_t> factor_strides(std::span<const int> dims) {
  std::vector<std::int64_t> stride(dims.size());
  std::int64_t s = 1;
  for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
    stride[f] = s;
    s *= dims[f];
  }
  return stride;
}

}  // namespace

CMat partial_trace(const CMat& matrix, std::span<const int> dims, std::span<const int> keep) {
  const std::int64_t dim = space_dim(dims);
  if (matrix.rows() != dim || matrix.cols() != dim) {
    throw ValidationError("partial_trace: matrix size does not match factor dims");
  }
  const auto stride = factor_strides(dims);
  std::vector<int> kept(keep.begin(), keep.end());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i] < 0 || kept[i] >= static_cast<int>(dims.size())) {
      throw ValidationError("partial_trace: keep index out of range");
    }
    if (i > 0 && kept[i] <= kept[i - 1]) {
      throw ValidationError("partial_trace: keep indices must be strictly ascending");
    }
  }
  std::vector<char> is_kept(dims.size(), 0);
  for (int k : kept) is_kept[k] = 1;

  std::int64_t kept_dim = 1;
  for (int k : kept) kept_dim *= dims[k];
  std::vector<std::int64_t> kept_stride(kept.size());
  {
    std::int64_t s = 1;
    for (int i = static_cast<int>(kept.size()) - 1; i >= 0; --i) {
      kept_stride[i] = s;
      s *= dims[kept[i]];
    }
  }

  CMat out = CMat::Zero(kept_dim, kept_dim);
  std::vector<int> rd(dims.size()), cd(dims.size());
  for (std::int64_t r = 0; r < dim; ++r) {
    std::int64_t rr = r;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      rd[f] = static_cast<int>(rr / stride[f]);
      rr %= stride[f];
    }
    std::int64_t row_out = 0;
    for (std::size_t i = 0; i < kept.size(); ++i) row_out += kept_stride[i] * rd[kept[i]];
    for (std::int64_t c = 0; c < dim; ++c) {
      std::int64_t cc = c;
      bool diag = true;
      std::int64_t col_out = 0;
      for (std::size_t f = 0; f < dims.size(); ++f) {
        cd[f] = static_cast<int>(cc / stride[f]);
        cc %= stride[f];
        if (!is_kept[f] && cd[f] != rd[f]) {
          diag = false;
          break;
        }
      }
      if (!diag) continue;
      for (std::size_t i = 0; i < kept.size(); ++i) col_out += kept_stride[i] * cd[kept[i]];
      out(row_out, col_out) += matrix(r, c);
    }
  }
  return out;
}

CMat contract_all_but(const CMat& w, std::span<const int> dims,
                      std::span<const CMat* const> ops, int target) {
  const std::int64_t dim = space_dim(dims);
  if (w.rows() != dim || w.cols() != dim) {
    throw ValidationError("contract_all_but: matrix size does not match dims");
  }
  if (target < 0 || target >= static_cast<int>(dims.size())) {
    throw ValidationError("contract_all_but: target out of range");
  }
  const auto stride = factor_strides(dims);
  CMat out = CMat::Zero(dims[target], dims[target]);
  std::vector<int> rd(dims.size()), cd(dims.size());
  for (std::int64_t r = 0; r < dim; ++r) {
    std::int64_t rr = r;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      rd[f] = static_cast<int>(rr / stride[f]);
      rr %= stride[f];
    }
    for (std::int64_t c = 0; c < dim; ++c) {
      const Complex wv = w(r, c);
      if (wv == Complex{0.0, 0.0}) continue;
      std::int64_t cc = c;
      Complex weight = wv;
      for (std::size_t f = 0; f < dims.size(); ++f) {
        cd[f] = static_cast<int>(cc / stride[f]);
        cc %= stride[f];
        if (static_cast<int>(f) != target) weight *= (*ops[f])(cd[f], rd[f]);
      }
      // tr[W (X_0 x...x X_m)] = sum_{r,c} W(r,c) prod_f X_f(c_f, r_f)
      out(cd[target], rd[target]) += weight;
    }
  }
  return out;
}

Complex product_trace(const CMat& w, std::span<const int> dims,
                      std::span<const CMat* const> ops) {
  const std::int64_t dim = space_dim(dims);
  if (w.rows() != dim || w.cols() != dim) {
    throw ValidationError("product_trace: matrix size does not match dims");
  }
  const auto stride = factor_strides(dims);
  Complex total{0.0, 0.0};
  std::vector<int> rd(dims.size()), cd(dims.size());
  for (std::int64_t r = 0; r < dim; ++r) {
    std::int64_t rr = r;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      rd[f] = static_cast<int>(rr / stride[f]);
      rr %= stride[f];
    }
    for (std::int64_t c = 0; c < dim; ++c) {
      const Complex wv = w(r, c);
      if (wv == Complex{0.0, 0.0}) continue;
      std::int64_t cc = c;
      Complex weight = wv;
      for (std::size_t f = 0; f < dims.size(); ++f) {
        cd[f] = static_cast<int>(cc / stride[f]);
        cc %= stride[f];
        weight *= (*ops[f])(cd[f], rd[f]);
      }
      total += weight;
    }
  }
  return total;
}

double product_expectation(const CMat& w, std::span<const int> dims,
                           std::span<const CVec> vectors) {
  if (vectors.size() != dims.size()) {
    throw ValidationError("product_expectation: one vector per factor required");
  }
  const CVec full = kron_vec_list(vectors);
  const Complex v = full.adjoint() * w * full;
  return v.real();
}

CMat hermitize(const CMat& m) { return 0.5 * (m + m.adjoint()); }

bool is_hermitian(const CMat& m, double tol_abs) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol_abs;
}

double min_eigenvalue(const CMat& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double trace_norm(const CMat& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

CMat positive_part_projector(const CMat& hermitian, double eig_tol) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(hermitian));
  CMat proj = CMat::Zero(hermitian.rows(), hermitian.cols());
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    if (es.eigenvalues()(k) > eig_tol) {
      proj += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    }
  }
  return proj;
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Prng::next_u64() { return splitmix64(state_); }

double Prng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Prng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Prng Prng::stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  const std::uint64_t base = splitmix64(s);
  std::uint64_t t = base ^ (0x517cc1b727220a95ULL * (index + 1));
  return Prng(splitmix64(t));
}

CVec random_unit_vector(int dim, Prng& prng) {
  CVec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(prng.gaussian(), prng.gaussian());
  const double norm = v.norm();
  if (norm < 1e-12) return random_unit_vector(dim, prng);
  return v / norm;
}

CMat random_hermitian(int dim, Prng& prng) {
  CMat g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(prng.gaussian(), prng.gaussian());
  }
  return hermitize(g);
}

CMat random_unitary(int dim, Prng& prng) {
  CMat g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(prng.gaussian(), prng.gaussian());
  }
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the distribution is Haar.
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= a > 1e-300 ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

CMat random_density(int dim, Prng& prng) {
  CVec psi(dim * dim);
  for (int i = 0; i < dim * dim; ++i) psi(i) = Complex(prng.gaussian(), prng.gaussian());
  psi /= psi.norm();
  CMat full = psi * psi.adjoint();
  const std::vector<int> dims{dim, dim};
  const std::vector<int> keep{0};
  return partial_trace(full, dims, keep);
}

}  // namespace bellbound
