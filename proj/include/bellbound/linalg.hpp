#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "bellbound/common.hpp"

namespace bellbound {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Complex = std::complex<double>;

// --- tensor-product space helpers -----------------------------------------
// Factor order conventions: index f runs over the factor list; a full-space
// basis index decomposes row-major (last factor fastest), matching kron().

CMat kron(const CMat& a, const CMat& b);
CMat kron_list(std::span<const CMat> factors);
CVec kron_vec_list(std::span<const CVec> factors);

std::int64_t space_dim(std::span<const int> dims);

// Partial trace keeping the factors listed in `keep` (ascending), tracing
// out the rest. The kept factors retain their relative order.
CMat partial_trace(const CMat& matrix, std::span<const int> dims, std::span<const int> keep);

// Given one operator per factor except `target` (ops[target] ignored,
// may be null), returns the matrix K with
//   tr[W (X_0 x ... x X_{m-1})] = tr[K X_target]  for every X_target.
CMat contract_all_but(const CMat& w, std::span<const int> dims,
                      std::span<const CMat* const> ops, int target);

// tr[W (X_0 x ... x X_{m-1})] without forming the kron product.
Complex product_trace(const CMat& w, std::span<const int> dims,
                      std::span<const CMat* const> ops);

// <phi_0 x ... | W | phi_0 x ...> for unit vectors (real part; W self-adjoint).
double product_expectation(const CMat& w, std::span<const int> dims,
                           std::span<const CVec> vectors);

// --- matrix predicates and decompositions ---------------------------------

CMat hermitize(const CMat& m);
bool is_hermitian(const CMat& m, double tol_abs);
double min_eigenvalue(const CMat& hermitian);
double trace_norm(const CMat& hermitian);
// Projector onto the strictly positive eigenspace of a Hermitian matrix.
CMat positive_part_projector(const CMat& hermitian, double eig_tol = 1e-12);

// --- seeded randomness ------------------------------------------------------
// Deterministic across platforms: splitmix64 + Box-Muller, no std::
// distribution types.

class Prng {
 public:
  explicit Prng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double gaussian();

  // Independent stream for restart/task `index`.
  static Prng stream(std::uint64_t seed, std::uint64_t index);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

CVec random_unit_vector(int dim, Prng& prng);
CMat random_hermitian(int dim, Prng& prng);
// Haar-ish random unitary via QR of a Gaussian matrix.
CMat random_unitary(int dim, Prng& prng);
// Partial trace of a Haar-random pure state on a doubled space.
CMat random_density(int dim, Prng& prng);

}  // namespace bellbound
