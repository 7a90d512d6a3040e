#pragma once

#include <cstdint>
#include <vector>

#include "bellbound/linalg.hpp"
#include "bellbound/scenario.hpp"

namespace bellbound {

// Density matrix on a tensor product of finite-dimensional sites.
struct DensityState {
  std::vector<int> dims;
  CMat matrix;
};

// Self-adjoint within 1e-10, unit trace within 1e-10, min eigenvalue >= -1e-10.
void validate_state(const DensityState& state);
DensityState make_state(std::vector<int> dims, CMat matrix);

// Per party, per setting, one positive matrix per outcome, summing to the
// identity on that site.
struct PovmFamily {
  std::vector<int> dims;
  std::vector<std::vector<std::vector<CMat>>> elements;  // [party][setting][outcome]
};

void validate_povms(const PovmFamily& povms);
// Shape compatibility with a scenario: party count, setting counts, outcome counts.
void check_povm_scenario(const PovmFamily& povms, const ScenarioSpec& scenario);

// P(l_1..l_N | s_1..s_N) = tr[rho (M_1^{(s_1)}(l_1) x ... x M_N^{(s_N)}(l_N))].
Behavior joint_probabilities(const DensityState& state, const PovmFamily& povms,
                             const ScenarioSpec& scenario);

// --- named states -----------------------------------------------------------

// (1/sqrt(d)) sum_j |j..j>, N sites of dimension d.
DensityState ghz_qudit(int n_parties, int d,
                       std::uint64_t space_cap = kDefaultCopiedSpaceCap);
// sin(phi)|0..0> + cos(phi)|1..1> on N qubits.
DensityState generalized_ghz(int n_parties, double phi,
                             std::uint64_t space_cap = kDefaultCopiedSpaceCap);
// Two-qubit antisymmetric pure state (|01> - |10>)/sqrt(2).
DensityState singlet();

// Spin measurement along a Bloch axis; outcome 0 is the +1 eigenspace.
CMat qubit_projector(double ax, double ay, double az, int outcome);

// --- random instances -------------------------------------------------------

DensityState random_state(const std::vector<int>& dims, Prng& prng);
// Random projective POVMs matching the scenario's outcome counts (elements
// beyond the site dimension are zero).
PovmFamily random_projective_povms(const std::vector<int>& dims, const ScenarioSpec& scenario,
                                   Prng& prng);

// --- seesaw search ----------------------------------------------------------

struct SeesawOptions {
  int restarts = 32;
  int max_sweeps = 500;
  double convergence_tol = 1e-12;
  std::uint64_t seed = 1;
};

struct SeesawResult {
  PovmFamily povms;
  double value = 0.0;
  int best_restart = -1;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> value_trace;  // per-sweep objective of the best restart
};

// Alternating maximization of the functional average over one party's
// measurements at a time; each per-setting subproblem is solved from the
// eigendecomposition of the induced single-site coefficient operators.
// Restarts run from independent seeded starts; the best value wins, ties by
// lowest restart index.
SeesawResult seesaw_optimize(const DensityState& state, const BellFunctional& functional,
                             const SeesawOptions& options = {});

}  // namespace bellbound
