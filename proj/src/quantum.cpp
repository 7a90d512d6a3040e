#include "bellbound/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "bellbound/par.hpp"

namespace bellbound {

void validate_state(const DensityState& state) {
  const std::int64_t dim = space_dim(state.dims);
  if (state.matrix.rows() != dim || state.matrix.cols() != dim) {
    throw ValidationError("state: matrix size does not match site dimensions");
  }
  if (!is_hermitian(state.matrix, tol::psd)) {
    throw ValidationError("state: matrix is not self-adjoint");
  }
  if (std::abs(state.matrix.trace().real() - 1.0) > tol::psd ||
      std::abs(state.matrix.trace().imag()) > tol::psd) {
    throw ValidationError("state: trace != 1");
  }
  if (min_eigenvalue(state.matrix) < -tol::psd) {
    throw ValidationError("state: negative eigenvalue");
  }
}

DensityState make_state(std::vector<int> dims, CMat matrix) {
  DensityState st{std::move(dims), std::move(matrix)};
  validate_state(st);
  return st;
}

void validate_povms(const PovmFamily& povms) {
  if (povms.elements.size() != povms.dims.size()) {
    throw ValidationError("povms: party count mismatch");
  }
  for (std::size_t n = 0; n < povms.elements.size(); ++n) {
    const int d = povms.dims[n];
    for (const auto& setting : povms.elements[n]) {
      if (setting.empty()) throw ValidationError("povms: empty outcome list");
      CMat sum = CMat::Zero(d, d);
      for (const auto& element : setting) {
        if (element.rows() != d || element.cols() != d) {
          throw ValidationError("povms: element size does not match site dimension");
        }
        if (!is_hermitian(element, tol::psd)) {
          throw ValidationError("povms: element not self-adjoint");
        }
        if (min_eigenvalue(element) < -tol::psd) {
          throw ValidationError("povms: element not positive semidefinite");
        }
        sum += element;
      }
      if ((sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > tol::psd) {
        throw ValidationError("povms: elements do not sum to the identity");
      }
    }
  }
}

void check_povm_scenario(const PovmFamily& povms, const ScenarioSpec& scenario) {
  if (static_cast<int>(povms.elements.size()) != scenario.parties()) {
    throw ValidationError("povms: party count differs from scenario");
  }
  for (int n = 0; n < scenario.parties(); ++n) {
    if (static_cast<int>(povms.elements[n].size()) != scenario.setting_count(n)) {
      throw ValidationError("povms: setting count differs from scenario at party " +
                            std::to_string(n + 1));
    }
    for (const auto& setting : povms.elements[n]) {
      if (static_cast<int>(setting.size()) != scenario.outcome_count(n)) {
        throw ValidationError("povms: outcome count differs from scenario at party " +
                              std::to_string(n + 1));
      }
    }
  }
}

Behavior joint_probabilities(const DensityState& state, const PovmFamily& povms,
                             const ScenarioSpec& scenario) {
  if (state.dims != povms.dims) {
    throw ValidationError("joint_probabilities: state and POVM dimensions differ");
  }
  check_povm_scenario(povms, scenario);

  const int n_parties = scenario.parties();
  const std::uint64_t n_tables = scenario.setting_grid().total();
  const std::uint64_t table_size = scenario.outcome_grid().total();
  std::vector<std::vector<double>> tables(n_tables, std::vector<double>(table_size, 0.0));

  std::vector<int> setting(n_parties), outcome(n_parties);
  std::vector<const CMat*> ops(n_parties);
  for (std::uint64_t f = 0; f < n_tables; ++f) {
    scenario.setting_grid().unflatten_into(f, setting);
    for (std::uint64_t e = 0; e < table_size; ++e) {
      scenario.outcome_grid().unflatten_into(e, outcome);
      for (int n = 0; n < n_parties; ++n) ops[n] = &povms.elements[n][setting[n]][outcome[n]];
      tables[f][e] = product_trace(state.matrix, state.dims, ops).real();
    }
  }
  return make_behavior(scenario, std::move(tables), false);
}

DensityState ghz_qudit(int n_parties, int d, std::uint64_t space_cap) {
  if (n_parties < 2 || d < 2) throw ValidationError("ghz_qudit: need N >= 2 and d >= 2");
  std::int64_t dim = 1;
  for (int n = 0; n < n_parties; ++n) {
    dim *= d;
    if (static_cast<std::uint64_t>(dim) > space_cap) {
      throw ValidationError("ghz_qudit: total dimension exceeds cap");
    }
  }
  CVec psi = CVec::Zero(dim);
  // |j...j> has full-space index j * (d^{N-1} + ... + 1).
  std::int64_t repunit = 0;
  std::int64_t power = 1;
  for (int n = 0; n < n_parties; ++n) {
    repunit += power;
    power *= d;
  }
  for (int j = 0; j < d; ++j) psi(j * repunit) = 1.0 / std::sqrt(static_cast<double>(d));
  DensityState st{std::vector<int>(n_parties, d), psi * psi.adjoint()};
  return st;
}

DensityState generalized_ghz(int n_parties, double phi, std::uint64_t space_cap) {
  if (n_parties < 2) throw ValidationError("generalized_ghz: need N >= 2");
  std::int64_t dim = 1;
  for (int n = 0; n < n_parties; ++n) {
    dim *= 2;
    if (static_cast<std::uint64_t>(dim) > space_cap) {
      throw ValidationError("generalized_ghz: total dimension exceeds cap");
    }
  }
  CVec psi = CVec::Zero(dim);
  psi(0) = std::sin(phi);
  psi(dim - 1) = std::cos(phi);
  return DensityState{std::vector<int>(n_parties, 2), psi * psi.adjoint()};
}

DensityState singlet() {
  CVec psi = CVec::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return DensityState{{2, 2}, psi * psi.adjoint()};
}

CMat qubit_projector(double ax, double ay, double az, int outcome) {
  const double norm = std::sqrt(ax * ax + ay * ay + az * az);
  if (norm < 1e-12) throw ValidationError("qubit_projector: zero axis");
  ax /= norm;
  ay /= norm;
  az /= norm;
  CMat sigma(2, 2);
  sigma << Complex(az, 0), Complex(ax, -ay), Complex(ax, ay), Complex(-az, 0);
  const double sign = outcome == 0 ? 1.0 : -1.0;
  return 0.5 * (CMat::Identity(2, 2) + sign * sigma);
}

DensityState random_state(const std::vector<int>& dims, Prng& prng) {
  const auto dim = static_cast<int>(space_dim(dims));
  return DensityState{dims, random_density(dim, prng)};
}

PovmFamily random_projective_povms(const std::vector<int>& dims, const ScenarioSpec& scenario,
                                   Prng& prng) {
  if (static_cast<int>(dims.size()) != scenario.parties()) {
    throw ValidationError("random_projective_povms: dims/scenario party mismatch");
  }
  PovmFamily povms;
  povms.dims = dims;
  povms.elements.resize(dims.size());
  for (int n = 0; n < scenario.parties(); ++n) {
    const int d = dims[n];
    const int n_out = scenario.outcome_count(n);
    povms.elements[n].resize(scenario.setting_count(n));
    for (int s = 0; s < scenario.setting_count(n); ++s) {
      const CMat u = random_unitary(d, prng);
      auto& elements = povms.elements[n][s];
      elements.assign(n_out, CMat::Zero(d, d));
      // Basis vectors are distributed over outcomes as evenly as possible;
      // outcomes beyond the dimension stay zero.
      const int per = std::max(1, d / std::min(d, n_out));
      int next = 0;
      for (int k = 0; k < d; ++k) {
        int out = std::min(n_out - 1, k / per);
        if (k >= per * std::min(d, n_out)) out = n_out - 1;
        next = out;
        elements[next] += u.col(k) * u.col(k).adjoint();
      }
    }
  }
  validate_povms(povms);
  return povms;
}

namespace {

// Coefficient operators for one party: F[s][l] with the current objective
// equal to sum_{s,l} tr[F[s][l] M^{(s)}(l)].
std::vector<std::vector<CMat>> coefficient_operators(const DensityState& state,
                                                     const BellFunctional& functional,
                                                     const PovmFamily& povms, int party) {
  const auto& sc = functional.scenario();
  const int d = state.dims[party];
  std::vector<std::vector<CMat>> f(sc.setting_count(party),
                                   std::vector<CMat>(sc.outcome_count(party), CMat::Zero(d, d)));
  std::vector<const CMat*> ops(sc.parties());
  for (const auto& term : functional.terms()) {
    for (int j = 0; j < sc.parties(); ++j) {
      ops[j] = j == party ? nullptr : &povms.elements[j][term.s[j]][term.l[j]];
    }
    f[term.s[party]][term.l[party]] +=
        term.c * contract_all_but(state.matrix, state.dims, ops, party);
  }
  return f;
}

double setting_value(const std::vector<CMat>& f, const std::vector<CMat>& m) {
  double v = 0.0;
  for (std::size_t l = 0; l < f.size(); ++l) v += (f[l] * m[l]).trace().real();
  return v;
}

// Exact two-outcome update: the maximizer of tr[F0 M0] + tr[F1 (I - M0)]
// over 0 <= M0 <= I is the positive-part projector of F0 - F1.
void update_two_outcome(const std::vector<CMat>& f, std::vector<CMat>& m) {
  const CMat p = positive_part_projector(f[0] - f[1]);
  m[0] = p;
  m[1] = CMat::Identity(p.rows(), p.cols()) - p;
}

// Multi-outcome update by pairwise exchange: for each outcome pair, the
// restriction to their combined support is a two-outcome problem solved
// exactly; sweeps continue until no pair improves. Monotone by construction.
void update_multi_outcome(const std::vector<CMat>& f, std::vector<CMat>& m) {
  const int n_out = static_cast<int>(f.size());
  const auto dim = f[0].rows();
  for (int pass = 0; pass < 4 * n_out * n_out; ++pass) {
    bool improved = false;
    for (int a = 0; a < n_out; ++a) {
      for (int b = a + 1; b < n_out; ++b) {
        const CMat q = hermitize(m[a] + m[b]);
        if (q.cwiseAbs().maxCoeff() < 1e-14) continue;
        const CMat restricted = q * (f[a] - f[b]) * q;
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(restricted));
        CMat ma = CMat::Zero(dim, dim);
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
          if (es.eigenvalues()(k) > 1e-12) {
            ma += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
          }
        }
        const CMat mb = q - ma;
        const double gain = (f[a] * (ma - m[a])).trace().real() +
                            (f[b] * (mb - m[b])).trace().real();
        if (gain > 1e-13) {
          m[a] = ma;
          m[b] = mb;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
}

struct RestartOutcome {
  PovmFamily povms;
  double value = -std::numeric_limits<double>::infinity();
  int sweeps = 0;
  bool converged = false;
  std::vector<double> trace;
};

RestartOutcome run_restart(const DensityState& state, const BellFunctional& functional,
                           const SeesawOptions& opt, std::uint64_t restart_index) {
  const auto& sc = functional.scenario();
  Prng prng = Prng::stream(opt.seed, restart_index);
  RestartOutcome out;
  out.povms = random_projective_povms(state.dims, sc, prng);

  double value = -std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    double sweep_value = value;
    for (int party = 0; party < sc.parties(); ++party) {
      const auto f = coefficient_operators(state, functional, out.povms, party);
      for (int s = 0; s < sc.setting_count(party); ++s) {
        auto& m = out.povms.elements[party][s];
        if (m.size() == 2) {
          update_two_outcome(f[s], m);
        } else if (m.size() > 2) {
          update_multi_outcome(f[s], m);
        }
        // Single-outcome settings are forced to the identity already.
      }
      sweep_value = 0.0;
      for (int s = 0; s < sc.setting_count(party); ++s) {
        sweep_value += setting_value(f[s], out.povms.elements[party][s]);
      }
    }
    out.trace.push_back(sweep_value);
    out.sweeps = sweep + 1;
    if (sweep_value <= value + opt.convergence_tol && sweep > 0) {
      value = std::max(value, sweep_value);
      out.converged = true;
      break;
    }
    value = sweep_value;
  }
  out.value = value;
  return out;
}

}  // namespace

SeesawResult seesaw_optimize(const DensityState& state, const BellFunctional& functional,
                             const SeesawOptions& opt) {
  validate_state(state);
  const auto& sc = functional.scenario();
  if (static_cast<int>(state.dims.size()) != sc.parties()) {
    throw ValidationError("seesaw_optimize: state has wrong party count for the functional");
  }
  if (opt.restarts < 1) throw ValidationError("seesaw_optimize: need at least one restart");

  std::vector<RestartOutcome> outcomes(opt.restarts);
  parallel_for(opt.restarts, [&](int r) {
    outcomes[r] = run_restart(state, functional, opt, static_cast<std::uint64_t>(r));
  });

  int best = 0;
  for (int r = 1; r < opt.restarts; ++r) {
    if (outcomes[r].value > outcomes[best].value) best = r;  // ties keep lowest index
  }
  SeesawResult result;
  result.povms = std::move(outcomes[best].povms);
  result.value = outcomes[best].value;
  result.best_restart = best;
  result.sweeps = outcomes[best].sweeps;
  result.converged = outcomes[best].converged;
  result.value_trace = std::move(outcomes[best].trace);
  return result;
}

}  // namespace bellbound
