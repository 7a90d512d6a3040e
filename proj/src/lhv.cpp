#include "bellbound/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bellbound {

namespace {

// Union-find over strategy digits, joined through the terms that touch them.
struct DigitComponents {
  std::vector<int> parent;

  explicit DigitComponents(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

LhvConstants lhv_constants(const BellFunctional& functional) {
  const auto& sc = functional.scenario();
  LhvConstants out;
  out.witness_sup = strategy_from_index(sc, 0);
  out.witness_inf = strategy_from_index(sc, 0);
  if (functional.degenerate()) {
    out.degenerate = true;
    return out;
  }

  const int n_digits = sc.strategy_grid().digit_count();
  DigitComponents comps(n_digits);
  std::vector<std::vector<int>> term_digits(functional.terms().size());
  for (std::size_t ti = 0; ti < functional.terms().size(); ++ti) {
    const auto& t = functional.terms()[ti];
    for (int n = 0; n < sc.parties(); ++n) {
      term_digits[ti].push_back(sc.digit_offset(n) + t.s[n]);
    }
    for (std::size_t j = 1; j < term_digits[ti].size(); ++j) {
      comps.unite(term_digits[ti][0], term_digits[ti][j]);
    }
  }

  // Group digits and terms by component root. Digits untouched by any term
  // stay at outcome 0 in the witnesses.
  std::map<int, std::vector<int>> digits_of;
  std::map<int, std::vector<int>> terms_of;
  for (std::size_t ti = 0; ti < functional.terms().size(); ++ti) {
    if (functional.terms()[ti].c == 0.0) continue;
    const int root = comps.find(term_digits[ti][0]);
    terms_of[root].push_back(static_cast<int>(ti));
    for (int d : term_digits[ti]) {
      auto& list = digits_of[root];
      if (std::find(list.begin(), list.end(), d) == list.end()) list.push_back(d);
    }
  }

  std::vector<int> best_sup(n_digits, 0), best_inf(n_digits, 0);
  const auto& radices = sc.strategy_grid().radices();
  for (auto& [root, digits] : digits_of) {
    std::sort(digits.begin(), digits.end());
    std::vector<int> local_radices;
    for (int d : digits) local_radices.push_back(radices[d]);
    checked_count(local_radices, sc.strategy_cap());

    std::vector<int> assign(digits.size(), 0);
    double comp_max = -std::numeric_limits<double>::infinity();
    double comp_min = std::numeric_limits<double>::infinity();
    std::vector<int> arg_max(digits.size(), 0), arg_min(digits.size(), 0);
    while (true) {
      double value = 0.0;
      for (int ti : terms_of[root]) {
        const auto& t = functional.terms()[ti];
        bool match = true;
        for (int n = 0; n < sc.parties() && match; ++n) {
          const int digit = sc.digit_offset(n) + t.s[n];
          const auto pos = std::lower_bound(digits.begin(), digits.end(), digit) - digits.begin();
          if (assign[pos] != t.l[n]) match = false;
        }
        if (match) value += t.c;
      }
      if (value > comp_max) {
        comp_max = value;
        arg_max = assign;
      }
      if (value < comp_min) {
        comp_min = value;
        arg_min = assign;
      }
      // lexicographic increment
      int i = static_cast<int>(assign.size()) - 1;
      while (i >= 0 && ++assign[i] == local_radices[i]) assign[i--] = 0;
      if (i < 0) break;
    }
    for (std::size_t i = 0; i < digits.size(); ++i) {
      best_sup[digits[i]] = arg_max[i];
      best_inf[digits[i]] = arg_min[i];
    }
  }

  auto digits_to_strategy = [&](const std::vector<int>& digits) {
    DeterministicStrategy st;
    st.choice.resize(sc.parties());
    for (int n = 0; n < sc.parties(); ++n) {
      st.choice[n].assign(digits.begin() + sc.digit_offset(n),
                          digits.begin() + sc.digit_offset(n) + sc.setting_count(n));
    }
    return st;
  };
  out.witness_sup = digits_to_strategy(best_sup);
  out.witness_inf = digits_to_strategy(best_inf);
  // Canonical re-evaluation: the stored constants are exactly what
  // functional_value returns on the witnesses.
  out.b_sup = functional_value(functional, out.witness_sup);
  out.b_inf = functional_value(functional, out.witness_inf);
  out.b_max = std::max(std::abs(out.b_sup), std::abs(out.b_inf));
  out.degenerate = false;
  return out;
}

LhvCheckReport check_lhv_constraint(const BellFunctional& functional, const Behavior& behavior) {
  if (functional.degenerate()) {
    throw ValidationError("check_lhv_constraint: functional is identically zero");
  }
  const LhvConstants constants = lhv_constants(functional);
  LhvCheckReport report;
  report.average = behavior_average(behavior, functional);
  report.b_inf = constants.b_inf;
  report.b_sup = constants.b_sup;
  report.b_max = constants.b_max;
  report.violated = report.average > constants.b_sup + tol::feasibility ||
                    report.average < constants.b_inf - tol::feasibility;
  report.normalized_violation = std::abs(report.average) / constants.b_max;
  return report;
}

ViolationCertificate maximal_violation(const Behavior& behavior, const ViolationOptions& opt) {
  validate_behavior(behavior);
  if (!behavior.signed_allowed) {
    // proper behavior required; validate_behavior has enforced nonnegativity
  } else {
    for (const auto& table : behavior.tables) {
      for (double v : table) {
        if (v < -tol::entry) {
          throw ValidationError("maximal_violation: signed behavior entries not allowed");
        }
      }
    }
  }
  const auto& sc = behavior.scenario;
  const std::uint64_t n_strategies = sc.strategy_count();
  const std::uint64_t n_tables = sc.setting_grid().total();
  const std::uint64_t table_size = sc.outcome_grid().total();
  const std::uint64_t m = n_tables * table_size;
  const std::uint64_t n_vars = 2 * n_strategies;
  if (m * (n_vars + m) > opt.lp_size_cap) {
    throw ValidationError("maximal_violation: LP size exceeds cap");
  }

  // Columns: u_k then v_k, with column u_k the flattened deterministic
  // behavior of strategy k and v_k its negative.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(n_vars));
  {
    StrategyEnumerator en(sc);
    DeterministicStrategy st;
    std::vector<int> setting(sc.parties()), outcome(sc.parties());
    std::uint64_t k = 0;
    while (en.next(st)) {
      for (std::uint64_t f = 0; f < n_tables; ++f) {
        sc.setting_grid().unflatten_into(f, setting);
        for (int n = 0; n < sc.parties(); ++n) outcome[n] = st.choice[n][setting[n]];
        const std::uint64_t row = f * table_size + sc.outcome_grid().flatten(outcome);
        a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) = 1.0;
        a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(n_strategies + k)) = -1.0;
      }
      ++k;
    }
  }
  Eigen::VectorXd b(static_cast<Eigen::Index>(m));
  for (std::uint64_t f = 0; f < n_tables; ++f) {
    for (std::uint64_t e = 0; e < table_size; ++e) {
      b(static_cast<Eigen::Index>(f * table_size + e)) = behavior.tables[f][e];
    }
  }
  const Eigen::VectorXd c = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_vars));

  const LpResult lp = solve_lp(a, b, c, opt.lp);
  if (lp.status == LpResult::Status::Infeasible) {
    throw NumericError(
        "maximal_violation: decomposition infeasible for a normalized behavior "
        "(validation bug)");
  }
  if (lp.status != LpResult::Status::Optimal) {
    throw NumericError("maximal_violation: LP did not converge");
  }

  ViolationCertificate cert;
  cert.upsilon = lp.objective;
  cert.lp_iterations = lp.iterations;
  double coeff_sum = 0.0;
  for (std::uint64_t k = 0; k < n_strategies; ++k) {
    const double ck = lp.x(static_cast<Eigen::Index>(k)) -
                      lp.x(static_cast<Eigen::Index>(n_strategies + k));
    coeff_sum += ck;
    if (std::abs(ck) > 1e-12) cert.terms.emplace_back(k, ck);
  }
  cert.coeff_sum = coeff_sum;
  cert.residual = lp.residual;
  if (std::abs(coeff_sum - 1.0) > 1e-8) {
    throw NumericError("maximal_violation: coefficient sum " + std::to_string(coeff_sum) +
                       " != 1");
  }
  if (cert.residual > 1e-8) {
    throw NumericError("maximal_violation: reconstruction residual too large");
  }
  cert.upsilon = std::max(cert.upsilon, 1.0);  // clip LP round-off below the floor
  return cert;
}

Behavior reconstruct_behavior(const LqhvModel& model) {
  const auto& sc = model.scenario;
  const std::uint64_t n_tables = sc.setting_grid().total();
  const std::uint64_t table_size = sc.outcome_grid().total();
  std::vector<std::vector<double>> tables(n_tables, std::vector<double>(table_size, 0.0));
  StrategyEnumerator en(sc);
  DeterministicStrategy st;
  std::vector<int> setting(sc.parties()), outcome(sc.parties());
  std::uint64_t k = 0;
  while (en.next(st)) {
    const double weight = model.nu[k];
    if (weight != 0.0) {
      for (std::uint64_t f = 0; f < n_tables; ++f) {
        sc.setting_grid().unflatten_into(f, setting);
        for (int n = 0; n < sc.parties(); ++n) outcome[n] = st.choice[n][setting[n]];
        tables[f][sc.outcome_grid().flatten(outcome)] += weight;
      }
    }
    ++k;
  }
  return Behavior{sc, std::move(tables), true};
}

double total_variation(const LqhvModel& model) {
  double sum = 0.0;
  for (double v : model.nu) sum += std::abs(v);
  return sum;
}

LqhvModel lqhv_from_source(const SourceOperator& t, const PovmFamily& povms,
                           const ScenarioSpec& scenario) {
  check_povm_scenario(povms, scenario);
  if (t.site_dims != povms.dims) {
    throw ValidationError("lqhv_from_source: source operator and POVM dimensions differ");
  }
  if (t.copies != scenario.settings()) {
    throw ValidationError("lqhv_from_source: copy counts differ from scenario settings");
  }
  const auto check = check_dilation(t);
  if (!check.ok) {
    throw ValidationError("lqhv_from_source: dilation check failed, residual " +
                          std::to_string(check.max_residual));
  }

  const auto factor_dims = t.factor_dims();
  LqhvModel model{scenario, {}, false};
  model.nu.resize(scenario.strategy_count());

  StrategyEnumerator en(scenario);
  DeterministicStrategy st;
  std::vector<const CMat*> ops(factor_dims.size());
  std::uint64_t k = 0;
  bool nonnegative = true;
  double sum = 0.0;
  while (en.next(st)) {
    int f = 0;
    for (int n = 0; n < scenario.parties(); ++n) {
      for (int s = 0; s < scenario.setting_count(n); ++s) {
        ops[f++] = &povms.elements[n][s][st.choice[n][s]];
      }
    }
    const double weight = product_trace(t.matrix, factor_dims, ops).real();
    model.nu[k] = weight;
    sum += weight;
    if (weight < -tol::entry) nonnegative = false;
    ++k;
  }
  if (std::abs(sum - 1.0) > tol::feasibility) {
    throw NumericError("lqhv_from_source: weights sum to " + std::to_string(sum));
  }
  model.certified_nonnegative = nonnegative && min_eigenvalue(t.matrix) >= -tol::psd;

  // The marginal identity must hold numerically, not just in theory.
  const Behavior reconstructed = reconstruct_behavior(model);
  const Behavior direct = joint_probabilities(DensityState{t.site_dims, t.base_state}, povms,
                                              scenario);
  for (std::size_t f = 0; f < direct.tables.size(); ++f) {
    for (std::size_t e = 0; e < direct.tables[f].size(); ++e) {
      if (std::abs(direct.tables[f][e] - reconstructed.tables[f][e]) > tol::feasibility) {
        throw NumericError("lqhv_from_source: marginal identity violated");
      }
    }
  }
  return model;
}

LqhvModel lhv_certificate_from_tensor_positive(const SourceOperator& t, const PovmFamily& povms,
                                               const ScenarioSpec& scenario,
                                               const AlternatingOptions& options) {
  const auto verdict = tensor_positivity_check(t.matrix, t.factor_dims(), options);
  if (verdict.status == TensorPositivityStatus::Violated) {
    throw ValidationError(
        "lhv_certificate_from_tensor_positive: source operator is not tensor positive "
        "(witness value " +
        std::to_string(verdict.value) + ")");
  }
  LqhvModel model = lqhv_from_source(t, povms, scenario);
  model.certified_nonnegative = verdict.status == TensorPositivityStatus::PsdCertified;
  return model;
}

}  // namespace bellbound
