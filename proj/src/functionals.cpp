#include "bellbound/functionals.hpp"

#include <cmath>

namespace bellbound {

namespace {

ScenarioSpec dichotomic_scenario(int n_parties, int n_settings) {
  return new_scenario(n_parties, std::vector<int>(n_parties, n_settings),
                      std::vector<std::vector<double>>(n_parties, {1.0, -1.0}));
}

// Expands a correlation coefficient on one setting tuple into
// joint-probability terms c * prod(outcome values).
void add_correlator(const ScenarioSpec& sc, std::vector<FunctionalTerm>& terms,
                    const std::vector<int>& settings, double coefficient) {
  std::vector<int> outcome(sc.parties(), 0);
  while (true) {
    double sign = coefficient;
    for (int n = 0; n < sc.parties(); ++n) sign *= sc.outcomes(n)[outcome[n]];
    terms.push_back({settings, outcome, sign});
    int i = sc.parties() - 1;
    while (i >= 0 && ++outcome[i] == sc.outcome_count(i)) outcome[i--] = 0;
    if (i < 0) break;
  }
}

}  // namespace

BellFunctional make_chsh() {
  const ScenarioSpec sc = dichotomic_scenario(2, 2);
  std::vector<FunctionalTerm> terms;
  add_correlator(sc, terms, {0, 0}, 1.0);
  add_correlator(sc, terms, {0, 1}, 1.0);
  add_correlator(sc, terms, {1, 0}, 1.0);
  add_correlator(sc, terms, {1, 1}, -1.0);
  return BellFunctional(sc, std::move(terms));
}

BellFunctional make_mermin(int n_parties) {
  if (n_parties < 2) throw ValidationError("make_mermin: need N >= 2");
  const ScenarioSpec sc = dichotomic_scenario(n_parties, 2);
  std::vector<FunctionalTerm> terms;
  // Setting tuple bits: second setting <-> "primed". Coefficient of a tuple
  // with k primes is Im(i^k) = 0 for even k, (-1)^{(k-1)/2} for odd k.
  std::vector<int> settings(n_parties, 0);
  while (true) {
    int primes = 0;
    for (int b : settings) primes += b;
    if (primes % 2 == 1) {
      const double sign = ((primes - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
      add_correlator(sc, terms, settings, sign);
    }
    int i = n_parties - 1;
    while (i >= 0 && ++settings[i] == 2) settings[i--] = 0;
    if (i < 0) break;
  }
  return BellFunctional(sc, std::move(terms));
}

BellFunctional make_chained(int n_settings) {
  if (n_settings < 2) throw ValidationError("make_chained: need S >= 2");
  const ScenarioSpec sc = dichotomic_scenario(2, n_settings);
  std::vector<FunctionalTerm> terms;
  for (int k = 0; k < n_settings; ++k) add_correlator(sc, terms, {k, k}, 1.0);
  for (int k = 0; k + 1 < n_settings; ++k) add_correlator(sc, terms, {k + 1, k}, 1.0);
  add_correlator(sc, terms, {0, n_settings - 1}, -1.0);
  return BellFunctional(sc, std::move(terms));
}

BellFunctional make_cglmp(int d) {
  if (d < 2) throw ValidationError("make_cglmp: need d >= 2");
  std::vector<double> values(d);
  for (int j = 0; j < d; ++j) values[j] = static_cast<double>(j);
  const ScenarioSpec sc = new_scenario(2, {2, 2}, {values, values});

  std::vector<FunctionalTerm> terms;
  auto add_equal = [&](int sa, int sb, int shift, double c) {
    // P(A_sa = B_sb + shift):  a = j + shift mod d,  b = j.
    for (int j = 0; j < d; ++j) {
      const int a = ((j + shift) % d + d) % d;
      terms.push_back({{sa, sb}, {a, j}, c});
    }
  };
  auto add_equal_ba = [&](int sa, int sb, int shift, double c) {
    // P(B_sb = A_sa + shift):  b = j + shift mod d,  a = j.
    for (int j = 0; j < d; ++j) {
      const int b = ((j + shift) % d + d) % d;
      terms.push_back({{sa, sb}, {j, b}, c});
    }
  };
  for (int k = 0; k <= d / 2 - 1; ++k) {
    const double w = 1.0 - 2.0 * k / (d - 1.0);
    add_equal(0, 0, k, w);        // P(A1 = B1 + k)
    add_equal_ba(1, 0, k + 1, w); // P(B1 = A2 + k + 1)
    add_equal(1, 1, k, w);        // P(A2 = B2 + k)
    add_equal_ba(0, 1, k, w);     // P(B2 = A1 + k)
    add_equal(0, 0, -(k + 1), -w);   // P(A1 = B1 - k - 1)
    add_equal_ba(1, 0, -k, -w);      // P(B1 = A2 - k)
    add_equal(1, 1, -(k + 1), -w);   // P(A2 = B2 - k - 1)
    add_equal_ba(0, 1, -(k + 1), -w);// P(B2 = A1 - k - 1)
  }
  return BellFunctional(sc, std::move(terms));
}

BellFunctional functional_from_shorthand(const std::string& name) {
  if (name == "chsh") return make_chsh();
  const auto colon = name.find(':');
  if (colon != std::string::npos) {
    const std::string head = name.substr(0, colon);
    const std::string arg = name.substr(colon + 1);
    int value = 0;
    try {
      value = std::stoi(arg);
    } catch (const std::exception&) {
      throw ValidationError("functional shorthand: bad argument in '" + name + "'");
    }
    if (head == "mermin") return make_mermin(value);
    if (head == "cglmp") return make_cglmp(value);
    if (head == "chained") return make_chained(value);
  }
  throw ValidationError("unknown functional shorthand '" + name + "'");
}

}  // namespace bellbound
