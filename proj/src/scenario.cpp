#include "bellbound/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bellbound {

ScenarioSpec::ScenarioSpec(int n_parties, std::vector<int> settings,
                           std::vector<std::vector<double>> outcomes,
                           std::uint64_t strategy_cap)
    : n_parties_(n_parties),
      settings_(std::move(settings)),
      outcomes_(std::move(outcomes)),
      strategy_cap_(strategy_cap) {
  if (n_parties_ < 1) throw ValidationError("scenario: need at least one party");
  if (settings_.size() != static_cast<std::size_t>(n_parties_)) {
    throw ValidationError("scenario: settings list length != number of parties");
  }
  if (outcomes_.size() != static_cast<std::size_t>(n_parties_)) {
    throw ValidationError("scenario: outcomes list length != number of parties");
  }
  for (int n = 0; n < n_parties_; ++n) {
    if (settings_[n] < 1) {
      throw ValidationError("scenario: party " + std::to_string(n + 1) +
                            " must have at least one setting");
    }
    if (outcomes_[n].empty()) {
      throw ValidationError("scenario: party " + std::to_string(n + 1) +
                            " has an empty outcome set");
    }
    std::set<double> distinct(outcomes_[n].begin(), outcomes_[n].end());
    if (distinct.size() != outcomes_[n].size()) {
      throw ValidationError("scenario: party " + std::to_string(n + 1) +
                            " has duplicate outcome values");
    }
    for (double v : outcomes_[n]) {
      if (!std::isfinite(v)) {
        throw ValidationError("scenario: outcome values must be finite");
      }
    }
  }

  std::vector<int> setting_radices = settings_;
  std::vector<int> outcome_radices(n_parties_);
  std::vector<int> strategy_radices;
  digit_offset_.assign(n_parties_, 0);
  for (int n = 0; n < n_parties_; ++n) {
    outcome_radices[n] = outcome_count(n);
    digit_offset_[n] = static_cast<int>(strategy_radices.size());
    for (int s = 0; s < settings_[n]; ++s) strategy_radices.push_back(outcome_count(n));
  }
  checked_count(strategy_radices, strategy_cap_);
  setting_grid_ = MixedRadix(setting_radices);
  outcome_grid_ = MixedRadix(outcome_radices);
  strategy_grid_ = MixedRadix(strategy_radices);
}

bool ScenarioSpec::operator==(const ScenarioSpec& other) const {
  return n_parties_ == other.n_parties_ && settings_ == other.settings_ &&
         outcomes_ == other.outcomes_;
}

ScenarioSpec new_scenario(int n_parties, std::vector<int> settings,
                          std::vector<std::vector<double>> outcomes,
                          std::uint64_t strategy_cap) {
  return ScenarioSpec(n_parties, std::move(settings), std::move(outcomes), strategy_cap);
}

BellFunctional::BellFunctional(ScenarioSpec scenario, std::vector<FunctionalTerm> terms)
    : scenario_(std::move(scenario)) {
  const int n = scenario_.parties();
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> merged;
  for (const auto& t : terms) {
    if (t.s.size() != static_cast<std::size_t>(n) || t.l.size() != static_cast<std::size_t>(n)) {
      throw ValidationError("functional: term tuple length != number of parties");
    }
    for (int p = 0; p < n; ++p) {
      if (t.s[p] < 0 || t.s[p] >= scenario_.setting_count(p)) {
        throw ValidationError("functional: setting index out of range");
      }
      if (t.l[p] < 0 || t.l[p] >= scenario_.outcome_count(p)) {
        throw ValidationError("functional: outcome index out of range");
      }
      if (!std::isfinite(t.c)) throw ValidationError("functional: non-finite coefficient");
    }
    const auto key = std::make_pair(scenario_.setting_grid().flatten(t.s),
                                    scenario_.outcome_grid().flatten(t.l));
    merged[key] += t.c;
  }
  terms_.reserve(merged.size());
  degenerate_ = true;
  for (const auto& [key, c] : merged) {
    FunctionalTerm t;
    t.s = scenario_.setting_grid().unflatten(key.first);
    t.l = scenario_.outcome_grid().unflatten(key.second);
    t.c = c;
    if (c != 0.0) degenerate_ = false;
    terms_.push_back(std::move(t));
  }
}

std::vector<std::vector<double>> BellFunctional::dense_tables() const {
  std::vector<std::vector<double>> dense(
      scenario_.setting_grid().total(),
      std::vector<double>(scenario_.outcome_grid().total(), 0.0));
  for (const auto& t : terms_) {
    dense[scenario_.setting_grid().flatten(t.s)][scenario_.outcome_grid().flatten(t.l)] += t.c;
  }
  return dense;
}

void validate_behavior(const Behavior& behavior) {
  const auto& sc = behavior.scenario;
  if (behavior.tables.size() != sc.setting_grid().total()) {
    throw ValidationError("behavior: table count != number of setting tuples");
  }
  const std::uint64_t table_size = sc.outcome_grid().total();
  for (std::size_t i = 0; i < behavior.tables.size(); ++i) {
    const auto& table = behavior.tables[i];
    if (table.size() != table_size) {
      throw ValidationError("behavior: table " + std::to_string(i) + " has wrong size");
    }
    double sum = 0.0;
    for (double v : table) {
      if (!std::isfinite(v)) throw ValidationError("behavior: non-finite entry");
      if (!behavior.signed_allowed && v < -tol::entry) {
        throw ValidationError("behavior: negative entry in unsigned behavior");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol::feasibility) {
      throw ValidationError("behavior: table " + std::to_string(i) +
                            " sums to " + std::to_string(sum) + ", expected 1");
    }
  }
}

Behavior make_behavior(ScenarioSpec scenario, std::vector<std::vector<double>> tables,
                       bool signed_allowed) {
  Behavior b{std::move(scenario), std::move(tables), signed_allowed};
  validate_behavior(b);
  return b;
}

Behavior uniform_behavior(const ScenarioSpec& scenario) {
  const double mass = 1.0 / static_cast<double>(scenario.outcome_grid().total());
  std::vector<std::vector<double>> tables(
      scenario.setting_grid().total(),
      std::vector<double>(scenario.outcome_grid().total(), mass));
  return Behavior{scenario, std::move(tables), false};
}

void validate_strategy(const ScenarioSpec& scenario, const DeterministicStrategy& strategy) {
  if (strategy.choice.size() != static_cast<std::size_t>(scenario.parties())) {
    throw ValidationError("strategy: party count mismatch");
  }
  for (int n = 0; n < scenario.parties(); ++n) {
    if (strategy.choice[n].size() != static_cast<std::size_t>(scenario.setting_count(n))) {
      throw ValidationError("strategy: setting count mismatch at party " + std::to_string(n + 1));
    }
    for (int s = 0; s < scenario.setting_count(n); ++s) {
      const int l = strategy.choice[n][s];
      if (l < 0 || l >= scenario.outcome_count(n)) {
        throw ValidationError("strategy: outcome index out of range");
      }
    }
  }
}

DeterministicStrategy strategy_from_index(const ScenarioSpec& scenario, std::uint64_t index) {
  const auto digits = scenario.strategy_grid().unflatten(index);
  DeterministicStrategy st;
  st.choice.resize(scenario.parties());
  for (int n = 0; n < scenario.parties(); ++n) {
    st.choice[n].assign(digits.begin() + scenario.digit_offset(n),
                        digits.begin() + scenario.digit_offset(n) + scenario.setting_count(n));
  }
  return st;
}

std::uint64_t strategy_index(const ScenarioSpec& scenario, const DeterministicStrategy& strategy) {
  validate_strategy(scenario, strategy);
  std::vector<int> digits;
  digits.reserve(scenario.strategy_grid().digit_count());
  for (const auto& per_party : strategy.choice) {
    digits.insert(digits.end(), per_party.begin(), per_party.end());
  }
  return scenario.strategy_grid().flatten(digits);
}

StrategyEnumerator::StrategyEnumerator(const ScenarioSpec& scenario)
    : scenario_(scenario),
      digits_(scenario.strategy_grid().digit_count(), 0),
      total_(scenario.strategy_count()) {}

bool StrategyEnumerator::next(DeterministicStrategy& out) {
  if (cursor_ >= total_) return false;
  out.choice.resize(scenario_.parties());
  for (int n = 0; n < scenario_.parties(); ++n) {
    out.choice[n].assign(digits_.begin() + scenario_.digit_offset(n),
                         digits_.begin() + scenario_.digit_offset(n) + scenario_.setting_count(n));
  }
  ++cursor_;
  if (cursor_ < total_) scenario_.strategy_grid().next(digits_);
  return true;
}

double behavior_average(const Behavior& behavior, const BellFunctional& functional) {
  if (behavior.scenario != functional.scenario()) {
    throw ValidationError("behavior_average: behavior and functional scenarios differ");
  }
  const auto& sc = functional.scenario();
  double sum = 0.0;
  for (const auto& t : functional.terms()) {
    sum += t.c * behavior.tables[sc.setting_grid().flatten(t.s)][sc.outcome_grid().flatten(t.l)];
  }
  return sum;
}

Behavior deterministic_behavior(const ScenarioSpec& scenario,
                                const DeterministicStrategy& strategy) {
  validate_strategy(scenario, strategy);
  const std::uint64_t n_tables = scenario.setting_grid().total();
  std::vector<std::vector<double>> tables(
      n_tables, std::vector<double>(scenario.outcome_grid().total(), 0.0));
  std::vector<int> setting(scenario.parties(), 0);
  std::vector<int> outcome(scenario.parties());
  for (std::uint64_t f = 0; f < n_tables; ++f) {
    scenario.setting_grid().unflatten_into(f, setting);
    for (int n = 0; n < scenario.parties(); ++n) outcome[n] = strategy.choice[n][setting[n]];
    tables[f][scenario.outcome_grid().flatten(outcome)] = 1.0;
  }
  return Behavior{scenario, std::move(tables), false};
}

double functional_value(const BellFunctional& functional, const DeterministicStrategy& strategy) {
  validate_strategy(functional.scenario(), strategy);
  double sum = 0.0;
  for (const auto& t : functional.terms()) {
    bool match = true;
    for (std::size_t n = 0; n < t.s.size(); ++n) {
      if (strategy.choice[n][t.s[n]] != t.l[n]) {
        match = false;
        break;
      }
    }
    if (match) sum += t.c;
  }
  return sum;
}

}  // namespace bellbound
