#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bellbound/common.hpp"
#include "bellbound/multiindex.hpp"

namespace bellbound {

// A finite multipartite correlation scenario: N parties, S_n measurement
// settings at site n, and a finite set of numeric outcome values per site.
//
// All indices are 0-based in memory; the JSON file formats are 1-based.
class ScenarioSpec {
 public:
  ScenarioSpec(int n_parties, std::vector<int> settings,
               std::vector<std::vector<double>> outcomes,
               std::uint64_t strategy_cap = kDefaultStrategyCap);

  int parties() const { return n_parties_; }
  const std::vector<int>& settings() const { return settings_; }
  int setting_count(int party) const { return settings_[party]; }
  const std::vector<std::vector<double>>& outcomes() const { return outcomes_; }
  const std::vector<double>& outcomes(int party) const { return outcomes_[party]; }
  int outcome_count(int party) const { return static_cast<int>(outcomes_[party].size()); }

  // Flattening grids. Setting tuples (s_1..s_N) and outcome tuples
  // (l_1..l_N) are party-major with the last party varying fastest.
  const MixedRadix& setting_grid() const { return setting_grid_; }
  const MixedRadix& outcome_grid() const { return outcome_grid_; }

  // Strategy digits are (party, setting) pairs, party-major then
  // setting-major, each digit ranging over that party's outcome indices.
  const MixedRadix& strategy_grid() const { return strategy_grid_; }
  std::uint64_t strategy_count() const { return strategy_grid_.total(); }
  std::uint64_t strategy_cap() const { return strategy_cap_; }
  // Index of digit (party, setting 0) within the strategy digit list.
  int digit_offset(int party) const { return digit_offset_[party]; }

  bool operator==(const ScenarioSpec& other) const;
  bool operator!=(const ScenarioSpec& other) const { return !(*this == other); }

 private:
  int n_parties_ = 0;
  std::vector<int> settings_;
  std::vector<std::vector<double>> outcomes_;
  std::uint64_t strategy_cap_ = kDefaultStrategyCap;
  MixedRadix setting_grid_;
  MixedRadix outcome_grid_;
  MixedRadix strategy_grid_;
  std::vector<int> digit_offset_;
};

ScenarioSpec new_scenario(int n_parties, std::vector<int> settings,
                          std::vector<std::vector<double>> outcomes,
                          std::uint64_t strategy_cap = kDefaultStrategyCap);

// One coefficient psi_{(s_1..s_N)}(l_1..l_N) of a Bell functional.
struct FunctionalTerm {
  std::vector<int> s;  // setting per party
  std::vector<int> l;  // outcome index per party
  double c = 0.0;
};

// Sparse family of real coefficients over (setting tuple, outcome tuple)
// keys. Duplicate keys are merged on construction; the canonical term order
// is (setting flat, outcome flat) ascending.
class BellFunctional {
 public:
  BellFunctional(ScenarioSpec scenario, std::vector<FunctionalTerm> terms);

  const ScenarioSpec& scenario() const { return scenario_; }
  const std::vector<FunctionalTerm>& terms() const { return terms_; }

  // Identically zero (empty or all-zero coefficient map). Degenerate
  // functionals have b_max = 0 and are excluded from normalized ratios.
  bool degenerate() const { return degenerate_; }

  // Dense layout aligned with Behavior tables: [setting flat][outcome flat].
  std::vector<std::vector<double>> dense_tables() const;

 private:
  ScenarioSpec scenario_;
  std::vector<FunctionalTerm> terms_;
  bool degenerate_ = true;
};

// Joint outcome distributions, one table per setting tuple. Tables are
// indexed [setting flat][outcome flat]. Signed (quasi) tables are permitted
// only when signed_allowed is set; every table must sum to 1.
struct Behavior {
  ScenarioSpec scenario;
  std::vector<std::vector<double>> tables;
  bool signed_allowed = false;
};

// Throws ValidationError unless all tables are normalized (1e-9) and, for
// unsigned behaviors, entrywise >= -1e-12.
void validate_behavior(const Behavior& behavior);
Behavior make_behavior(ScenarioSpec scenario, std::vector<std::vector<double>> tables,
                       bool signed_allowed = false);
Behavior uniform_behavior(const ScenarioSpec& scenario);

// A fixed outcome choice for every (party, setting) pair.
struct DeterministicStrategy {
  std::vector<std::vector<int>> choice;  // [party][setting] -> outcome index
};

void validate_strategy(const ScenarioSpec& scenario, const DeterministicStrategy& strategy);
DeterministicStrategy strategy_from_index(const ScenarioSpec& scenario, std::uint64_t index);
std::uint64_t strategy_index(const ScenarioSpec& scenario, const DeterministicStrategy& strategy);

// Yields each deterministic strategy exactly once, in the documented order:
// strategy k has digit vector = strategy_grid().unflatten(k), i.e. the
// (party, setting) digit list with the last digit varying fastest.
class StrategyEnumerator {
 public:
  explicit StrategyEnumerator(const ScenarioSpec& scenario);

  // Fills `out` with the next strategy; returns false when exhausted.
  bool next(DeterministicStrategy& out);
  std::uint64_t count() const { return total_; }

 private:
  const ScenarioSpec& scenario_;
  std::vector<int> digits_;
  std::uint64_t cursor_ = 0;
  std::uint64_t total_ = 0;
};

// Sum over keys of coefficient * table entry (the linear pairing between a
// functional and a behavior). Scenarios must match.
double behavior_average(const Behavior& behavior, const BellFunctional& functional);

// Point-mass behavior realizing a deterministic strategy.
Behavior deterministic_behavior(const ScenarioSpec& scenario,
                                const DeterministicStrategy& strategy);

// Value of the functional on a deterministic strategy:
// sum over setting tuples of psi evaluated at the strategy's outcome choices.
double functional_value(const BellFunctional& functional, const DeterministicStrategy& strategy);

}  // namespace bellbound
