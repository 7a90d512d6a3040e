#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bellbound/common.hpp"

namespace bellbound {

// Literature reference constants (interval endpoints, never point values).
inline constexpr double kGrothendieckLower = 1.676;
inline constexpr double kGrothendieckUpper = 1.782;
inline constexpr double kGrothendieck3Lower = 1.4142135623730951;  // sqrt(2)
inline constexpr double kGrothendieck3Upper = 1.5163;

// Two-qubit singlet, S x 2 settings, any outcomes: sqrt(3). Requires S >= 2.
double bound_singlet(int s);

// N-qudit GHZ, S settings per site: min{(2S-1)^{N-1}, 1 + 2^{N-1}(d-1)}.
double bound_ghz_qudit(int n_parties, int d, int s);

// Generalized N-qubit GHZ: 1 + 2^{N-1} |sin 2phi|.
double bound_generalized_ghz(int n_parties, double phi);

// Arbitrary state on C^{d_1} x...x C^{d_N} with S_n settings:
// 1 + 2^{N-1} [ min{ prod S / max S, prod d / max d } - 1 ].
double bound_general(const std::vector<int>& dims, const std::vector<int>& settings);

// Equal settings S per site: min{(2S-1)^{N-1}, 1 + 2^{N-1}(prod d / max d - 1)}.
double bound_equal_settings(const std::vector<int>& dims, int n_parties, int s);
// The dimension-free envelope (2S-1)^{N-1}.
double bound_settings_envelope(int n_parties, int s);

// Bipartite: 2 min{S1, S2, d1, d2} - 1.
double bound_bipartite(int s1, int s2, int d1, int d2);

// Tripartite, equal settings: min{(2S-1)^2, 4 prod d / max d - 3}.
double bound_tripartite(int s, int d1, int d2, int d3);

// Prior bipartite bounds for comparison reports (conservative upper
// Grothendieck endpoint): dichotomic 2 K_G + 1 and general 2 L1 L2 (K_G+1) - 1.
struct PriorBipartiteBounds {
  double bound_dichotomic = 0.0;  // valid only when L1 = L2 = 2
  double bound_joint = 0.0;
};
PriorBipartiteBounds prior_bipartite_bounds(int l1, int l2);

// Approximate min{S, d} estimate (holds up to an unknown universal constant;
// reported as ESTIMATE, never used as a pass/fail criterion).
double prior_estimate_sd(int s, int d);

// Smallest integer S >= 1 with (2S-1)^2 >= sqrt(d).
int settings_growth_threshold(double d);

// --- comparison ledger --------------------------------------------------------

struct BoundContext {
  int n_parties = 0;
  std::vector<int> dims;
  std::vector<int> settings;
  std::vector<int> outcome_counts;
  std::string family;  // "", "singlet", "ghz", "gghz"
  int ghz_d = 0;       // for family == "ghz"
  double phi = 0.0;    // for family == "gghz"
};

struct BoundEntry {
  std::string name;
  std::string formula;
  double value = 0.0;
  bool applicable = false;   // participates in pass/fail
  bool informational = false;  // prior bounds / estimates, reporting only
};

struct BoundReport {
  BoundContext context;
  std::vector<BoundEntry> entries;
  std::optional<double> violation_value;
  bool all_pass = true;  // violation <= every applicable entry + 1e-9
};

BoundReport compare(const BoundContext& context, std::optional<double> violation_value);

}  // namespace bellbound
