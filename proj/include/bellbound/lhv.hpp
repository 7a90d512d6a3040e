#pragma once

#include <cstdint>
#include <vector>

#include "bellbound/dilation.hpp"
#include "bellbound/scenario.hpp"
#include "bellbound/simplex.hpp"

namespace bellbound {

// Extremal values of a Bell functional over deterministic strategies.
struct LhvConstants {
  double b_sup = 0.0;
  double b_inf = 0.0;
  double b_max = 0.0;  // max(|b_sup|, |b_inf|)
  DeterministicStrategy witness_sup;
  DeterministicStrategy witness_inf;
  bool degenerate = false;  // identically zero functional
};

// Exact max/min over all deterministic strategies. Digits that never occur
// together in a term are optimized independently (the search splits into
// connected components); fully coupled functionals fall back to full
// enumeration. Witness values are re-evaluated through functional_value so
// they reproduce b_sup / b_inf exactly.
LhvConstants lhv_constants(const BellFunctional& functional);

struct LhvCheckReport {
  double average = 0.0;
  double b_inf = 0.0;
  double b_sup = 0.0;
  double b_max = 0.0;
  bool violated = false;
  double normalized_violation = 0.0;  // |average| / b_max
};

// Evaluates the functional average on a behavior against its LHV interval.
LhvCheckReport check_lhv_constraint(const BellFunctional& functional, const Behavior& behavior);

// Signed decomposition of a behavior over deterministic behaviors with
// minimal total coefficient mass.
struct ViolationCertificate {
  double upsilon = 1.0;
  std::vector<std::pair<std::uint64_t, double>> terms;  // (strategy index, c_i)
  double residual = 0.0;   // max entry error of the reconstruction
  double coeff_sum = 1.0;  // sum of c_i (must be 1)
  int lp_iterations = 0;
};

struct ViolationOptions {
  std::uint64_t lp_size_cap = 50'000'000;  // tableau entries m * n
  LpOptions lp;
};

// Maximal Bell violation of a proper behavior: minimize sum |c_i| subject to
// sum c_i D_i = behavior over all deterministic behaviors D_i, solved as a
// split-variable LP. The value is 1 exactly when the behavior admits an LHV
// model.
ViolationCertificate maximal_violation(const Behavior& behavior,
                                       const ViolationOptions& options = {});

// Local quasi hidden variable model: a signed weight per point of
// Lambda_1^{S_1} x ... x Lambda_N^{S_N} (equivalently, per deterministic
// strategy) with the deterministic response rule "party n under setting s
// outputs the chosen component".
struct LqhvModel {
  ScenarioSpec scenario;
  std::vector<double> nu;  // indexed by strategy enumeration order
  bool certified_nonnegative = false;
};

Behavior reconstruct_behavior(const LqhvModel& model);
double total_variation(const LqhvModel& model);

// Builds the model weights nu from a source operator and a POVM family by
// tracing T against the tensor product of all selected POVM elements. The
// reconstruction must reproduce joint_probabilities of the base state within
// 1e-9 per entry; a failed dilation check or mismatch throws.
LqhvModel lqhv_from_source(const SourceOperator& t, const PovmFamily& povms,
                           const ScenarioSpec& scenario);

// LHV certificate via tensor positivity: a PSD-certified source operator
// yields a nonnegative nu for every POVM family. A Violated verdict is an
// error; NoViolationFound produces an uncertified (but usually proper) model.
LqhvModel lhv_certificate_from_tensor_positive(const SourceOperator& t, const PovmFamily& povms,
                                               const ScenarioSpec& scenario,
                                               const AlternatingOptions& options = {});

}  // namespace bellbound
