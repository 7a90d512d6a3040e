#pragma once

#include <string>

#include "bellbound/scenario.hpp"

namespace bellbound {

// Bundled functional families. CHSH / Mermin / chained are correlation
// functionals on +-1 outcomes expanded into joint-probability coefficients;
// the CGLMP family is standard literature data for multi-outcome exercise.

// a1b1 + a1b2 + a2b1 - a2b2 on outcomes {+1, -1}. Classical interval [-2, 2].
BellFunctional make_chsh();

// N-party correlation family from the expansion of
// Im[(a_1 + i a_1') ... (a_N + i a_N')]: every term with an odd number of
// second settings, sign alternating. For N = 3 this is
// <a1 b1 c2> + <a1 b2 c1> + <a2 b1 c1> - <a2 b2 c2> with classical bound 2.
BellFunctional make_mermin(int n_parties);

// Chained S-setting bipartite correlation functional
// sum_k <a_k b_k> + sum_k <a_{k+1} b_k> - <a_1 b_S>; classical bound 2S - 2.
BellFunctional make_chained(int n_settings);

// CGLMP d-outcome functional I_d (joint-probability form); classical bound 2.
BellFunctional make_cglmp(int d);

// Parses "chsh", "mermin:N", "cglmp:d", "chained:S".
BellFunctional functional_from_shorthand(const std::string& name);

}  // namespace bellbound
