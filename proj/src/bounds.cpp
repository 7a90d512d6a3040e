#include "bellbound/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace bellbound {

namespace {

double ipow(double base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

double reduced_product(const std::vector<int>& values) {
  double prod = 1.0;
  int max_v = 1;
  for (int v : values) {
    prod *= static_cast<double>(v);
    max_v = std::max(max_v, v);
  }
  return prod / static_cast<double>(max_v);
}

}  // namespace

double bound_singlet(int s) {
  if (s < 2) throw ValidationError("bound_singlet: stated for S >= 2");
  return std::sqrt(3.0);
}

double bound_ghz_qudit(int n_parties, int d, int s) {
  if (n_parties < 2 || d < 2 || s < 1) {
    throw ValidationError("bound_ghz_qudit: need N >= 2, d >= 2, S >= 1");
  }
  const double envelope = ipow(2.0 * s - 1.0, n_parties - 1);
  const double dimensional = 1.0 + ipow(2.0, n_parties - 1) * (d - 1.0);
  return std::min(envelope, dimensional);
}

double bound_generalized_ghz(int n_parties, double phi) {
  if (n_parties < 2) throw ValidationError("bound_generalized_ghz: need N >= 2");
  return 1.0 + ipow(2.0, n_parties - 1) * std::abs(std::sin(2.0 * phi));
}

double bound_general(const std::vector<int>& dims, const std::vector<int>& settings) {
  if (dims.empty() || dims.size() != settings.size()) {
    throw ValidationError("bound_general: dims/settings mismatch");
  }
  const int n = static_cast<int>(dims.size());
  const double reduced = std::min(reduced_product(settings), reduced_product(dims));
  return 1.0 + ipow(2.0, n - 1) * (reduced - 1.0);
}

double bound_settings_envelope(int n_parties, int s) {
  if (n_parties < 1 || s < 1) throw ValidationError("bound_settings_envelope: bad arguments");
  return ipow(2.0 * s - 1.0, n_parties - 1);
}

double bound_equal_settings(const std::vector<int>& dims, int n_parties, int s) {
  if (static_cast<int>(dims.size()) != n_parties) {
    throw ValidationError("bound_equal_settings: dims length != N");
  }
  if (s < 1) throw ValidationError("bound_equal_settings: need S >= 1");
  const double envelope = bound_settings_envelope(n_parties, s);
  const double dimensional = 1.0 + ipow(2.0, n_parties - 1) * (reduced_product(dims) - 1.0);
  return std::min(envelope, dimensional);
}

double bound_bipartite(int s1, int s2, int d1, int d2) {
  if (s1 < 1 || s2 < 1 || d1 < 1 || d2 < 1) {
    throw ValidationError("bound_bipartite: arguments must be >= 1");
  }
  return 2.0 * std::min(std::min(s1, s2), std::min(d1, d2)) - 1.0;
}

double bound_tripartite(int s, int d1, int d2, int d3) {
  if (s < 1 || d1 < 1 || d2 < 1 || d3 < 1) {
    throw ValidationError("bound_tripartite: arguments must be >= 1");
  }
  const double envelope = (2.0 * s - 1.0) * (2.0 * s - 1.0);
  const double dimensional = 4.0 * reduced_product({d1, d2, d3}) - 3.0;
  return std::min(envelope, dimensional);
}

PriorBipartiteBounds prior_bipartite_bounds(int l1, int l2) {
  if (l1 < 1 || l2 < 1) throw ValidationError("prior_bipartite_bounds: outcome counts >= 1");
  PriorBipartiteBounds out;
  out.bound_dichotomic = 2.0 * kGrothendieckUpper + 1.0;
  out.bound_joint = 2.0 * l1 * l2 * (kGrothendieckUpper + 1.0) - 1.0;
  return out;
}

double prior_estimate_sd(int s, int d) {
  if (s < 1 || d < 1) throw ValidationError("prior_estimate_sd: arguments must be >= 1");
  return static_cast<double>(std::min(s, d));
}

int settings_growth_threshold(double d) {
  if (d < 1.0) throw ValidationError("settings_growth_threshold: need d >= 1");
  const double target = std::sqrt(d);
  int s = 1;
  while ((2.0 * s - 1.0) * (2.0 * s - 1.0) < target) ++s;
  return s;
}

BoundReport compare(const BoundContext& ctx, std::optional<double> violation_value) {
  if (ctx.n_parties < 1 || static_cast<int>(ctx.dims.size()) != ctx.n_parties ||
      static_cast<int>(ctx.settings.size()) != ctx.n_parties) {
    throw ValidationError("compare: inconsistent context");
  }
  BoundReport report;
  report.context = ctx;
  report.violation_value = violation_value;

  const bool equal_settings =
      std::all_of(ctx.settings.begin(), ctx.settings.end(),
                  [&](int s) { return s == ctx.settings.front(); });
  const int s0 = ctx.settings.front();

  auto add = [&](std::string name, std::string formula, double value, bool applicable,
                 bool informational = false) {
    report.entries.push_back(
        {std::move(name), std::move(formula), value, applicable, informational});
  };

  add("general", "eq12", bound_general(ctx.dims, ctx.settings), true);
  if (equal_settings) {
    add("equal-settings", "eq12p", bound_equal_settings(ctx.dims, ctx.n_parties, s0), true);
    add("universal-envelope", "envelope", bound_settings_envelope(ctx.n_parties, s0), true);
  }
  if (ctx.n_parties == 2) {
    add("bipartite", "eq13",
        bound_bipartite(ctx.settings[0], ctx.settings[1], ctx.dims[0], ctx.dims[1]), true);
    const bool dichotomic = ctx.outcome_counts.size() == 2 && ctx.outcome_counts[0] == 2 &&
                            ctx.outcome_counts[1] == 2;
    if (dichotomic && ctx.settings[0] == 2 && ctx.settings[1] == 2) {
      add("tsirelson-2x2", "tsirelson", std::sqrt(2.0), true);
    }
    if (ctx.outcome_counts.size() == 2) {
      const auto prior = prior_bipartite_bounds(ctx.outcome_counts[0], ctx.outcome_counts[1]);
      if (dichotomic) add("prior-dichotomic", "eq15i", prior.bound_dichotomic, false, true);
      add("prior-joint", "eq15ii", prior.bound_joint, false, true);
    }
    if (equal_settings && ctx.dims[0] == ctx.dims[1]) {
      add("prior-estimate", "eq15p", prior_estimate_sd(s0, ctx.dims[0]), false, true);
    }
  }
  if (ctx.n_parties == 3 && equal_settings) {
    add("tripartite", "eq15pp", bound_tripartite(s0, ctx.dims[0], ctx.dims[1], ctx.dims[2]),
        true);
  }
  if (ctx.family == "singlet" && ctx.n_parties == 2) {
    const int lo = std::min(ctx.settings[0], ctx.settings[1]);
    const int hi = std::max(ctx.settings[0], ctx.settings[1]);
    if (lo == 2 && hi >= 2) add("singlet-sx2", "eq7", bound_singlet(hi), true);
  }
  if (ctx.family == "ghz" && equal_settings) {
    add("ghz-qudit", "eq9", bound_ghz_qudit(ctx.n_parties, ctx.ghz_d, s0), true);
  }
  if (ctx.family == "gghz") {
    add("generalized-ghz", "eq11", bound_generalized_ghz(ctx.n_parties, ctx.phi), true);
  }

  report.all_pass = true;
  if (violation_value.has_value()) {
    for (const auto& entry : report.entries) {
      if (entry.applicable && *violation_value > entry.value + tol::feasibility) {
        report.all_pass = false;
      }
    }
  }
  return report;
}

}  // namespace bellbound
