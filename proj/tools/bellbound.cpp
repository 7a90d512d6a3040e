#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bellbound/bounds.hpp"
#include "bellbound/dilation.hpp"
#include "bellbound/functionals.hpp"
#include "bellbound/io.hpp"
#include "bellbound/lhv.hpp"
#include "bellbound/quantum.hpp"
#include "bellbound/version.hpp"

namespace bb = bellbound;

namespace {

// Exit codes: 0 success, 2 validation error, 3 numerical nonconvergence,
// 4 bound violation detected (all_pass false).
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitBoundViolation = 4;

struct GlobalConfig {
  std::string format = "text";
  std::uint64_t seed = 12345;
  int restarts = 32;
  std::uint64_t cap_dim = bb::kDefaultCopiedSpaceCap;
  double tolerance = bb::tol::feasibility;
};

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

bb::Json base_report(const std::string& command, const GlobalConfig& cfg) {
  bb::Json j;
  j["command"] = command;
  j["library_version"] = bb::kVersion;
  j["config"] = {{"format", cfg.format},
                 {"seed", cfg.seed},
                 {"restarts", cfg.restarts},
                 {"cap_dim", cfg.cap_dim},
                 {"tolerance", cfg.tolerance}};
  return j;
}

void emit(const bb::Json& report, const GlobalConfig& cfg, const std::string& text,
          const std::string& csv = "") {
  if (cfg.format == "json") {
    std::cout << report.dump(2) << "\n";
  } else if (cfg.format == "csv" && !csv.empty()) {
    std::cout << csv;
  } else {
    std::cout << text;
  }
}

bb::Json strategy_json(const bb::DeterministicStrategy& st) {
  bb::Json out = bb::Json::array();
  for (const auto& per_party : st.choice) {
    bb::Json row = bb::Json::array();
    for (int l : per_party) row.push_back(l + 1);
    out.push_back(row);
  }
  return out;
}

std::string strategy_text(const bb::DeterministicStrategy& st) {
  std::string out = "[";
  for (std::size_t n = 0; n < st.choice.size(); ++n) {
    out += n ? ",[" : "[";
    for (std::size_t s = 0; s < st.choice[n].size(); ++s) {
      out += (s ? "," : "") + std::to_string(st.choice[n][s] + 1);
    }
    out += "]";
  }
  return out + "]";
}

struct StateInfo {
  bb::DensityState state;
  std::string family;  // "", "singlet", "ghz", "gghz"
  int ghz_d = 0;
  double phi = 0.0;
};

StateInfo load_state(const std::string& descriptor) {
  StateInfo info{bb::parse_state_descriptor(descriptor), "", 0, 0.0};
  if (descriptor == "singlet") {
    info.family = "singlet";
  } else if (descriptor.rfind("ghz:", 0) == 0) {
    info.family = "ghz";
    info.ghz_d = info.state.matrix.rows() > 0 ? info.state.dims[0] : 0;
  } else if (descriptor.rfind("gghz:", 0) == 0) {
    info.family = "gghz";
    const auto pos = descriptor.find("phi=");
    if (pos != std::string::npos) info.phi = std::stod(descriptor.substr(pos + 4));
  }
  return info;
}

bb::BoundContext context_for(const StateInfo& info, const bb::ScenarioSpec& sc) {
  bb::BoundContext ctx;
  ctx.n_parties = sc.parties();
  ctx.dims = info.state.dims;
  ctx.settings = sc.settings();
  for (int n = 0; n < sc.parties(); ++n) ctx.outcome_counts.push_back(sc.outcome_count(n));
  ctx.family = info.family;
  ctx.ghz_d = info.ghz_d;
  ctx.phi = info.phi;
  return ctx;
}

bb::Json bounds_json(const bb::BoundReport& report) {
  bb::Json entries = bb::Json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"name", e.name},
                       {"formula", e.formula},
                       {"value", e.value},
                       {"applicable", e.applicable},
                       {"informational", e.informational}});
  }
  return entries;
}

std::string bounds_csv(const bb::BoundReport& report) {
  std::string csv = "bound_name,formula,value,applicable\n";
  for (const auto& e : report.entries) {
    csv += e.name + "," + e.formula + "," + fmt6(e.value) + "," +
           (e.applicable ? "true" : "false") + "\n";
  }
  return csv;
}

std::string bounds_text(const bb::BoundReport& report) {
  std::string text;
  for (const auto& e : report.entries) {
    text += "  " + e.name + " (" + e.formula + ") = " + fmt6(e.value) +
            (e.applicable ? "" : e.informational ? "  [reference]" : "  [n/a]") + "\n";
  }
  return text;
}

// --- subcommand bodies -------------------------------------------------------

int cmd_classical_bound(const GlobalConfig& cfg, const std::string& functional_desc) {
  const bb::BellFunctional functional = bb::parse_functional_descriptor(functional_desc);
  const bb::LhvConstants constants = bb::lhv_constants(functional);

  bb::Json report = base_report("classical-bound", cfg);
  report["config"]["functional"] = functional_desc;
  report["results"] = {{"b_sup", constants.b_sup},
                       {"b_inf", constants.b_inf},
                       {"b_max", constants.b_max},
                       {"degenerate", constants.degenerate},
                       {"witness_sup", strategy_json(constants.witness_sup)},
                       {"witness_inf", strategy_json(constants.witness_inf)}};

  std::string text = "classical-bound functional=" + functional_desc + "\n";
  if (constants.degenerate) {
    text += "  warning: functional is identically zero (degenerate); b_max = 0\n";
  }
  text += "  b_sup = " + fmt6(constants.b_sup) + "  witness " +
          strategy_text(constants.witness_sup) + "\n";
  text += "  b_inf = " + fmt6(constants.b_inf) + "  witness " +
          strategy_text(constants.witness_inf) + "\n";
  emit(report, cfg, text);
  return kExitOk;
}

int cmd_violation(const GlobalConfig& cfg, const std::string& state_desc,
                  const std::string& povm_file, const std::string& optimize_desc,
                  bool emit_behavior) {
  const StateInfo info = load_state(state_desc);

  bb::Behavior behavior{bb::ScenarioSpec(1, {1}, {{0.0}}), {}, false};
  bb::Json seesaw_json;
  std::string seesaw_text;
  if (!optimize_desc.empty()) {
    const bb::BellFunctional functional = bb::parse_functional_descriptor(optimize_desc);
    bb::SeesawOptions opt;
    opt.restarts = cfg.restarts;
    opt.seed = cfg.seed;
    const bb::SeesawResult result = bb::seesaw_optimize(info.state, functional, opt);
    behavior = bb::joint_probabilities(info.state, result.povms, functional.scenario());
    seesaw_json = {{"value", result.value},
                   {"best_restart", result.best_restart},
                   {"sweeps", result.sweeps},
                   {"converged", result.converged}};
    seesaw_text = "  seesaw value = " + fmt6(result.value) +
                  " (restart " + std::to_string(result.best_restart) + ", " +
                  std::to_string(result.sweeps) + " sweeps)" +
                  (result.converged ? "" : "  [warning: not converged]") + "\n";
  } else {
    const bb::PovmFamily povms = bb::povms_from_json(bb::load_json_file(povm_file));
    // Scenario: settings/outcome counts from the POVM family, outcome values 1..L.
    std::vector<int> settings;
    std::vector<std::vector<double>> outcomes;
    for (const auto& party : povms.elements) {
      settings.push_back(static_cast<int>(party.size()));
      std::vector<double> values;
      for (std::size_t l = 0; l < party.front().size(); ++l) {
        values.push_back(static_cast<double>(l + 1));
      }
      outcomes.push_back(values);
    }
    const bb::ScenarioSpec sc =
        bb::new_scenario(static_cast<int>(povms.elements.size()), settings, outcomes);
    behavior = bb::joint_probabilities(info.state, povms, sc);
  }

  const bb::ViolationCertificate cert = bb::maximal_violation(behavior);
  bb::BoundReport bounds = bb::compare(context_for(info, behavior.scenario), cert.upsilon);
  bool all_pass = true;
  for (const auto& e : bounds.entries) {
    if (e.applicable && cert.upsilon > e.value + cfg.tolerance) all_pass = false;
  }

  bb::Json report = base_report("violation", cfg);
  report["config"]["state"] = state_desc;
  if (!optimize_desc.empty()) report["config"]["optimize"] = optimize_desc;
  if (!povm_file.empty()) report["config"]["povms"] = povm_file;
  report["results"]["upsilon"] = cert.upsilon;
  report["results"]["certificate"] = {{"terms", cert.terms.size()},
                                      {"residual", cert.residual},
                                      {"coeff_sum", cert.coeff_sum},
                                      {"lp_iterations", cert.lp_iterations}};
  if (!seesaw_json.is_null()) report["results"]["seesaw"] = seesaw_json;
  report["results"]["bounds"] = bounds_json(bounds);
  report["results"]["all_pass"] = all_pass;
  if (emit_behavior) report["results"]["behavior"] = bb::behavior_to_json(behavior);

  std::string text = "violation state=" + state_desc + "\n" + seesaw_text;
  text += "  upsilon = " + fmt6(cert.upsilon) + "  (decomposition terms " +
          std::to_string(cert.terms.size()) + ", residual " + fmt6(cert.residual) + ")\n";
  text += bounds_text(bounds);
  text += std::string("  all_pass = ") + (all_pass ? "true" : "false") + "\n";
  emit(report, cfg, text);
  return all_pass ? kExitOk : kExitBoundViolation;
}

int cmd_certify_lhv(const GlobalConfig& cfg, const std::string& state_desc,
                    const std::vector<int>& settings, const std::string& povm_file) {
  const StateInfo info = load_state(state_desc);
  if (settings.size() != info.state.dims.size()) {
    throw bb::ValidationError("certify-lhv: --settings arity must match the state");
  }

  // Candidate dilations on the full copied space.
  std::vector<std::pair<std::string, std::optional<bb::SourceOperator>>> candidates;
  candidates.emplace_back(
      "product", bb::separable_eigenbasis_dilation(info.state, settings, cfg.cap_dim));
  {
    bb::SourceSolveOptions so;
    so.space_cap = cfg.cap_dim;
    candidates.emplace_back("solve-frobenius",
                            bb::solve_source_operator(info.state, settings, so));
    so.objective = bb::SourceObjective::MinTraceNorm;
    candidates.emplace_back("solve-tracenorm",
                            bb::solve_source_operator(info.state, settings, so));
  }

  // Scenario for the model: projective outcome counts equal to site dims.
  std::vector<std::vector<double>> outcome_values;
  for (int d : info.state.dims) {
    std::vector<double> values;
    for (int l = 0; l < d; ++l) values.push_back(static_cast<double>(l + 1));
    outcome_values.push_back(values);
  }
  const bb::ScenarioSpec sc = bb::new_scenario(static_cast<int>(settings.size()), settings,
                                               outcome_values);
  bb::PovmFamily povms;
  if (!povm_file.empty()) {
    povms = bb::povms_from_json(bb::load_json_file(povm_file));
  } else {
    bb::Prng prng = bb::Prng::stream(cfg.seed, 0);
    povms = bb::random_projective_povms(info.state.dims, sc, prng);
  }

  bb::AlternatingOptions alt;
  alt.restarts = cfg.restarts;
  alt.seed = cfg.seed;

  bb::Json cand_json = bb::Json::array();
  std::string text = "certify-lhv state=" + state_desc + "\n";
  bool certified = false;
  bb::Json nu_summary;
  for (const auto& [name, maybe_t] : candidates) {
    if (!maybe_t.has_value()) {
      cand_json.push_back({{"name", name}, {"available", false}});
      text += "  candidate " + name + ": not available\n";
      continue;
    }
    const auto verdict = bb::tensor_positivity_check(maybe_t->matrix, maybe_t->factor_dims(), alt);
    const char* status = verdict.status == bb::TensorPositivityStatus::PsdCertified
                             ? "psd-certified"
                             : verdict.status == bb::TensorPositivityStatus::Violated
                                   ? "violated"
                                   : "no-violation-found";
    cand_json.push_back({{"name", name},
                         {"available", true},
                         {"status", status},
                         {"value", verdict.value}});
    text += "  candidate " + name + ": " + status + "\n";
    if (!certified && verdict.status != bb::TensorPositivityStatus::Violated) {
      const bb::LqhvModel model = bb::lqhv_from_source(*maybe_t, povms, sc);
      const bool is_certified =
          verdict.status == bb::TensorPositivityStatus::PsdCertified;
      double nu_min = 0.0, nu_max = 0.0;
      int negatives = 0;
      for (double v : model.nu) {
        nu_min = std::min(nu_min, v);
        nu_max = std::max(nu_max, v);
        if (v < -bb::tol::entry) ++negatives;
      }
      nu_summary = {{"candidate", name},
                    {"certified", is_certified},
                    {"nu_min", nu_min},
                    {"nu_max", nu_max},
                    {"negative_weights", negatives},
                    {"total_variation", bb::total_variation(model)}};
      if (is_certified) certified = true;
    }
  }

  bb::Json report = base_report("certify-lhv", cfg);
  report["config"]["state"] = state_desc;
  report["config"]["settings"] = settings;
  report["results"]["candidates"] = cand_json;
  report["results"]["certified"] = certified;
  if (!nu_summary.is_null()) report["results"]["nu"] = nu_summary;

  text += std::string("  certified = ") + (certified ? "true" : "false") + "\n";
  if (!nu_summary.is_null()) {
    text += "  nu: min " + fmt6(nu_summary["nu_min"].get<double>()) + ", max " +
            fmt6(nu_summary["nu_max"].get<double>()) + ", negative weights " +
            std::to_string(nu_summary["negative_weights"].get<int>()) + ", |nu| " +
            fmt6(nu_summary["total_variation"].get<double>()) + "\n";
  }
  emit(report, cfg, text);
  return kExitOk;
}

int cmd_bound_from_dilation(const GlobalConfig& cfg, const std::string& state_desc,
                            const std::vector<int>& settings, const std::string& cand_list) {
  const StateInfo info = load_state(state_desc);
  bb::UpsilonBoundOptions opt;
  opt.space_cap = cfg.cap_dim;
  opt.alternating.restarts = cfg.restarts;
  opt.alternating.seed = cfg.seed;
  if (!cand_list.empty()) {
    opt.try_product = cand_list.find("product") != std::string::npos;
    opt.try_frobenius = cand_list.find("solve-frobenius") != std::string::npos ||
                        cand_list.find("solve,") != std::string::npos ||
                        cand_list == "solve" || cand_list.find(",solve") != std::string::npos;
    opt.try_trace_norm = cand_list.find("solve-tracenorm") != std::string::npos;
  }
  const bb::UpsilonBoundReport bound = bb::upsilon_upper_bound(info.state, settings, opt);

  bb::Json cand_json = bb::Json::array();
  std::string text = "bound-from-dilation state=" + state_desc + "\n";
  for (const auto& c : bound.candidates) {
    cand_json.push_back({{"site", c.site + 1},
                         {"name", c.name},
                         {"lower", c.interval.lower},
                         {"upper", c.interval.upper},
                         {"psd_certified", c.interval.psd_certified}});
    text += "  site " + std::to_string(c.site + 1) + " " + c.name + ": covering interval [" +
            fmt6(c.interval.lower) + ", " + fmt6(c.interval.upper) + "]" +
            (c.interval.psd_certified ? " (psd)" : "") + "\n";
  }
  text += "  certified upper bound on maximal violation = " + fmt6(bound.bound) + "\n";

  bb::Json report = base_report("bound-from-dilation", cfg);
  report["config"]["state"] = state_desc;
  report["config"]["settings"] = settings;
  report["config"]["candidates"] = cand_list.empty() ? "product,solve-frobenius,solve-tracenorm"
                                                     : cand_list;
  report["results"]["candidates"] = cand_json;
  report["results"]["bound"] = bound.bound;
  emit(report, cfg, text);
  return kExitOk;
}

int cmd_bounds_table(const GlobalConfig& cfg, int parties, std::vector<int> dims,
                     std::vector<int> settings, std::vector<int> outcome_counts,
                     const std::string& family, int ghz_d, double phi,
                     std::optional<double> violation) {
  bb::BoundContext ctx;
  ctx.n_parties = parties;
  ctx.dims = std::move(dims);
  ctx.settings = std::move(settings);
  ctx.outcome_counts = std::move(outcome_counts);
  if (ctx.outcome_counts.empty()) ctx.outcome_counts = ctx.dims;
  ctx.family = family;
  ctx.ghz_d = ghz_d;
  ctx.phi = phi;
  const bb::BoundReport report = bb::compare(ctx, violation);

  bb::Json j = base_report("bounds-table", cfg);
  j["config"]["parties"] = parties;
  j["config"]["dims"] = ctx.dims;
  j["config"]["settings"] = ctx.settings;
  j["config"]["outcomes"] = ctx.outcome_counts;
  if (!family.empty()) j["config"]["family"] = family;
  j["results"]["bounds"] = bounds_json(report);
  if (violation.has_value()) {
    j["results"]["violation"] = *violation;
    j["results"]["all_pass"] = report.all_pass;
  }

  std::string text = "bounds-table\n" + bounds_text(report);
  if (violation.has_value()) {
    text += "  violation = " + fmt6(*violation) + ", all_pass = " +
            (report.all_pass ? "true" : "false") + "\n";
  }
  emit(j, cfg, text, bounds_csv(report));
  return violation.has_value() && !report.all_pass ? kExitBoundViolation : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell violation bounds toolkit"};
  app.require_subcommand(1);

  GlobalConfig cfg;
  app.add_option("--format", cfg.format, "Output format: text, json, csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--seed", cfg.seed, "Seed for all randomized searches");
  app.add_option("--restarts", cfg.restarts, "Restart count for seesaw/alternating searches");
  app.add_option("--cap-dim", cfg.cap_dim, "Copied-space dimension cap");
  app.add_option("--tolerance", cfg.tolerance, "Margin for bound pass/fail checks");

  auto* classical = app.add_subcommand("classical-bound", "LHV constants of a functional");
  std::string functional_desc;
  classical->add_option("--functional", functional_desc, "Functional shorthand or JSON file")
      ->required();

  auto* violation = app.add_subcommand("violation", "Maximal violation and bound cross-check");
  std::string state_desc, povm_file, optimize_desc;
  bool emit_behavior = false;
  violation->add_option("--state", state_desc, "State descriptor or JSON file")->required();
  violation->add_option("--povms", povm_file, "POVM family JSON file");
  violation->add_option("--optimize", optimize_desc, "Functional to seesaw-optimize");
  violation->add_flag("--emit-behavior", emit_behavior, "Embed the behavior in the report");

  auto* certify = app.add_subcommand("certify-lhv", "Tensor-positive dilation certificate");
  std::string c_state;
  std::vector<int> c_settings;
  std::string c_povms;
  certify->add_option("--state", c_state, "State descriptor or JSON file")->required();
  certify->add_option("--settings", c_settings, "Setting counts, e.g. 2,2")
      ->required()
      ->delimiter(',');
  certify->add_option("--povms", c_povms, "POVM family JSON file for the model weights");

  auto* dilation = app.add_subcommand("bound-from-dilation", "Covering-norm upper bound");
  std::string d_state, d_candidates;
  std::vector<int> d_settings;
  dilation->add_option("--state", d_state, "State descriptor or JSON file")->required();
  dilation->add_option("--settings", d_settings, "Setting counts, e.g. 2,2")
      ->required()
      ->delimiter(',');
  dilation->add_option("--candidates", d_candidates,
                       "Comma list among product, solve-frobenius, solve-tracenorm");

  auto* table = app.add_subcommand("bounds-table", "Closed-form bound catalog");
  int t_parties = 0;
  std::vector<int> t_dims, t_settings, t_outcomes;
  std::string t_family;
  int t_ghz_d = 0;
  double t_phi = 0.0;
  double t_violation = -1.0;
  table->add_option("--parties", t_parties)->required();
  table->add_option("--dims", t_dims)->required()->delimiter(',');
  table->add_option("--settings", t_settings)->required()->delimiter(',');
  table->add_option("--outcomes", t_outcomes)->delimiter(',');
  table->add_option("--family", t_family)->check(CLI::IsMember({"singlet", "ghz", "gghz"}));
  table->add_option("--ghz-d", t_ghz_d);
  table->add_option("--phi", t_phi);
  table->add_option("--violation", t_violation, "Violation value to check (optional)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (classical->parsed()) return cmd_classical_bound(cfg, functional_desc);
    if (violation->parsed()) {
      if (povm_file.empty() == optimize_desc.empty()) {
        throw bb::ValidationError("violation: exactly one of --povms / --optimize required");
      }
      return cmd_violation(cfg, state_desc, povm_file, optimize_desc, emit_behavior);
    }
    if (certify->parsed()) return cmd_certify_lhv(cfg, c_state, c_settings, c_povms);
    if (dilation->parsed()) {
      return cmd_bound_from_dilation(cfg, d_state, d_settings, d_candidates);
    }
    if (table->parsed()) {
      std::optional<double> v;
      if (t_violation >= 0.0) v = t_violation;
      return cmd_bounds_table(cfg, t_parties, t_dims, t_settings, t_outcomes, t_family, t_ghz_d,
                              t_phi, v);
    }
  } catch (const bb::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const bb::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
