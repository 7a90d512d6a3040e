#include "bellbound/io.hpp"

#include <fstream>
#include <sstream>

#include "bellbound/functionals.hpp"

namespace bellbound {

namespace {

std::vector<int> int_list(const Json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array");
  std::vector<int> out;
  for (const auto& v : j) out.push_back(v.get<int>());
  return out;
}

std::string setting_key(const std::vector<int>& setting) {
  std::ostringstream os;
  for (std::size_t i = 0; i < setting.size(); ++i) {
    if (i) os << ',';
    os << setting[i] + 1;
  }
  return os.str();
}

std::vector<int> parse_setting_key(const std::string& key, int n_parties) {
  std::vector<int> out;
  std::istringstream is(key);
  std::string part;
  while (std::getline(is, part, ',')) out.push_back(std::stoi(part) - 1);
  if (static_cast<int>(out.size()) != n_parties) {
    throw ValidationError("behavior: table key '" + key + "' has wrong arity");
  }
  return out;
}

}  // namespace

Json scenario_to_json(const ScenarioSpec& scenario) {
  Json j;
  j["parties"] = scenario.parties();
  j["settings"] = scenario.settings();
  j["outcomes"] = scenario.outcomes();
  return j;
}

ScenarioSpec scenario_from_json(const Json& j) {
  if (!j.contains("parties") || !j.contains("settings") || !j.contains("outcomes")) {
    throw ValidationError("scenario: missing parties/settings/outcomes");
  }
  const int parties = j.at("parties").get<int>();
  std::vector<std::vector<double>> outcomes;
  for (const auto& row : j.at("outcomes")) outcomes.push_back(row.get<std::vector<double>>());
  return new_scenario(parties, int_list(j.at("settings"), "scenario.settings"),
                      std::move(outcomes));
}

Json functional_to_json(const BellFunctional& functional) {
  Json j;
  j["scenario"] = scenario_to_json(functional.scenario());
  Json terms = Json::array();
  for (const auto& t : functional.terms()) {
    Json term;
    Json s = Json::array(), l = Json::array();
    for (int v : t.s) s.push_back(v + 1);
    for (int v : t.l) l.push_back(v + 1);
    term["s"] = s;
    term["l"] = l;
    term["c"] = t.c;
    terms.push_back(term);
  }
  j["terms"] = terms;
  return j;
}

BellFunctional functional_from_json(const Json& j) {
  ScenarioSpec sc = scenario_from_json(j.at("scenario"));
  std::vector<FunctionalTerm> terms;
  for (const auto& tj : j.at("terms")) {
    FunctionalTerm t;
    for (int v : int_list(tj.at("s"), "functional.term.s")) t.s.push_back(v - 1);
    for (int v : int_list(tj.at("l"), "functional.term.l")) t.l.push_back(v - 1);
    t.c = tj.at("c").get<double>();
    terms.push_back(std::move(t));
  }
  return BellFunctional(std::move(sc), std::move(terms));
}

Json behavior_to_json(const Behavior& behavior) {
  Json j;
  j["scenario"] = scenario_to_json(behavior.scenario);
  Json tables = Json::object();
  const auto& sc = behavior.scenario;
  std::vector<int> setting(sc.parties());
  for (std::uint64_t f = 0; f < sc.setting_grid().total(); ++f) {
    sc.setting_grid().unflatten_into(f, setting);
    tables[setting_key(setting)] = behavior.tables[f];
  }
  j["tables"] = tables;
  if (behavior.signed_allowed) j["signed"] = true;
  return j;
}

Behavior behavior_from_json(const Json& j) {
  ScenarioSpec sc = scenario_from_json(j.at("scenario"));
  const bool signed_allowed = j.value("signed", false);
  std::vector<std::vector<double>> tables(sc.setting_grid().total());
  const auto& tj = j.at("tables");
  if (tj.size() != tables.size()) {
    throw ValidationError("behavior: expected " + std::to_string(tables.size()) + " tables");
  }
  for (auto it = tj.begin(); it != tj.end(); ++it) {
    const auto setting = parse_setting_key(it.key(), sc.parties());
    tables[sc.setting_grid().flatten(setting)] = it.value().get<std::vector<double>>();
  }
  return make_behavior(std::move(sc), std::move(tables), signed_allowed);
}

Json matrix_to_json(const CMat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(row);
  }
  return rows;
}

CMat matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix: expected nested arrays");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  CMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError("matrix: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row.at(c);
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

Json state_to_json(const DensityState& state) {
  Json j;
  j["dims"] = state.dims;
  j["matrix"] = matrix_to_json(state.matrix);
  return j;
}

DensityState state_from_json(const Json& j) {
  return make_state(int_list(j.at("dims"), "state.dims"), matrix_from_json(j.at("matrix")));
}

Json povms_to_json(const PovmFamily& povms) {
  Json j;
  j["dims"] = povms.dims;
  Json parties = Json::array();
  for (const auto& party : povms.elements) {
    Json settings = Json::array();
    for (const auto& setting : party) {
      Json outcomes = Json::array();
      for (const auto& element : setting) outcomes.push_back(matrix_to_json(element));
      settings.push_back(outcomes);
    }
    parties.push_back(settings);
  }
  j["povms"] = parties;
  return j;
}

PovmFamily povms_from_json(const Json& j) {
  PovmFamily povms;
  povms.dims = int_list(j.at("dims"), "povms.dims");
  for (const auto& party : j.at("povms")) {
    std::vector<std::vector<CMat>> settings;
    for (const auto& setting : party) {
      std::vector<CMat> outcomes;
      for (const auto& element : setting) outcomes.push_back(matrix_from_json(element));
      settings.push_back(std::move(outcomes));
    }
    povms.elements.push_back(std::move(settings));
  }
  validate_povms(povms);
  return povms;
}

Json certificate_to_json(const ViolationCertificate& certificate, const ScenarioSpec& scenario) {
  Json j;
  j["upsilon"] = certificate.upsilon;
  j["residual"] = certificate.residual;
  j["coeff_sum"] = certificate.coeff_sum;
  Json terms = Json::array();
  for (const auto& [index, c] : certificate.terms) {
    const auto st = strategy_from_index(scenario, index);
    Json choice = Json::array();
    for (const auto& per_party : st.choice) {
      Json row = Json::array();
      for (int l : per_party) row.push_back(l + 1);
      choice.push_back(row);
    }
    terms.push_back(Json{{"strategy", choice}, {"c", c}});
  }
  j["terms"] = terms;
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ValidationError("parse error in '" + path + "': " + e.what());
  }
  return j;
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ValidationError("bad key=value pair '" + part + "'");
    out[part.substr(0, eq)] = part.substr(eq + 1);
  }
  return out;
}

}  // namespace

DensityState parse_state_descriptor(const std::string& descriptor) {
  if (descriptor == "singlet") return singlet();
  const auto colon = descriptor.find(':');
  if (colon != std::string::npos) {
    const std::string head = descriptor.substr(0, colon);
    if (head == "ghz") {
      const auto kv = parse_kv(descriptor.substr(colon + 1));
      if (!kv.count("N") || !kv.count("d")) {
        throw ValidationError("ghz state needs N=..,d=..");
      }
      return ghz_qudit(std::stoi(kv.at("N")), std::stoi(kv.at("d")));
    }
    if (head == "gghz") {
      const auto kv = parse_kv(descriptor.substr(colon + 1));
      if (!kv.count("N") || !kv.count("phi")) {
        throw ValidationError("gghz state needs N=..,phi=..");
      }
      return generalized_ghz(std::stoi(kv.at("N")), std::stod(kv.at("phi")));
    }
  }
  return state_from_json(load_json_file(descriptor));
}

BellFunctional parse_functional_descriptor(const std::string& descriptor) {
  try {
    return functional_from_shorthand(descriptor);
  } catch (const ValidationError&) {
    return functional_from_json(load_json_file(descriptor));
  }
}

}  // namespace bellbound
