#pragma once

#include <string>

#include "json.hpp"

#include "bellbound/lhv.hpp"
#include "bellbound/quantum.hpp"
#include "bellbound/scenario.hpp"

namespace bellbound {

using Json = nlohmann::json;

// File formats use 1-based setting/outcome indices; complex entries are
// [re, im] pairs; matrices are row-major nested arrays.

Json scenario_to_json(const ScenarioSpec& scenario);
ScenarioSpec scenario_from_json(const Json& j);

Json functional_to_json(const BellFunctional& functional);
BellFunctional functional_from_json(const Json& j);

Json behavior_to_json(const Behavior& behavior);
Behavior behavior_from_json(const Json& j);

Json matrix_to_json(const CMat& m);
CMat matrix_from_json(const Json& j);

Json state_to_json(const DensityState& state);
DensityState state_from_json(const Json& j);

Json povms_to_json(const PovmFamily& povms);
PovmFamily povms_from_json(const Json& j);

Json certificate_to_json(const ViolationCertificate& certificate, const ScenarioSpec& scenario);

Json load_json_file(const std::string& path);

// "singlet", "ghz:N=3,d=2", "gghz:N=3,phi=0.5236", or a JSON file path.
DensityState parse_state_descriptor(const std::string& descriptor);

// Named shorthand if recognized, otherwise a functional JSON file.
BellFunctional parse_functional_descriptor(const std::string& descriptor);

}  // namespace bellbound
