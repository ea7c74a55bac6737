#pragma once

#include <map>
#include <string>

#include "relsub/simulate.hpp"

namespace relsub {

// Flat key=value file ('#' starts a comment). Unknown keys are rejected so
// typos fail loudly.
std::map<std::string, std::string> parse_kv_file(const std::string& path);

// Generator config from key=value pairs. When target_alpha is present the
// censoring window is calibrated; otherwise censor_c / censor_d are required.
GenConfig gen_config_from_kv(const std::map<std::string, std::string>& kv);

SimConfig sim_config_from_kv(const std::map<std::string, std::string>& kv);
SimConfig sim_config_from_file(const std::string& path);
GenConfig gen_config_from_file(const std::string& path);

ParamVector parse_params(ModelKind model, const std::string& comma_list);

}  // namespace relsub
