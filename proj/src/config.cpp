// Copyright 2026 The kerrcat authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "kerrcat/model.hpp"

namespace kerrcat {

namespace {

using FieldMap = std::map<std::string, double DeviceParams::*>;

const FieldMap& fields() {
    static const FieldMap m = {
        {"K_MHz", &DeviceParams::K_MHz},
        {"eps2_MHz", &DeviceParams::eps2_MHz},
        {"eps_x_MHz", &DeviceParams::eps_x_MHz},
        {"delta_as_MHz", &DeviceParams::delta_as_MHz},
        {"xi_s", &DeviceParams::xi_s},
        {"xi_cr", &DeviceParams::xi_cr},
        {"g3_MHz", &DeviceParams::g3_MHz},
        {"chi_ab_MHz", &DeviceParams::chi_ab_MHz},
        {"g_cr_MHz", &DeviceParams::g_cr_MHz},
        {"g_cr_phase_rad", &DeviceParams::g_cr_phase_rad},
        {"T1_us", &DeviceParams::T1_us},
        {"kappa_b_c_MHz", &DeviceParams::kappa_b_c_MHz},
        {"kappa_b_l_MHz", &DeviceParams::kappa_b_l_MHz},
        {"n_th", &DeviceParams::n_th},
        {"kappa_phi_eff_Hz", &DeviceParams::kappa_phi_eff_Hz},
    };
    return m;
}

void set_field(DeviceParams& p, const std::string& key, double value,
               std::vector<std::string>* touched) {
    auto it = fields().find(key);
    if (it == fields().end()) {
        throw ConfigError("unknown config key: " + key);
    }
    p.*(it->second) = value;
    if (touched) touched->push_back(key);
}

// Minimal flat-TOML reader: top-level `key = value` lines, '#' comments.
// That covers the whole DeviceParams schema; nested tables are rejected.
std::map<std::string, double> parse_flat_toml(std::istream& in) {
    std::map<std::string, double> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        std::string body = line.substr(first, last - first + 1);
        if (body.front() == '[') {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": tables are not supported, use flat keys");
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        }
        std::string key = body.substr(0, eq);
        std::string val = body.substr(eq + 1);
        const auto kend = key.find_last_not_of(" \t");
        key = key.substr(0, kend + 1);
        const auto vbeg = val.find_first_not_of(" \t");
        if (vbeg == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": missing value for " + key);
        }
        val = val.substr(vbeg);
        std::size_t used = 0;
        double x;
        try {
            x = std::stod(val, &used);
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": not a number: " + val);
        }
        if (val.find_first_not_of(" \t", used) != std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": trailing characters after value");
        }
        kv[key] = x;
    }
    return kv;
}

std::map<std::string, double> parse_json_config(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (j.is_null()) return {};
    if (!j.is_object()) throw ConfigError("config root must be an object");
    std::map<std::string, double> kv;
    for (auto& [key, value] : j.items()) {
        if (!value.is_number()) {
            throw ConfigError("config key " + key + " must be a number");
        }
        kv[key] = value.get<double>();
    }
    return kv;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

ConfigReport validate_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);

    std::map<std::string, double> kv;
    if (ends_with(path, ".json")) {
        kv = parse_json_config(in);
    } else if (ends_with(path, ".toml")) {
        kv = parse_flat_toml(in);
    } else {
        // Empty files are accepted as "all defaults" regardless of name.
        std::stringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
            kv = {};
        } else {
            throw ConfigError("config extension must be .json or .toml: " + path);
        }
    }

    ConfigReport report;
    for (const auto& [key, value] : kv) {
        set_field(report.params, key, value, &report.overridden_keys);
    }
    for (const auto& [key, ptr] : fields()) {
        if (!kv.count(key)) report.defaulted_keys.push_back(key);
    }
    report.params.validate();
    return report;
}

DeviceParams load_params(const std::string& path) {
    return validate_config(path).params;
}

void apply_override(DeviceParams& p, const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override must be key=value: " + key_value);
    }
    const std::string key = key_value.substr(0, eq);
    const std::string val = key_value.substr(eq + 1);
    std::size_t used = 0;
    double x;
    try {
        x = std::stod(val, &used);
    } catch (const std::exception&) {
        throw ConfigError("override value is not a number: " + key_value);
    }
    if (used != val.size()) {
        throw ConfigError("override value is not a number: " + key_value);
    }
    set_field(p, key, x, nullptr);
    p.validate();
}

std::string params_to_json(const DeviceParams& p) {
    nlohmann::ordered_json j;
    DeviceParams tmp = p;
    for (const auto& [key, ptr] : fields()) j[key] = tmp.*ptr;
    return j.dump(2);
}

}  // namespace kerrcat
