#include "mqnmr/run_config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "mqnmr/coherence.hpp"
#include "mqnmr/errors.hpp"

namespace mqnmr {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& what) {
    throw ValidationError("config: field '" + field + "' " + what);
}

double number_field(const json& value, const std::string& field) {
    if (!value.is_number()) {
        bad_field(field, "must be a number");
    }
    return value.get<double>();
}

int integer_field(const json& value, const std::string& field) {
    if (!value.is_number_integer()) {
        bad_field(field, "must be an integer");
    }
    return value.get<int>();
}

std::string string_field(const json& value, const std::string& field) {
    if (!value.is_string()) {
        bad_field(field, "must be a string");
    }
    return value.get<std::string>();
}

bool bool_field(const json& value, const std::string& field) {
    if (!value.is_boolean()) {
        bad_field(field, "must be a boolean");
    }
    return value.get<bool>();
}

void reject_unknown_keys(const json& doc, const std::set<std::string>& known,
                         const std::string& scope) {
    std::string unknown;
    for (const auto& item : doc.items()) {
        if (known.count(item.key()) == 0) {
            if (!unknown.empty()) {
                unknown += ", ";
            }
            unknown += "'" + item.key() + "'";
        }
    }
    if (!unknown.empty()) {
        throw ValidationError("config: unknown key(s) in " + scope + ": " +
                              unknown);
    }
}

} // namespace

std::string to_token(Task task) {
    switch (task) {
    case Task::scan: return "scan";
    case Task::zeros: return "zeros";
    case Task::maxima: return "maxima";
    case Task::protocol: return "protocol";
    case Task::config_dump: return "config-dump";
    }
    return "?";
}

std::string to_token(SystemType type) {
    switch (type) {
    case SystemType::ring: return "ring";
    case SystemType::chain: return "chain";
    case SystemType::rectangle: return "rectangle";
    case SystemType::cyclopentane: return "cyclopentane";
    case SystemType::custom: return "custom";
    }
    return "?";
}

std::string to_token(InitialState initial) {
    switch (initial) {
    case InitialState::equilibrium: return "equilibrium";
    case InitialState::up_down: return "up-down";
    case InitialState::down_up: return "down-up";
    }
    return "?";
}

std::string to_token(NormalizationMode mode) {
    return mode == NormalizationMode::eq6 ? "eq6" : "initial";
}

Task task_from_token(const std::string& token) {
    if (token == "scan") return Task::scan;
    if (token == "zeros") return Task::zeros;
    if (token == "maxima") return Task::maxima;
    if (token == "protocol") return Task::protocol;
    if (token == "config-dump") return Task::config_dump;
    bad_field("task", "must be one of scan|zeros|maxima|protocol|config-dump, "
                      "got '" + token + "'");
}

SystemType system_type_from_token(const std::string& token) {
    if (token == "ring") return SystemType::ring;
    if (token == "chain") return SystemType::chain;
    if (token == "rectangle") return SystemType::rectangle;
    if (token == "cyclopentane") return SystemType::cyclopentane;
    if (token == "custom") return SystemType::custom;
    bad_field("system.type",
              "must be one of ring|chain|rectangle|cyclopentane|custom, got '" +
                  token + "'");
}

InitialState initial_from_token(const std::string& token) {
    if (token == "equilibrium") return InitialState::equilibrium;
    if (token == "up-down") return InitialState::up_down;
    if (token == "down-up") return InitialState::down_up;
    bad_field("initial", "must be one of equilibrium|up-down|down-up, got '" +
                             token + "'");
}

NormalizationMode normalization_from_token(const std::string& token) {
    if (token == "eq6") return NormalizationMode::eq6;
    if (token == "initial") return NormalizationMode::initial;
    bad_field("normalize", "must be eq6 or initial, got '" + token + "'");
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("config: top level must be a JSON object");
    }
    static const std::set<std::string> known = {
        "task", "system", "initial", "normalize", "tmax",
        "dt",   "threshold", "tau1", "tau2",      "filter",
        "saturate", "out", "max_spins"};
    reject_unknown_keys(doc, known, "top-level object");

    RunConfig config;
    if (doc.contains("task")) {
        config.task = task_from_token(string_field(doc["task"], "task"));
    }
    if (doc.contains("system")) {
        const json& sys = doc["system"];
        if (!sys.is_object()) {
            bad_field("system", "must be an object");
        }
        static const std::set<std::string> known_sys = {"type", "n", "d1",
                                                        "file"};
        reject_unknown_keys(sys, known_sys, "'system' object");
        if (sys.contains("type")) {
            config.system_type = system_type_from_token(
                string_field(sys["type"], "system.type"));
        }
        if (sys.contains("n")) {
            config.n_spins = integer_field(sys["n"], "system.n");
        }
        if (sys.contains("d1")) {
            config.d1 = number_field(sys["d1"], "system.d1");
        }
        if (sys.contains("file")) {
            config.couplings_file = string_field(sys["file"], "system.file");
        }
    }
    if (doc.contains("initial")) {
        config.initial =
            initial_from_token(string_field(doc["initial"], "initial"));
    }
    if (doc.contains("normalize")) {
        config.normalization = normalization_from_token(
            string_field(doc["normalize"], "normalize"));
    }
    if (doc.contains("tmax")) {
        config.t_max = number_field(doc["tmax"], "tmax");
    }
    if (doc.contains("dt")) {
        config.dt = number_field(doc["dt"], "dt");
    }
    if (doc.contains("threshold")) {
        config.threshold = number_field(doc["threshold"], "threshold");
    }
    if (doc.contains("tau1")) {
        config.tau1 = number_field(doc["tau1"], "tau1");
    }
    if (doc.contains("tau2")) {
        config.tau2 = number_field(doc["tau2"], "tau2");
    }
    if (doc.contains("filter")) {
        config.filter_order = integer_field(doc["filter"], "filter");
    }
    if (doc.contains("saturate")) {
        config.saturate = bool_field(doc["saturate"], "saturate");
    }
    if (doc.contains("out")) {
        config.out_path = string_field(doc["out"], "out");
    }
    if (doc.contains("max_spins")) {
        config.max_spins = integer_field(doc["max_spins"], "max_spins");
    }
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("config: cannot open '" + path + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& err) {
        throw ValidationError("config: malformed JSON in '" + path +
                              "': " + err.what());
    }
    return parse_config(doc);
}

const RunConfig& validate_config(const RunConfig& config, Task task) {
    if (!config.system_type) {
        throw ValidationError("config: system type is required "
                              "(--system or system.type)");
    }
    const SystemType type = *config.system_type;

    if (config.max_spins < 1) {
        bad_field("max_spins", "must be >= 1");
    }

    int n = 0;
    switch (type) {
    case SystemType::ring:
    case SystemType::chain:
        if (!config.n_spins) {
            bad_field("system.n", "is required for ring and chain systems");
        }
        if (*config.n_spins < 2) {
            bad_field("system.n", "must be >= 2");
        }
        n = *config.n_spins;
        break;
    case SystemType::rectangle:
        if (config.n_spins && *config.n_spins != 4) {
            bad_field("system.n", "must be 4 for the rectangle system");
        }
        n = 4;
        break;
    case SystemType::cyclopentane:
        if (config.n_spins && *config.n_spins != 10) {
            bad_field("system.n", "must be 10 for the cyclopentane system");
        }
        n = 10;
        break;
    case SystemType::custom:
        if (!config.couplings_file) {
            bad_field("system.file", "is required for custom systems");
        }
        if (!std::filesystem::exists(*config.couplings_file)) {
            bad_field("system.file", "does not exist: '" +
                                         *config.couplings_file + "'");
        }
        if (!config.n_spins) {
            bad_field("system.n", "is required for custom systems");
        }
        if (*config.n_spins < 1) {
            bad_field("system.n", "must be >= 1");
        }
        n = *config.n_spins;
        break;
    }
    if (n > config.max_spins) {
        bad_field("system.n", "exceeds the spin cap max_spins=" +
                                  std::to_string(config.max_spins));
    }
    if (config.d1 && type != SystemType::ring && type != SystemType::chain) {
        bad_field("system.d1", "is only configurable for ring and chain "
                               "systems");
    }
    if (config.d1 && (!std::isfinite(*config.d1) || *config.d1 == 0.0)) {
        bad_field("system.d1", "must be finite and nonzero");
    }
    if (config.couplings_file && type != SystemType::custom) {
        bad_field("system.file", "is only valid for custom systems");
    }

    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
        bad_field("dt", "must be > 0");
    }
    if (!(config.threshold > 0.0)) {
        bad_field("threshold", "must be > 0");
    }

    switch (task) {
    case Task::scan:
    case Task::zeros:
    case Task::maxima:
        if (!config.t_max) {
            bad_field("tmax", "is required for scan, zeros and maxima tasks");
        }
        if (!(*config.t_max > 0.0) || !std::isfinite(*config.t_max)) {
            bad_field("tmax", "must be > 0");
        }
        break;
    case Task::protocol:
        if (!config.tau1) {
            bad_field("tau1", "is required for the protocol task");
        }
        if (!config.tau2) {
            bad_field("tau2", "is required for the protocol task");
        }
        if (!(*config.tau1 >= 0.0) || !(*config.tau2 >= 0.0)) {
            bad_field("tau1/tau2", "must be >= 0");
        }
        if (!config.filter_order) {
            bad_field("filter", "is required for the protocol task");
        }
        if (*config.filter_order < 0 || *config.filter_order > n) {
            bad_field("filter", "must lie in [0, n]=" + std::string("[0, ") +
                                    std::to_string(n) + "]");
        }
        break;
    case Task::config_dump:
        break;
    }
    return config;
}

SpinSystem system_from_config(const RunConfig& config) {
    if (!config.system_type) {
        throw ValidationError("config: system type is required");
    }
    const double d1 = config.d1.value_or(1.0);
    switch (*config.system_type) {
    case SystemType::ring:
        return ring_couplings(*config.n_spins, d1);
    case SystemType::chain:
        return chain_couplings(*config.n_spins, d1);
    case SystemType::rectangle:
        return rectangle_couplings();
    case SystemType::cyclopentane:
        return cyclopentane_couplings();
    case SystemType::custom:
        return load_couplings(*config.couplings_file, *config.n_spins);
    }
    throw ValidationError("config: unreachable system type");
}

CMatrix initial_from_config(const RunConfig& config, const BasisInfo& basis) {
    switch (config.initial) {
    case InitialState::equilibrium:
        return equilibrium_state(basis);
    case InitialState::up_down:
        return intermediate_state(basis, +1);
    case InitialState::down_up:
        return intermediate_state(basis, -1);
    }
    throw ValidationError("config: unreachable initial state");
}

double normalization_from_config(const RunConfig& config,
                                 const BasisInfo& basis,
                                 const CMatrix& initial) {
    if (config.normalization == NormalizationMode::eq6) {
        return iz_square_trace(basis);
    }
    const double purity = (initial * initial).trace().real();
    if (!(purity > 0.0)) {
        throw ValidationError(
            "config: normalize=initial requires Tr rho(0)^2 > 0");
    }
    return purity;
}

nlohmann::json dump_config(const RunConfig& config) {
    json doc = json::object();
    if (config.task) {
        doc["task"] = to_token(*config.task);
    }
    json sys = json::object();
    if (config.system_type) {
        sys["type"] = to_token(*config.system_type);
    }
    if (config.n_spins) {
        sys["n"] = *config.n_spins;
    }
    if (config.d1) {
        sys["d1"] = *config.d1;
    }
    if (config.couplings_file) {
        sys["file"] = *config.couplings_file;
    }
    if (!sys.empty()) {
        doc["system"] = sys;
    }
    doc["initial"] = to_token(config.initial);
    doc["normalize"] = to_token(config.normalization);
    if (config.t_max) {
        doc["tmax"] = *config.t_max;
    }
    doc["dt"] = config.dt;
    doc["threshold"] = config.threshold;
    if (config.tau1) {
        doc["tau1"] = *config.tau1;
    }
    if (config.tau2) {
        doc["tau2"] = *config.tau2;
    }
    if (config.filter_order) {
        doc["filter"] = *config.filter_order;
    }
    doc["saturate"] = config.saturate;
    if (config.out_path) {
        doc["out"] = *config.out_path;
    }
    doc["max_spins"] = config.max_spins;
    return doc;
}

} // namespace mqnmr
