#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "mqnmr/basis.hpp"
#include "mqnmr/geometry.hpp"

namespace mqnmr {

enum class Task { scan, zeros, maxima, protocol, config_dump };

enum class SystemType { ring, chain, rectangle, cyclopentane, custom };

enum class InitialState { equilibrium, up_down, down_up };

// eq6: divide intensities by Tr I_z^2 (the conventional divisor).
// initial: divide by Tr rho(0)^2, normalizing a two-level start to unit sum.
enum class NormalizationMode { eq6, initial };

// One fully described run. Optional fields distinguish "never set" from a
// default, so command-line flags can override config-file values and
// validation can demand task-specific fields by name.
struct RunConfig {
    std::optional<Task> task;
    std::optional<SystemType> system_type;
    std::optional<int> n_spins;
    std::optional<double> d1;
    std::optional<std::string> couplings_file;
    InitialState initial = InitialState::equilibrium;
    NormalizationMode normalization = NormalizationMode::eq6;
    std::optional<double> t_max;
    double dt = 0.01;
    double threshold = 1e-3; // relative to the scan maximum
    std::optional<double> tau1;
    std::optional<double> tau2;
    std::optional<int> filter_order;
    bool saturate = false;
    std::optional<std::string> out_path;
    int max_spins = kDefaultMaxSpins;
};

// Strict JSON -> RunConfig: unknown keys are an error listing every
// offender; wrong value types name the field.
RunConfig parse_config(const nlohmann::json& doc);

// Reads and parses `path`. Unreadable file -> IoError; malformed JSON or
// content violations -> ValidationError.
RunConfig parse_config_file(const std::string& path);

// Full cross-field validation for the given task; throws ValidationError
// with a message naming the field and bound. Returns the config unchanged.
const RunConfig& validate_config(const RunConfig& config, Task task);

// Resolved pieces used by the runner.
SpinSystem system_from_config(const RunConfig& config);
CMatrix initial_from_config(const RunConfig& config, const BasisInfo& basis);
double normalization_from_config(const RunConfig& config,
                                 const BasisInfo& basis,
                                 const CMatrix& initial);

// Inverse of parse_config for round trips; emits only fields that are set.
nlohmann::json dump_config(const RunConfig& config);

// Enum <-> token helpers shared by config parsing and the CLI surface.
std::string to_token(Task task);
std::string to_token(SystemType type);
std::string to_token(InitialState initial);
std::string to_token(NormalizationMode mode);
SystemType system_type_from_token(const std::string& token);
InitialState initial_from_token(const std::string& token);
NormalizationMode normalization_from_token(const std::string& token);
Task task_from_token(const std::string& token);

} // namespace mqnmr
