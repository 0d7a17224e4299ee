#pragma once

// Scenario configuration files (strict JSON schema).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relcap/channel.hpp"
#include "relcap/kinematics.hpp"

namespace relcap {

/// Schema violation. `field` is a JSON path such as
/// "scenarios[0].channel.bandwidth"; `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, std::string field, int line)
        : std::runtime_error(message), field_(std::move(field)), line_(line) {}
    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }
    /// "line N, field F: message".
    std::string diagnostic() const;

private:
    std::string field_;
    int line_;
};

enum class Task { capacities, identities, theorem, lemma, oracle, sweep };
enum class SweepAxis { beta, sigma };

std::string to_string(Task task);
std::string to_string(SweepAxis axis);

struct NumericsConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_depth = 40;
    std::size_t grid = 200;           // extremal oracle grid per axis
    std::size_t radial_grid = 10000;  // grid for b
    std::uint64_t seed = 1;
    std::size_t random_profiles = 0;  // extra randomized Theorem-1 witnesses
    friend bool operator==(const NumericsConfig&, const NumericsConfig&) = default;

    QuadratureSpec quadrature() const { return {rel_tol, abs_tol, max_depth, {}}; }
};

struct ProfileConfig {
    std::vector<double> values;
    std::vector<double> edges;  // empty: uniform pieces
    friend bool operator==(const ProfileConfig&, const ProfileConfig&) = default;
};

struct SweepConfig {
    SweepAxis axis = SweepAxis::beta;
    double from = 0.5;
    double to = 0.9;
    std::size_t steps = 3;
    /// When set, each row uses sigma = factor * coverage bound.
    std::optional<double> sigma_factor;
    friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct OracleConfig {
    double b = 0.5;
    friend bool operator==(const OracleConfig&, const OracleConfig&) = default;
};

struct ScenarioConfig {
    std::string scenario_id;
    TrajectoryParams trajectory;
    std::optional<double> duration;  // optional consistency check on T_A
    ChannelParams channel;
    NumericsConfig numerics;
    std::vector<Task> tasks;
    std::optional<ProfileConfig> profile;
    std::optional<SweepConfig> sweep;
    std::optional<OracleConfig> oracle;
    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses either a single scenario object or {"scenarios": [...]}. Unknown
/// keys are rejected and every scenario is re-validated (trajectory, channel,
/// profile, sweep, oracle). Throws ConfigError.
std::vector<ScenarioConfig> parse_config(const std::string& text);

/// Canonical JSON text of one scenario (parse_config inverts it).
std::string serialize_config(const ScenarioConfig& config);
/// Canonical JSON text of a batch.
std::string serialize_configs(const std::vector<ScenarioConfig>& configs);

/// Checks a scenario as parse_config would; `path` prefixes field names.
void validate_config(const ScenarioConfig& config, const std::string& path = "");

}  // namespace relcap
