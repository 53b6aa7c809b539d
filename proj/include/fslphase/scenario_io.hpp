#pragma once

#include "fslphase/perturbation.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fslphase {

/// Input validation failure, carrying the offending key path (e.g. "gravity.g_m_s2").
class SchemaError : public ConfigurationError {
public:
    SchemaError(const std::string& key_path, const std::string& message)
        : ConfigurationError(key_path + ": " + message), key_path_(key_path) {}
    const std::string& key_path() const { return key_path_; }

private:
    std::string key_path_;
};

struct CompensationSettings {
    bool enabled = false;
    double Gamma = 0.0;  ///< m/s^2

    bool operator==(const CompensationSettings&) const = default;
};

/// A scenario as described by a file: the computed scenario plus the settings
/// it was derived from.
struct ScenarioFile {
    Scenario scenario;
    CompensationSettings compensation;
};

/// Parses and validates a scenario document. Unknown keys are rejected,
/// "resonant" is accepted for lasers.delta_k_rad_m (two-photon mechanisms) and
/// atom.omega_A_rad_s (SPT), and a compensation section sets the delay of the
/// mirror pulse.
ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Writes all values numerically (resonant keywords resolved), so that the
/// output re-loads to the same scenario.
std::string dump_scenario(const ScenarioFile& file);
void save_scenario(const ScenarioFile& file, const std::filesystem::path& path);

enum class SweepScale { linear, log };

struct SweepSpec {
    std::string parameter;  ///< key path, e.g. "atom.v0_m_s"
    double start = 0.0;
    double stop = 0.0;
    int count = 2;
    SweepScale scale = SweepScale::linear;

    std::vector<double> values() const;
    void validate() const;
};

std::optional<SweepScale> parse_sweep_scale(const std::string& name);

struct SweepRow {
    double param_value = 0.0;
    PhaseBreakdown breakdown;
};

/// Evaluates the scenario text with `spec.parameter` replaced at every grid
/// point, concurrently; rows come back in grid order.
std::vector<SweepRow> run_sweep(const std::string& scenario_text, const SweepSpec& spec);

/// CSV with the fixed sweep header.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Locale-independent, round-trippable formatting of a double.
std::string format_number(double value);

}  // namespace fslphase
