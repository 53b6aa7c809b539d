#pragma once

#include <stdexcept>

namespace fslphase {

/// Speed of light and reduced Planck constant in SI units.
///
/// Operations never read global defaults: every call receives the constants
/// explicitly so the oracle can evaluate the same scenario at an artificial
/// light speed.
struct PhysicalConstants {
    double c = 0.0;     ///< m/s
    double hbar = 0.0;  ///< J s

    /// CODATA 2018 values (c exact by definition of the metre).
    static constexpr PhysicalConstants codata() { return {299792458.0, 1.054571817e-34}; }

    PhysicalConstants with_light_speed(double c_new) const { return {c_new, hbar}; }

    void validate() const {
        if (!(c > 0.0)) throw std::invalid_argument("speed of light must be positive");
        if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    }

    bool operator==(const PhysicalConstants&) const = default;
};

/// Raised when a computation cannot proceed (open geometry, causality, no root).
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when inputs violate a documented constraint.
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace fslphase
