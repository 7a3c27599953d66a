#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace irsradar {

inline constexpr double kSpeedOfLight = 2.998e8;        // m/s
inline constexpr double kBoltzmann = 1.380649e-23;      // J/K
inline constexpr double kPi = 3.14159265358979323846;

// Power convention throughout: dB = 10*log10(linear).
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watts_to_dbm(double w) { return linear_to_db(w / 1e-3); }

inline void require_finite_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw std::invalid_argument(std::string(name) + " must be finite and positive");
    }
}

// Wrap an angle to (-pi, pi].
inline double wrap_phase(double rad) {
    double w = std::remainder(rad, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

}  // namespace irsradar
