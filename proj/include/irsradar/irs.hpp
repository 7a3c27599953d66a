#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "irsradar/params.hpp"
#include "irsradar/propagation.hpp"
#include "irsradar/units.hpp"

namespace irsradar {

enum class PhaseProfileKind { Optimal, Uniform, Custom };

/// Per-element phase shifts delta_k applied by the surface.
struct PhaseProfile {
    PhaseProfileKind kind = PhaseProfileKind::Optimal;
    double uniform_rad = 0.0;
    std::vector<double> custom_rad;

    static PhaseProfile optimal() { return {}; }
    static PhaseProfile uniform(double rad) {
        return {PhaseProfileKind::Uniform, rad, {}};
    }
    static PhaseProfile custom(std::vector<double> rad) {
        return {PhaseProfileKind::Custom, 0.0, std::move(rad)};
    }
};

/// Rectangular reflective array mounted on the target's rear.
/// Element 0 sits at the origin; the grid is row-major with `pitch_m`
/// spacing along both axes.
struct IrsSpec {
    int rows = 256;
    int cols = 256;
    double pitch_m = 1.94675e-3;   // lambda/2 at 77 GHz
    double element_gain = kPi;     // G_e, linear
    PhaseProfile phase_profile;

    int element_count() const { return rows * cols; }

    void validate() const {
        if (rows < 1 || cols < 1) throw std::invalid_argument("IRS needs at least one element");
        require_finite_positive(pitch_m, "pitch_m");
        require_finite_positive(element_gain, "element_gain");
        if (phase_profile.kind == PhaseProfileKind::Custom &&
            static_cast<int>(phase_profile.custom_rad.size()) != element_count()) {
            throw std::invalid_argument("custom phase profile size must equal element count");
        }
        for (double d : phase_profile.custom_rad) {
            if (!std::isfinite(d)) throw std::invalid_argument("phase shifts must be finite");
        }
    }
};

/// Direction of the victim radar from the surface.
struct Geometry {
    double azimuth_rad = 0.0;    // theta
    double elevation_rad = 0.0;  // phi

    void validate() const {
        if (!std::isfinite(azimuth_rad) || std::abs(azimuth_rad) > kPi / 2.0 ||
            !std::isfinite(elevation_rad) || std::abs(elevation_rad) > kPi / 2.0) {
            throw std::invalid_argument("DOA angles must lie in [-pi/2, pi/2]");
        }
    }
};

/// What the surface sends back to the victim: a complex voltage factor,
/// the effective RCS it realizes, and (active mode) the element-noise
/// power referred to the victim receiver input.
struct IrsReturn {
    std::complex<double> amplitude{0.0, 0.0};
    double effective_rcs_m2 = 0.0;
    double element_noise_power_at_rx_w = 0.0;
};

inline std::vector<std::pair<double, double>> element_positions(const IrsSpec& spec) {
    spec.validate();
    std::vector<std::pair<double, double>> pos;
    pos.reserve(static_cast<std::size_t>(spec.element_count()));
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            pos.emplace_back(c * spec.pitch_m, r * spec.pitch_m);
        }
    }
    return pos;
}

/// Path-delay of element k relative to the reference element:
/// tau_k = (x_k sin(theta)cos(phi) + y_k sin(theta)sin(phi)) / c0.
inline double element_delay(const std::pair<double, double>& pos, const Geometry& g) {
    const double s = std::sin(g.azimuth_rad);
    return (pos.first * s * std::cos(g.elevation_rad) +
            pos.second * s * std::sin(g.elevation_rad)) / kSpeedOfLight;
}

/// Phase conjugation per element: delta_k* = -4*pi*f_c*tau_k, wrapped to (-pi, pi].
inline std::vector<double> optimal_phases(const IrsSpec& spec, const Geometry& g, double carrier_hz) {
    g.validate();
    require_finite_positive(carrier_hz, "carrier_hz");
    const auto pos = element_positions(spec);
    std::vector<double> phases(pos.size());
    for (std::size_t k = 0; k < pos.size(); ++k) {
        phases[k] = wrap_phase(-4.0 * kPi * carrier_hz * element_delay(pos[k], g));
    }
    return phases;
}

/// RCS of a single element: sigma_e = lambda^2 * G_e^2 / (4*pi).
inline double element_rcs(double wavelength_m, double element_gain) {
    require_finite_positive(wavelength_m, "wavelength_m");
    require_finite_positive(element_gain, "element_gain");
    return wavelength_m * wavelength_m * element_gain * element_gain / (4.0 * kPi);
}

inline std::vector<double> resolve_phases(const IrsSpec& spec, const Geometry& g, double carrier_hz) {
    spec.validate();
    switch (spec.phase_profile.kind) {
        case PhaseProfileKind::Optimal:
            return optimal_phases(spec, g, carrier_hz);
        case PhaseProfileKind::Uniform:
            return std::vector<double>(static_cast<std::size_t>(spec.element_count()),
                                       spec.phase_profile.uniform_rad);
        case PhaseProfileKind::Custom:
            return spec.phase_profile.custom_rad;
    }
    throw std::logic_error("unknown phase profile");
}

/// Effective RCS of the whole passive surface:
/// sigma_O^P = sigma_e * | sum_k exp(j 4 pi f_c tau_k) exp(j delta_k) |.
/// With the optimal profile the sum collapses to N exactly, so that case
/// skips the element loop.
inline double passive_array_rcs(const IrsSpec& spec, const Geometry& g, double carrier_hz) {
    spec.validate();
    g.validate();
    const double sigma_e = element_rcs(kSpeedOfLight / carrier_hz, spec.element_gain);
    if (spec.phase_profile.kind == PhaseProfileKind::Optimal) {
        return spec.element_count() * sigma_e;
    }
    const auto pos = element_positions(spec);
    const auto phases = resolve_phases(spec, g, carrier_hz);
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t k = 0; k < pos.size(); ++k) {
        const double prop = 4.0 * kPi * carrier_hz * element_delay(pos[k], g);
        sum += std::polar(1.0, prop + phases[k]);
    }
    return sigma_e * std::abs(sum);
}

/// Active surface with per-element reflection gain: sigma_O^A* = Gamma*N*sigma_e.
/// Assumes the optimal phase profile.
inline double active_array_rcs(const IrsSpec& spec, double reflection_gain, double wavelength_m) {
    spec.validate();
    if (!std::isfinite(reflection_gain) || reflection_gain < 1.0) {
        throw std::invalid_argument("active reflection gain must be >= 1 (0 dB)");
    }
    return reflection_gain * spec.element_count() * element_rcs(wavelength_m, spec.element_gain);
}

/// Collapse the per-element picture into the frame-level return used by the
/// synthesizer. `reflection_gain` = 1 selects passive operation (no element
/// noise); anything above 1 is an active surface, whose aggregate element
/// noise is each element's rho_A amplified by Gamma and propagated one way
/// back to the receiver:
///   N * Gamma * rho_A * G_r * G_e * (lambda / (4 pi R))^2.
inline IrsReturn irs_return(const IrsSpec& spec, const Geometry& g, double reflection_gain,
                            const FmcwParams& p, double range_m, bool active) {
    spec.validate();
    g.validate();
    require_finite_positive(range_m, "range_m");
    if (active && (!std::isfinite(reflection_gain) || reflection_gain < 1.0)) {
        throw std::invalid_argument("active reflection gain must be >= 1 (0 dB)");
    }
    const double gain = active ? reflection_gain : 1.0;
    IrsReturn ret;
    ret.effective_rcs_m2 = gain * passive_array_rcs(spec, g, p.carrier_hz);
    const double pr = ret.effective_rcs_m2 > 0.0 ? echo_power(p, ret.effective_rcs_m2, range_m) : 0.0;
    const double carrier_phase = 4.0 * kPi * p.carrier_hz * range_m / kSpeedOfLight;
    ret.amplitude = std::polar(std::sqrt(pr), carrier_phase);
    if (active) {
        const double lambda = p.wavelength();
        const double one_way = lambda / (4.0 * kPi * range_m);
        ret.element_noise_power_at_rx_w = spec.element_count() * gain * irs_element_noise_power(p) *
                                          p.rx_gain * spec.element_gain * one_way * one_way;
    }
    return ret;
}

}  // namespace irsradar
