#pragma once

#include <cmath>
#include <stdexcept>

#include "irsradar/params.hpp"
#include "irsradar/units.hpp"

namespace irsradar {

/// One interfering FMCW radar as seen by the victim. The slope and the
/// time offset may be marked for per-trial randomization instead of
/// carrying fixed values.
struct InterfererSpec {
    double slope_hz_per_s = 40.90e12;     // S_I, used when !similar_random_slope
    bool similar_random_slope = false;    // per-trial S_I ~ U[0.9, 1.1]*S_V
    double sweep_bandwidth_hz = 150e6;    // B_sI
    double tx_power_w = 1e-3;             // P_tI
    double tx_gain = 100.0;               // G_tI, linear
    double range_m = 50.0;                // R_I
    double time_offset_s = 0.0;           // tau_I, used when !random_offset
    bool random_offset = true;            // per-trial tau_I ~ U[0, T_r)

    double chirp_period_s() const { return sweep_bandwidth_hz / slope_hz_per_s; }
};

/// Monostatic radar equation: P_r = P_t*G_t*G_r*sigma*lambda^2 / ((4pi)^3 R^4).
inline double echo_power(const FmcwParams& p, double rcs_m2, double range_m) {
    require_finite_positive(rcs_m2, "rcs_m2");
    require_finite_positive(range_m, "range_m");
    const double lambda = p.wavelength();
    const double four_pi = 4.0 * kPi;
    const double pr = p.tx_power_w * p.tx_gain * p.rx_gain * rcs_m2 * lambda * lambda /
                      (four_pi * four_pi * four_pi * range_m * range_m * range_m * range_m);
    if (!std::isfinite(pr)) throw std::invalid_argument("echo_power overflow");
    return pr;
}

/// One-way interference link: P_rI = P_tI*G_tI*G_r*lambda^2 / (4pi R_I)^2.
inline double interference_power(const FmcwParams& p, const InterfererSpec& i) {
    require_finite_positive(i.range_m, "interferer range_m");
    require_finite_positive(i.tx_power_w, "interferer tx_power_w");
    require_finite_positive(i.tx_gain, "interferer tx_gain");
    const double lambda = p.wavelength();
    const double denom = 4.0 * kPi * i.range_m;
    const double pri = i.tx_power_w * i.tx_gain * p.rx_gain * lambda * lambda / (denom * denom);
    if (!std::isfinite(pri)) throw std::invalid_argument("interference_power overflow");
    return pri;
}

/// Thermal noise at the victim receiver: rho = k*T0*B_c*F_n.
inline double receiver_noise_power(const FmcwParams& p) {
    p.validate();
    return kBoltzmann * p.system_temp_k * p.lpf_cutoff_hz * p.noise_figure;
}

/// Noise generated by each active IRS element: rho_A = k*T0*B_s*F_n.
/// Uses the sweep bandwidth B_s, not the receiver cutoff B_c.
inline double irs_element_noise_power(const FmcwParams& p) {
    p.validate();
    return kBoltzmann * p.system_temp_k * p.sweep_bandwidth_hz * p.noise_figure;
}

}  // namespace irsradar
