#pragma once

#include <cmath>
#include <stdexcept>

#include "irsradar/units.hpp"

namespace irsradar {

/// Victim FMCW waveform and RF front-end description.
/// Defaults reproduce the reference 77 GHz automotive configuration
/// (150 MHz sweep, 7.33 us chirps, 128 chirps/frame, 27.27 MHz LPF,
/// 0 dBm TX, 20 dB antennas, 15 dB noise figure, 296 K).
struct FmcwParams {
    double carrier_hz = 77e9;            // f_c
    double sweep_bandwidth_hz = 150e6;   // B_s
    double chirp_duration_s = 7.33e-6;   // T_r
    int chirps_per_frame = 128;          // N_f
    double lpf_cutoff_hz = 27.27e6;      // B_c
    double tx_power_w = 1e-3;            // P_t
    double tx_gain = 100.0;              // G_t, linear
    double rx_gain = 100.0;              // G_r, linear
    double noise_figure = 31.6227766016838;  // F_n, linear (15 dB)
    double system_temp_k = 296.0;        // T_0

    double chirp_slope() const { return sweep_bandwidth_hz / chirp_duration_s; }  // S_V
    double wavelength() const { return kSpeedOfLight / carrier_hz; }

    void validate() const {
        require_finite_positive(carrier_hz, "carrier_hz");
        require_finite_positive(sweep_bandwidth_hz, "sweep_bandwidth_hz");
        require_finite_positive(chirp_duration_s, "chirp_duration_s");
        require_finite_positive(lpf_cutoff_hz, "lpf_cutoff_hz");
        require_finite_positive(tx_power_w, "tx_power_w");
        require_finite_positive(tx_gain, "tx_gain");
        require_finite_positive(rx_gain, "rx_gain");
        require_finite_positive(noise_figure, "noise_figure");
        require_finite_positive(system_temp_k, "system_temp_k");
        if (chirps_per_frame < 2) throw std::invalid_argument("chirps_per_frame must be >= 2");
        if (lpf_cutoff_hz > sweep_bandwidth_hz) {
            throw std::invalid_argument("lpf_cutoff_hz must not exceed sweep_bandwidth_hz");
        }
        require_finite_positive(chirp_slope(), "chirp_slope");
    }
};

/// Derived waveform quantities. Complex baseband sampling at f_s = B_c,
/// so the frame is N_f chirps by N_s = round(T_r * B_c) samples.
struct WaveformMetrics {
    double chirp_slope_hz_per_s = 0.0;    // S_V
    double wavelength_m = 0.0;
    double max_range_m = 0.0;             // R_max = B_c*c0 / (2*S_V)
    double range_resolution_m = 0.0;      // dR = c0 / (2*B_s)
    double max_velocity_mps = 0.0;        // v_max = lambda / (4*T_r)
    double velocity_resolution_mps = 0.0; // dv = lambda / (2*N_f*T_r)
    double processing_gain = 0.0;         // G_P = T_r*B_c*N_f
    int samples_per_chirp = 0;            // N_s
    int chirps_per_frame = 0;             // N_f
    double sample_rate_hz = 0.0;          // f_s = B_c

    double range_bin_m() const { return max_range_m / samples_per_chirp; }
    double doppler_bin_mps() const { return velocity_resolution_mps; }
};

inline WaveformMetrics derive_waveform_metrics(const FmcwParams& p) {
    p.validate();
    WaveformMetrics m;
    m.chirp_slope_hz_per_s = p.chirp_slope();
    m.wavelength_m = p.wavelength();
    m.max_range_m = p.lpf_cutoff_hz * kSpeedOfLight / (2.0 * m.chirp_slope_hz_per_s);
    m.range_resolution_m = kSpeedOfLight / (2.0 * p.sweep_bandwidth_hz);
    m.max_velocity_mps = m.wavelength_m / (4.0 * p.chirp_duration_s);
    m.velocity_resolution_mps = m.wavelength_m / (2.0 * p.chirps_per_frame * p.chirp_duration_s);
    m.processing_gain = p.chirp_duration_s * p.lpf_cutoff_hz * p.chirps_per_frame;
    m.sample_rate_hz = p.lpf_cutoff_hz;
    m.samples_per_chirp = static_cast<int>(std::lround(p.chirp_duration_s * m.sample_rate_hz));
    m.chirps_per_frame = p.chirps_per_frame;
    if (m.samples_per_chirp < 2) throw std::invalid_argument("chirp too short for sampling rate");
    return m;
}

/// Beat frequency of a point target at range R: f_b = 2*S_V*R/c0.
inline double beat_frequency(const FmcwParams& p, double range_m) {
    return 2.0 * p.chirp_slope() * range_m / kSpeedOfLight;
}

/// Doppler frequency of a target closing at v: f_D = 2*f_c*v/c0.
inline double doppler_frequency(const FmcwParams& p, double velocity_mps) {
    return 2.0 * p.carrier_hz * velocity_mps / kSpeedOfLight;
}

}  // namespace irsradar
