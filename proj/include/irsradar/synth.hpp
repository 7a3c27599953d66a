#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "irsradar/irs.hpp"
#include "irsradar/params.hpp"
#include "irsradar/propagation.hpp"
#include "irsradar/rng.hpp"
#include "irsradar/scenario.hpp"

namespace irsradar {

struct FrameMeta {
    std::uint64_t scenario_digest = 0;
    std::uint64_t seed = 0;
    double reflection_gain = 1.0;
};

/// De-chirped, low-pass-filtered, sampled receiver output for one FMCW
/// frame. Rows are chirps (slow time), columns are samples (fast time).
struct BeatFrame {
    Eigen::MatrixXcd data;
    double sample_rate_hz = 0.0;
    double chirp_duration_s = 0.0;
    FrameMeta meta;
};

/// Point-target contribution:
///   sample(l, n) = amplitude * exp(j 4 pi f_c R / c0)
///                * exp(j 2 pi (f_b n / f_s + f_D l T_r)).
/// `amplitude` carries the link-budget scale (sqrt of received power) and
/// must not include the carrier phase; that factor is applied here.
inline Eigen::MatrixXcd target_beat_samples(const FmcwParams& p, const WaveformMetrics& m,
                                            std::complex<double> amplitude, double range_m,
                                            double velocity_mps) {
    const double fb = beat_frequency(p, range_m);
    if (fb > p.lpf_cutoff_hz) {
        throw std::invalid_argument("beat frequency exceeds LPF cutoff; target beyond R_max");
    }
    const double fd = doppler_frequency(p, velocity_mps);
    const double carrier_phase = 4.0 * kPi * p.carrier_hz * range_m / kSpeedOfLight;

    Eigen::VectorXcd fast(m.samples_per_chirp);
    for (int n = 0; n < m.samples_per_chirp; ++n) {
        fast(n) = std::polar(1.0, 2.0 * kPi * fb * n / m.sample_rate_hz);
    }
    Eigen::VectorXcd slow(m.chirps_per_frame);
    const std::complex<double> scale = amplitude * std::polar(1.0, carrier_phase);
    for (int l = 0; l < m.chirps_per_frame; ++l) {
        slow(l) = scale * std::polar(1.0, 2.0 * kPi * fd * p.chirp_duration_s * l);
    }
    return slow * fast.transpose();
}

/// Gated interference from one FMCW interferer with resolved slope and
/// time offset. The interferer repeats chirps of duration B_sI/S_I with
/// the whole sequence shifted by tau_s relative to the frame start; a
/// sample is emitted only while the victim/interferer instantaneous
/// frequency difference sits inside the LPF passband (the vulnerable
/// time T_u), as
///   sqrt(P_rI) * exp(j pi (S_V t^2 - S_I (t - tau')^2))
/// with t the victim-chirp-local time and tau' the start of the active
/// interferer chirp in that time base.
inline Eigen::MatrixXcd interference_beat_samples(const FmcwParams& p, const WaveformMetrics& m,
                                                  const InterfererSpec& itf, double tau_s) {
    if (itf.slope_hz_per_s <= 0.0 || itf.sweep_bandwidth_hz <= 0.0) {
        throw std::invalid_argument("interferer slope and bandwidth must be positive");
    }
    const double sv = m.chirp_slope_hz_per_s;
    const double si = itf.slope_hz_per_s;
    const double ti = itf.sweep_bandwidth_hz / si;  // interferer chirp period
    const double amp = std::sqrt(interference_power(p, itf));

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.chirps_per_frame, m.samples_per_chirp);
    for (int l = 0; l < m.chirps_per_frame; ++l) {
        const double chirp_start = l * p.chirp_duration_s;
        for (int n = 0; n < m.samples_per_chirp; ++n) {
            const double t = n / m.sample_rate_hz;            // within victim chirp
            const double tg = chirp_start + t;                // within frame
            const double mi = std::floor((tg - tau_s) / ti);  // active interferer chirp
            const double tau_prime = tau_s + mi * ti - chirp_start;
            const double delta_f = sv * t - si * (t - tau_prime);
            if (std::abs(delta_f) <= p.lpf_cutoff_hz) {
                const double dt = t - tau_prime;
                out(l, n) = std::polar(amp, kPi * (sv * t * t - si * dt * dt));
            }
        }
    }
    return out;
}

namespace detail {
// Fixed stream salts so that adding or removing one term never shifts the
// randomness consumed by another.
inline constexpr std::uint64_t kInterfererStream = 0xA11CEULL;
inline constexpr std::uint64_t kReceiverNoiseStream = 0x7105EULL;
inline constexpr std::uint64_t kIrsNoiseStream = 0x1E5ULL;
}  // namespace detail

/// Target/IRS echo plus every interferer plus receiver AWGN and, for an
/// active surface, the aggregate element noise. Fully deterministic given
/// (scenario, reflection_gain, seed).
inline BeatFrame compose_beat_frame(const Scenario& s, double reflection_gain,
                                    std::uint64_t seed) {
    const WaveformMetrics m = derive_waveform_metrics(s.fmcw);

    double target_power = 0.0;
    double element_noise_var = 0.0;
    switch (s.target.kind) {
        case ReflectorKind::Bare:
            target_power = echo_power(s.fmcw, s.target.rcs_m2, s.target.range_m);
            break;
        case ReflectorKind::PassiveIrs: {
            const IrsReturn ret =
                irs_return(s.target.irs, s.geometry, 1.0, s.fmcw, s.target.range_m, false);
            target_power = std::norm(ret.amplitude);
            break;
        }
        case ReflectorKind::ActiveIrs: {
            const IrsReturn ret = irs_return(s.target.irs, s.geometry, reflection_gain, s.fmcw,
                                             s.target.range_m, true);
            target_power = std::norm(ret.amplitude);
            element_noise_var = ret.element_noise_power_at_rx_w;
            break;
        }
    }

    BeatFrame frame;
    frame.data = target_beat_samples(s.fmcw, m, std::sqrt(target_power), s.target.range_m,
                                     s.target.velocity_mps);
    frame.sample_rate_hz = m.sample_rate_hz;
    frame.chirp_duration_s = s.fmcw.chirp_duration_s;
    frame.meta = {scenario_digest(s), seed, reflection_gain};

    for (std::size_t i = 0; i < s.interferers.size(); ++i) {
        InterfererSpec itf = s.interferers[i];
        TrialRng rng(mix_seed(mix_seed(seed, detail::kInterfererStream), i));
        if (itf.similar_random_slope) {
            itf.slope_hz_per_s = m.chirp_slope_hz_per_s * rng.uniform(0.9, 1.1);
        }
        const double tau = itf.random_offset ? rng.uniform(0.0, s.fmcw.chirp_duration_s)
                                             : itf.time_offset_s;
        frame.data += interference_beat_samples(s.fmcw, m, itf, tau);
    }

    if (s.noise_enabled) {
        TrialRng rx_rng(mix_seed(seed, detail::kReceiverNoiseStream));
        const double rho = receiver_noise_power(s.fmcw);
        for (int l = 0; l < m.chirps_per_frame; ++l) {
            for (int n = 0; n < m.samples_per_chirp; ++n) {
                frame.data(l, n) += rx_rng.complex_gaussian(rho);
            }
        }
        if (element_noise_var > 0.0) {
            TrialRng irs_rng(mix_seed(seed, detail::kIrsNoiseStream));
            for (int l = 0; l < m.chirps_per_frame; ++l) {
                for (int n = 0; n < m.samples_per_chirp; ++n) {
                    frame.data(l, n) += irs_rng.complex_gaussian(element_noise_var);
                }
            }
        }
    }
    return frame;
}

}  // namespace irsradar
