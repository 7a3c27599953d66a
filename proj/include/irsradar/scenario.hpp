#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "irsradar/irs.hpp"
#include "irsradar/params.hpp"
#include "irsradar/propagation.hpp"
#include "irsradar/units.hpp"

namespace irsradar {

enum class ReflectorKind { Bare, PassiveIrs, ActiveIrs };

/// The thing the victim radar is trying to see.
struct TargetSpec {
    double range_m = 180.0;
    double velocity_mps = 25.0;
    ReflectorKind kind = ReflectorKind::Bare;
    double rcs_m2 = 10.0;            // bare reflector only (10 dBsm sedan)
    IrsSpec irs;                     // IRS reflectors
    double reflection_gain = 1.0;    // Gamma, linear; active mode base value
};

enum class WindowKind { Rect, Hann };

/// Cell-averaging CFAR window (cells per side) and design false-alarm rate.
struct CfarConfig {
    int train_range = 8;
    int guard_range = 2;
    int train_doppler = 4;
    int guard_doppler = 2;
    double pfa = 1e-5;

    int training_cells() const {
        const int full = (2 * (train_range + guard_range) + 1) *
                         (2 * (train_doppler + guard_doppler) + 1);
        const int guard = (2 * guard_range + 1) * (2 * guard_doppler + 1);
        return full - guard;
    }
};

/// One experiment world: victim waveform, target, geometry, interferers,
/// noise switch and the seed policy for reproducible Monte-Carlo runs.
struct Scenario {
    FmcwParams fmcw;
    TargetSpec target;
    Geometry geometry;
    std::vector<InterfererSpec> interferers;
    bool noise_enabled = true;
    std::uint64_t master_seed = 1;
    CfarConfig cfar;
    WindowKind window = WindowKind::Rect;
    int hit_tolerance_bins = 1;
};

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity;
    std::string message;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) {
        if (d.severity == Severity::Error) return true;
    }
    return false;
}

/// Structured sanity checks for a parsed scenario; never throws on a
/// schema-valid input.
inline std::vector<Diagnostic> validate_scenario(const Scenario& s, const WaveformMetrics& m) {
    std::vector<Diagnostic> diags;
    auto error = [&](std::string msg) { diags.push_back({Severity::Error, std::move(msg)}); };
    auto warn = [&](std::string msg) { diags.push_back({Severity::Warning, std::move(msg)}); };

    if (s.target.range_m <= 0.0 || !std::isfinite(s.target.range_m)) {
        error("target range must be finite and positive");
    } else {
        if (s.target.range_m > m.max_range_m) {
            error("target range " + std::to_string(s.target.range_m) +
                  " m is beyond R_max = " + std::to_string(m.max_range_m) + " m");
        }
        const double fb = beat_frequency(s.fmcw, s.target.range_m);
        if (fb > s.fmcw.lpf_cutoff_hz) {
            error("target beat frequency " + std::to_string(fb / 1e6) +
                  " MHz exceeds LPF cutoff " + std::to_string(s.fmcw.lpf_cutoff_hz / 1e6) + " MHz");
        }
    }
    if (std::abs(s.target.velocity_mps) > m.max_velocity_mps) {
        error("target velocity " + std::to_string(s.target.velocity_mps) +
              " m/s exceeds v_max = " + std::to_string(m.max_velocity_mps) + " m/s");
    }
    if (s.target.kind == ReflectorKind::Bare && s.target.rcs_m2 <= 0.0) {
        error("bare target RCS must be positive");
    }
    if (s.target.kind == ReflectorKind::ActiveIrs && s.target.reflection_gain < 1.0) {
        error("active IRS reflection gain must be >= 1 (0 dB)");
    }

    for (std::size_t i = 0; i < s.interferers.size(); ++i) {
        const auto& itf = s.interferers[i];
        const std::string tag = "interferer " + std::to_string(i) + ": ";
        if (itf.range_m <= 0.0) error(tag + "range must be positive");
        if (!itf.similar_random_slope && itf.slope_hz_per_s <= 0.0) {
            error(tag + "slope must be positive");
        }
        if (!itf.random_offset &&
            (itf.time_offset_s < 0.0 || itf.time_offset_s >= s.fmcw.chirp_duration_s)) {
            error(tag + "fixed time offset must lie in [0, T_r)");
        }
        if (itf.sweep_bandwidth_hz <= 0.0) error(tag + "sweep bandwidth must be positive");
        if (!itf.similar_random_slope && itf.slope_hz_per_s > 0.0) {
            // Modeled taxonomy: similar slope (within 10% of S_V) or a clearly
            // different sweeping slope. Flag the gap between the two.
            const double ratio = itf.slope_hz_per_s / m.chirp_slope_hz_per_s;
            if ((ratio > 1.10 && ratio < 1.25) || (ratio > 0.80 && ratio < 0.90)) {
                warn(tag + "slope ratio " + std::to_string(ratio) +
                     " falls between the similar-slope and sweeping-slope regimes");
            }
        }
    }
    return diags;
}

namespace detail {
inline void fnv_accumulate(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 0x100000001B3ULL;
    }
}

inline void hash_double(std::uint64_t& h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    fnv_accumulate(h, &bits, sizeof(bits));
}

inline void hash_int(std::uint64_t& h, std::int64_t v) { fnv_accumulate(h, &v, sizeof(v)); }
}  // namespace detail

/// Order-stable FNV-1a digest of every field that affects synthesis.
inline std::uint64_t scenario_digest(const Scenario& s) {
    using detail::hash_double;
    using detail::hash_int;
    std::uint64_t h = 0xCBF29CE484222325ULL;
    const auto& p = s.fmcw;
    for (double v : {p.carrier_hz, p.sweep_bandwidth_hz, p.chirp_duration_s, p.lpf_cutoff_hz,
                     p.tx_power_w, p.tx_gain, p.rx_gain, p.noise_figure, p.system_temp_k}) {
        hash_double(h, v);
    }
    hash_int(h, p.chirps_per_frame);
    hash_int(h, static_cast<int>(s.target.kind));
    hash_double(h, s.target.range_m);
    hash_double(h, s.target.velocity_mps);
    hash_double(h, s.target.rcs_m2);
    hash_double(h, s.target.reflection_gain);
    hash_int(h, s.target.irs.rows);
    hash_int(h, s.target.irs.cols);
    hash_double(h, s.target.irs.pitch_m);
    hash_double(h, s.target.irs.element_gain);
    hash_int(h, static_cast<int>(s.target.irs.phase_profile.kind));
    hash_double(h, s.target.irs.phase_profile.uniform_rad);
    for (double d : s.target.irs.phase_profile.custom_rad) hash_double(h, d);
    hash_double(h, s.geometry.azimuth_rad);
    hash_double(h, s.geometry.elevation_rad);
    hash_int(h, static_cast<std::int64_t>(s.interferers.size()));
    for (const auto& itf : s.interferers) {
        hash_double(h, itf.slope_hz_per_s);
        hash_int(h, itf.similar_random_slope ? 1 : 0);
        hash_double(h, itf.sweep_bandwidth_hz);
        hash_double(h, itf.tx_power_w);
        hash_double(h, itf.tx_gain);
        hash_double(h, itf.range_m);
        hash_double(h, itf.time_offset_s);
        hash_int(h, itf.random_offset ? 1 : 0);
    }
    hash_int(h, s.noise_enabled ? 1 : 0);
    hash_int(h, static_cast<std::int64_t>(s.master_seed));
    hash_int(h, s.cfar.train_range);
    hash_int(h, s.cfar.guard_range);
    hash_int(h, s.cfar.train_doppler);
    hash_int(h, s.cfar.guard_doppler);
    hash_double(h, s.cfar.pfa);
    hash_int(h, static_cast<int>(s.window));
    hash_int(h, s.hit_tolerance_bins);
    return h;
}

}  // namespace irsradar
