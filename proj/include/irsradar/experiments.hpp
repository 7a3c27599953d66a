#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "irsradar/processing.hpp"
#include "irsradar/rng.hpp"
#include "irsradar/scenario.hpp"
#include "irsradar/synth.hpp"

namespace irsradar {

struct TrialOutcome {
    bool hit = false;
    std::optional<Detection> detected;
    double reflection_gain = 1.0;
    std::uint64_t seed = 0;
};

enum class CurveKind { PdSimilar, PdSweeping, Sir, Rcs };

struct SweepPoint {
    double gamma_db = 0.0;
    int trials = 0;
    int hits = 0;
    double value = 0.0;  // pd, SIR in dB, or RCS in dBsm depending on kind
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

struct SweepResult {
    CurveKind kind = CurveKind::PdSimilar;
    std::uint64_t scenario_digest = 0;
    std::vector<SweepPoint> points;
};

inline const char* curve_kind_name(CurveKind k) {
    switch (k) {
        case CurveKind::PdSimilar: return "pd_similar";
        case CurveKind::PdSweeping: return "pd_sweeping";
        case CurveKind::Sir: return "sir";
        case CurveKind::Rcs: return "rcs";
    }
    return "unknown";
}

/// Exact (Clopper-Pearson) binomial confidence interval, by bisection on
/// the binomial tail probabilities.
inline std::pair<double, double> binomial_ci(int hits, int trials, double confidence = 0.95) {
    if (trials < 1 || hits < 0 || hits > trials) throw std::invalid_argument("bad binomial counts");
    const double tail = (1.0 - confidence) / 2.0;

    auto log_pmf = [&](int k, double p) {
        double lp = 0.0;
        for (int i = 0; i < k; ++i) lp += std::log(static_cast<double>(trials - i) / (i + 1));
        return lp + k * std::log(p) + (trials - k) * std::log1p(-p);
    };
    auto upper_tail = [&](double p) {  // P(X >= hits)
        double sum = 0.0;
        for (int k = hits; k <= trials; ++k) sum += std::exp(log_pmf(k, p));
        return std::min(sum, 1.0);
    };
    auto lower_tail = [&](double p) {  // P(X <= hits)
        double sum = 0.0;
        for (int k = 0; k <= hits; ++k) sum += std::exp(log_pmf(k, p));
        return std::min(sum, 1.0);
    };
    auto bisect = [](const std::function<double(double)>& f, double target, bool increasing) {
        double lo = 1e-12, hi = 1.0 - 1e-12;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const bool above = f(mid) > target;
            if (above == increasing) hi = mid;
            else lo = mid;
        }
        return 0.5 * (lo + hi);
    };

    const double lo = hits == 0 ? 0.0 : bisect(upper_tail, tail, true);
    const double hi = hits == trials ? 1.0 : bisect(lower_tail, tail, false);
    return {lo, hi};
}

/// Pool-adjacent-violators: least-squares non-decreasing fit.
inline std::vector<double> isotonic_non_decreasing(const std::vector<double>& values,
                                                   const std::vector<double>& weights = {}) {
    const std::size_t n = values.size();
    std::vector<double> w = weights.empty() ? std::vector<double>(n, 1.0) : weights;
    if (w.size() != n) throw std::invalid_argument("weights size mismatch");
    std::vector<double> level, weight;
    std::vector<std::size_t> count;
    for (std::size_t i = 0; i < n; ++i) {
        level.push_back(values[i]);
        weight.push_back(w[i]);
        count.push_back(1);
        while (level.size() > 1 && level[level.size() - 2] > level.back()) {
            const double merged_w = weight[weight.size() - 2] + weight.back();
            const double merged = (level[level.size() - 2] * weight[weight.size() - 2] +
                                   level.back() * weight.back()) / merged_w;
            level.pop_back(); weight.pop_back();
            const std::size_t c = count.back(); count.pop_back();
            level.back() = merged;
            weight.back() = merged_w;
            count.back() += c;
        }
    }
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t b = 0; b < level.size(); ++b) {
        out.insert(out.end(), count[b], level[b]);
    }
    return out;
}

/// Smallest grid gamma whose isotonic-smoothed P_D reaches `level`.
inline std::optional<double> threshold_gamma_db(const SweepResult& result, double level) {
    std::vector<double> pd, w;
    for (const auto& pt : result.points) {
        pd.push_back(pt.value);
        w.push_back(static_cast<double>(pt.trials));
    }
    const auto smooth = isotonic_non_decreasing(pd, w);
    for (std::size_t i = 0; i < smooth.size(); ++i) {
        if (smooth[i] >= level) return result.points[i].gamma_db;
    }
    return std::nullopt;
}

inline void parallel_for(std::size_t total, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || total <= 1) {
        for (std::size_t i = 0; i < total; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min<std::size_t>(threads, total);
    pool.reserve(n);
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// True map cell for the scenario's target.
inline std::pair<int, int> true_target_cell(const Scenario& s, const WaveformMetrics& m) {
    return physical_to_bin(m, s.target.range_m, s.target.velocity_mps);
}

/// One Monte-Carlo trial: synthesize, transform, detect. A hit requires a
/// CFAR detection within the configured bin tolerance of the true cell
/// (circular in Doppler); the strongest such detection is reported.
inline TrialOutcome run_trial(const Scenario& s, double reflection_gain, std::uint64_t seed) {
    const WaveformMetrics m = derive_waveform_metrics(s.fmcw);
    const BeatFrame frame = compose_beat_frame(s, reflection_gain, seed);
    const RangeDopplerMap map = range_doppler_map(frame, m, s.window);
    const auto detections = ca_cfar_detect(map, s.cfar);
    const auto truth = true_target_cell(s, m);
    const int nf = m.chirps_per_frame;
    const int tol = s.hit_tolerance_bins;

    TrialOutcome out;
    out.reflection_gain = reflection_gain;
    out.seed = seed;
    double best_power = -1.0;
    for (const auto& det : detections) {
        const int dr = std::abs(det.range_bin - truth.first);
        const int dd_raw = std::abs(det.doppler_bin - truth.second);
        const int dd = std::min(dd_raw, nf - dd_raw);
        if (dr <= tol && dd <= tol) {
            const double p = map.power(det.range_bin, det.doppler_bin);
            if (p > best_power) {
                best_power = p;
                out.detected = det;
            }
        }
    }
    out.hit = out.detected.has_value();
    return out;
}

inline CurveKind infer_pd_curve_kind(const Scenario& s) {
    const double sv = s.fmcw.chirp_slope();
    for (const auto& itf : s.interferers) {
        if (itf.similar_random_slope) return CurveKind::PdSimilar;
        const double ratio = itf.slope_hz_per_s / sv;
        if (ratio >= 0.9 && ratio <= 1.1) return CurveKind::PdSimilar;
    }
    return CurveKind::PdSweeping;
}

/// P_D versus reflection gain. Trials carry pre-assigned seeds keyed by
/// (master seed, gamma index, trial index), so the result is identical for
/// any worker count.
inline SweepResult detection_probability_sweep(const Scenario& s,
                                               const std::vector<double>& gamma_grid_db,
                                               int trials, int threads = 1) {
    if (trials < 1) throw std::invalid_argument("need at least one trial per point");
    for (std::size_t i = 1; i < gamma_grid_db.size(); ++i) {
        if (gamma_grid_db[i] <= gamma_grid_db[i - 1]) {
            throw std::invalid_argument("gamma grid must be strictly increasing");
        }
    }
    SweepResult result;
    result.kind = infer_pd_curve_kind(s);
    result.scenario_digest = scenario_digest(s);

    const std::size_t total = gamma_grid_db.size() * static_cast<std::size_t>(trials);
    std::vector<std::uint8_t> hits(total, 0);
    parallel_for(total, threads, [&](std::size_t i) {
        const std::size_t gi = i / trials;
        const std::size_t ti = i % trials;
        const double gamma = db_to_linear(gamma_grid_db[gi]);
        const std::uint64_t seed = trial_seed(s.master_seed, gi, ti);
        hits[i] = run_trial(s, gamma, seed).hit ? 1 : 0;
    });

    for (std::size_t gi = 0; gi < gamma_grid_db.size(); ++gi) {
        SweepPoint pt;
        pt.gamma_db = gamma_grid_db[gi];
        pt.trials = trials;
        for (int ti = 0; ti < trials; ++ti) pt.hits += hits[gi * trials + ti];
        pt.value = static_cast<double>(pt.hits) / trials;
        const auto ci = binomial_ci(pt.hits, pt.trials);
        pt.ci_lo = ci.first;
        pt.ci_hi = ci.second;
        result.points.push_back(pt);
    }
    return result;
}

/// Same scenario with the IRS swapped for the paper's bare sedan RCS;
/// used for the flat non-IRS comparison curve.
inline Scenario baseline_scenario(const Scenario& s, double rcs_m2 = 10.0) {
    Scenario b = s;
    b.target.kind = ReflectorKind::Bare;
    b.target.rcs_m2 = rcs_m2;
    return b;
}

/// One P_D estimate for the non-IRS baseline (flat in gamma).
inline SweepPoint baseline_detection_probability(const Scenario& s, int trials, int threads = 1) {
    const Scenario b = baseline_scenario(s);
    std::vector<std::uint8_t> hits(trials, 0);
    parallel_for(trials, threads, [&](std::size_t ti) {
        const std::uint64_t seed = trial_seed(b.master_seed, 0, ti);
        hits[ti] = run_trial(b, 1.0, seed).hit ? 1 : 0;
    });
    SweepPoint pt;
    pt.trials = trials;
    for (int ti = 0; ti < trials; ++ti) pt.hits += hits[ti];
    pt.value = static_cast<double>(pt.hits) / trials;
    const auto ci = binomial_ci(pt.hits, pt.trials);
    pt.ci_lo = ci.first;
    pt.ci_hi = ci.second;
    return pt;
}

/// SIR(dB) = 10 log10(G_P * P_a / P_rI) with P_a the received power from
/// the active surface's effective RCS. `printed_form` instead evaluates
/// the alternative P_a = N*Gamma*g^2 formulation for curve-shape
/// comparisons; it is not the default because it is dimensionally
/// inconsistent with the RCS route.
inline SweepResult sir_curve(const Scenario& s, const std::vector<double>& gamma_grid_db,
                             bool printed_form = false) {
    if (s.target.kind != ReflectorKind::ActiveIrs) {
        throw std::invalid_argument("SIR curve requires an active-IRS target");
    }
    if (s.interferers.empty()) {
        throw std::invalid_argument("SIR curve requires at least one interferer");
    }
    const WaveformMetrics m = derive_waveform_metrics(s.fmcw);
    double pri_total = 0.0;
    for (const auto& itf : s.interferers) pri_total += interference_power(s.fmcw, itf);

    const double lambda = s.fmcw.wavelength();
    const double sigma_e = element_rcs(lambda, s.target.irs.element_gain);
    const int n_elements = s.target.irs.element_count();
    const double r = s.target.range_m;

    SweepResult result;
    result.kind = CurveKind::Sir;
    result.scenario_digest = scenario_digest(s);
    for (double gdb : gamma_grid_db) {
        const double gamma = db_to_linear(gdb);
        double pa;
        if (printed_form) {
            const double denom = 4.0 * kPi * r;
            const double g = s.fmcw.tx_power_w * s.fmcw.tx_gain * s.fmcw.rx_gain *
                             s.target.irs.element_gain * s.target.irs.element_gain *
                             lambda * lambda * lambda * lambda / (denom * denom * denom * denom);
            pa = n_elements * gamma * g * g;
        } else {
            pa = echo_power(s.fmcw, gamma * n_elements * sigma_e, r);
        }
        SweepPoint pt;
        pt.gamma_db = gdb;
        pt.value = linear_to_db(m.processing_gain * pa / pri_total);
        result.points.push_back(pt);
    }
    return result;
}

/// Effective RCS of the active surface versus reflection gain, in dBsm.
inline SweepResult rcs_curve(const IrsSpec& spec, double carrier_hz,
                             const std::vector<double>& gamma_grid_db) {
    spec.validate();
    const double sigma_e = element_rcs(kSpeedOfLight / carrier_hz, spec.element_gain);
    SweepResult result;
    result.kind = CurveKind::Rcs;
    for (double gdb : gamma_grid_db) {
        SweepPoint pt;
        pt.gamma_db = gdb;
        pt.value = linear_to_db(db_to_linear(gdb) * spec.element_count() * sigma_e);
        result.points.push_back(pt);
    }
    return result;
}

}  // namespace irsradar
