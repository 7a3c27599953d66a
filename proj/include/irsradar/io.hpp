#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "irsradar/experiments.hpp"
#include "irsradar/processing.hpp"
#include "irsradar/scenario.hpp"
#include "irsradar/synth.hpp"

namespace irsradar {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Atomic write: stream into a sibling temp file, then rename over the target.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.good()) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

/// "start:stop:step" in dB, inclusive of both ends (up to rounding).
inline std::vector<double> parse_gamma_grid(const std::string& text) {
    double start = 0.0, stop = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !ss.eof()) {
        throw ParseError("gamma grid must be start:stop:step in dB, got '" + text + "'");
    }
    if (step <= 0.0 || stop < start) throw ParseError("gamma grid requires step > 0 and stop >= start");
    std::vector<double> grid;
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) grid.push_back(start + i * step);
    return grid;
}

namespace detail {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("field '") + key + "': " + e.what());
    }
}

inline IrsSpec parse_irs(const json& j, double wavelength_m) {
    IrsSpec spec;
    spec.rows = get_or(j, "rows", 256);
    spec.cols = get_or(j, "cols", 256);
    spec.pitch_m = get_or(j, "pitch_over_lambda", 0.5) * wavelength_m;
    spec.element_gain = get_or(j, "element_gain", kPi);
    if (j.contains("phase_profile")) {
        const auto& pp = j.at("phase_profile");
        if (pp.is_string()) {
            const std::string name = pp.get<std::string>();
            if (name != "optimal") throw ParseError("unknown phase_profile '" + name + "'");
            spec.phase_profile = PhaseProfile::optimal();
        } else if (pp.contains("uniform_rad")) {
            spec.phase_profile = PhaseProfile::uniform(pp.at("uniform_rad").get<double>());
        } else if (pp.contains("custom_rad")) {
            spec.phase_profile = PhaseProfile::custom(pp.at("custom_rad").get<std::vector<double>>());
        } else {
            throw ParseError("phase_profile must be \"optimal\" or carry uniform_rad/custom_rad");
        }
    }
    return spec;
}

}  // namespace detail

/// Parse + default-fill a scenario. Powers and gains use explicit dB
/// suffixes in the schema; omitted blocks fall back to the reference
/// configuration with a warning.
inline Scenario load_scenario_json(const std::string& text, std::vector<Diagnostic>* warnings = nullptr) {
    using nlohmann::json;
    using detail::get_or;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("scenario JSON must be an object");

    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back({Severity::Warning, msg});
    };

    Scenario s;
    const int version = get_or(j, "version", 1);
    if (version != 1) throw ParseError("unsupported scenario version " + std::to_string(version));

    if (j.contains("fmcw")) {
        const auto& f = j.at("fmcw");
        s.fmcw.carrier_hz = get_or(f, "carrier_ghz", 77.0) * 1e9;
        s.fmcw.sweep_bandwidth_hz = get_or(f, "sweep_bandwidth_mhz", 150.0) * 1e6;
        s.fmcw.chirp_duration_s = get_or(f, "chirp_duration_us", 7.33) * 1e-6;
        s.fmcw.chirps_per_frame = get_or(f, "chirps_per_frame", 128);
        s.fmcw.lpf_cutoff_hz = get_or(f, "lpf_cutoff_mhz", 27.27) * 1e6;
        s.fmcw.tx_power_w = dbm_to_watts(get_or(f, "tx_power_dbm", 0.0));
        s.fmcw.tx_gain = db_to_linear(get_or(f, "tx_gain_db", 20.0));
        s.fmcw.rx_gain = db_to_linear(get_or(f, "rx_gain_db", 20.0));
        s.fmcw.noise_figure = db_to_linear(get_or(f, "noise_figure_db", 15.0));
        s.fmcw.system_temp_k = get_or(f, "system_temp_k", 296.0);
    } else {
        warn("scenario omits 'fmcw'; using reference waveform defaults");
    }

    const double lambda = s.fmcw.wavelength();
    if (j.contains("target")) {
        const auto& t = j.at("target");
        s.target.range_m = get_or(t, "range_m", 180.0);
        s.target.velocity_mps = get_or(t, "velocity_mps", 25.0);
        if (t.contains("reflector")) {
            const auto& r = t.at("reflector");
            const std::string kind = get_or<std::string>(r, "kind", "bare");
            if (kind == "bare") {
                s.target.kind = ReflectorKind::Bare;
                s.target.rcs_m2 = db_to_linear(get_or(r, "rcs_dbsm", 10.0));
            } else if (kind == "passive_irs" || kind == "active_irs") {
                s.target.kind = kind == "passive_irs" ? ReflectorKind::PassiveIrs
                                                      : ReflectorKind::ActiveIrs;
                s.target.irs = detail::parse_irs(r, lambda);
                if (s.target.kind == ReflectorKind::ActiveIrs) {
                    s.target.reflection_gain = db_to_linear(get_or(r, "gamma_db", 30.0));
                }
            } else {
                throw ParseError("reflector kind must be bare, passive_irs or active_irs");
            }
        }
    } else {
        warn("scenario omits 'target'; using reference target (180 m, 25 m/s, 10 dBsm)");
    }

    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        s.geometry.azimuth_rad = get_or(g, "azimuth_deg", 0.0) * kPi / 180.0;
        s.geometry.elevation_rad = get_or(g, "elevation_deg", 0.0) * kPi / 180.0;
    }

    if (j.contains("interferers")) {
        for (const auto& ij : j.at("interferers")) {
            InterfererSpec itf;
            if (ij.contains("slope_mhz_per_us")) {
                const auto& slope = ij.at("slope_mhz_per_us");
                if (slope.is_string()) {
                    if (slope.get<std::string>() != "similar") {
                        throw ParseError("interferer slope must be a number or \"similar\"");
                    }
                    itf.similar_random_slope = true;
                } else {
                    itf.slope_hz_per_s = slope.get<double>() * 1e12;
                }
            }
            itf.sweep_bandwidth_hz = get_or(ij, "sweep_bandwidth_mhz", 150.0) * 1e6;
            itf.tx_power_w = dbm_to_watts(get_or(ij, "tx_power_dbm", 0.0));
            itf.tx_gain = db_to_linear(get_or(ij, "tx_gain_db", 20.0));
            itf.range_m = get_or(ij, "range_m", 50.0);
            if (ij.contains("time_offset_us")) {
                const auto& tau = ij.at("time_offset_us");
                if (tau.is_string()) {
                    if (tau.get<std::string>() != "random") {
                        throw ParseError("interferer time offset must be a number or \"random\"");
                    }
                    itf.random_offset = true;
                } else {
                    itf.random_offset = false;
                    itf.time_offset_s = tau.get<double>() * 1e-6;
                }
            }
            s.interferers.push_back(itf);
        }
    }

    s.noise_enabled = get_or(j, "noise_enabled", true);
    s.master_seed = get_or<std::uint64_t>(j, "master_seed", 1);
    if (j.contains("cfar")) {
        const auto& c = j.at("cfar");
        s.cfar.train_range = get_or(c, "train_range", 8);
        s.cfar.guard_range = get_or(c, "guard_range", 2);
        s.cfar.train_doppler = get_or(c, "train_doppler", 4);
        s.cfar.guard_doppler = get_or(c, "guard_doppler", 2);
        s.cfar.pfa = get_or(c, "pfa", 1e-5);
    }
    const std::string window = get_or<std::string>(j, "window", "rect");
    if (window == "rect") s.window = WindowKind::Rect;
    else if (window == "hann") s.window = WindowKind::Hann;
    else throw ParseError("window must be rect or hann");
    s.hit_tolerance_bins = get_or(j, "hit_tolerance_bins", 1);

    s.fmcw.validate();
    return s;
}

struct LoadedScenario {
    Scenario scenario;
    std::vector<Diagnostic> warnings;
    std::uint64_t file_digest = 0;
};

/// Load, default-fill and validate a scenario file. Validation errors are
/// thrown; warnings are returned alongside.
inline LoadedScenario load_scenario(const std::string& path) {
    LoadedScenario loaded;
    const std::string text = read_file(path);
    loaded.file_digest = fnv1a64(text);
    loaded.scenario = load_scenario_json(text, &loaded.warnings);
    const WaveformMetrics m = derive_waveform_metrics(loaded.scenario.fmcw);
    auto diags = validate_scenario(loaded.scenario, m);
    std::string errors;
    for (const auto& d : diags) {
        if (d.severity == Severity::Error) errors += "\n  " + d.message;
        else loaded.warnings.push_back(d);
    }
    if (!errors.empty()) throw ParseError("scenario validation failed:" + errors);
    return loaded;
}

namespace detail {
inline std::string format_double(double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}
}  // namespace detail

inline std::string beat_frame_csv(const BeatFrame& frame) {
    std::ostringstream ss;
    ss << std::setprecision(9);
    for (Eigen::Index l = 0; l < frame.data.rows(); ++l) {
        for (Eigen::Index n = 0; n < frame.data.cols(); ++n) {
            if (n) ss << ',';
            ss << frame.data(l, n).real() << ',' << frame.data(l, n).imag();
        }
        ss << '\n';
    }
    return ss.str();
}

/// Raw dump: row-major complex64 (little-endian float32 re/im pairs) plus a
/// JSON sidecar describing the layout.
inline void write_beat_frame_raw(const BeatFrame& frame, const std::string& bin_path,
                                 const std::string& sidecar_path) {
    std::string bytes;
    bytes.reserve(static_cast<std::size_t>(frame.data.size()) * 8);
    for (Eigen::Index l = 0; l < frame.data.rows(); ++l) {
        for (Eigen::Index n = 0; n < frame.data.cols(); ++n) {
            const float re = static_cast<float>(frame.data(l, n).real());
            const float im = static_cast<float>(frame.data(l, n).imag());
            bytes.append(reinterpret_cast<const char*>(&re), 4);
            bytes.append(reinterpret_cast<const char*>(&im), 4);
        }
    }
    write_file_atomic(bin_path, bytes);

    nlohmann::json side;
    side["layout"] = "row-major complex64 (float32 re/im interleaved, little-endian)";
    side["chirps"] = frame.data.rows();
    side["samples_per_chirp"] = frame.data.cols();
    side["sample_rate_hz"] = frame.sample_rate_hz;
    side["chirp_duration_s"] = frame.chirp_duration_s;
    side["scenario_digest"] = frame.meta.scenario_digest;
    side["seed"] = frame.meta.seed;
    side["reflection_gain"] = frame.meta.reflection_gain;
    write_file_atomic(sidecar_path, side.dump(2) + "\n");
}

inline void write_rd_map(const RangeDopplerMap& map, const std::string& csv_path,
                         const std::string& sidecar_path) {
    std::ostringstream ss;
    ss << std::setprecision(9);
    for (Eigen::Index r = 0; r < map.power.rows(); ++r) {
        for (Eigen::Index d = 0; d < map.power.cols(); ++d) {
            if (d) ss << ',';
            ss << map.power(r, d);
        }
        ss << '\n';
    }
    write_file_atomic(csv_path, ss.str());

    nlohmann::json side;
    side["rows"] = "range bins";
    side["cols"] = "doppler bins";
    side["range_bin_m"] = map.range_bin_m;
    side["doppler_bin_mps"] = map.doppler_bin_mps;
    side["zero_doppler_bin"] = map.zero_doppler_bin;
    side["n_range"] = map.power.rows();
    side["n_doppler"] = map.power.cols();
    write_file_atomic(sidecar_path, side.dump(2) + "\n");
}

inline std::string pd_curve_csv(const SweepResult& result) {
    std::ostringstream ss;
    ss << "gamma_db,trials,hits,pd,ci_lo,ci_hi\n" << std::setprecision(10);
    for (const auto& pt : result.points) {
        ss << pt.gamma_db << ',' << pt.trials << ',' << pt.hits << ',' << pt.value << ','
           << pt.ci_lo << ',' << pt.ci_hi << '\n';
    }
    return ss.str();
}

inline std::string sir_curve_csv(const SweepResult& result,
                                 const SweepResult* printed_form = nullptr) {
    std::ostringstream ss;
    ss << (printed_form ? "gamma_db,sir_db,sir_printed_db\n" : "gamma_db,sir_db\n")
       << std::setprecision(10);
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        ss << result.points[i].gamma_db << ',' << result.points[i].value;
        if (printed_form) ss << ',' << printed_form->points[i].value;
        ss << '\n';
    }
    return ss.str();
}

inline std::string rcs_curve_csv(const SweepResult& result, double passive_dbsm,
                                 double baseline_dbsm) {
    std::ostringstream ss;
    ss << "gamma_db,active_rcs_dbsm,passive_rcs_dbsm,baseline_rcs_dbsm\n" << std::setprecision(10);
    for (const auto& pt : result.points) {
        ss << pt.gamma_db << ',' << pt.value << ',' << passive_dbsm << ',' << baseline_dbsm << '\n';
    }
    return ss.str();
}

inline std::string detections_csv(const std::vector<Detection>& detections) {
    std::ostringstream ss;
    ss << "range_bin,doppler_bin,range_m,velocity_mps,snr_db\n" << std::setprecision(10);
    for (const auto& d : detections) {
        ss << d.range_bin << ',' << d.doppler_bin << ',' << d.range_m << ',' << d.velocity_mps
           << ',' << d.snr_db << '\n';
    }
    return ss.str();
}

struct RunManifest {
    std::string command;
    std::string scenario_path;
    std::uint64_t scenario_file_digest = 0;
    std::uint64_t scenario_digest = 0;
    std::vector<double> gamma_grid_db;
    int trials = 0;
    std::uint64_t master_seed = 0;
    int threads = 1;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;
    std::string version;
};

inline void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::json j;
    j["command"] = m.command;
    j["scenario_path"] = m.scenario_path;
    j["scenario_file_digest"] = m.scenario_file_digest;
    j["scenario_digest"] = m.scenario_digest;
    j["gamma_grid_db"] = m.gamma_grid_db;
    j["trials"] = m.trials;
    j["master_seed"] = m.master_seed;
    j["threads"] = m.threads;
    j["outputs"] = m.outputs;
    j["wall_seconds"] = m.wall_seconds;
    j["version"] = m.version;
    write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace irsradar
