// Command-line front end: scenario ingestion, experiment execution and
// artifact emission (CSV curves, frame/map dumps, run manifests).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "irsradar/experiments.hpp"
#include "irsradar/io.hpp"
#include "irsradar/processing.hpp"
#include "irsradar/synth.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

int default_threads() {
    if (const char* env = std::getenv("IRSRADAR_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void print_warnings(const std::vector<irsradar::Diagnostic>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w.message << "\n";
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace

int main(int argc, char** argv) {
    using namespace irsradar;

    CLI::App app{"FMCW automotive radar interference simulator with IRS-assisted targets"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::string gamma_text = "0:40:1";
    int trials = 1000;
    int threads = default_threads();
    std::optional<std::uint64_t> seed_override;
    std::optional<double> gamma_db_override;
    std::string frame_format = "csv";
    std::string window_override;
    bool with_baseline = true;
    bool printed_form = false;
    int rcs_elements = 65536;
    double baseline_dbsm = 10.0;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        if (needs_scenario) {
            cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
        }
        cmd->add_option("--out-dir", out_dir, "output directory");
        cmd->add_option("--seed", seed_override, "override the scenario master seed");
    };

    auto* simulate = app.add_subcommand("simulate", "run one trial and dump frame + R-D map");
    add_common(simulate, true);
    simulate->add_option("--gamma-db", gamma_db_override, "reflection gain override (dB)");
    simulate->add_option("--frame-format", frame_format, "beat frame dump format: csv or raw")
        ->check(CLI::IsMember({"csv", "raw"}));
    simulate->add_option("--window", window_override, "FFT window: rect or hann")
        ->check(CLI::IsMember({"rect", "hann"}));

    auto* sweep = app.add_subcommand("sweep", "detection probability versus reflection gain");
    add_common(sweep, true);
    sweep->add_option("--gamma", gamma_text, "gamma grid start:stop:step in dB");
    sweep->add_option("--trials", trials, "Monte-Carlo trials per grid point");
    sweep->add_option("--threads", threads, "worker threads (IRSRADAR_THREADS sets the default)");
    sweep->add_flag("--baseline,!--no-baseline", with_baseline,
                    "also emit the flat non-IRS baseline curve");

    auto* sir = app.add_subcommand("sir", "SIR versus reflection gain");
    add_common(sir, true);
    sir->add_option("--gamma", gamma_text, "gamma grid start:stop:step in dB");
    sir->add_flag("--printed-form", printed_form,
                  "add the alternative N*Gamma*g^2 column for curve-shape comparison");

    auto* rcs = app.add_subcommand("rcs", "effective RCS versus reflection gain");
    add_common(rcs, false);
    rcs->add_option("--scenario", scenario_path, "scenario JSON file (optional)");
    rcs->add_option("--elements", rcs_elements, "IRS element count when no scenario is given");
    rcs->add_option("--gamma", gamma_text, "gamma grid start:stop:step in dB");
    rcs->add_option("--baseline-dbsm", baseline_dbsm, "bare-target baseline RCS (dBsm)");

    auto* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("--scenario", scenario_path, "scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    Timer timer;
    try {
        if (validate->parsed()) {
            const LoadedScenario loaded = load_scenario(scenario_path);
            print_warnings(loaded.warnings);
            std::cout << "scenario ok (digest " << std::hex << scenario_digest(loaded.scenario)
                      << std::dec << ")\n";
            return 0;
        }

        RunManifest manifest;
        manifest.version = kVersion;
        manifest.threads = threads;

        if (rcs->parsed()) {
            IrsSpec spec;
            double carrier_hz = FmcwParams{}.carrier_hz;
            if (!scenario_path.empty()) {
                const LoadedScenario loaded = load_scenario(scenario_path);
                print_warnings(loaded.warnings);
                if (loaded.scenario.target.kind == ReflectorKind::Bare) {
                    std::cerr << "error: scenario target has no IRS\n";
                    return 1;
                }
                spec = loaded.scenario.target.irs;
                carrier_hz = loaded.scenario.fmcw.carrier_hz;
                manifest.scenario_path = scenario_path;
                manifest.scenario_file_digest = loaded.file_digest;
                manifest.scenario_digest = scenario_digest(loaded.scenario);
            } else {
                if (rcs_elements < 1) {
                    std::cerr << "error: --elements must be positive\n";
                    return 1;
                }
                spec.rows = 1;
                spec.cols = rcs_elements;
            }
            const auto grid = parse_gamma_grid(gamma_text);
            const auto curve = rcs_curve(spec, carrier_hz, grid);
            const double passive_dbsm =
                linear_to_db(spec.element_count() *
                             element_rcs(kSpeedOfLight / carrier_hz, spec.element_gain));
            const std::string path = join_path(out_dir, "rcs.csv");
            write_file_atomic(path, rcs_curve_csv(curve, passive_dbsm, baseline_dbsm));
            manifest.command = "rcs";
            manifest.gamma_grid_db = grid;
            manifest.outputs = {path};
            manifest.wall_seconds = timer.seconds();
            write_manifest(manifest, join_path(out_dir, "manifest.json"));
            std::cout << "wrote " << path << " (passive level " << passive_dbsm << " dBsm)\n";
            return 0;
        }

        const LoadedScenario loaded = load_scenario(scenario_path);
        print_warnings(loaded.warnings);
        Scenario s = loaded.scenario;
        if (seed_override) s.master_seed = *seed_override;
        manifest.scenario_path = scenario_path;
        manifest.scenario_file_digest = loaded.file_digest;
        manifest.scenario_digest = scenario_digest(s);
        manifest.master_seed = s.master_seed;

        if (simulate->parsed()) {
            if (!window_override.empty()) {
                s.window = window_override == "hann" ? WindowKind::Hann : WindowKind::Rect;
            }
            const double gamma = gamma_db_override ? db_to_linear(*gamma_db_override)
                                                   : s.target.reflection_gain;
            const WaveformMetrics m = derive_waveform_metrics(s.fmcw);
            const std::uint64_t seed = trial_seed(s.master_seed, 0, 0);
            const BeatFrame frame = compose_beat_frame(s, gamma, seed);
            const RangeDopplerMap map = range_doppler_map(frame, m, s.window);
            const auto detections = ca_cfar_detect(map, s.cfar);

            std::vector<std::string> outputs;
            if (frame_format == "raw") {
                const std::string bin = join_path(out_dir, "beat_frame.bin");
                const std::string side = join_path(out_dir, "beat_frame.json");
                write_beat_frame_raw(frame, bin, side);
                outputs.push_back(bin);
                outputs.push_back(side);
            } else {
                const std::string csv = join_path(out_dir, "beat_frame.csv");
                write_file_atomic(csv, beat_frame_csv(frame));
                outputs.push_back(csv);
            }
            const std::string map_csv = join_path(out_dir, "rd_map.csv");
            const std::string map_side = join_path(out_dir, "rd_map_axes.json");
            write_rd_map(map, map_csv, map_side);
            outputs.push_back(map_csv);
            outputs.push_back(map_side);
            const std::string det_csv = join_path(out_dir, "detections.csv");
            write_file_atomic(det_csv, detections_csv(detections));
            outputs.push_back(det_csv);

            Eigen::Index pr = 0, pd = 0;
            map.power.maxCoeff(&pr, &pd);
            const auto phys = bin_to_physical(map, static_cast<int>(pr), static_cast<int>(pd));
            std::cout << "R-D argmax: bin (" << pr << ", " << pd << ") -> " << phys.first
                      << " m, " << phys.second << " m/s; " << detections.size()
                      << " CFAR detections\n";

            manifest.command = "simulate";
            manifest.trials = 1;
            manifest.outputs = outputs;
            manifest.wall_seconds = timer.seconds();
            write_manifest(manifest, join_path(out_dir, "manifest.json"));
            return 0;
        }

        if (sweep->parsed()) {
            const auto grid = parse_gamma_grid(gamma_text);
            const SweepResult result = detection_probability_sweep(s, grid, trials, threads);
            const std::string curve_path =
                join_path(out_dir, std::string(curve_kind_name(result.kind)) + ".csv");
            write_file_atomic(curve_path, pd_curve_csv(result));
            std::vector<std::string> outputs{curve_path};

            if (with_baseline && s.target.kind != ReflectorKind::Bare) {
                const SweepPoint base = baseline_detection_probability(s, trials, threads);
                SweepResult flat;
                flat.kind = result.kind;
                flat.scenario_digest = result.scenario_digest;
                for (double g : grid) {
                    SweepPoint pt = base;
                    pt.gamma_db = g;
                    flat.points.push_back(pt);
                }
                const std::string base_path = join_path(out_dir, "pd_baseline.csv");
                write_file_atomic(base_path, pd_curve_csv(flat));
                outputs.push_back(base_path);
            }

            manifest.command = "sweep";
            manifest.gamma_grid_db = grid;
            manifest.trials = trials;
            manifest.outputs = outputs;
            manifest.wall_seconds = timer.seconds();
            write_manifest(manifest, join_path(out_dir, "manifest.json"));
            std::cout << "wrote " << curve_path << "\n";
            return 0;
        }

        if (sir->parsed()) {
            const auto grid = parse_gamma_grid(gamma_text);
            const SweepResult result = sir_curve(s, grid, false);
            std::optional<SweepResult> printed;
            if (printed_form) printed = sir_curve(s, grid, true);
            const std::string path = join_path(out_dir, "sir.csv");
            write_file_atomic(path, sir_curve_csv(result, printed ? &*printed : nullptr));
            manifest.command = "sir";
            manifest.gamma_grid_db = grid;
            manifest.outputs = {path};
            manifest.wall_seconds = timer.seconds();
            write_manifest(manifest, join_path(out_dir, "manifest.json"));
            std::cout << "wrote " << path << "\n";
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
