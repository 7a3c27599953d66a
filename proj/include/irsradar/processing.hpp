#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "irsradar/params.hpp"
#include "irsradar/scenario.hpp"
#include "irsradar/synth.hpp"

namespace irsradar {

/// 2-D power spectrum of one frame. Rows are range bins, columns are
/// Doppler bins, fft-shifted so that column N_f/2 is zero velocity.
/// Transforms are unnormalized forward FFTs, so total map energy equals
/// frame energy times N_s*N_f.
struct RangeDopplerMap {
    Eigen::MatrixXd power;
    double range_bin_m = 0.0;
    double doppler_bin_mps = 0.0;
    int zero_doppler_bin = 0;
};

struct Detection {
    int range_bin = 0;
    int doppler_bin = 0;
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double snr_db = 0.0;
};

inline Eigen::VectorXd make_window(WindowKind kind, int n) {
    Eigen::VectorXd w(n);
    switch (kind) {
        case WindowKind::Rect:
            w.setOnes();
            break;
        case WindowKind::Hann:
            for (int i = 0; i < n; ++i) {
                w(i) = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (n - 1)));
            }
            break;
    }
    return w;
}

/// Fast-time FFT per chirp, slow-time FFT per range bin, squared magnitude.
inline RangeDopplerMap range_doppler_map(const BeatFrame& frame, const WaveformMetrics& m,
                                         WindowKind window = WindowKind::Rect) {
    const int nf = static_cast<int>(frame.data.rows());
    const int ns = static_cast<int>(frame.data.cols());
    if (nf < 2 || ns < 2) throw std::invalid_argument("frame must be at least 2x2");
    if (nf != m.chirps_per_frame || ns != m.samples_per_chirp) {
        throw std::invalid_argument("frame dimensions do not match waveform metrics");
    }

    const Eigen::VectorXd wr = make_window(window, ns);
    const Eigen::VectorXd wd = make_window(window, nf);

    Eigen::FFT<double> fft;
    Eigen::MatrixXcd stage(nf, ns);
    std::vector<std::complex<double>> in(ns), out(ns);
    for (int l = 0; l < nf; ++l) {
        for (int n = 0; n < ns; ++n) in[n] = frame.data(l, n) * wr(n);
        fft.fwd(out, in);
        for (int n = 0; n < ns; ++n) stage(l, n) = out[n];
    }

    RangeDopplerMap map;
    map.power.resize(ns, nf);
    map.range_bin_m = m.range_bin_m();
    map.doppler_bin_mps = m.doppler_bin_mps();
    map.zero_doppler_bin = nf / 2;

    std::vector<std::complex<double>> din(nf), dout(nf);
    for (int n = 0; n < ns; ++n) {
        for (int l = 0; l < nf; ++l) din[l] = stage(l, n) * wd(l);
        fft.fwd(dout, din);
        for (int l = 0; l < nf; ++l) {
            const int shifted = (l + nf / 2) % nf;  // zero velocity at N_f/2
            map.power(n, shifted) = std::norm(dout[l]);
        }
    }
    return map;
}

/// CA-CFAR threshold multiplier: alpha = N_t * (Pfa^(-1/N_t) - 1).
inline double cfar_threshold_factor(int training_cells, double pfa) {
    if (training_cells < 1) throw std::invalid_argument("need at least one training cell");
    if (pfa <= 0.0 || pfa >= 1.0) throw std::invalid_argument("pfa must lie in (0, 1)");
    return training_cells * (std::pow(pfa, -1.0 / training_cells) - 1.0);
}

inline std::pair<double, double> bin_to_physical(const RangeDopplerMap& map, int range_bin,
                                                 int doppler_bin) {
    if (range_bin < 0 || range_bin >= map.power.rows() || doppler_bin < 0 ||
        doppler_bin >= map.power.cols()) {
        throw std::out_of_range("bin outside map");
    }
    return {range_bin * map.range_bin_m,
            (doppler_bin - map.zero_doppler_bin) * map.doppler_bin_mps};
}

/// Nearest map cell for a physical (range, velocity) pair.
inline std::pair<int, int> physical_to_bin(const WaveformMetrics& m, double range_m,
                                           double velocity_mps) {
    const int nf = m.chirps_per_frame;
    int rbin = static_cast<int>(std::lround(range_m / m.range_bin_m()));
    if (rbin >= m.samples_per_chirp) rbin = m.samples_per_chirp - 1;
    if (rbin < 0) rbin = 0;
    int doff = static_cast<int>(std::lround(velocity_mps / m.doppler_bin_mps()));
    int dbin = ((nf / 2 + doff) % nf + nf) % nf;
    return {rbin, dbin};
}

/// Cell-averaging CFAR over the whole map. The noise estimate for each
/// cell is the mean of the training ring (guard cells and the cell under
/// test excluded); edges clamp in range and wrap in Doppler. Implemented
/// with sliding strip sums, O(1) per cell.
inline std::vector<Detection> ca_cfar_detect(const RangeDopplerMap& map, const CfarConfig& cfg) {
    const int ns = static_cast<int>(map.power.rows());
    const int nf = static_cast<int>(map.power.cols());
    const int wr = cfg.train_range + cfg.guard_range;
    const int wd = cfg.train_doppler + cfg.guard_doppler;
    if (cfg.train_range < 0 || cfg.train_doppler < 0 || cfg.guard_range < 0 ||
        cfg.guard_doppler < 0 || cfg.training_cells() < 1) {
        throw std::invalid_argument("CFAR training window is empty");
    }
    if (2 * wr + 1 > ns || 2 * wd + 1 > nf) {
        throw std::invalid_argument("CFAR window larger than map");
    }

    const int nt = cfg.training_cells();
    const double alpha = cfar_threshold_factor(nt, cfg.pfa);

    // Column strips: sums over the range extent at each (r, d).
    auto range_strips = [&](int half) {
        Eigen::MatrixXd strip(ns, nf);
        for (int d = 0; d < nf; ++d) {
            double sum = 0.0;
            auto clamp = [&](int r) { return r < 0 ? 0 : (r >= ns ? ns - 1 : r); };
            for (int k = -half; k <= half; ++k) sum += map.power(clamp(k), d);
            strip(0, d) = sum;
            for (int r = 1; r < ns; ++r) {
                sum += map.power(clamp(r + half), d) - map.power(clamp(r - 1 - half), d);
                strip(r, d) = sum;
            }
        }
        return strip;
    };
    const Eigen::MatrixXd full_col = range_strips(wr);
    const Eigen::MatrixXd guard_col = range_strips(cfg.guard_range);

    // Slide the strips circularly over Doppler.
    auto doppler_accumulate = [&](const Eigen::MatrixXd& strip, int half) {
        Eigen::MatrixXd acc(ns, nf);
        auto wrap = [&](int d) { return ((d % nf) + nf) % nf; };
        for (int r = 0; r < ns; ++r) {
            double sum = 0.0;
            for (int k = -half; k <= half; ++k) sum += strip(r, wrap(k));
            acc(r, 0) = sum;
            for (int d = 1; d < nf; ++d) {
                sum += strip(r, wrap(d + half)) - strip(r, wrap(d - 1 - half));
                acc(r, d) = sum;
            }
        }
        return acc;
    };
    const Eigen::MatrixXd full = doppler_accumulate(full_col, wd);
    const Eigen::MatrixXd guard = doppler_accumulate(guard_col, cfg.guard_doppler);

    std::vector<Detection> detections;
    for (int r = 0; r < ns; ++r) {
        for (int d = 0; d < nf; ++d) {
            const double training_sum = full(r, d) - guard(r, d);
            const double estimate = training_sum / nt;
            const double cell = map.power(r, d);
            if (cell > alpha * estimate) {
                Detection det;
                det.range_bin = r;
                det.doppler_bin = d;
                const auto phys = bin_to_physical(map, r, d);
                det.range_m = phys.first;
                det.velocity_mps = phys.second;
                det.snr_db = estimate > 0.0 ? linear_to_db(cell / estimate) : 999.0;
                detections.push_back(det);
            }
        }
    }
    return detections;
}

}  // namespace irsradar
