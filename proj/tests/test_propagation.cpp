#include <gtest/gtest.h>

#include <cmath>

#include "irsradar/propagation.hpp"

using namespace irsradar;

namespace {
FmcwParams table2() { return FmcwParams{}; }

InterfererSpec interferer_at(double range_m) {
    InterfererSpec i;
    i.range_m = range_m;
    return i;
}
}  // namespace

TEST(EchoPower, Table2SedanAt180m) {
    const double pr = echo_power(table2(), 10.0, 180.0);
    EXPECT_NEAR(pr, 7.277e-16, 0.01e-16);
    EXPECT_NEAR(watts_to_dbm(pr), -121.38, 0.02);
}

TEST(EchoPower, LinearInRcs) {
    const auto p = table2();
    EXPECT_NEAR(echo_power(p, 20.0, 180.0) / echo_power(p, 10.0, 180.0), 2.0, 1e-12);
}

TEST(EchoPower, InverseFourthPowerRange) {
    const auto p = table2();
    const double drop_db = linear_to_db(echo_power(p, 10.0, 90.0) / echo_power(p, 10.0, 180.0));
    EXPECT_NEAR(drop_db, 12.04, 0.01);
}

TEST(EchoPower, RejectsBadInputs) {
    const auto p = table2();
    EXPECT_THROW(echo_power(p, -1.0, 180.0), std::invalid_argument);
    EXPECT_THROW(echo_power(p, 10.0, 0.0), std::invalid_argument);
    EXPECT_THROW(echo_power(p, std::numeric_limits<double>::infinity(), 180.0),
                 std::invalid_argument);
}

TEST(InterferencePower, Table2InterfererAt50m) {
    const double pri = interference_power(table2(), interferer_at(50.0));
    EXPECT_NEAR(pri, 3.840e-10, 0.005e-10);
    EXPECT_NEAR(watts_to_dbm(pri), -64.16, 0.02);
}

TEST(InterferencePower, InverseSquareRange) {
    const auto p = table2();
    const double ratio_db = linear_to_db(interference_power(p, interferer_at(50.0)) /
                                         interference_power(p, interferer_at(100.0)));
    EXPECT_NEAR(ratio_db, 6.02, 0.01);
}

TEST(InterferencePower, DominatesTargetEcho) {
    // Short-range interferer vs long-range target: ~57 dB advantage.
    const auto p = table2();
    const double margin_db =
        linear_to_db(interference_power(p, interferer_at(50.0)) / echo_power(p, 10.0, 180.0));
    EXPECT_NEAR(margin_db, 57.2, 0.3);
}

TEST(ReceiverNoise, Table2Value) {
    const double rho = receiver_noise_power(table2());
    EXPECT_NEAR(rho, 3.524e-12, 0.005e-12);
    EXPECT_NEAR(watts_to_dbm(rho), -84.53, 0.02);
}

TEST(ReceiverNoise, UnitNoiseFigure) {
    FmcwParams p = table2();
    p.noise_figure = 1.0;
    EXPECT_NEAR(receiver_noise_power(p),
                kBoltzmann * p.system_temp_k * p.lpf_cutoff_hz, 1e-20);
}

TEST(ReceiverNoise, LinearInBandwidth) {
    FmcwParams p = table2();
    const double full = receiver_noise_power(p);
    p.lpf_cutoff_hz /= 2.0;
    EXPECT_NEAR(receiver_noise_power(p), full / 2.0, 1e-18);
}

TEST(IrsElementNoise, Table2Value) {
    const double rho_a = irs_element_noise_power(table2());
    EXPECT_NEAR(rho_a, 1.938e-11, 0.005e-11);
    EXPECT_NEAR(watts_to_dbm(rho_a), -77.12, 0.02);
}

TEST(IrsElementNoise, BandwidthRatioToReceiverNoise) {
    const auto p = table2();
    EXPECT_NEAR(irs_element_noise_power(p) / receiver_noise_power(p),
                p.sweep_bandwidth_hz / p.lpf_cutoff_hz, 1e-9);

    FmcwParams equal = p;
    equal.sweep_bandwidth_hz = equal.lpf_cutoff_hz;
    EXPECT_NEAR(irs_element_noise_power(equal), receiver_noise_power(equal), 1e-20);
}

TEST(PowerCrossover, BisectionMatchesClosedForm) {
    // Find R_I* with P_rI(R_I*) = P_r(R) by bisection over the two power
    // operations, then compare with the closed form
    //   R_I* = R^2 * sqrt(4 pi P_tI G_tI / (P_t G_t sigma)).
    const auto p = table2();
    const double sigma = 10.0;
    for (double r : {60.0, 120.0, 180.0}) {
        const double pr = echo_power(p, sigma, r);
        auto gap = [&](double ri) { return interference_power(p, interferer_at(ri)) - pr; };
        double lo = 1.0, hi = 1e7;
        ASSERT_GT(gap(lo), 0.0);
        ASSERT_LT(gap(hi), 0.0);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (gap(mid) > 0.0 ? lo : hi) = mid;
        }
        const double bisected = 0.5 * (lo + hi);
        const InterfererSpec i = interferer_at(1.0);
        const double closed =
            r * r * std::sqrt(4.0 * kPi * i.tx_power_w * i.tx_gain / (p.tx_power_w * p.tx_gain * sigma));
        EXPECT_NEAR(bisected / closed, 1.0, 1e-9) << "R = " << r;
    }
}

TEST(PowerMonotonicity, DecreasingInRange) {
    const auto p = table2();
    double prev_echo = echo_power(p, 10.0, 1.0);
    double prev_int = interference_power(p, interferer_at(1.0));
    for (double r = 11.0; r < 200.0; r += 10.0) {
        const double e = echo_power(p, 10.0, r);
        const double i = interference_power(p, interferer_at(r));
        EXPECT_LT(e, prev_echo);
        EXPECT_LT(i, prev_int);
        prev_echo = e;
        prev_int = i;
    }
}
