// Sensing receiver tests: peak picking with circular exclusion, parameter
// read-off with wrap conventions, association, RMSE, and an end-to-end
// noise-free on-grid recovery through the real channel.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jcs/channel.hpp"
#include "jcs/rx_sense.hpp"
#include "jcs/waveform.hpp"

#include <cmath>
#include <set>

using namespace jcs;

TEST_CASE("to_dd is the SFFT of the received grid") {
    RandomStream rng(3);
    ComplexGrid y(32, 16);
    for (auto& v : y.data) v = rng.cnormal(1.0);
    CHECK(to_dd(y).data == sfft(y).data);
}

TEST_CASE("detect_peaks finds isolated spikes strongest first") {
    ComplexGrid y(32, 16);
    RandomStream rng(5);
    for (auto& v : y.data) v = rng.cnormal(1e-6);
    y(4, 3) = {3.0, 0.0};
    y(20, 10) = {0.0, 5.0};
    y(9, 14) = {2.0, 2.0};  // |.|^2 = 8

    const auto peaks = detect_peaks(y, 3);
    REQUIRE(peaks.size() == 3);
    CHECK(peaks[0] == std::pair<std::size_t, std::size_t>{20, 10});
    CHECK(peaks[1] == std::pair<std::size_t, std::size_t>{4, 3});
    CHECK(peaks[2] == std::pair<std::size_t, std::size_t>{9, 14});
}

TEST_CASE("the exclusion window suppresses sidelobes near a stronger peak") {
    ComplexGrid y(32, 16);
    y(10, 8) = {4.0, 0.0};
    y(12, 9) = {3.0, 0.0};   // inside the default 5x5 window of (10,8)
    y(25, 2) = {2.0, 0.0};   // well separated

    const auto peaks = detect_peaks(y, 2);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0] == std::pair<std::size_t, std::size_t>{10, 8});
    CHECK(peaks[1] == std::pair<std::size_t, std::size_t>{25, 2});

    // A wider Doppler gap escapes the window.
    ComplexGrid y2(32, 16);
    y2(10, 8) = {4.0, 0.0};
    y2(10, 11) = {3.0, 0.0};  // dk = 3 > w_k = 2
    const auto peaks2 = detect_peaks(y2, 2);
    CHECK(peaks2[1] == std::pair<std::size_t, std::size_t>{10, 11});
}

TEST_CASE("the exclusion window wraps circularly") {
    ComplexGrid y(16, 8);
    y(0, 0) = {4.0, 0.0};
    y(15, 7) = {3.0, 0.0};  // circular distance (1,1): masked
    y(8, 4) = {2.0, 0.0};
    const auto peaks = detect_peaks(y, 2);
    CHECK(peaks[0] == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(peaks[1] == std::pair<std::size_t, std::size_t>{8, 4});
}

TEST_CASE("magnitude ties resolve to the smallest row-major bin") {
    ComplexGrid y(8, 8);
    y(5, 6) = {2.0, 0.0};
    y(2, 4) = {-2.0, 0.0};
    y(2, 1) = {0.0, 2.0};
    const auto peaks = detect_peaks(y, 3, 0, 0);
    CHECK(peaks[0] == std::pair<std::size_t, std::size_t>{2, 1});
    CHECK(peaks[1] == std::pair<std::size_t, std::size_t>{2, 4});
    CHECK(peaks[2] == std::pair<std::size_t, std::size_t>{5, 6});
}

TEST_CASE("detect_peaks validates the request") {
    ComplexGrid y(8, 8);
    y(1, 1) = {1.0, 0.0};
    CHECK_THROWS_AS(detect_peaks(y, 2, 4, 4), std::invalid_argument);  // window = grid
    CHECK_THROWS_AS(detect_peaks(ComplexGrid(), 1), std::invalid_argument);
    CHECK_NOTHROW(detect_peaks(y, 4, 1, 1));
}

TEST_CASE("estimate_params converts bins with the wrap conventions") {
    SystemConfig cfg;  // 1024 x 128
    const std::size_t l0 = 0, k0 = 64;

    // Frozen: peak (12, 71) -> tau = 12 bins, nu = +7 bins.
    const auto est = estimate_params({{12, 71}, {12, 60}}, l0, k0, cfg);
    REQUIRE(est.size() == 2);
    CHECK(est[0].tau_s == doctest::Approx(9.7656250000000005e-8).epsilon(1e-12));
    CHECK(est[0].nu_hz == doctest::Approx(6144.6629213483147).epsilon(1e-12));
    CHECK(est[0].range_m == doctest::Approx(14.63830361328125).epsilon(1e-12));
    CHECK(est[0].velocity_ms == doctest::Approx(13.158025719803371).epsilon(1e-12));

    // Doppler bins left of the origin are negative velocities.
    CHECK(est[1].nu_hz == doctest::Approx(-3511.23595505618).epsilon(1e-12));
    CHECK(est[1].velocity_ms == doctest::Approx(-7.5188718398876411).epsilon(1e-12));

    // Doppler wraps into [-N/2, N/2): bin k0 + N/2 aliases to -N/2.
    const auto wrap = estimate_params({{0, 0}}, l0, k0, cfg);
    CHECK(wrap[0].nu_hz == doctest::Approx(-64.0 * 877.8089888).epsilon(1e-9));

    // Delay wraps modulo M relative to l0.
    const auto dl = estimate_params({{2, 64}}, 1020, k0, cfg);
    CHECK(dl[0].tau_s == doctest::Approx(6.0 * 8.138020833e-9).epsilon(1e-9));
}

TEST_CASE("association matches estimates to the nearest true ranges") {
    std::vector<SensingEstimate> est(3);
    est[0].range_m = 34.2;
    est[1].range_m = 15.8;
    est[2].range_m = 24.9;
    const auto idx = associate_nearest_range(est, {15.0, 25.0, 35.0});
    REQUIRE(idx.size() == 3);
    CHECK(idx[0] == 1);
    CHECK(idx[1] == 2);
    CHECK(idx[2] == 0);

    // A missing target still gets the leftover estimate (greedy, all assigned).
    std::vector<SensingEstimate> est2(2);
    est2[0].range_m = 15.1;
    est2[1].range_m = 15.3;
    const auto idx2 = associate_nearest_range(est2, {15.0, 40.0});
    CHECK(idx2[0] == 0);
    CHECK(idx2[1] == 1);

    CHECK_THROWS_AS(associate_nearest_range(est2, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("rmse follows the per-target mean-square formula") {
    // (1/3) sqrt(1 + 4 + 9) with one sample per target
    CHECK(rmse({{1.0}, {-2.0}, {3.0}}) == doctest::Approx(1.247219128924647).epsilon(1e-12));
    // multiple samples: mean square per target first
    CHECK(rmse({{1.0, -1.0}, {2.0, 2.0}}) ==
          doctest::Approx(std::sqrt(1.0 + 4.0) / 2.0).epsilon(1e-12));
    CHECK(rmse({{0.0, 0.0}}) == 0.0);
    CHECK_THROWS_AS(rmse({}), std::invalid_argument);
    CHECK_THROWS_AS(rmse({{1.0}, {}}), std::invalid_argument);
}

TEST_CASE("sensing_snr and mean_power compose the DD link budget") {
    ComplexGrid g(2, 2);
    g(0, 0) = {2.0, 0.0};
    g(1, 1) = {0.0, 2.0};
    CHECK(mean_power(g) == doctest::Approx(2.0).epsilon(1e-12));
    const double snr = sensing_snr(2.0, 10.0, 0.5, 1.0);
    CHECK(snr == doctest::Approx(10.0 * 2.0 / (0.5 * 2.0 + 1.0)).epsilon(1e-12));
}

TEST_CASE("noise-free on-grid echoes are recovered exactly through the chain") {
    SystemConfig cfg;
    cfg.M = 256;
    cfg.N = 32;
    const Resolutions res = resolutions(cfg);

    // Targets on exact bins: delays 5 and 17, Dopplers +3 and -6.
    UserScenario scen;
    UserSpec a, b;
    a.range_m = 5.0 * res.delta_R;
    a.velocity_ms = 3.0 * res.delta_V;
    b.range_m = 17.0 * res.delta_R;
    b.velocity_ms = -6.0 * res.delta_V;
    scen.users = {a, b};

    PulseSpec pulse;
    pulse.coords = {{0, 16}};
    pulse.amplitudes = {std::polar(1.0, 0.77)};
    const auto [set, x_dd] = build_sensing_dd(pulse, cfg, 1e-3);
    const ComplexGrid x_ft = isfft(x_dd);

    RandomSource src(19);
    RandomStream rng = src.stream("chan_sens", 0, 0);
    const ComplexGrid h = sensing_channel_ft(scen, cfg, rng);
    ComplexGrid y_ft(cfg.M, cfg.N);
    for (std::size_t i = 0; i < y_ft.size(); ++i)
        y_ft.data[i] = h.data[i] * x_ft.data[i];

    const ComplexGrid y_dd = to_dd(y_ft);
    const auto peaks = detect_peaks(y_dd, 2);
    const std::set<std::pair<std::size_t, std::size_t>> found(peaks.begin(), peaks.end());
    const std::set<std::pair<std::size_t, std::size_t>> expect{{5, 19}, {17, 10}};
    CHECK(found == expect);

    const auto est = estimate_params(peaks, 0, 16, cfg);
    const auto idx = associate_nearest_range(est, {a.range_m, b.range_m});
    CHECK(est[idx[0]].range_m == doctest::Approx(a.range_m).epsilon(1e-12));
    CHECK(est[idx[0]].velocity_ms == doctest::Approx(a.velocity_ms).epsilon(1e-12));
    CHECK(est[idx[1]].range_m == doctest::Approx(b.range_m).epsilon(1e-12));
    CHECK(est[idx[1]].velocity_ms == doctest::Approx(b.velocity_ms).epsilon(1e-12));
}
