// Communication receiver tests: channel estimation exactness on flat and
// on-grid selective channels, demapping, erasures, BER bookkeeping, and an
// AWGN check against the analytic 16-QAM error rate.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jcs/channel.hpp"
#include "jcs/rx_comm.hpp"

#include <cmath>

using namespace jcs;

namespace {

QamFrame test_frame(std::size_t m_size, std::size_t n_size, std::uint64_t trial) {
    RandomSource src(77);
    RandomStream d = src.stream("data", trial, 0);
    RandomStream p = src.stream("pilots", trial, 0);
    return make_user_frame(m_size, n_size, d, p);
}

double max_rel_error(const ComplexGrid& a, const ComplexGrid& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.data[i] - b.data[i]) / std::abs(b.data[i]));
    return worst;
}

} // namespace

TEST_CASE("flat unit channel estimates to one and decodes cleanly") {
    const QamFrame f = test_frame(240, 14, 0);
    const double p_c = 1.9771e-2;
    ComplexGrid y(240, 14);
    for (std::size_t i = 0; i < y.size(); ++i)
        y.data[i] = std::sqrt(p_c) * f.symbols.data[i];

    const ComplexGrid h = estimate_channel(y, f, p_c);
    for (const cplx& v : h.data) CHECK(std::abs(v - cplx(1.0, 0.0)) < 1e-9);

    RandomSource src(1);
    RandomStream er = src.stream("erasure", 0, 0);
    const auto [bits, erased] = equalize_demap(y, h, f, p_c, er);
    CHECK(erased == 0);
    CHECK(ber(f.bits, bits) == 0.0);
}

TEST_CASE("flat complex channel is recovered exactly") {
    const QamFrame f = test_frame(240, 14, 1);
    const double p_c = 5e-3;
    const cplx g = std::polar(3.2e-5, 2.1);
    ComplexGrid y(240, 14);
    for (std::size_t i = 0; i < y.size(); ++i)
        y.data[i] = g * std::sqrt(p_c) * f.symbols.data[i];

    const ComplexGrid h = estimate_channel(y, f, p_c);
    for (const cplx& v : h.data) CHECK(std::abs(v - g) / std::abs(g) < 1e-9);

    RandomSource src(1);
    RandomStream er = src.stream("erasure", 0, 0);
    const auto [bits, erased] = equalize_demap(y, h, f, p_c, er);
    CHECK(erased == 0);
    CHECK(ber(f.bits, bits) == 0.0);
}

TEST_CASE("on-grid delay-selective channel is interpolated exactly") {
    SystemConfig cfg;
    const QamFrame f = test_frame(240, 14, 2);

    // Delay aligned with the pilot comb's DFT grid: 12 cycles across the block.
    std::vector<PathParams> paths(1);
    paths[0].alpha = std::polar(1.0, -0.4);
    paths[0].tau = 12.0 / (240.0 * cfg.delta_f);
    paths[0].nu = 0.0;

    UserAllocation block;
    block.m_offset = 400;
    block.n_offset = 60;
    block.m_size = 240;
    block.n_size = 14;
    const ComplexGrid h_true = comm_channel_ft(paths, block, cfg);

    const double p_c = 2e-2;
    ComplexGrid y(240, 14);
    for (std::size_t i = 0; i < y.size(); ++i)
        y.data[i] = std::sqrt(p_c) * h_true.data[i] * f.symbols.data[i];

    const ComplexGrid h_hat = estimate_channel(y, f, p_c);
    CHECK(max_rel_error(h_hat, h_true) < 1e-9);

    RandomSource src(1);
    RandomStream er = src.stream("erasure", 0, 0);
    const auto [bits, erased] = equalize_demap(y, h_hat, f, p_c, er);
    CHECK(erased == 0);
    CHECK(ber(f.bits, bits) == 0.0);
}

TEST_CASE("slow Doppler rides through the time spline without bit errors") {
    SystemConfig cfg;
    const QamFrame f = test_frame(240, 14, 3);
    std::vector<PathParams> paths(1);
    paths[0].alpha = std::polar(1.0, 0.9);
    paths[0].tau = 0.0;
    paths[0].nu = 3000.0;  // well under the ~11 kHz pilot-column Nyquist rate

    UserAllocation block;
    block.m_offset = 0;
    block.n_offset = 0;
    block.m_size = 240;
    block.n_size = 14;
    const ComplexGrid h_true = comm_channel_ft(paths, block, cfg);

    const double p_c = 1e-2;
    ComplexGrid y(240, 14);
    for (std::size_t i = 0; i < y.size(); ++i)
        y.data[i] = std::sqrt(p_c) * h_true.data[i] * f.symbols.data[i];

    const ComplexGrid h_hat = estimate_channel(y, f, p_c);
    // The natural end conditions leave a few percent of tracking error at this
    // rate, still far inside the 16-QAM decision margin.
    CHECK(max_rel_error(h_hat, h_true) < 5e-2);

    RandomSource src(1);
    RandomStream er = src.stream("erasure", 0, 0);
    const auto [bits, erased] = equalize_demap(y, h_hat, f, p_c, er);
    CHECK(erased == 0);
    CHECK(ber(f.bits, bits) == 0.0);
}

TEST_CASE("estimate_channel rejects malformed inputs") {
    const QamFrame f = test_frame(16, 14, 4);
    ComplexGrid y(16, 14);
    CHECK_THROWS_AS(estimate_channel(y, f, 0.0), std::invalid_argument);
    ComplexGrid wrong(8, 14);
    CHECK_THROWS_AS(estimate_channel(wrong, f, 1.0), std::invalid_argument);
    // Odd block heights cannot host the comb-2 DFT interpolation.
    const QamFrame g = test_frame(15, 14, 5);
    ComplexGrid y2(15, 14);
    CHECK_THROWS_AS(estimate_channel(y2, g, 1.0), std::invalid_argument);
}

TEST_CASE("AWGN BER tracks the analytic 16-QAM curve at 15 dB") {
    const double gamma = std::pow(10.0, 1.5);
    const double p_n = 1.0 / gamma;  // unit signal power
    RandomStream bits_rng(31);
    RandomStream noise_rng(32);

    const std::size_t n_bits = 1000000;
    std::vector<std::uint8_t> bits(n_bits);
    for (auto& b : bits) b = static_cast<std::uint8_t>(bits_rng.uniform_int(2));
    std::vector<cplx> sym = qam16_modulate(bits);
    for (auto& s : sym) s += noise_rng.cnormal(p_n);
    const std::vector<std::uint8_t> rx = qam16_demodulate(sym);

    const double measured = ber(bits, rx);
    const double analytic = 4.4654003608e-3;
    CHECK(measured < 1.5 * analytic);
    CHECK(measured > analytic / 1.5);
}

TEST_CASE("near-zero estimates are erased with stream-fed random bits") {
    const QamFrame f = test_frame(16, 14, 6);
    const double p_c = 1.0;
    ComplexGrid y(16, 14);
    for (std::size_t i = 0; i < y.size(); ++i) y.data[i] = f.symbols.data[i];
    ComplexGrid h(16, 14);
    for (auto& v : h.data) v = cplx(1.0, 0.0);
    // Kill two data bins (row 1 is never a pilot row).
    h(1, 3) = cplx(0.0, 0.0);
    h(1, 7) = cplx(1e-15, 0.0);

    RandomSource src(2);
    RandomStream er1 = src.stream("erasure", 0, 0);
    const auto [bits1, erased1] = equalize_demap(y, h, f, p_c, er1);
    CHECK(erased1 == 2);

    RandomStream er2 = src.stream("erasure", 0, 0);
    const auto [bits2, erased2] = equalize_demap(y, h, f, p_c, er2);
    CHECK(erased2 == 2);
    CHECK(bits1 == bits2);

    // Only the erased bins can disagree with the transmitted payload.
    std::size_t diff = 0;
    for (std::size_t i = 0; i < bits1.size(); ++i) diff += (bits1[i] != f.bits[i]);
    CHECK(diff <= 8);
}

TEST_CASE("ber counts Hamming distance and validates lengths") {
    CHECK(ber({0, 1, 1, 0}, {0, 1, 1, 0}) == 0.0);
    CHECK(ber({0, 1, 1, 0}, {1, 1, 1, 0}) == doctest::Approx(0.25));
    CHECK(ber({0, 0, 0, 0}, {1, 1, 1, 1}) == 1.0);
    CHECK_THROWS_AS(ber({0, 1}, {0, 1, 1}), std::invalid_argument);
}

TEST_CASE("comm_metrics computes block gain and treats the pulse as noise") {
    ComplexGrid h(2, 2);
    h(0, 0) = {3.0, 0.0};
    h(0, 1) = {0.0, 1.0};
    h(1, 0) = {1.0, 1.0};
    h(1, 1) = {0.0, 0.0};
    const double g_expect = (9.0 + 1.0 + 2.0 + 0.0) / 4.0;
    const auto [g, gamma] = comm_metrics(h, 2e-2, 1e-3, 1e-5);
    CHECK(g == doctest::Approx(g_expect).epsilon(1e-12));
    CHECK(gamma == doctest::Approx(2e-2 * g_expect / (1e-3 * g_expect + 1e-5)).epsilon(1e-12));
    CHECK(to_db(100.0) == doctest::Approx(20.0).epsilon(1e-12));
}
