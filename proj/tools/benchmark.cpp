// benchmark.cpp - serial vs parallel kernel timings (ISFFT, SFFT, 2-D circular
// convolution, one full trial). The parallel path must produce bit-identical
// grids, so the checksum column doubles as a consistency check.

#include "jcs/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <vector>

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

jcs::ComplexGrid random_grid(std::size_t m, std::size_t n, std::uint64_t seed) {
    jcs::RandomStream rng(seed);
    jcs::ComplexGrid g(m, n);
    for (auto& x : g.data) x = rng.cnormal(1.0);
    return g;
}

template <typename F>
double time_best_of(F&& f, int reps) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = clock_type::now();
        f();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

void bench_case(std::size_t m, std::size_t n) {
    const jcs::ComplexGrid a = random_grid(m, n, 11);
    const jcs::ComplexGrid b = random_grid(m, n, 22);

    jcs::ComplexGrid r_serial, r_parallel;
    const double t_isfft_s =
        time_best_of([&] { r_serial = jcs::isfft(a, jcs::Exec::serial); }, 3);
    const double t_isfft_p =
        time_best_of([&] { r_parallel = jcs::isfft(a, jcs::Exec::parallel); }, 3);
    const bool isfft_same = r_serial.data == r_parallel.data;

    const double t_sfft_s =
        time_best_of([&] { r_serial = jcs::sfft(a, jcs::Exec::serial); }, 3);
    const double t_sfft_p =
        time_best_of([&] { r_parallel = jcs::sfft(a, jcs::Exec::parallel); }, 3);
    const bool sfft_same = r_serial.data == r_parallel.data;

    const double t_conv_s =
        time_best_of([&] { r_serial = jcs::circular_convolve_2d(a, b, jcs::Exec::serial); }, 3);
    const double t_conv_p =
        time_best_of([&] { r_parallel = jcs::circular_convolve_2d(a, b, jcs::Exec::parallel); }, 3);
    const bool conv_same = r_serial.data == r_parallel.data;

    std::printf("%zux%zu\n", m, n);
    std::printf("  isfft  serial %8.2f ms  parallel %8.2f ms  speedup %.2fx  identical %s\n",
                t_isfft_s, t_isfft_p, t_isfft_s / t_isfft_p, isfft_same ? "yes" : "NO");
    std::printf("  sfft   serial %8.2f ms  parallel %8.2f ms  speedup %.2fx  identical %s\n",
                t_sfft_s, t_sfft_p, t_sfft_s / t_sfft_p, sfft_same ? "yes" : "NO");
    std::printf("  conv   serial %8.2f ms  parallel %8.2f ms  speedup %.2fx  identical %s\n",
                t_conv_s, t_conv_p, t_conv_s / t_conv_p, conv_same ? "yes" : "NO");
}

void bench_trial() {
    jcs::SystemConfig cfg;
    const jcs::UserScenario scen = jcs::default_scenario();
    jcs::TrialResult rs, rp;
    const double ts = time_best_of(
        [&] { rs = jcs::run_trial(cfg, scen, -5e-3, 0, jcs::Exec::serial); }, 2);
    const double tp = time_best_of(
        [&] { rp = jcs::run_trial(cfg, scen, -5e-3, 0, jcs::Exec::parallel); }, 2);
    const bool same = rs.mean_ber == rp.mean_ber && rs.err_range_m == rp.err_range_m &&
                      rs.err_velocity_ms == rp.err_velocity_ms;
    std::printf("full trial (%zux%zu, 3 users)\n", cfg.M, cfg.N);
    std::printf("  trial  serial %8.2f ms  parallel %8.2f ms  speedup %.2fx  identical %s\n",
                ts, tp, ts / tp, same ? "yes" : "NO");
}

} // namespace

int main() {
    bench_case(1024, 128);
    bench_case(2048, 256);
    bench_case(4096, 512);
    bench_trial();
    return 0;
}
