#include "jcs/numerics.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jcs {

double ComplexGrid::energy() const {
    double e = 0.0;
    for (const auto& v : data) e += std::norm(v);
    return e;
}

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

static inline std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

static inline std::uint64_t fnv1a64(const char* s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (; *s; ++s) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*s));
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t RandomStream::next_u64() { return splitmix64(state_); }

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_int(std::uint64_t n) {
    // multiply-shift; bias < 2^-64, irrelevant at simulation scale
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

double RandomStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 in (0,1] keeps the log finite
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

cplx RandomStream::cnormal(double variance) {
    if (variance < 0.0) throw std::invalid_argument("cnormal: negative variance");
    if (variance == 0.0) return {0.0, 0.0};
    double s = std::sqrt(variance / 2.0);
    double re = normal();
    double im = normal();
    return {s * re, s * im};
}

RandomStream RandomSource::stream(const char* label, std::uint64_t trial,
                                  std::uint64_t user) const {
    std::uint64_t h = seed_;
    h ^= fnv1a64(label);
    (void)splitmix64(h);
    h ^= trial;
    (void)splitmix64(h);
    h ^= user;
    (void)splitmix64(h);
    return RandomStream(h);
}

std::vector<cplx> draw_complex_gaussian(RandomStream& rng, std::size_t n, double variance) {
    std::vector<cplx> out(n);
    for (auto& v : out) v = rng.cnormal(variance);
    return out;
}

// ---------------------------------------------------------------------------
// 1-D FFT plumbing (FFTW, unaligned new-array execution, plan cache)
// ---------------------------------------------------------------------------

namespace {

struct PlanKey {
    int n;
    int stride;
    int sign;
    bool operator<(const PlanKey& o) const {
        if (n != o.n) return n < o.n;
        if (stride != o.stride) return stride < o.stride;
        return sign < o.sign;
    }
};

std::mutex g_plan_mutex;
std::map<PlanKey, fftw_plan> g_plans;

// Plans are created once per (length, stride, direction) with FFTW_ESTIMATE
// (deterministic planning) and FFTW_UNALIGNED (valid for any vector storage),
// then re-executed concurrently on distinct data via fftw_execute_dft.
fftw_plan plan_for(int n, int stride, int sign) {
    std::lock_guard<std::mutex> lk(g_plan_mutex);
    PlanKey key{n, stride, sign};
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;
    std::vector<cplx> scratch(static_cast<std::size_t>(n) * stride);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    int nn[1] = {n};
    fftw_plan plan = fftw_plan_many_dft(1, nn, 1, p, nullptr, stride, 0, p, nullptr,
                                        stride, 0, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    g_plans.emplace(key, plan);
    return plan;
}

inline void exec_line(fftw_plan plan, cplx* line) {
    auto* p = reinterpret_cast<fftw_complex*>(line);
    fftw_execute_dft(plan, p, p);
}

// Unnormalized DFT sweep along rows (axis 1, contiguous) and columns (axis 0,
// stride = cols). sign = FFTW_FORWARD gives sum x[k] e^{-j2pi ik/K}.
void transform_rows(ComplexGrid& g, int sign, Exec exec) {
    if (g.cols < 1) return;
    fftw_plan plan = plan_for(static_cast<int>(g.cols), 1, sign);
    const std::int64_t rows = static_cast<std::int64_t>(g.rows);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
#endif
    for (std::int64_t r = 0; r < rows; ++r)
        exec_line(plan, g.data.data() + static_cast<std::size_t>(r) * g.cols);
}

void transform_cols(ComplexGrid& g, int sign, Exec exec) {
    if (g.rows < 1) return;
    fftw_plan plan = plan_for(static_cast<int>(g.rows), static_cast<int>(g.cols), sign);
    const std::int64_t cols = static_cast<std::int64_t>(g.cols);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
#endif
    for (std::int64_t c = 0; c < cols; ++c)
        exec_line(plan, g.data.data() + static_cast<std::size_t>(c));
}

void scale_grid(ComplexGrid& g, double s, Exec exec) {
    const std::int64_t n = static_cast<std::int64_t>(g.data.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
#endif
    for (std::int64_t i = 0; i < n; ++i) g.data[static_cast<std::size_t>(i)] *= s;
}

} // namespace

// ---------------------------------------------------------------------------
// ISFFT / SFFT / convolution
// ---------------------------------------------------------------------------

ComplexGrid isfft(const ComplexGrid& x_dd, Exec exec) {
    if (x_dd.rows == 0 || x_dd.cols == 0)
        throw std::invalid_argument("isfft: empty grid");
    ComplexGrid g = x_dd;
    // F_M X: forward DFT down each column; X F_N^H: inverse DFT along each row.
    transform_cols(g, FFTW_FORWARD, exec);
    transform_rows(g, FFTW_BACKWARD, exec);
    scale_grid(g, 1.0 / std::sqrt(static_cast<double>(g.rows) * static_cast<double>(g.cols)),
               exec);
    return g;
}

ComplexGrid sfft(const ComplexGrid& y_ft, Exec exec) {
    if (y_ft.rows == 0 || y_ft.cols == 0)
        throw std::invalid_argument("sfft: empty grid");
    ComplexGrid g = y_ft;
    transform_cols(g, FFTW_BACKWARD, exec);
    transform_rows(g, FFTW_FORWARD, exec);
    scale_grid(g, 1.0 / std::sqrt(static_cast<double>(g.rows) * static_cast<double>(g.cols)),
               exec);
    return g;
}

ComplexGrid circular_convolve_2d(const ComplexGrid& a, const ComplexGrid& b, Exec exec) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("circular_convolve_2d: dimension mismatch");
    ComplexGrid fa = isfft(a, exec);
    ComplexGrid fb = isfft(b, exec);
    const std::int64_t n = static_cast<std::int64_t>(fa.data.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
#endif
    for (std::int64_t i = 0; i < n; ++i)
        fa.data[static_cast<std::size_t>(i)] *= fb.data[static_cast<std::size_t>(i)];
    ComplexGrid out = sfft(fa, exec);
    scale_grid(out, std::sqrt(static_cast<double>(a.rows) * static_cast<double>(a.cols)),
               exec);
    return out;
}

// ---------------------------------------------------------------------------
// Interpolators
// ---------------------------------------------------------------------------

std::vector<cplx> dft_interpolate_columns(const std::vector<cplx>& samples,
                                          std::size_t target_len) {
    const std::size_t P = samples.size();
    if (P == 0) throw std::invalid_argument("dft_interpolate_columns: empty input");
    if (target_len % P != 0)
        throw std::invalid_argument("dft_interpolate_columns: comb does not divide target length");
    if (target_len == P) return samples;

    // forward DFT of the comb samples (P is small; direct sum keeps it simple)
    std::vector<cplx> F(P);
    for (std::size_t f = 0; f < P; ++f) {
        cplx acc = 0.0;
        for (std::size_t p = 0; p < P; ++p)
            acc += samples[p] * std::polar(1.0, -2.0 * M_PI * double(p * f) / double(P));
        F[f] = acc;
    }
    // zero-insertion: bins below P/2 keep their frequency, bins at/above P/2 move
    // to the negative half; synthesis at the fine grid with 1/P amplitude rescale
    const double comb = double(target_len) / double(P);
    std::vector<cplx> out(target_len);
    std::vector<double> freq(P);
    for (std::size_t f = 0; f < P; ++f)
        freq[f] = (f < (P + 1) / 2) ? double(f) : double(f) - double(P);
    for (std::size_t m = 0; m < target_len; ++m) {
        cplx acc = 0.0;
        double t = double(m) / comb;
        for (std::size_t f = 0; f < P; ++f)
            acc += F[f] * std::polar(1.0, 2.0 * M_PI * freq[f] * t / double(P));
        out[m] = acc / double(P);
    }
    return out;
}

std::vector<cplx> spline_interpolate_rows(const std::vector<double>& x_pilot,
                                          const std::vector<cplx>& samples,
                                          std::size_t target_len) {
    const std::size_t n = x_pilot.size();
    if (n < 2) throw std::invalid_argument("spline_interpolate_rows: need at least 2 pilots");
    if (samples.size() != n)
        throw std::invalid_argument("spline_interpolate_rows: size mismatch");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_pilot[i] > x_pilot[i - 1]))
            throw std::invalid_argument("spline_interpolate_rows: abscissae not increasing");

    // natural cubic spline second derivatives via the standard tridiagonal solve,
    // run once for the real part and once for the imaginary part
    auto solve_m2 = [&](const std::vector<double>& y) {
        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_pilot[i + 1] - x_pilot[i];
        std::vector<double> diag(n, 1.0), off(n, 0.0), rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            off[i] = h[i];
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
        }
        // forward elimination (natural BCs: m2[0] = m2[n-1] = 0)
        std::vector<double> cp(n, 0.0), dp(n, 0.0);
        cp[0] = 0.0;
        dp[0] = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double low = h[i - 1];
            double denom = diag[i] - low * cp[i - 1];
            cp[i] = off[i] / denom;
            dp[i] = (rhs[i] - low * dp[i - 1]) / denom;
        }
        std::vector<double> m2(n, 0.0);
        for (std::size_t i = n - 1; i-- > 1;) m2[i] = dp[i] - cp[i] * m2[i + 1];
        return m2;
    };

    std::vector<double> yr(n), yi(n);
    for (std::size_t i = 0; i < n; ++i) {
        yr[i] = samples[i].real();
        yi[i] = samples[i].imag();
    }
    std::vector<double> mr = solve_m2(yr), mi = solve_m2(yi);

    auto eval = [&](const std::vector<double>& y, const std::vector<double>& m2, double x) {
        if (x <= x_pilot.front()) return y.front();   // constant extrapolation
        if (x >= x_pilot.back()) return y.back();
        std::size_t i = 0;
        while (i + 2 < n && x >= x_pilot[i + 1]) ++i;
        double hi = x_pilot[i + 1] - x_pilot[i];
        double a = (x_pilot[i + 1] - x) / hi;
        double b = (x - x_pilot[i]) / hi;
        return a * y[i] + b * y[i + 1] +
               ((a * a * a - a) * m2[i] + (b * b * b - b) * m2[i + 1]) * hi * hi / 6.0;
    };

    std::vector<cplx> out(target_len);
    for (std::size_t q = 0; q < target_len; ++q) {
        double x = static_cast<double>(q);
        out[q] = cplx(eval(yr, mr, x), eval(yi, mi, x));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

void dump_grid(const ComplexGrid& g, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("dump_grid: cannot open " + path);
    std::uint64_t hdr[2] = {g.rows, g.cols};
    std::fwrite(hdr, sizeof(std::uint64_t), 2, f);
    // std::complex<double> is layout-compatible with double[2] (re, im)
    std::fwrite(g.data.data(), sizeof(cplx), g.data.size(), f);
    std::fclose(f);
}

ComplexGrid load_grid(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("load_grid: cannot open " + path);
    std::uint64_t hdr[2];
    if (std::fread(hdr, sizeof(std::uint64_t), 2, f) != 2) {
        std::fclose(f);
        throw std::runtime_error("load_grid: truncated header in " + path);
    }
    ComplexGrid g(hdr[0], hdr[1]);
    if (std::fread(g.data.data(), sizeof(cplx), g.data.size(), f) != g.data.size()) {
        std::fclose(f);
        throw std::runtime_error("load_grid: truncated payload in " + path);
    }
    std::fclose(f);
    return g;
}

void dump_power_csv(const ComplexGrid& g, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("dump_power_csv: cannot open " + path);
    for (std::size_t r = 0; r < g.rows; ++r) {
        for (std::size_t c = 0; c < g.cols; ++c)
            std::fprintf(f, "%.17g%s", std::norm(g(r, c)), c + 1 < g.cols ? "," : "");
        std::fputc('\n', f);
    }
    std::fclose(f);
}

} // namespace jcs
