// numerics.hpp - complex grids, unitary ISFFT/SFFT pair, interpolators, RNG streams.
//
// The ISFFT/SFFT pair uses unitary DFT matrices (entries exp(-j2pi*i*k/K)/sqrt(K)):
//
//   isfft(X) = F_M  X F_N^H   (DD -> FT)
//   sfft(Y)  = F_M^H Y F_N    (FT -> DD)
//
// so both transforms preserve Frobenius energy exactly and a single DD pulse of
// power P spreads to per-bin FT power P/(MN). FFTW does the 1-D work; the contract
// is the explicit double sum, pinned by oracle tests against brute-force evaluation.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace jcs {

using cplx = std::complex<double>;

/// Execution policy for the grid kernels: serial reference or OpenMP-parallel.
/// Both paths produce bitwise-identical results (parallel loops only split
/// independent rows/columns; no floating-point reassociation).
enum class Exec { serial, parallel };

/**
 * @brief Dense row-major complex matrix; the carrier of every FT and DD grid.
 */
struct ComplexGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> data;

    ComplexGrid() = default;
    ComplexGrid(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    cplx& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return data.size(); }

    /// Frobenius energy sum |x|^2.
    double energy() const;
};

/**
 * @brief Counter-based deterministic random stream (splitmix64 core).
 *
 * Identical (seed, label, trial, user) tuples yield bit-identical sequences on
 * every platform and run. Gaussian draws use Box-Muller with a cached spare.
 */
class RandomStream {
public:
    explicit RandomStream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n);

    /// Standard normal N(0, 1).
    double normal();

    /// Circularly-symmetric complex Gaussian CN(0, variance).
    cplx cnormal(double variance);

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/**
 * @brief Root seed from which all named streams derive.
 *
 * Streams are keyed by (seed, label, trial, user) so that every trial's draws
 * are independent of the power split and grid case - the common-random-numbers
 * scheme that makes the Monte Carlo curves monotone and case-comparable.
 */
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed) {}

    RandomStream stream(const char* label, std::uint64_t trial = 0,
                        std::uint64_t user = 0) const;

private:
    std::uint64_t seed_;
};

/**
 * @brief Draw n i.i.d. CN(0, variance) samples.
 */
std::vector<cplx> draw_complex_gaussian(RandomStream& rng, std::size_t n, double variance);

/**
 * @brief ISFFT: DD -> FT map, F_M X F_N^H with unitary DFTs.
 */
ComplexGrid isfft(const ComplexGrid& x_dd, Exec exec = Exec::parallel);

/**
 * @brief SFFT: FT -> DD map, F_M^H Y F_N; exact inverse of isfft.
 */
ComplexGrid sfft(const ComplexGrid& y_ft, Exec exec = Exec::parallel);

/**
 * @brief 2-D circular convolution, plain quadruple-sum normalization:
 *        out[l,k] = sum_{l',k'} a[l',k'] b[(l-l') mod M, (k-k') mod N].
 *
 * Computed via the transform pair: out = sqrt(MN) * sfft(isfft(a) . isfft(b)).
 */
ComplexGrid circular_convolve_2d(const ComplexGrid& a, const ComplexGrid& b,
                                 Exec exec = Exec::parallel);

/**
 * @brief DFT interpolation of a uniform pilot comb up to target_len samples.
 *
 * samples[p] is the value at row comb*p with comb = target_len / samples.size();
 * rejects combs that do not divide target_len. Zero-insertion in the transform
 * domain (negative half split at P/2), amplitude rescale 1/P. Exact for sums of
 * complex exponentials whose frequencies lie inside the comb's unambiguous span.
 *
 * @throws std::invalid_argument on a non-dividing comb or empty input
 */
std::vector<cplx> dft_interpolate_columns(const std::vector<cplx>& samples,
                                          std::size_t target_len);

/**
 * @brief Natural cubic spline through (x_pilot[i], samples[i]), evaluated at
 *        x = 0..target_len-1; real and imaginary parts splined independently;
 *        constant extrapolation outside the outermost pilots.
 *
 * @throws std::invalid_argument with fewer than 2 pilots or unsorted abscissae
 */
std::vector<cplx> spline_interpolate_rows(const std::vector<double>& x_pilot,
                                          const std::vector<cplx>& samples,
                                          std::size_t target_len);

/**
 * @brief Binary grid dump: uint64 rows, uint64 cols (little endian), then
 *        row-major interleaved re/im 64-bit doubles.
 */
void dump_grid(const ComplexGrid& g, const std::string& path);

/// Inverse of dump_grid.
ComplexGrid load_grid(const std::string& path);

/**
 * @brief CSV dump of per-bin power |x|^2 (one row per grid row) for plotting.
 */
void dump_power_csv(const ComplexGrid& g, const std::string& path);

} // namespace jcs
