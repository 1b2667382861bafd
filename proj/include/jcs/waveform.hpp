// waveform.hpp - transmit-side builders: QAM frames with pilots, random user
// placement, DD sensing pulses, ISFFT mapping and superposition.

#pragma once

#include "jcs/config.hpp"
#include "jcs/numerics.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace jcs {

/// Rectangular resource block of one user inside the full M x N grid.
struct UserAllocation {
    std::size_t user_id = 0;
    std::size_t m_offset = 0;
    std::size_t n_offset = 0;
    std::size_t m_size = 0;
    std::size_t n_size = 0;
};

/**
 * @brief One user's transmitted block: payload bits, unit-average-power
 *        symbols (data + pilots), and the pilot mask.
 *
 * Pilots are known QPSK symbols on a DMRS-like lattice: comb-2 in frequency
 * (even relative subcarriers) on pilot OFDM symbols {0, 5, 8, 13} of a
 * 14-symbol block (scaled proportionally for other N_cu). Four pilot columns
 * keep the time-direction spline fed at the Doppler rates of the reference
 * scenario; a two-column pattern aliases above ~6 kHz.
 */
struct QamFrame {
    std::vector<std::uint8_t> bits;        ///< payload bits, data bins only
    ComplexGrid symbols;                   ///< M_cu x N_cu, E|a|^2 = 1
    std::vector<std::uint8_t> pilot_mask;  ///< row-major, 1 = pilot bin
};

/// One sparse DD-domain pulse.
struct SensingPulse {
    std::size_t l = 0;
    std::size_t k = 0;
    cplx amplitude{1.0, 0.0};
};

struct SensingPulseSet {
    std::vector<SensingPulse> pulses;
    double P_s_dd = 0.0;  ///< per-pulse DD power, W
};

/// Requested pulse coordinates and (unit-power) amplitudes.
struct PulseSpec {
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    std::vector<cplx> amplitudes;  ///< |amplitude| = 1 for exact bookkeeping
};

/// Gray-coded 16-QAM, scale 1/sqrt(10); bits (b0 b1) map I, (b2 b3) map Q.
cplx qam16_map(const std::uint8_t* bits4);

/// Minimum-distance hard decision, inverse of qam16_map.
void qam16_demap(cplx symbol, std::uint8_t* bits4);

/// Map a bit vector (length divisible by 4) to symbols.
std::vector<cplx> qam16_modulate(const std::vector<std::uint8_t>& bits);

/// Hard-demap a symbol vector to bits.
std::vector<std::uint8_t> qam16_demodulate(const std::vector<cplx>& symbols);

/// Pilot OFDM-symbol indices within a block of n_size columns ({0,5,8,13} at 14).
std::vector<std::size_t> pilot_columns(std::size_t n_size);

/// Pilot subcarrier rows within a block: comb-2, even relative indices.
bool is_pilot_row(std::size_t m_rel);

/**
 * @brief Uniformly random non-overlapping placement of all user blocks.
 * @throws std::runtime_error when no disjoint packing is found within the
 *         retry budget (infeasible or adversarial packings)
 */
std::vector<UserAllocation> allocate_users(const UserScenario& scenario,
                                           const SystemConfig& cfg, RandomStream& rng);

/**
 * @brief Build one user's frame: random payload bits on data bins, known QPSK
 *        pilots from the pilot stream on the pilot lattice.
 */
QamFrame make_user_frame(std::size_t m_size, std::size_t n_size, RandomStream& data_rng,
                         RandomStream& pilot_rng);

/**
 * @brief Scatter every user's scaled block sqrt(P_c_ft) * a[m,n] onto the full
 *        FT grid; unallocated bins stay zero.
 */
ComplexGrid build_comm_grid(const std::vector<UserAllocation>& allocations,
                            const std::vector<QamFrame>& frames, double P_c_ft,
                            std::size_t M, std::size_t N);

/**
 * @brief Place the DD pulses with per-pulse power P_s_dd = P_s_ft * M * N / I,
 *        so the mapped FT image carries exactly P_s_ft per bin.
 * @throws std::invalid_argument on duplicate or out-of-range coordinates
 */
std::pair<SensingPulseSet, ComplexGrid> build_sensing_dd(const PulseSpec& spec,
                                                         const SystemConfig& cfg,
                                                         double P_s_ft);

/**
 * @brief X_ft = x_c_ft + isfft(x_s_dd): the transmitted dual-domain frame.
 */
ComplexGrid superimpose(const ComplexGrid& x_c_ft, const ComplexGrid& x_s_dd,
                        Exec exec = Exec::parallel);

} // namespace jcs
