// channel.hpp - per-trial communication and sensing channels.
//
// The simulator never generates time samples: with the CP removed, both
// channels act as per-bin multiplications on the FT grid,
//
//   H[m,n] = sum_q alpha_q exp(j2pi(nu_q n T - m delta_f tau_q)),
//
// under an ideal band-limited pulse-shaping filter (G(m delta_f) = 1). The DD
// image of the same channel has a closed form with Dirichlet kernels in both
// dimensions, used as an oracle against sfft of the FT channel.

#pragma once

#include "jcs/config.hpp"
#include "jcs/numerics.hpp"
#include "jcs/waveform.hpp"

#include <utility>
#include <vector>

namespace jcs {

/// One propagation path.
struct PathParams {
    cplx alpha{0.0, 0.0};  ///< complex gain
    double tau = 0.0;      ///< delay, s
    double nu = 0.0;       ///< Doppler shift, Hz
    double omega = 0.0;    ///< mean power gain E|alpha|^2
};

/// Per-bin noise powers at the two receivers.
struct NoiseModel {
    double P_n_comm = 0.0;
    double P_n_sens = 0.0;
};

/// Two-way (monostatic echo) delay and Doppler: tau = 2R/c, nu = 2 f_c V cos(psi)/c.
std::pair<double, double> two_way_params(double range_m, double velocity_ms,
                                         double motion_angle_rad, const SystemConfig& cfg);

/// One-way free-space mean power gain (lambda/(4 pi R))^2.
double path_gain_comm(double range_m, const SystemConfig& cfg);

/// Radar-equation mean power gain lambda^2 sigma_rcs / ((4 pi)^3 R^4).
double path_gain_sens(double range_m, const SystemConfig& cfg, double sigma_rcs = 1.0);

/**
 * @brief Downlink paths of one user: LoS at (R/c, f_c V cos(psi)/c) with
 *        alpha ~ CN(0, Omega); optional extra paths with uniform excess delay
 *        up to 400 ns, uniform motion angle, and Omega split evenly.
 */
std::vector<PathParams> comm_paths_for_user(const UserSpec& user, const SystemConfig& cfg,
                                            RandomStream& rng);

/**
 * @brief FT channel on one user's block (absolute grid indices).
 */
ComplexGrid comm_channel_ft(const std::vector<PathParams>& paths, const UserAllocation& block,
                            const SystemConfig& cfg, Exec exec = Exec::parallel);

/// comm_channel_ft evaluated over the whole M x N grid.
ComplexGrid comm_channel_ft_fullgrid(const std::vector<PathParams>& paths,
                                     const SystemConfig& cfg, Exec exec = Exec::parallel);

/**
 * @brief Closed-form DD image of the channel:
 *        H_dd[l,k] = (1/sqrt(MN)) sum_q alpha_q W_M(l - tau_q/T_s) W_N(nu_q N T - k),
 *        W_K(y) = exp(+j pi y (K-1)/K) sin(pi y)/sin(pi y / K), with the
 *        removable singularity at y = 0 (mod K) evaluating to K.
 *
 * Equals sfft(comm_channel_ft_fullgrid(...)) to transform accuracy.
 */
ComplexGrid comm_channel_dd(const std::vector<PathParams>& paths, const SystemConfig& cfg,
                            Exec exec = Exec::parallel);

/**
 * @brief Monostatic sensing channel over the full grid: one LoS echo per user,
 *        two-way geometry, radar-equation amplitude sqrt(Omega_u) with a
 *        uniform random phase (nonfluctuating echo; see README).
 */
ComplexGrid sensing_channel_ft(const UserScenario& scenario, const SystemConfig& cfg,
                               RandomStream& rng, Exec exec = Exec::parallel);

/**
 * @brief Y = H .* X + N, N[m,n] i.i.d. CN(0, P_n). Noise is drawn row-major
 *        from the stream regardless of the execution policy.
 */
ComplexGrid apply_channel(const ComplexGrid& x, const ComplexGrid& h, double P_n,
                          RandomStream& rng, Exec exec = Exec::parallel);

} // namespace jcs
