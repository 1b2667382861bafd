// experiments.hpp - Monte Carlo orchestration: single trials, beta sweeps,
// CSV emission. All randomness derives from named streams keyed by
// (seed, label, trial, user), so a trial's draws are shared across every beta
// and grid case (common random numbers). Sweeps evaluate each trial's channel,
// data, and noise once and rescale the superposition per beta, which keeps the
// BER and RMSE curves monotone in beta without inflating the trial count.

#pragma once

#include "jcs/channel.hpp"
#include "jcs/config.hpp"
#include "jcs/numerics.hpp"
#include "jcs/rx_comm.hpp"
#include "jcs/rx_sense.hpp"
#include "jcs/waveform.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace jcs {

/// Exclusion window used by the experiment chain. The reference geometry puts
/// the closest target pair 6.7 Doppler bins apart at N = 128 and the strongest
/// delay sidelobes 2.7 bins out, so a 7 x 7 window steps over the sidelobes
/// while never straddling a neighbor.
inline constexpr std::size_t kPeakWinL = 3;
inline constexpr std::size_t kPeakWinK = 3;

/// DD pulse origin: delay bin 0, Doppler bin N/2 (grid center, so positive and
/// negative Doppler offsets are unambiguous over [-N/2, N/2)).
inline constexpr std::size_t kPulseL0 = 0;

/// Everything a sweep needs. The master seed lives in cfg.rng_seed.
struct SweepSpec {
    SystemConfig cfg;
    UserScenario scenario;
    std::vector<double> betas;   ///< power-split exponents, all negative
    std::size_t trials = 100;
    Exec exec = Exec::parallel;
};

/// Per-trial outcome at one beta.
struct TrialResult {
    double beta = 0.0;
    std::size_t trial_index = 0;
    double mean_ber = 0.0;                  ///< across users
    std::vector<double> user_ber;
    double snr_ft_lin = 0.0;                ///< mean across users, linear
    double snr_dd_lin = 0.0;
    std::vector<double> err_range_m;        ///< per target, estimate - truth
    std::vector<double> err_velocity_ms;
    std::vector<std::size_t> peak_l;        ///< detected bins, strongest first
    std::vector<std::size_t> peak_k;
};

/// Optional grid captures from run_trial (CLI dump hooks).
struct TrialArtifacts {
    ComplexGrid x_ft;   ///< transmitted superimposed FT grid
    ComplexGrid y_dd;   ///< sensing receiver's DD grid
};

/// One aggregated sweep row.
struct SweepPoint {
    double beta = 0.0;
    std::size_t M = 0;
    std::size_t N = 0;
    double mean_ber = 0.0;
    double rmse_range_m = 0.0;
    double rmse_velocity_ms = 0.0;
    double mean_snr_ft_db = 0.0;
    double mean_snr_dd_db = 0.0;
    std::size_t trials = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;                  ///< one per beta, input order
    std::vector<std::vector<TrialResult>> raw;       ///< [beta][trial]
};

/// 12 log-spaced beta magnitudes from 5e-3 down to 1e-4 (negated).
std::vector<double> default_betas(double beta_min = -5e-3, double beta_max = -1e-4,
                                  std::size_t points = 12);

/**
 * @brief One full TX/channel/RX trial at a single power split.
 *
 * Reproducible bit for bit from (cfg.rng_seed, beta, scenario, trial_index)
 * under either execution policy.
 */
TrialResult run_trial(const SystemConfig& cfg, const UserScenario& scenario, double beta,
                      std::size_t trial_index, Exec exec = Exec::parallel,
                      TrialArtifacts* artifacts = nullptr);

/**
 * @brief Monte Carlo sweep over spec.betas with spec.trials trials per point.
 *
 * Trials run in parallel (OpenMP); aggregation is a serial ordered reduction,
 * so the output is byte-identical for any thread count and for Exec::serial.
 */
SweepResult run_sweep(const SweepSpec& spec);

/**
 * @brief Write the sweep as CSV with header
 *        beta,M,N,mean_ber,rmse_range_m,rmse_velocity_ms,mean_snr_ft_db,mean_snr_dd_db,trials
 *        and round-trip-exact doubles (%.17g).
 */
void emit_csv(const SweepResult& result, const std::string& path);

/// emit_csv into a string (tests compare runs byte for byte).
std::string sweep_csv(const SweepResult& result);

} // namespace jcs
