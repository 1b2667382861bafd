// config.hpp - system numerology, user scenario, derived resolutions, power split.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace jcs {

/**
 * @brief All system-level parameters (defaults follow the mmWave downlink
 *        numerology: 70 GHz carrier, 120 kHz spacing, 8.9 us symbols).
 *
 * T is the full OFDM symbol duration including the cyclic prefix (8.9 us
 * against the useful 1/delta_f = 8.33 us).
 */
struct SystemConfig {
    double f_c = 70e9;               ///< carrier frequency, Hz
    double delta_f = 120e3;          ///< subcarrier spacing, Hz
    double T = 8.9e-6;               ///< OFDM symbol duration incl. CP, s
    std::size_t M = 1024;            ///< subcarriers in the full grid
    std::size_t N = 128;             ///< OFDM symbols in the burst
    double P_tot_ft = 20e-3;         ///< total per-bin FT power budget, W
    double c = 299792458.0;          ///< speed of light, m/s
    double noise_psd = 3.9810717055349565e-21;  ///< 10^(-174/10) * 1e-3 W/Hz
    double noise_figure_db = 7.0;    ///< receiver noise figure, dB
    std::uint64_t rng_seed = 1;      ///< master seed for all randomness
};

/// One downlink user; the same geometry doubles as the sensed target.
struct UserSpec {
    double range_m = 0.0;
    double velocity_ms = 0.0;
    double motion_angle_rad = 0.0;
    std::size_t num_paths = 1;
    std::size_t M_cu = 240;  ///< allocated subcarriers
    std::size_t N_cu = 14;   ///< allocated symbols
};

struct UserScenario {
    std::vector<UserSpec> users;
    std::size_t qam_order = 16;
};

/// Delay/Doppler bin widths and their range/velocity equivalents.
struct Resolutions {
    double delta_tau;            ///< 1/(M delta_f), s
    double delta_nu;             ///< 1/(N T), Hz
    double delta_R;              ///< c delta_tau / 2, m
    double delta_V;              ///< c delta_nu / (2 f_c), m/s
    double R_max_unambiguous;    ///< c / (2 delta_f), m
    double V_max_unambiguous;    ///< c / (4 f_c T), m/s (one-sided)
};

/**
 * @brief Check every type invariant; returns one diagnostic per violation
 *        (empty list = valid). Includes the CP headroom condition
 *        tau_max < T - 1/delta_f for the worst-case two-way delay.
 */
std::vector<std::string> validate(const SystemConfig& cfg, const UserScenario& scenario);

/// validate() that throws std::invalid_argument with the joined diagnostics.
void validate_or_throw(const SystemConfig& cfg, const UserScenario& scenario);

/**
 * @brief Derived grid resolutions and unambiguous spans.
 */
Resolutions resolutions(const SystemConfig& cfg);

/**
 * @brief Split the per-bin budget: P_c = 10^beta * P_tot, P_s = (1-10^beta) * P_tot.
 * @throws std::invalid_argument for beta >= 0
 */
std::pair<double, double> power_split(double beta, const SystemConfig& cfg);

/// Thermal noise power per FT bin: noise_psd * delta_f * 10^(NF/10), W.
double noise_power_per_bin(const SystemConfig& cfg);

/// Carrier wavelength c / f_c, m.
double wavelength(const SystemConfig& cfg);

/// The reference scenario used throughout: three UEs at 15/25/35 m moving
/// radially at 14/25/30 m/s, one LoS path, 240x14 resource blocks.
UserScenario default_scenario();

} // namespace jcs
