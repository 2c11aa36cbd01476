// SPDX-License-Identifier: Apache-2.0
//
// gusim - clustered stochastic channel simulator and user-scheduling benchmark
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gusim/geometry.hpp"

namespace gusim {

/// Offline channel-sounder parameters used by the cluster-localization
/// error bounds. SNR and counts are stored linear; the config file takes
/// the input SNR in dB.
struct SounderConfig {
    double bandwidth_hz = 20e6;   // BW
    int periods = 1;              // I, periods of the received signal
    int pn_length = 127;          // N, pseudonoise sequence length
    double input_snr = 100.0;     // per-antenna SNR, linear
    int antennas = 0;             // 0 -> use the scenario antenna count
    int array_side = 5;           // M_x
    double spacing_ratio = 0.5;   // element spacing d / lambda
    bool quartic_pattern = false; // field-pattern variant, see pattern_f()

    int effective_antennas(int scenario_antennas) const {
        return antennas > 0 ? antennas : scenario_antennas;
    }
};

/// All geometric, stochastic and power parameters of a simulation run.
/// Everything is SI internally (meters, seconds, Hz, radians, linear
/// power); the config file uses degrees for angles and dB where noted.
///
/// Stochastic defaults below that the experiments do not pin are
/// COST-book-style values, not measurement-verified; override them via the
/// config file for any quantitative study.
struct ScenarioConfig {
    // Cell and population
    double cell_half_side = 600.0;      // R; square cell [-R, R]^2
    double exclusion_fraction = 0.1;    // rho_th; keep-out disc R_th = rho_th * R
    int num_users = 120;                // K
    int num_antennas = 64;              // M
    int num_selected = 16;              // K_s
    double carrier_hz = 2e9;            // f_c
    double antenna_spacing = 0.0;       // d; 0 -> lambda/2
    double bs_height = 5.0;             // h_BS
    double ms_height = 1.5;             // h_MS

    // Clusters and visibility regions
    double expected_clusters = 3.0;     // N_C, expected visible clusters per user
    double vr_radius = 50.0;            // R_C
    double vr_transition = 20.0;        // L_C
    int mpcs_per_cluster = 6;           // N_p
    double twin_fraction = 0.5;         // share of non-local clusters that are twins
    double single_rmin = 20.0;          // r_min, single-cluster radial offset
    double single_sigma_r = 100.0;      // sigma_r, radial decay scale
    double single_angle_sigma_deg = 15.0; // sigma_phi_C
    double twin_link_delay_mean = 0.3e-6; // mean of the exponential link delay

    // Correlated large-scale parameters
    double delay_spread_median = 0.4e-6;    // mu_tau at 1 km
    double delay_spread_sigma_db = 3.0;     // sigma_tau
    double angular_spread_median_deg = 10.0; // mu_beta
    double angular_spread_sigma_db = 3.0;   // sigma_beta
    double shadow_sigma_db = 6.0;           // sigma_s
    double lsp_corr_shadow_angular = -0.5;
    double lsp_corr_shadow_delay = -0.5;
    double lsp_corr_angular_delay = 0.5;

    // Cluster power profile
    double delay_decay = 1e6;    // k_tau, 1/s
    double cutoff_delay = 10e-6; // tau_B, absolute cut-off delay

    // Spread angles seen at the array ends
    double bs_elevation_spread_deg = 3.0; // theta_BS
    double bs_azimuth_spread_deg = 6.0;   // phi_BS
    double ms_elevation_spread_deg = 3.0; // theta_MS

    // Link budget and scheduling
    double total_power = 2.0;     // P_t, W
    double noise_power = 2e-13;   // sigma^2_n, W
    double eps_h = 0.5;           // GUS pruning threshold
    double eps_g = 0.0;           // GWC threshold; 0 -> grid search
    std::vector<double> gwc_eps_grid = {0.2, 0.3, 0.4, 0.5, 0.7};
    double activity_fraction = 0.01; // eta, cluster power activity threshold

    // Model switches
    bool apply_shadowing = true;   // multiply sqrt(S_m) into MPC amplitudes
    bool eq4_literal_noise = false; // unit noise term instead of |w|^2 sigma^2

    std::uint64_t master_seed = 1;

    SounderConfig sounder;

    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    double spacing() const {
        return antenna_spacing > 0.0 ? antenna_spacing : wavelength() / 2.0;
    }
    double exclusion_radius() const { return exclusion_fraction * cell_half_side; }

    /// 3x3 cross-correlation of (shadow, angular, delay) LSP generators.
    Eigen::Matrix3d lsp_correlation() const;

    /// Lower-triangular factor of lsp_correlation(). Throws ConfigError if
    /// the matrix does not admit one.
    Eigen::Matrix3d lsp_cholesky() const;

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

/// Reads a flat JSON key-value config file. Missing keys keep their
/// defaults; unknown keys are rejected. Lengths in meters, delays in
/// seconds, angles in degrees, sounder SNR in dB.
ScenarioConfig load_config(const std::string& path);

/// Serializes a config to the same flat JSON schema (all keys present).
std::string config_to_json(const ScenarioConfig& cfg);

} // namespace gusim
