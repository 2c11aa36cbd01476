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

#include "gusim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "gusim/errors.hpp"

namespace gusim {

using nlohmann::json;

Eigen::Matrix3d ScenarioConfig::lsp_correlation() const {
    Eigen::Matrix3d m;
    // Order: (shadow, angular spread, delay spread).
    m << 1.0, lsp_corr_shadow_angular, lsp_corr_shadow_delay,
        lsp_corr_shadow_angular, 1.0, lsp_corr_angular_delay,
        lsp_corr_shadow_delay, lsp_corr_angular_delay, 1.0;
    return m;
}

Eigen::Matrix3d ScenarioConfig::lsp_cholesky() const {
    Eigen::LLT<Eigen::Matrix3d> llt(lsp_correlation());
    if (llt.info() != Eigen::Success) {
        throw ConfigError("LSP cross-correlation matrix is not positive definite");
    }
    return llt.matrixL();
}

void ScenarioConfig::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(cell_half_side > 0.0, "cell_half_side_m must be > 0");
    require(exclusion_fraction >= 0.0 && exclusion_fraction < 1.0,
            "exclusion_radius_fraction must be in [0, 1)");
    require(num_users >= 0, "num_users must be >= 0");
    require(num_antennas > 0, "num_antennas must be > 0");
    require(num_selected > 0, "num_selected must be > 0");
    require(num_selected <= num_antennas && num_selected <= std::max(num_users, 1),
            "num_selected must be <= min(num_antennas, num_users)");
    require(carrier_hz > 0.0, "carrier_frequency_hz must be > 0");
    require(antenna_spacing >= 0.0, "antenna_spacing_m must be >= 0");
    require(bs_height > 0.0 && ms_height > 0.0, "heights must be > 0");
    require(expected_clusters >= 1.0, "expected_visible_clusters must be >= 1");
    require(vr_radius > vr_transition && vr_transition > 0.0,
            "vr_radius_m must exceed vr_transition_m > 0");
    require(mpcs_per_cluster > 0, "mpcs_per_cluster must be > 0");
    require(twin_fraction >= 0.0 && twin_fraction <= 1.0,
            "twin_fraction must be in [0, 1]");
    require(single_rmin > 0.0 && single_sigma_r > 0.0,
            "single-cluster radial parameters must be > 0");
    require(single_angle_sigma_deg > 0.0, "single_cluster_angle_sigma_deg must be > 0");
    require(twin_link_delay_mean >= 0.0, "twin_link_delay_mean_s must be >= 0");
    require(delay_spread_median > 0.0, "delay_spread_median_s must be > 0");
    require(delay_spread_sigma_db >= 0.0 && angular_spread_sigma_db >= 0.0 &&
                shadow_sigma_db >= 0.0,
            "LSP sigmas must be >= 0");
    require(angular_spread_median_deg > 0.0, "angular_spread_median_deg must be > 0");
    require(delay_decay > 0.0, "delay_decay_per_s must be > 0");
    require(cutoff_delay > 0.0, "cutoff_delay_s must be > 0");
    require(bs_elevation_spread_deg > 0.0 && bs_elevation_spread_deg < 90.0 &&
                bs_azimuth_spread_deg > 0.0 && bs_azimuth_spread_deg < 90.0 &&
                ms_elevation_spread_deg > 0.0 && ms_elevation_spread_deg < 90.0,
            "spread angles must be in (0, 90) degrees");
    require(total_power > 0.0, "total_power_w must be > 0");
    require(noise_power > 0.0, "noise_power_w must be > 0");
    require(eps_h > 0.0 && eps_h <= 1.0, "gus_epsilon must be in (0, 1]");
    require(eps_g >= 0.0 && eps_g <= 1.0, "gwc_epsilon must be in [0, 1]");
    require(eps_g > 0.0 || !gwc_eps_grid.empty(),
            "gwc_epsilon_grid must be nonempty when gwc_epsilon is 0");
    for (double e : gwc_eps_grid) {
        require(e > 0.0 && e <= 1.0, "gwc_epsilon_grid entries must be in (0, 1]");
    }
    require(activity_fraction > 0.0 && activity_fraction < 1.0,
            "cluster_activity_fraction must be in (0, 1)");
    require(sounder.bandwidth_hz > 0.0, "sounder_bandwidth_hz must be > 0");
    require(sounder.periods > 0, "sounder_periods must be > 0");
    require(sounder.pn_length > 0, "sounder_pn_length must be > 0");
    require(sounder.input_snr > 0.0, "sounder_input_snr_db out of range");
    require(sounder.antennas >= 0, "sounder_antennas must be >= 0");
    require(sounder.array_side >= 2, "sounder_array_side must be >= 2");
    require(sounder.spacing_ratio > 0.0, "sounder_spacing_ratio must be > 0");
    lsp_cholesky(); // throws if the correlation matrix is not factorizable
}

namespace {

struct KeyReader {
    const json& j;
    std::set<std::string> seen;

    template <typename T>
    void get(const char* key, T& out) {
        if (auto it = j.find(key); it != j.end()) {
            out = it->get<T>();
        }
        seen.insert(key);
    }
};

} // namespace

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    ScenarioConfig cfg;
    KeyReader r{j, {}};
    try {
        r.get("cell_half_side_m", cfg.cell_half_side);
        r.get("exclusion_radius_fraction", cfg.exclusion_fraction);
        r.get("num_users", cfg.num_users);
        r.get("num_antennas", cfg.num_antennas);
        r.get("num_selected", cfg.num_selected);
        r.get("carrier_frequency_hz", cfg.carrier_hz);
        r.get("antenna_spacing_m", cfg.antenna_spacing);
        r.get("bs_height_m", cfg.bs_height);
        r.get("ms_height_m", cfg.ms_height);
        r.get("expected_visible_clusters", cfg.expected_clusters);
        r.get("vr_radius_m", cfg.vr_radius);
        r.get("vr_transition_m", cfg.vr_transition);
        r.get("mpcs_per_cluster", cfg.mpcs_per_cluster);
        r.get("twin_fraction", cfg.twin_fraction);
        r.get("single_cluster_min_radius_m", cfg.single_rmin);
        r.get("single_cluster_radius_scale_m", cfg.single_sigma_r);
        r.get("single_cluster_angle_sigma_deg", cfg.single_angle_sigma_deg);
        r.get("twin_link_delay_mean_s", cfg.twin_link_delay_mean);
        r.get("delay_spread_median_s", cfg.delay_spread_median);
        r.get("delay_spread_sigma_db", cfg.delay_spread_sigma_db);
        r.get("angular_spread_median_deg", cfg.angular_spread_median_deg);
        r.get("angular_spread_sigma_db", cfg.angular_spread_sigma_db);
        r.get("shadow_fading_sigma_db", cfg.shadow_sigma_db);
        r.get("lsp_corr_shadow_angular", cfg.lsp_corr_shadow_angular);
        r.get("lsp_corr_shadow_delay", cfg.lsp_corr_shadow_delay);
        r.get("lsp_corr_angular_delay", cfg.lsp_corr_angular_delay);
        r.get("delay_decay_per_s", cfg.delay_decay);
        r.get("cutoff_delay_s", cfg.cutoff_delay);
        r.get("bs_elevation_spread_deg", cfg.bs_elevation_spread_deg);
        r.get("bs_azimuth_spread_deg", cfg.bs_azimuth_spread_deg);
        r.get("ms_elevation_spread_deg", cfg.ms_elevation_spread_deg);
        r.get("total_power_w", cfg.total_power);
        r.get("noise_power_w", cfg.noise_power);
        r.get("gus_epsilon", cfg.eps_h);
        r.get("gwc_epsilon", cfg.eps_g);
        r.get("gwc_epsilon_grid", cfg.gwc_eps_grid);
        r.get("cluster_activity_fraction", cfg.activity_fraction);
        r.get("apply_shadow_fading", cfg.apply_shadowing);
        r.get("eq4_literal_noise", cfg.eq4_literal_noise);
        r.get("master_seed", cfg.master_seed);
        r.get("sounder_bandwidth_hz", cfg.sounder.bandwidth_hz);
        r.get("sounder_periods", cfg.sounder.periods);
        r.get("sounder_pn_length", cfg.sounder.pn_length);
        double snr_db = 10.0 * std::log10(cfg.sounder.input_snr);
        r.get("sounder_input_snr_db", snr_db);
        cfg.sounder.input_snr = std::pow(10.0, snr_db / 10.0);
        r.get("sounder_antennas", cfg.sounder.antennas);
        r.get("sounder_array_side", cfg.sounder.array_side);
        r.get("sounder_spacing_ratio", cfg.sounder.spacing_ratio);
        r.get("sounder_quartic_pattern", cfg.sounder.quartic_pattern);
    } catch (const json::exception& e) {
        throw ConfigError("config type error in " + path + ": " + e.what());
    }

    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!key.empty() && key.front() == '_') continue; // comment keys
        if (!r.seen.count(key)) {
            throw ConfigError("unknown config key: " + key);
        }
    }

    cfg.validate();
    return cfg;
}

std::string config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["cell_half_side_m"] = cfg.cell_half_side;
    j["exclusion_radius_fraction"] = cfg.exclusion_fraction;
    j["num_users"] = cfg.num_users;
    j["num_antennas"] = cfg.num_antennas;
    j["num_selected"] = cfg.num_selected;
    j["carrier_frequency_hz"] = cfg.carrier_hz;
    j["antenna_spacing_m"] = cfg.antenna_spacing;
    j["bs_height_m"] = cfg.bs_height;
    j["ms_height_m"] = cfg.ms_height;
    j["expected_visible_clusters"] = cfg.expected_clusters;
    j["vr_radius_m"] = cfg.vr_radius;
    j["vr_transition_m"] = cfg.vr_transition;
    j["mpcs_per_cluster"] = cfg.mpcs_per_cluster;
    j["twin_fraction"] = cfg.twin_fraction;
    j["single_cluster_min_radius_m"] = cfg.single_rmin;
    j["single_cluster_radius_scale_m"] = cfg.single_sigma_r;
    j["single_cluster_angle_sigma_deg"] = cfg.single_angle_sigma_deg;
    j["twin_link_delay_mean_s"] = cfg.twin_link_delay_mean;
    j["delay_spread_median_s"] = cfg.delay_spread_median;
    j["delay_spread_sigma_db"] = cfg.delay_spread_sigma_db;
    j["angular_spread_median_deg"] = cfg.angular_spread_median_deg;
    j["angular_spread_sigma_db"] = cfg.angular_spread_sigma_db;
    j["shadow_fading_sigma_db"] = cfg.shadow_sigma_db;
    j["lsp_corr_shadow_angular"] = cfg.lsp_corr_shadow_angular;
    j["lsp_corr_shadow_delay"] = cfg.lsp_corr_shadow_delay;
    j["lsp_corr_angular_delay"] = cfg.lsp_corr_angular_delay;
    j["delay_decay_per_s"] = cfg.delay_decay;
    j["cutoff_delay_s"] = cfg.cutoff_delay;
    j["bs_elevation_spread_deg"] = cfg.bs_elevation_spread_deg;
    j["bs_azimuth_spread_deg"] = cfg.bs_azimuth_spread_deg;
    j["ms_elevation_spread_deg"] = cfg.ms_elevation_spread_deg;
    j["total_power_w"] = cfg.total_power;
    j["noise_power_w"] = cfg.noise_power;
    j["gus_epsilon"] = cfg.eps_h;
    j["gwc_epsilon"] = cfg.eps_g;
    j["gwc_epsilon_grid"] = cfg.gwc_eps_grid;
    j["cluster_activity_fraction"] = cfg.activity_fraction;
    j["apply_shadow_fading"] = cfg.apply_shadowing;
    j["eq4_literal_noise"] = cfg.eq4_literal_noise;
    j["master_seed"] = cfg.master_seed;
    j["sounder_bandwidth_hz"] = cfg.sounder.bandwidth_hz;
    j["sounder_periods"] = cfg.sounder.periods;
    j["sounder_pn_length"] = cfg.sounder.pn_length;
    j["sounder_input_snr_db"] = 10.0 * std::log10(cfg.sounder.input_snr);
    j["sounder_antennas"] = cfg.sounder.antennas;
    j["sounder_array_side"] = cfg.sounder.array_side;
    j["sounder_spacing_ratio"] = cfg.sounder.spacing_ratio;
    j["sounder_quartic_pattern"] = cfg.sounder.quartic_pattern;
    return j.dump(2) + "\n";
}

} // namespace gusim
