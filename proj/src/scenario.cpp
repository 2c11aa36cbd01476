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

#include "gusim/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "gusim/errors.hpp"

namespace gusim {

namespace {

constexpr std::uint64_t kAttemptCap = 1000000;

void check_cluster(const Cluster& c) {
    const bool ok = c.bs_spreads.radial > 0.0 && c.bs_spreads.transverse > 0.0 &&
                    c.bs_spreads.vertical > 0.0 && c.ms_spreads.radial > 0.0 &&
                    c.ms_spreads.transverse > 0.0 && c.ms_spreads.vertical > 0.0 &&
                    c.link_delay >= 0.0 &&
                    (c.kind != ClusterKind::Local ||
                     c.bs_spreads.transverse == c.bs_spreads.radial) &&
                    c.vr.radius > c.vr.transition && c.vr.transition > 0.0 &&
                    std::isfinite(c.bs_side_pos.x) && std::isfinite(c.ms_side_pos.x);
    if (!ok) throw std::logic_error("cluster invariant violated on construction");
}

} // namespace

std::vector<User> place_users(const ScenarioConfig& cfg, RandomStream rng) {
    const double r = cfg.cell_half_side;
    const double r_th = cfg.exclusion_radius();
    std::vector<User> users;
    users.reserve(static_cast<std::size_t>(cfg.num_users));
    for (int i = 0; i < cfg.num_users; ++i) {
        RandomStream sub = rng.substream(static_cast<std::uint64_t>(i));
        Point3 pos;
        std::uint64_t attempts = 0;
        do {
            if (++attempts > kAttemptCap) {
                throw ConfigError("place_users: rejection sampling exceeded attempt cap; "
                                  "exclusion disc covers the cell?");
            }
            pos = {sub.uniform(-r, r), sub.uniform(-r, r), cfg.ms_height};
        } while (std::hypot(pos.x, pos.y) < r_th);
        users.push_back(User{i, pos});
    }
    return users;
}

Lsp correlated_lsps(const ScenarioConfig& cfg, double distance_m, RandomStream& rng) {
    if (distance_m <= 0.0) throw std::invalid_argument("correlated_lsps: distance <= 0");
    const Eigen::Matrix3d l = cfg.lsp_cholesky();
    const Eigen::Vector3d g(rng.gaussian(), rng.gaussian(), rng.gaussian());
    const Eigen::Vector3d z = l * g; // (shadow, angular, delay) generators
    Lsp out;
    out.delay_spread = cfg.delay_spread_median * std::sqrt(distance_m / 1000.0) *
                       std::pow(10.0, cfg.delay_spread_sigma_db * z(2) / 10.0);
    out.angular_spread = cfg.angular_spread_median_deg *
                         std::pow(10.0, cfg.angular_spread_sigma_db * z(1) / 10.0);
    out.shadow_fading = std::pow(10.0, cfg.shadow_sigma_db * z(0) / 10.0);
    return out;
}

SpreadPair cluster_spreads(ClusterKind kind, double d_c_bs, double d_c_ms,
                           double delay_spread_s, double theta_bs,
                           double phi_bs, double theta_ms) {
    if (d_c_bs <= 0.0) throw std::invalid_argument("cluster_spreads: d_c_bs <= 0");
    auto check_angle = [](double a) {
        if (!(a > 0.0 && a < kPi / 2.0)) {
            throw std::invalid_argument("cluster_spreads: spread angle outside (0, pi/2)");
        }
    };
    check_angle(theta_bs);
    const double a_c = delay_spread_s * kSpeedOfLight / 2.0;

    SpreadPair out;
    switch (kind) {
    case ClusterKind::Local:
        out.bs = {a_c, a_c, d_c_bs * std::tan(theta_bs)};
        out.ms = out.bs;
        break;
    case ClusterKind::Single:
        check_angle(phi_bs);
        out.bs = {a_c, d_c_bs * std::tan(phi_bs), d_c_bs * std::tan(theta_bs)};
        out.ms = out.bs;
        break;
    case ClusterKind::Twin:
        check_angle(phi_bs);
        check_angle(theta_ms);
        if (d_c_ms <= 0.0) throw std::invalid_argument("cluster_spreads: d_c_ms <= 0");
        out.bs = {a_c, d_c_bs * std::tan(phi_bs), d_c_bs * std::tan(theta_bs)};
        out.ms = {a_c, d_c_bs * std::tan(phi_bs), d_c_ms * std::tan(theta_ms)};
        break;
    }
    return out;
}

double vr_gain(double d_ms_vr, double vr_radius, double vr_transition,
               double wavelength) {
    const double arg = 2.0 * std::sqrt(2.0) * (vr_transition + d_ms_vr - vr_radius) /
                       std::sqrt(wavelength * vr_transition);
    return 0.5 - std::atan(arg) / kPi;
}

double vr_gain_cutoff(double d_ms_vr, double vr_radius, double vr_transition,
                      double wavelength) {
    if (d_ms_vr > vr_radius) return 0.0;
    return vr_gain(d_ms_vr, vr_radius, vr_transition, wavelength);
}

double vr_density(const ScenarioConfig& cfg) {
    const double reach = cfg.vr_radius - cfg.vr_transition;
    return (cfg.expected_clusters - 1.0) / (kPi * reach * reach);
}

namespace {

// Cluster centres sit midway between the terminal heights; the vertical
// spread places MPCs around that.
double cluster_height(const ScenarioConfig& cfg) {
    return 0.5 * (cfg.bs_height + cfg.ms_height);
}

Cluster make_local_cluster(const ScenarioConfig& cfg, int id, const Point3& centre,
                           const Point3& vr_centre, double d_bs,
                           RandomStream rng) {
    Cluster c;
    c.id = id;
    c.kind = ClusterKind::Local;
    c.lsp = correlated_lsps(cfg, d_bs, rng);
    c.bs_side_pos = centre;
    c.ms_side_pos = centre;
    auto spreads = cluster_spreads(ClusterKind::Local, d_bs, 0.0, c.lsp.delay_spread,
                                   deg_to_rad(cfg.bs_elevation_spread_deg), 0.0, 0.0);
    c.bs_spreads = spreads.bs;
    c.ms_spreads = spreads.ms;
    c.vr = {vr_centre, cfg.vr_radius, cfg.vr_transition, id};
    check_cluster(c);
    return c;
}

} // namespace

std::vector<Cluster> place_clusters(const ScenarioConfig& cfg,
                                    const std::vector<User>& users,
                                    RandomStream rng) {
    std::vector<Cluster> clusters;
    const Point3 bs{0.0, 0.0, cfg.bs_height};
    const double z_c = cluster_height(cfg);

    // Local cluster around every user: the VR is centred on the user, so
    // the owner always sees it.
    for (const auto& u : users) {
        const double d = std::max(distance(bs, u.pos), 1.0);
        clusters.push_back(make_local_cluster(
            cfg, u.id, Point3{u.pos.x, u.pos.y, u.pos.z},
            Point3{u.pos.x, u.pos.y, 0.0}, d,
            rng.substream(0x100, static_cast<std::uint64_t>(u.id))));
    }

    // Local cluster around the BS. Its reference distance is the keep-out
    // radius: the closest any user can stand.
    const int bs_cluster_id = static_cast<int>(users.size());
    clusters.push_back(make_local_cluster(cfg, bs_cluster_id,
                                          Point3{0.0, 0.0, cfg.bs_height},
                                          Point3{0.0, 0.0, 0.0},
                                          std::max(cfg.exclusion_radius(), 1.0),
                                          rng.substream(0x200)));

    // Single and twin clusters: VR centres form a spatial Poisson field
    // over the cell.
    const double r = cfg.cell_half_side;
    const double area = 4.0 * r * r;
    RandomStream count_rng = rng.substream(0x300);
    const std::uint64_t n_field = count_rng.poisson(vr_density(cfg) * area);

    for (std::uint64_t k = 0; k < n_field; ++k) {
        RandomStream sub = rng.substream(0x400, k);
        Cluster c;
        c.id = bs_cluster_id + 1 + static_cast<int>(k);
        const Point3 vr_centre{sub.uniform(-r, r), sub.uniform(-r, r), 0.0};
        c.vr = {vr_centre, cfg.vr_radius, cfg.vr_transition, c.id};
        c.kind = sub.uniform() < cfg.twin_fraction ? ClusterKind::Twin
                                                   : ClusterKind::Single;

        const double d_vr = std::max(horizontal_distance(vr_centre, bs), 1.0);
        c.lsp = correlated_lsps(cfg, d_vr, sub);

        // Radial placement from the BS, bearing jittered around the VR
        // centre direction.
        const double radius = cfg.single_rmin + sub.exponential(cfg.single_sigma_r);
        const double bearing = std::atan2(vr_centre.y, vr_centre.x) +
                               deg_to_rad(cfg.single_angle_sigma_deg) * sub.gaussian();
        c.bs_side_pos = {radius * std::cos(bearing), radius * std::sin(bearing), z_c};

        const double theta_bs = deg_to_rad(cfg.bs_elevation_spread_deg);
        const double phi_bs = deg_to_rad(cfg.bs_azimuth_spread_deg);
        const double theta_ms = deg_to_rad(cfg.ms_elevation_spread_deg);

        if (c.kind == ClusterKind::Twin) {
            // MS side placed on the BS-to-VR-centre line at the distance
            // given by the tangent relation between the two sides.
            const double d_c_bs = radius;
            const double d_c_ms = d_c_bs * std::tan(theta_bs) / std::tan(theta_ms);
            const double vr_dist = horizontal_distance(vr_centre, bs);
            Point3 towards_bs{0.0, 0.0, 0.0};
            if (vr_dist > 1e-12) {
                towards_bs = {-vr_centre.x / vr_dist, -vr_centre.y / vr_dist, 0.0};
            }
            c.ms_side_pos = {vr_centre.x + d_c_ms * towards_bs.x,
                             vr_centre.y + d_c_ms * towards_bs.y, z_c};
            c.link_delay = sub.exponential(cfg.twin_link_delay_mean);
            auto spreads = cluster_spreads(ClusterKind::Twin, d_c_bs, d_c_ms,
                                           c.lsp.delay_spread, theta_bs, phi_bs,
                                           theta_ms);
            c.bs_spreads = spreads.bs;
            c.ms_spreads = spreads.ms;
        } else {
            c.ms_side_pos = c.bs_side_pos;
            auto spreads = cluster_spreads(ClusterKind::Single, radius, 0.0,
                                           c.lsp.delay_spread, theta_bs, phi_bs,
                                           theta_ms);
            c.bs_spreads = spreads.bs;
            c.ms_spreads = spreads.ms;
        }
        check_cluster(c);
        clusters.push_back(std::move(c));
    }
    return clusters;
}

Drop generate_drop(const ScenarioConfig& cfg, std::uint64_t drop_seed) {
    RandomStream root(drop_seed);
    Drop drop;
    drop.bs = {0.0, 0.0, cfg.bs_height};
    drop.users = place_users(cfg, root.substream(stream_tag::kUsers));
    drop.clusters = place_clusters(cfg, drop.users, root.substream(stream_tag::kClusters));
    return drop;
}

} // namespace gusim
