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
#include <vector>

#include "gusim/config.hpp"
#include "gusim/geometry.hpp"
#include "gusim/random.hpp"

namespace gusim {

struct User {
    int id = 0;
    Point3 pos; // z == ms_height
};

/// Circular ground region around `center`; a user standing inside it sees
/// the owning cluster, with a smooth transition of width `transition`
/// inside the outer edge.
struct VisibilityRegion {
    Point3 center;          // z == 0, ground point
    double radius = 0.0;    // R_C
    double transition = 0.0; // L_C, < radius
    int cluster_id = -1;
};

enum class ClusterKind { Local, Single, Twin };

/// Correlated large-scale parameters of one cluster.
struct Lsp {
    double delay_spread = 0.0;   // seconds
    double angular_spread = 0.0; // degrees
    double shadow_fading = 1.0;  // linear power gain
};

/// Ellipsoid half-axes of one cluster side, meters: (radial along the
/// BS bearing, transverse, vertical).
struct ClusterSpreads {
    double radial = 0.0;     // a_C
    double transverse = 0.0; // b_C
    double vertical = 0.0;   // h_C
};

struct Cluster {
    int id = -1;
    ClusterKind kind = ClusterKind::Single;
    Point3 bs_side_pos;          // scatter centre seen from the BS
    Point3 ms_side_pos;          // equals bs_side_pos unless twin
    ClusterSpreads bs_spreads;
    ClusterSpreads ms_spreads;   // equals bs_spreads unless twin
    Lsp lsp;
    double link_delay = 0.0;     // seconds, zero unless twin
    VisibilityRegion vr;
};

/// One realization of user positions, clusters and visibility regions.
/// Fading varies within a drop; the geometry here is fixed.
struct Drop {
    Point3 bs;
    std::vector<User> users;
    std::vector<Cluster> clusters;
};

/// Uniform users on the square [-R, R]^2 minus the keep-out disc around
/// the BS, by rejection sampling (per-user substreams). Throws ConfigError
/// if a user exceeds 10^6 attempts.
std::vector<User> place_users(const ScenarioConfig& cfg, RandomStream rng);

/// Draws the correlated (delay spread, angular spread, shadow fading)
/// triple for a cluster whose reference distance from the BS is d meters.
Lsp correlated_lsps(const ScenarioConfig& cfg, double distance_m, RandomStream& rng);

/// Spreads for one cluster. Local clusters are isotropic in the ground
/// plane (transverse == radial); twins get distinct vertical spreads per
/// side. Angles in radians, distances in meters.
struct SpreadPair {
    ClusterSpreads bs;
    ClusterSpreads ms;
};
SpreadPair cluster_spreads(ClusterKind kind, double d_c_bs, double d_c_ms,
                           double delay_spread_s, double theta_bs,
                           double phi_bs, double theta_ms);

/// Smooth visibility transition gain, in (0, 1), strictly decreasing in
/// the user-to-VR-centre distance.
double vr_gain(double d_ms_vr, double vr_radius, double vr_transition,
               double wavelength);

/// vr_gain with the hard visibility cut: 0 outside the VR disc.
double vr_gain_cutoff(double d_ms_vr, double vr_radius, double vr_transition,
                      double wavelength);

/// Area density of single/twin VR centres giving the expected number of
/// visible clusters per user.
double vr_density(const ScenarioConfig& cfg);

/// One local cluster per user and one at the BS, plus a spatial Poisson
/// field of single/twin clusters with their visibility regions.
std::vector<Cluster> place_clusters(const ScenarioConfig& cfg,
                                    const std::vector<User>& users,
                                    RandomStream rng);

/// Full drop from a seed; deterministic and order-independent.
Drop generate_drop(const ScenarioConfig& cfg, std::uint64_t drop_seed);

} // namespace gusim
