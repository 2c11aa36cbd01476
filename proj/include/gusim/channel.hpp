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

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gusim/config.hpp"
#include "gusim/random.hpp"
#include "gusim/scenario.hpp"

namespace gusim {

/// Complex uplink channel, antennas x users; column k belongs to user k of
/// the evaluated subset. A column is identically zero iff that user sees
/// no active cluster.
using ChannelMatrix = Eigen::MatrixXcd;

/// Scatter points of one multipath component. Both sides coincide except
/// for twin clusters, whose MPCs are offset pairwise (same standardized
/// offset applied in each side's local frame).
struct MpcGeometry {
    Point3 bs_side;
    Point3 ms_side;
};

/// One multipath component as realized for a specific user: complex gain,
/// total delay and the arrival direction at the BS array. Azimuth is
/// measured from array broadside (array along x, broadside +y); elevation
/// is relative to the BS horizontal plane. Only sin(azimuth) enters the
/// steering, so front-back mirrored paths coincide, as they do for a
/// uniform linear array.
struct Mpc {
    Point3 bs_side;
    Point3 ms_side;
    std::complex<double> amplitude;
    double delay = 0.0;
    double azimuth = 0.0;
    double elevation = 0.0;
};

/// Unit-mean exponential MPC powers per cluster, shared by every user that
/// sees the cluster; indexed [cluster][mpc].
using FadingRealization = std::vector<std::vector<double>>;

/// MPC scatter positions for one cluster: per-axis truncated Gaussian
/// offsets around each side's centre, sigma = spread/2, truncated at
/// 2 sigma. Offsets are drawn in the cluster's local frame (radial along
/// the BS bearing, transverse, vertical) and z is clamped to ground level.
std::vector<MpcGeometry> draw_mpcs(const Cluster& cluster, int n_mpcs,
                                   RandomStream rng);

/// Geometry for every cluster of a drop, one substream per cluster.
std::vector<std::vector<MpcGeometry>> draw_all_mpcs(const ScenarioConfig& cfg,
                                                    const Drop& drop,
                                                    std::uint64_t drop_seed);

/// Total propagation delay of a cluster for one user: both legs, plus the
/// inter-side distance and link delay for twins.
double cluster_delay(const Cluster& cluster, const Point3& user_pos,
                     const Point3& bs_pos);

/// Exponential cluster power decay over excess delay, floored at the
/// cut-off delay.
double cluster_attenuation(double tau_c, double k_tau, double tau_0, double tau_b);

/// NLoS micro-cell path loss in dB at distance d.
double path_loss_db(double d, double wavelength);

/// Linear power gain 10^(-L/10).
double path_loss_linear(double d, double wavelength);

FadingRealization draw_fading(std::size_t n_clusters, int n_mpcs, RandomStream rng);

/// Realizes the MPCs of one (user, cluster) pair: amplitudes carry path
/// loss, VR gain, cluster attenuation, optional shadow fading and the
/// unit-mean-normalized MPC power; the phase comes from the carrier times
/// the MPC delay.
std::vector<Mpc> synthesize_mpcs(const ScenarioConfig& cfg, const Point3& bs_pos,
                                 const User& user, const Cluster& cluster,
                                 std::span<const MpcGeometry> geometry,
                                 std::span<const double> mpc_powers);

/// Assembles the channel columns of `user_ids` on a uniform linear array:
/// entry (m, k) sums a_ij * exp(j * alpha * m * sin(azimuth_ij)) over the
/// user's active clusters, alpha = -2 pi spacing / lambda.
ChannelMatrix assemble_channel(const ScenarioConfig& cfg, const Drop& drop,
                               std::span<const int> user_ids,
                               const std::vector<std::vector<MpcGeometry>>& mpcs,
                               const std::vector<std::vector<int>>& active_sets,
                               const FadingRealization& fading);

} // namespace gusim
