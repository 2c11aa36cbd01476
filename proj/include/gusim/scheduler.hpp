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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gusim/channel.hpp"
#include "gusim/config.hpp"
#include "gusim/random.hpp"
#include "gusim/scenario.hpp"

namespace gusim {

/// Nonnegative geometry-derived gains, users x clusters. Row k is what the
/// BS can compute for user k from the area map alone: path loss, VR gain
/// and cluster attenuation, no fading. Entries are zero for clusters whose
/// VR does not cover the user.
struct VisibilityMatrix {
    Eigen::MatrixXd v;

    Eigen::Index users() const { return v.rows(); }
    Eigen::Index clusters() const { return v.cols(); }
};

enum class SchedulerKind { GusThreshold, GusMinCorr, Gwc, RandomSel };

std::string to_string(SchedulerKind kind);
SchedulerKind scheduler_from_string(const std::string& name);

/// Ordered selection with one diagnostic per pick (chosen row norm for
/// norm-driven picks, chosen correlation for correlation-driven ones).
/// `selected` is shorter than the requested count only when the candidate
/// pool emptied.
struct ScheduleResult {
    SchedulerKind method = SchedulerKind::GusThreshold;
    std::vector<int> selected;
    std::vector<double> diagnostics;
};

VisibilityMatrix build_v_matrix(const ScenarioConfig& cfg, const Drop& drop);

/// Clusters whose power share of the row exceeds the activity fraction;
/// this is the active set C(k) used by channel assembly and the
/// common-cluster analysis. An all-zero row yields an empty set.
std::vector<int> active_clusters(const Eigen::VectorXd& row, double eta);

std::vector<std::vector<int>> all_active_sets(const VisibilityMatrix& v, double eta);

/// Greedy max-norm selection with pool pruning: after each pick, every
/// candidate whose normalized row correlation with the pick is >= eps_h
/// leaves the pool. Ties break toward the lowest user id.
ScheduleResult gus_threshold(const VisibilityMatrix& v, int num_selected,
                             double eps_h);

/// Greedy variant without pruning: first pick by max norm, every following
/// pick minimizes the normalized correlation with the latest pick.
ScheduleResult gus_mincorr(const VisibilityMatrix& v, int num_selected);

/// Full-CSI semi-orthogonal baseline: repeatedly picks the strongest
/// column among candidates whose normalized projection onto the span of
/// the picks stays below eps_g.
ScheduleResult gwc(const ChannelMatrix& h_full, int num_selected, double eps_g);

/// gwc() with eps_g searched over a grid, keeping the threshold that
/// maximizes the realized zero-forcing sum-rate (singular selections are
/// skipped).
ScheduleResult gwc_grid(const ChannelMatrix& h_full, int num_selected,
                        std::span<const double> grid, double total_power,
                        double noise_power, bool eq4_literal);

/// Uniform subset without replacement. Throws if num_selected > num_users.
ScheduleResult random_selection(int num_users, int num_selected, RandomStream rng);

/// Channel coefficients the BS must estimate per scheduling interval.
std::uint64_t estimation_load(SchedulerKind kind, int num_antennas, int num_users,
                              int num_selected);

/// |C(m) intersect C(n)| for two active sets (each sorted ascending).
int common_cluster_count(std::span<const int> a, std::span<const int> b);

/// Mean pairwise common-cluster count over a selected set.
double mean_pairwise_common(const std::vector<std::vector<int>>& active_sets,
                            std::span<const int> selected);

} // namespace gusim
