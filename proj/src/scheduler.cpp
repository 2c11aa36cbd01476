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

#include "gusim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gusim/receiver.hpp"

namespace gusim {

std::string to_string(SchedulerKind kind) {
    switch (kind) {
    case SchedulerKind::GusThreshold: return "gus-threshold";
    case SchedulerKind::GusMinCorr: return "gus-mincorr";
    case SchedulerKind::Gwc: return "gwc";
    case SchedulerKind::RandomSel: return "rs";
    }
    return "unknown";
}

SchedulerKind scheduler_from_string(const std::string& name) {
    if (name == "gus-threshold") return SchedulerKind::GusThreshold;
    if (name == "gus-mincorr") return SchedulerKind::GusMinCorr;
    if (name == "gwc") return SchedulerKind::Gwc;
    if (name == "rs") return SchedulerKind::RandomSel;
    throw std::invalid_argument("unknown scheduler: " + name);
}

VisibilityMatrix build_v_matrix(const ScenarioConfig& cfg, const Drop& drop) {
    const double wavelength = cfg.wavelength();
    VisibilityMatrix out;
    out.v.resize(static_cast<Eigen::Index>(drop.users.size()),
                 static_cast<Eigen::Index>(drop.clusters.size()));
    for (const auto& user : drop.users) {
        const double d_bs = distance(drop.bs, user.pos);
        const double lp = path_loss_linear(d_bs, wavelength);
        const double amp = std::sqrt(lp);
        const double tau_0 = d_bs / kSpeedOfLight;
        for (const auto& cluster : drop.clusters) {
            const double d_vr =
                horizontal_distance(user.pos, cluster.vr.center);
            const double a_vr = vr_gain_cutoff(d_vr, cluster.vr.radius,
                                               cluster.vr.transition, wavelength);
            double value = 0.0;
            if (a_vr > 0.0) {
                const double tau_c = cluster_delay(cluster, user.pos, drop.bs);
                const double a_c = cluster_attenuation(tau_c, cfg.delay_decay,
                                                       tau_0, cfg.cutoff_delay);
                value = amp * a_vr * std::sqrt(a_c);
            }
            out.v(user.id, cluster.id) = value;
        }
    }
    return out;
}

std::vector<int> active_clusters(const Eigen::VectorXd& row, double eta) {
    const double total = row.squaredNorm();
    std::vector<int> active;
    if (total <= 0.0) return active;
    const double threshold = eta * total;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
        const double p = row(j) * row(j);
        if (p >= threshold) active.push_back(static_cast<int>(j));
    }
    return active;
}

std::vector<std::vector<int>> all_active_sets(const VisibilityMatrix& v, double eta) {
    std::vector<std::vector<int>> sets;
    sets.reserve(static_cast<std::size_t>(v.users()));
    for (Eigen::Index k = 0; k < v.users(); ++k) {
        sets.push_back(active_clusters(v.v.row(k).transpose(), eta));
    }
    return sets;
}

namespace {

// Lowest-id argmax over a candidate pool.
int argmax_norm(const Eigen::VectorXd& norms, const std::vector<int>& pool) {
    int best = -1;
    double best_norm = -1.0;
    for (int k : pool) {
        if (norms(k) > best_norm) {
            best_norm = norms(k);
            best = k;
        }
    }
    return best;
}

} // namespace

ScheduleResult gus_threshold(const VisibilityMatrix& v, int num_selected,
                             double eps_h) {
    if (num_selected < 1) throw std::invalid_argument("gus_threshold: num_selected < 1");
    if (!(eps_h > 0.0 && eps_h <= 1.0)) {
        throw std::invalid_argument("gus_threshold: eps_h outside (0, 1]");
    }
    ScheduleResult result;
    result.method = SchedulerKind::GusThreshold;

    Eigen::VectorXd norms = v.v.rowwise().norm();
    std::vector<int> pool;
    for (Eigen::Index k = 0; k < v.users(); ++k) {
        if (norms(k) > 0.0) pool.push_back(static_cast<int>(k));
    }

    while (static_cast<int>(result.selected.size()) < num_selected && !pool.empty()) {
        const int pick = argmax_norm(norms, pool);
        result.selected.push_back(pick);
        result.diagnostics.push_back(norms(pick));

        const Eigen::VectorXd pick_row = v.v.row(pick).transpose();
        const double pick_norm = norms(pick);
        std::vector<int> survivors;
        survivors.reserve(pool.size());
        for (int k : pool) {
            if (k == pick) continue;
            const double corr =
                std::abs(v.v.row(k).dot(pick_row)) / (norms(k) * pick_norm);
            if (corr < eps_h) survivors.push_back(k);
        }
        pool = std::move(survivors);
    }
    return result;
}

ScheduleResult gus_mincorr(const VisibilityMatrix& v, int num_selected) {
    if (num_selected < 1) throw std::invalid_argument("gus_mincorr: num_selected < 1");
    ScheduleResult result;
    result.method = SchedulerKind::GusMinCorr;

    Eigen::VectorXd norms = v.v.rowwise().norm();
    std::vector<int> pool;
    for (Eigen::Index k = 0; k < v.users(); ++k) {
        if (norms(k) > 0.0) pool.push_back(static_cast<int>(k));
    }
    if (pool.empty()) return result;

    int latest = argmax_norm(norms, pool);
    result.selected.push_back(latest);
    result.diagnostics.push_back(norms(latest));
    pool.erase(std::find(pool.begin(), pool.end(), latest));

    while (static_cast<int>(result.selected.size()) < num_selected && !pool.empty()) {
        const Eigen::VectorXd latest_row = v.v.row(latest).transpose();
        const double latest_norm = norms(latest);
        int best = -1;
        double best_corr = std::numeric_limits<double>::infinity();
        for (int k : pool) {
            const double corr = std::abs(v.v.row(k).dot(latest_row)) /
                                (norms(k) * latest_norm);
            if (corr < best_corr) {
                best_corr = corr;
                best = k;
            }
        }
        latest = best;
        result.selected.push_back(best);
        result.diagnostics.push_back(best_corr);
        pool.erase(std::find(pool.begin(), pool.end(), best));
    }
    return result;
}

ScheduleResult gwc(const ChannelMatrix& h_full, int num_selected, double eps_g) {
    if (num_selected < 1) throw std::invalid_argument("gwc: num_selected < 1");
    if (!(eps_g > 0.0 && eps_g <= 1.0)) {
        throw std::invalid_argument("gwc: eps_g outside (0, 1]");
    }
    ScheduleResult result;
    result.method = SchedulerKind::Gwc;

    const Eigen::VectorXd norms = h_full.colwise().norm();
    std::vector<int> pool;
    for (Eigen::Index k = 0; k < h_full.cols(); ++k) {
        if (norms(k) > 0.0) pool.push_back(static_cast<int>(k));
    }

    // Orthonormal basis of the picked span, grown one column per pick.
    Eigen::MatrixXcd basis(h_full.rows(), num_selected);
    int rank = 0;

    while (static_cast<int>(result.selected.size()) < num_selected && !pool.empty()) {
        const int pick = argmax_norm(norms, pool);
        result.selected.push_back(pick);
        result.diagnostics.push_back(norms(pick));

        Eigen::VectorXcd residual = h_full.col(pick);
        residual -= basis.leftCols(rank) *
                    (basis.leftCols(rank).adjoint() * residual).eval();
        const double res_norm = residual.norm();
        if (res_norm > 1e-12 * norms(pick)) {
            basis.col(rank) = residual / res_norm;
            ++rank;
        }

        std::vector<int> survivors;
        survivors.reserve(pool.size());
        for (int k : pool) {
            if (k == pick) continue;
            const double proj =
                (basis.leftCols(rank).adjoint() * h_full.col(k)).norm() / norms(k);
            if (proj < eps_g) survivors.push_back(k);
        }
        pool = std::move(survivors);
    }
    return result;
}

ScheduleResult gwc_grid(const ChannelMatrix& h_full, int num_selected,
                        std::span<const double> grid, double total_power,
                        double noise_power, bool eq4_literal) {
    if (grid.empty()) throw std::invalid_argument("gwc_grid: empty grid");
    ScheduleResult best;
    double best_rate = -1.0;
    for (double eps : grid) {
        ScheduleResult candidate = gwc(h_full, num_selected, eps);
        if (candidate.selected.empty()) continue;
        ChannelMatrix h_sel(h_full.rows(),
                            static_cast<Eigen::Index>(candidate.selected.size()));
        for (std::size_t i = 0; i < candidate.selected.size(); ++i) {
            h_sel.col(static_cast<Eigen::Index>(i)) =
                h_full.col(candidate.selected[i]);
        }
        double rate = 0.0;
        try {
            const Eigen::MatrixXcd w = zf_weights(h_sel);
            rate = sum_rate(h_sel, w, total_power, noise_power, eq4_literal);
        } catch (const SingularChannel&) {
            continue;
        }
        if (rate > best_rate) {
            best_rate = rate;
            best = std::move(candidate);
        }
    }
    if (best.selected.empty()) {
        // Every threshold failed; fall back to the first grid point's
        // greedy pick so the caller still gets a (flaggable) selection.
        best = gwc(h_full, num_selected, grid[0]);
    }
    return best;
}

ScheduleResult random_selection(int num_users, int num_selected, RandomStream rng) {
    if (num_selected > num_users) {
        throw std::invalid_argument("random_selection: num_selected > num_users");
    }
    std::vector<int> ids(static_cast<std::size_t>(num_users));
    for (int i = 0; i < num_users; ++i) ids[static_cast<std::size_t>(i)] = i;
    // Partial Fisher-Yates: the first num_selected slots become the sample.
    for (int i = 0; i < num_selected; ++i) {
        const auto j = i + static_cast<int>(rng.uniform_below(
                               static_cast<std::uint64_t>(num_users - i)));
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
    }
    ScheduleResult result;
    result.method = SchedulerKind::RandomSel;
    result.selected.assign(ids.begin(), ids.begin() + num_selected);
    result.diagnostics.assign(static_cast<std::size_t>(num_selected), 0.0);
    return result;
}

std::uint64_t estimation_load(SchedulerKind kind, int num_antennas, int num_users,
                              int num_selected) {
    const auto m = static_cast<std::uint64_t>(num_antennas);
    if (kind == SchedulerKind::Gwc) return m * static_cast<std::uint64_t>(num_users);
    return m * static_cast<std::uint64_t>(num_selected);
}

int common_cluster_count(std::span<const int> a, std::span<const int> b) {
    int count = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

double mean_pairwise_common(const std::vector<std::vector<int>>& active_sets,
                            std::span<const int> selected) {
    if (selected.size() < 2) return 0.0;
    double total = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        for (std::size_t j = i + 1; j < selected.size(); ++j) {
            total += common_cluster_count(
                active_sets.at(static_cast<std::size_t>(selected[i])),
                active_sets.at(static_cast<std::size_t>(selected[j])));
            ++pairs;
        }
    }
    return total / pairs;
}

} // namespace gusim
