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

#include "gusim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace gusim {

namespace {

struct Frame {
    Point3 radial;     // horizontal unit vector BS -> cluster
    Point3 transverse; // horizontal, perpendicular to radial
};

Frame cluster_frame(const Point3& centre) {
    const double d = std::hypot(centre.x, centre.y);
    if (d < 1e-12) {
        return {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
    }
    const Point3 radial{centre.x / d, centre.y / d, 0.0};
    return {radial, {-radial.y, radial.x, 0.0}};
}

Point3 offset_in_frame(const Point3& centre, const Frame& f,
                       const ClusterSpreads& s, const Point3& unit_offset) {
    Point3 p = centre + (s.radial / 2.0 * unit_offset.x) * f.radial +
               (s.transverse / 2.0 * unit_offset.y) * f.transverse;
    p.z += s.vertical / 2.0 * unit_offset.z;
    p.z = std::max(p.z, 0.0); // scatterers stay above ground
    return p;
}

} // namespace

std::vector<MpcGeometry> draw_mpcs(const Cluster& cluster, int n_mpcs,
                                   RandomStream rng) {
    const Frame bs_frame = cluster_frame(cluster.bs_side_pos);
    const Frame ms_frame = cluster_frame(cluster.ms_side_pos);
    std::vector<MpcGeometry> out;
    out.reserve(static_cast<std::size_t>(n_mpcs));
    for (int i = 0; i < n_mpcs; ++i) {
        // One standardized offset per MPC, reused on both sides so twin
        // halves stay paired.
        const Point3 unit{rng.truncated_gaussian(1.0, 2.0),
                          rng.truncated_gaussian(1.0, 2.0),
                          rng.truncated_gaussian(1.0, 2.0)};
        MpcGeometry g;
        g.bs_side = offset_in_frame(cluster.bs_side_pos, bs_frame,
                                    cluster.bs_spreads, unit);
        if (cluster.kind == ClusterKind::Twin) {
            g.ms_side = offset_in_frame(cluster.ms_side_pos, ms_frame,
                                        cluster.ms_spreads, unit);
        } else {
            g.ms_side = g.bs_side;
        }
        out.push_back(g);
    }
    return out;
}

std::vector<std::vector<MpcGeometry>> draw_all_mpcs(const ScenarioConfig& cfg,
                                                    const Drop& drop,
                                                    std::uint64_t drop_seed) {
    RandomStream root = RandomStream(drop_seed).substream(stream_tag::kMpcGeometry);
    std::vector<std::vector<MpcGeometry>> out;
    out.reserve(drop.clusters.size());
    for (const auto& c : drop.clusters) {
        out.push_back(draw_mpcs(c, cfg.mpcs_per_cluster,
                                root.substream(static_cast<std::uint64_t>(c.id))));
    }
    return out;
}

double cluster_delay(const Cluster& cluster, const Point3& user_pos,
                     const Point3& bs_pos) {
    double length = distance(bs_pos, cluster.bs_side_pos) +
                    distance(cluster.ms_side_pos, user_pos);
    if (cluster.kind == ClusterKind::Twin) {
        length += distance(cluster.bs_side_pos, cluster.ms_side_pos);
    }
    return length / kSpeedOfLight + cluster.link_delay;
}

double cluster_attenuation(double tau_c, double k_tau, double tau_0, double tau_b) {
    return std::max(std::exp(-k_tau * (tau_c - tau_0)),
                    std::exp(-k_tau * (tau_b - tau_0)));
}

double path_loss_db(double d, double wavelength) {
    if (d <= 0.0) throw std::invalid_argument("path_loss_db: d <= 0");
    return 26.0 * std::log10(d) + 20.0 * std::log10(4.0 * kPi / wavelength);
}

double path_loss_linear(double d, double wavelength) {
    return std::pow(10.0, -path_loss_db(d, wavelength) / 10.0);
}

FadingRealization draw_fading(std::size_t n_clusters, int n_mpcs, RandomStream rng) {
    FadingRealization fading(n_clusters);
    for (std::size_t c = 0; c < n_clusters; ++c) {
        RandomStream sub = rng.substream(c);
        auto& powers = fading[c];
        powers.reserve(static_cast<std::size_t>(n_mpcs));
        for (int i = 0; i < n_mpcs; ++i) {
            powers.push_back(sub.exponential(1.0));
        }
    }
    return fading;
}

std::vector<Mpc> synthesize_mpcs(const ScenarioConfig& cfg, const Point3& bs_pos,
                                 const User& user, const Cluster& cluster,
                                 std::span<const MpcGeometry> geometry,
                                 std::span<const double> mpc_powers) {
    const double wavelength = cfg.wavelength();
    const double d_bs_user = distance(bs_pos, user.pos);
    const double tau_0 = d_bs_user / kSpeedOfLight;
    const double lp = path_loss_linear(d_bs_user, wavelength);
    const double a_vr = vr_gain_cutoff(horizontal_distance(user.pos, cluster.vr.center),
                                       cluster.vr.radius, cluster.vr.transition,
                                       wavelength);
    const double tau_c = cluster_delay(cluster, user.pos, bs_pos);
    const double a_c = cluster_attenuation(tau_c, cfg.delay_decay, tau_0,
                                           cfg.cutoff_delay);
    const double shadow = cfg.apply_shadowing ? cluster.lsp.shadow_fading : 1.0;
    // Deterministic per-path power; the MPC powers are normalized to sum
    // to one in expectation, so a_c alone sets the cluster's share.
    const double base_power = lp * a_vr * a_vr * a_c * shadow;
    const double n_p = static_cast<double>(geometry.size());

    std::vector<Mpc> out;
    out.reserve(geometry.size());
    for (std::size_t i = 0; i < geometry.size(); ++i) {
        const auto& g = geometry[i];
        Mpc m;
        m.bs_side = g.bs_side;
        m.ms_side = g.ms_side;
        double length = distance(bs_pos, g.bs_side) + distance(g.ms_side, user.pos);
        if (cluster.kind == ClusterKind::Twin) {
            length += distance(g.bs_side, g.ms_side);
        }
        m.delay = length / kSpeedOfLight + cluster.link_delay;

        const double h = horizontal_distance(bs_pos, g.bs_side);
        if (h > 1e-12) {
            m.azimuth = std::asin((g.bs_side.x - bs_pos.x) / h);
            m.elevation = std::atan2(g.bs_side.z - bs_pos.z, h);
        } else {
            m.azimuth = 0.0;
            m.elevation = g.bs_side.z >= bs_pos.z ? kPi / 2.0 : -kPi / 2.0;
        }

        const double amp = std::sqrt(base_power * mpc_powers[i] / n_p);
        const double phase = -2.0 * kPi * cfg.carrier_hz * m.delay;
        m.amplitude = std::polar(amp, phase);
        out.push_back(m);
    }
    return out;
}

ChannelMatrix assemble_channel(const ScenarioConfig& cfg, const Drop& drop,
                               std::span<const int> user_ids,
                               const std::vector<std::vector<MpcGeometry>>& mpcs,
                               const std::vector<std::vector<int>>& active_sets,
                               const FadingRealization& fading) {
    const int m_ant = cfg.num_antennas;
    const double alpha = -2.0 * kPi * cfg.spacing() / cfg.wavelength();
    ChannelMatrix h = ChannelMatrix::Zero(m_ant, static_cast<int>(user_ids.size()));

    for (std::size_t col = 0; col < user_ids.size(); ++col) {
        const int uid = user_ids[col];
        const User& user = drop.users.at(static_cast<std::size_t>(uid));
        for (int cid : active_sets.at(static_cast<std::size_t>(uid))) {
            const Cluster& cluster = drop.clusters.at(static_cast<std::size_t>(cid));
            const auto path_set =
                synthesize_mpcs(cfg, drop.bs, user, cluster,
                                mpcs.at(static_cast<std::size_t>(cid)),
                                fading.at(static_cast<std::size_t>(cid)));
            for (const auto& mpc : path_set) {
                const double step = alpha * std::sin(mpc.azimuth);
                const std::complex<double> rotor = std::polar(1.0, step);
                std::complex<double> steer(1.0, 0.0);
                for (int ant = 0; ant < m_ant; ++ant) {
                    h(ant, static_cast<int>(col)) += mpc.amplitude * steer;
                    steer *= rotor;
                }
            }
        }
    }
    return h;
}

} // namespace gusim
