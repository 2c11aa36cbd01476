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

#include "gusim/localization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gusim/channel.hpp"

namespace gusim {

double pattern_f(double nu, bool quartic) {
    const double nu2 = nu * nu;
    const double nu3 = nu2 * nu;
    const double last = quartic ? nu3 * nu : nu3;
    return 0.67 + 2.67 * nu - 6.79 * nu2 + 5.7 * nu3 - 1.71 * last;
}

double gamma_o(const SounderConfig& cfg, double nu) {
    if (cfg.antennas <= 0) {
        throw std::invalid_argument("gamma_o: sounder antenna count unresolved");
    }
    const double f = pattern_f(nu, cfg.quartic_pattern);
    return static_cast<double>(cfg.antennas) * cfg.periods * cfg.pn_length * f * f *
           cfg.input_snr;
}

double array_delta(const SounderConfig& cfg) {
    const double mx = static_cast<double>(cfg.array_side);
    const double ratio = cfg.spacing_ratio;
    return 4.0 * kPi * kPi * ratio * ratio *
           (7.0 / 3.0 * mx * mx * mx - 8.0 * mx * mx + 29.0 / 3.0 * mx - 4.0);
}

double crlb(PathParam param, const SounderConfig& cfg, double elevation) {
    const double g = gamma_o(cfg, elevation);
    switch (param) {
    case PathParam::Delay:
        return 1.0 / (g * 8.0 * kPi * kPi * cfg.bandwidth_hz);
    case PathParam::Elevation:
        return static_cast<double>(cfg.antennas) / (g * 2.0 * array_delta(cfg));
    case PathParam::Azimuth: {
        const double c = std::cos(elevation);
        if (std::abs(c) < 1e-12) {
            throw std::domain_error("crlb: azimuth bound undefined at |elevation| = pi/2");
        }
        return static_cast<double>(cfg.antennas) / (g * 2.0 * array_delta(cfg) * c);
    }
    }
    throw std::invalid_argument("crlb: unknown parameter");
}

std::optional<LocalizedLegs> localize_cluster(const PathEstimate& est,
                                              double d_bs_ms, double h_bs,
                                              double h_ms) {
    const double c_tau = kSpeedOfLight * est.delay;
    const double dh = h_bs - h_ms;
    const double cap_c = c_tau * c_tau - dh * dh - d_bs_ms * d_bs_ms;
    if (!(cap_c > 0.0)) return std::nullopt; // delay does not clear the LoS ellipse

    const double sin_el = std::sin(est.elevation);
    const double cos_el = std::cos(est.elevation);
    const double cos_az = std::cos(est.azimuth);
    const double sin_az = std::sin(est.azimuth);

    const double cap_a = cos_el * cos_el * sin_az * sin_az;
    const double cap_b = 2.0 * (d_bs_ms * cos_el * cos_az - c_tau - dh * sin_el);

    double roots[2];
    int n_roots = 0;
    if (cap_a == 0.0) {
        if (cap_b == 0.0) return std::nullopt;
        roots[n_roots++] = -cap_c / cap_b;
    } else {
        const double disc = cap_b * cap_b - 4.0 * cap_a * cap_c;
        if (disc < 0.0) return std::nullopt;
        // Cancellation-free quadratic split.
        const double q = -0.5 * (cap_b + std::copysign(std::sqrt(disc), cap_b));
        if (q == 0.0) return std::nullopt;
        roots[n_roots++] = cap_c / q;
        roots[n_roots++] = q / cap_a;
    }

    std::optional<LocalizedLegs> best;
    for (int i = 0; i < n_roots; ++i) {
        const double x = roots[i];
        const double ms_leg = c_tau - x;
        if (x > 0.0 && ms_leg > 0.0 && (!best || x < best->bs_leg)) {
            best = LocalizedLegs{x, ms_leg};
        }
    }
    return best;
}

std::optional<PathEstimate> path_estimate_from_geometry(const Point3& scatter,
                                                        const Point3& bs,
                                                        const Point3& user) {
    const double bs_leg = distance(bs, scatter);
    const double rho = horizontal_distance(bs, scatter);
    if (bs_leg < 1e-9 || rho < 1e-9) return std::nullopt;

    PathEstimate est;
    est.delay = (bs_leg + distance(scatter, user)) / kSpeedOfLight;
    est.elevation = std::asin(std::clamp((scatter.z - bs.z) / bs_leg, -1.0, 1.0));

    // The azimuth that makes the range equation exact: its cosine carries
    // the difference between the BS-user and scatter-user ground legs.
    const double d_bs_ms = horizontal_distance(bs, user);
    const double d_sc_ms = horizontal_distance(scatter, user);
    est.azimuth = std::acos(std::clamp((d_bs_ms - d_sc_ms) / rho, -1.0, 1.0));
    return est;
}

namespace {

double clamp_elevation(double e) {
    constexpr double lim = kPi / 2.0 - 1e-9;
    return std::clamp(e, -lim, lim);
}

} // namespace

PerturbedVisibility perturb_and_rebuild(const ScenarioConfig& cfg, const Drop& drop,
                                        const VisibilityMatrix& v, int omega,
                                        RandomStream rng) {
    if (omega < 0) throw std::invalid_argument("perturb_and_rebuild: omega < 0");
    SounderConfig sounder = cfg.sounder;
    sounder.antennas = sounder.effective_antennas(cfg.num_antennas);

    PerturbedVisibility out;
    out.v_tilde = v.v;
    const double wavelength = cfg.wavelength();
    const double scale = static_cast<double>(omega);
    const auto activity = all_active_sets(v, cfg.activity_fraction);

    for (const auto& user : drop.users) {
        const double d_bs_ms = horizontal_distance(drop.bs, user.pos);
        const double d_bs_3d = distance(drop.bs, user.pos);
        const double tau_0 = d_bs_3d / kSpeedOfLight;
        const double amp = std::sqrt(path_loss_linear(d_bs_3d, wavelength));

        for (int cid : activity.at(static_cast<std::size_t>(user.id))) {
            const Cluster& cluster = drop.clusters.at(static_cast<std::size_t>(cid));
            const Point3 scatter = cluster.ms_side_pos;
            ++out.perturbed_paths;

            PathDiag diag;
            diag.user = user.id;
            diag.cluster = cid;
            diag.true_bs_leg = distance(drop.bs, scatter);
            diag.true_ms_leg = distance(scatter, user.pos);

            auto handle_lost = [&] {
                diag.lost = true;
                ++out.lost_paths;
                if (omega > 0) out.v_tilde(user.id, cid) = 0.0;
                out.paths.push_back(diag);
            };

            const auto est = path_estimate_from_geometry(scatter, drop.bs, user.pos);
            if (!est) {
                handle_lost();
                continue;
            }

            RandomStream path_rng =
                rng.substream(static_cast<std::uint64_t>(user.id),
                              static_cast<std::uint64_t>(cid));
            auto sign = [&path_rng] { return path_rng.uniform() < 0.5 ? -1.0 : 1.0; };
            const double e_delay =
                sign() * scale * std::sqrt(crlb(PathParam::Delay, sounder, est->elevation));
            const double e_elev =
                sign() * scale *
                std::sqrt(crlb(PathParam::Elevation, sounder, est->elevation));
            const double e_azim =
                sign() * scale *
                std::sqrt(crlb(PathParam::Azimuth, sounder, est->elevation));

            PathEstimate noisy;
            noisy.delay = est->delay + e_delay;
            noisy.elevation = clamp_elevation(est->elevation + e_elev);
            noisy.azimuth = std::clamp(est->azimuth + e_azim, 0.0, kPi);

            // A measured path can never be shorter than the straight
            // BS-user line; project onto the feasible set with a margin
            // that keeps the razor-thin ellipse numerically solvable.
            // Paths on the baseline itself (a user's own local cluster)
            // land here for every draw.
            const double baseline =
                std::hypot(d_bs_ms, cfg.bs_height - cfg.ms_height);
            const double feasible =
                baseline + std::max(1e-3, 1e-5 * baseline);
            noisy.delay = std::max(noisy.delay, feasible / kSpeedOfLight);

            const auto legs = localize_cluster(noisy, d_bs_ms, cfg.bs_height,
                                               cfg.ms_height);
            if (!legs) {
                handle_lost();
                continue;
            }
            diag.est_bs_leg = legs->bs_leg;
            diag.est_ms_leg = legs->ms_leg;
            out.paths.push_back(diag);
            if (omega == 0) continue;

            // The scatterer (and the VR anchored to it) moves by the
            // MS-leg error along the user-to-scatterer ground bearing.
            const double shift = legs->ms_leg - diag.true_ms_leg;
            const double ground = horizontal_distance(user.pos, scatter);
            double d_vr;
            if (ground > 1e-9) {
                const double ux = (scatter.x - user.pos.x) / ground;
                const double uy = (scatter.y - user.pos.y) / ground;
                const Point3 vr_centre{cluster.vr.center.x + shift * ux,
                                       cluster.vr.center.y + shift * uy, 0.0};
                d_vr = horizontal_distance(user.pos, vr_centre);
            } else {
                d_vr = std::max(
                    0.0, horizontal_distance(user.pos, cluster.vr.center) + shift);
            }
            const double a_vr = vr_gain_cutoff(d_vr, cluster.vr.radius,
                                               cluster.vr.transition, wavelength);

            const double tau_c =
                cluster_delay(cluster, user.pos, drop.bs) + e_delay;
            const double a_c = cluster_attenuation(tau_c, cfg.delay_decay, tau_0,
                                                   cfg.cutoff_delay);
            out.v_tilde(user.id, cid) = amp * a_vr * std::sqrt(a_c);
        }
    }

    out.error = v.v - out.v_tilde;
    return out;
}

} // namespace gusim
