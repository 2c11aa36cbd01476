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
//
// Acceptance suite: every release criterion runs at its stated size and
// tolerance and prints one PASS/FAIL line. The exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gusim/channel.hpp"
#include "gusim/harness.hpp"
#include "gusim/localization.hpp"
#include "gusim/receiver.hpp"

using namespace gusim;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] criterion %d: %s (%s, %.1fs)\n", pass ? "PASS" : "FAIL",
                index, name, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run(int index, const char* name,
         const std::function<bool(std::string&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    report(index, name, pass, detail, seconds);
}

Eigen::MatrixXcd random_h(Eigen::Index rows, Eigen::Index cols, RandomStream& rng) {
    Eigen::MatrixXcd h(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            h(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian()) /
                      std::sqrt(2.0);
        }
    }
    return h;
}

// ---- criterion 1: ZF correctness ------------------------------------------

bool zf_correctness(std::string& detail) {
    RandomStream rng(1001);
    double worst_residual = 0.0;
    double worst_leak = 0.0;
    double worst_rate_err = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 8 + static_cast<int>(rng.uniform_below(57)); // 8..64
        const int k = 1 + static_cast<int>(rng.uniform_below(
                              static_cast<std::uint64_t>(m / 2)));
        const Eigen::MatrixXcd h = random_h(m, k, rng);
        const Eigen::MatrixXcd w = zf_weights(h);

        const Eigen::MatrixXcd g = w * h;
        const double residual =
            (g - Eigen::MatrixXcd::Identity(k, k)).norm() / std::sqrt(double(k));
        worst_residual = std::max(worst_residual, residual);

        for (Eigen::Index u = 0; u < k; ++u) {
            double interference = 0.0;
            for (Eigen::Index i = 0; i < k; ++i) {
                if (i != u) interference += std::norm(g(u, i));
            }
            worst_leak = std::max(worst_leak, interference / std::norm(g(u, u)));
        }

        const double p_t = 2.0;
        const double noise = 0.2;
        const double direct = sum_rate(h, w, p_t, noise);
        const Eigen::MatrixXcd inv = (h.adjoint() * h).inverse();
        double closed = 0.0;
        for (Eigen::Index u = 0; u < k; ++u) {
            closed += std::log2(1.0 + (p_t / k) / (noise * inv(u, u).real()));
        }
        worst_rate_err =
            std::max(worst_rate_err, std::abs(direct - closed) / closed);
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "residual %.2e, leakage %.2e, rate err %.2e over 1000 matrices",
                  worst_residual, worst_leak, worst_rate_err);
    detail = buf;
    return worst_residual < 1e-9 && worst_leak < 1e-9 && worst_rate_err < 1e-9;
}

// ---- criterion 2: three-user capacity oracle -------------------------------

bool three_user_oracle(std::string& detail) {
    RandomStream rng(1002);
    double worst_det_err = 0.0;
    double worst_cap_err = 0.0;
    bool bound_ok = true;
    double min_margin = 1e9;
    for (int trial = 0; trial < 10000; ++trial) {
        const double z12 = rng.uniform();
        const double z13 = rng.uniform();
        const double z23 = rng.uniform();
        const double b12 = rng.uniform(0.0, 2.0 * kPi);
        const double b13 = rng.uniform(0.0, 2.0 * kPi);
        const double b23 = rng.uniform(0.0, 2.0 * kPi);
        const double p = std::pow(10.0, rng.uniform(-1.0, 2.0));

        Eigen::Matrix3cd r;
        r << 1.0, std::polar(z12, b12), std::polar(z13, b13),
            std::polar(z12, -b12), 1.0, std::polar(z23, b23),
            std::polar(z13, -b13), std::polar(z23, -b23), 1.0;
        const double det_direct =
            (Eigen::Matrix3cd::Identity() + p * r).determinant().real();
        const double det_closed = three_user_det(z12, z13, z23, b12, b13, b23, p);
        worst_det_err = std::max(
            worst_det_err,
            std::abs(det_closed - det_direct) / std::max(1.0, std::abs(det_direct)));
        if (det_direct > 1e-9) {
            worst_cap_err = std::max(
                worst_cap_err,
                std::abs(three_user_capacity(z12, z13, z23, b12, b13, b23, p) -
                         std::log2(det_direct)));
        }

        const double cap = three_user_capacity(z12, z13, z23, b12, b13, b23, p);
        const double bound = 3.0 * std::log2(1.0 + p);
        if (cap > bound + 1e-12) bound_ok = false;
        if (z12 >= 0.1 && z13 >= 0.1 && z23 >= 0.1) {
            min_margin = std::min(min_margin, bound - cap);
        }
    }
    // equality exactly at zero correlation
    const bool equality_ok =
        std::abs(three_user_capacity(0, 0, 0, 1, 2, 3, 5.0) -
                 3.0 * std::log2(6.0)) < 1e-12;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "det err %.2e, cap err %.2e, min margin %.2e over 10000 draws",
                  worst_det_err, worst_cap_err, min_margin);
    detail = buf;
    return worst_det_err < 1e-10 && worst_cap_err < 1e-10 && bound_ok &&
           equality_ok && min_margin >= 1e-6;
}

// ---- criterion 3: distinct-cluster decorrelation ---------------------------

struct TwoUserDrop {
    ScenarioConfig cfg;
    Drop drop;
    std::vector<std::vector<MpcGeometry>> mpcs;
    std::vector<std::vector<int>> active;
};

Cluster fixture_cluster(int id, Point3 centre, Point3 vr_centre) {
    Cluster c;
    c.id = id;
    c.kind = ClusterKind::Local;
    c.bs_side_pos = centre;
    c.ms_side_pos = centre;
    c.bs_spreads = {25.0, 25.0, 10.0};
    c.ms_spreads = c.bs_spreads;
    c.lsp = {0.2e-6, 10.0, 1.0};
    c.vr = {vr_centre, 50.0, 20.0, id};
    return c;
}

TwoUserDrop make_two_user_drop(bool shared) {
    TwoUserDrop f;
    f.cfg.num_users = 2;
    f.cfg.num_selected = 2;
    f.cfg.num_antennas = 64;
    f.cfg.apply_shadowing = false;
    f.drop.bs = {0.0, 0.0, f.cfg.bs_height};
    if (shared) {
        const Point3 pos{150.0, 90.0, f.cfg.ms_height};
        f.drop.users = {User{0, pos}, User{1, pos}};
        f.drop.clusters = {
            fixture_cluster(0, {150.0, 90.0, f.cfg.ms_height}, {150.0, 90.0, 0.0})};
        f.active = {{0}, {0}};
    } else {
        // sin(azimuth) gap near 1, clear of the lambda/2 grating lobe
        f.drop.users = {User{0, {280.0, 60.0, f.cfg.ms_height}},
                        User{1, {-20.0, 300.0, f.cfg.ms_height}}};
        f.drop.clusters = {
            fixture_cluster(0, {280.0, 60.0, f.cfg.ms_height}, {280.0, 60.0, 0.0}),
            fixture_cluster(1, {-20.0, 300.0, f.cfg.ms_height},
                            {-20.0, 300.0, 0.0})};
        f.active = {{0}, {1}};
    }
    RandomStream geo(1003);
    for (const auto& c : f.drop.clusters) {
        f.mpcs.push_back(draw_mpcs(c, f.cfg.mpcs_per_cluster,
                                   geo.substream(static_cast<std::uint64_t>(c.id))));
    }
    return f;
}

double two_user_correlation(const TwoUserDrop& f, int draws, std::uint64_t seed) {
    std::vector<Eigen::MatrixXcd> ensemble;
    ensemble.reserve(static_cast<std::size_t>(draws));
    RandomStream root(seed);
    for (int r = 0; r < draws; ++r) {
        const FadingRealization fading =
            draw_fading(f.drop.clusters.size(), f.cfg.mpcs_per_cluster,
                        root.substream(static_cast<std::uint64_t>(r)));
        ensemble.push_back(assemble_channel(f.cfg, f.drop, std::vector<int>{0, 1},
                                            f.mpcs, f.active, fading));
    }
    return std::abs(sample_correlation(ensemble).matrix()(0, 1));
}

bool cluster_decorrelation(std::string& detail) {
    const double rho_disjoint =
        two_user_correlation(make_two_user_drop(false), 10000, 2211);
    const double rho_shared =
        two_user_correlation(make_two_user_drop(true), 10000, 2212);
    char buf[120];
    std::snprintf(buf, sizeof(buf), "|zeta| disjoint %.4f, shared %.4f",
                  rho_disjoint, rho_shared);
    detail = buf;
    return rho_disjoint < 0.05 && rho_shared >= 0.5;
}

// ---- criterion 4: scheduler ordering ---------------------------------------

bool scheduler_ordering(std::string& detail) {
    ScenarioConfig cfg;
    cfg.num_antennas = 64;
    cfg.num_users = 120;
    cfg.num_selected = 16;
    cfg.cell_half_side = 600.0;

    const std::vector<SchedulerKind> kinds{
        SchedulerKind::Gwc, SchedulerKind::GusThreshold, SchedulerKind::RandomSel};
    double mean[3] = {0.0, 0.0, 0.0};
    int count[3] = {0, 0, 0};
    RandomStream master(cfg.master_seed);
    for (int t = 0; t < 50; ++t) {
        const auto seed =
            master.substream(stream_tag::kTrial, static_cast<std::uint64_t>(t))
                .next_u64();
        const auto recs = run_trial_set(cfg, seed, kinds);
        for (int i = 0; i < 3; ++i) {
            if (recs[static_cast<std::size_t>(i)].failed) continue;
            mean[i] += recs[static_cast<std::size_t>(i)].sum_rate;
            ++count[i];
        }
    }
    for (int i = 0; i < 3; ++i) mean[i] /= std::max(count[i], 1);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "mean rates: GWC %.2f, GUS %.2f, RS %.2f over 50 trials",
                  mean[0], mean[1], mean[2]);
    detail = buf;
    return mean[0] >= mean[1] && mean[1] >= mean[2] && mean[1] >= 0.7 * mean[0];
}

// ---- criterion 5: estimation load ------------------------------------------

bool estimation_loads(std::string& detail) {
    SweepSpec spec = preset_sweep("fig5", ScenarioConfig{});
    spec.trials = 1;
    const auto rows = run_sweep(spec);
    bool ok = !rows.empty();
    for (const auto& row : rows) {
        const auto m = static_cast<std::uint64_t>(row.value);
        const std::uint64_t expected =
            row.scheduler == SchedulerKind::Gwc
                ? m * static_cast<std::uint64_t>(spec.base.num_users)
                : m * static_cast<std::uint64_t>(spec.base.num_selected);
        if (row.estimation_load != expected) ok = false;
    }
    // the GUS/GWC ratio is K_s / K exactly at every point
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        const double ratio = static_cast<double>(rows[i].estimation_load) /
                             static_cast<double>(rows[i + 1].estimation_load);
        if (ratio != static_cast<double>(spec.base.num_selected) /
                         static_cast<double>(spec.base.num_users)) {
            ok = false;
        }
    }
    detail = "analytic loads at " + std::to_string(rows.size()) + " sweep rows";
    return ok;
}

// ---- criterion 6: robustness to localization error --------------------------

bool robustness(std::string& detail) {
    std::string parts;
    bool ok = true;
    for (int ks : {8, 16}) {
        ScenarioConfig cfg;
        cfg.num_antennas = 64;
        cfg.num_users = 120;
        cfg.num_selected = ks;
        cfg.cell_half_side = 600.0;
        // sounder: 20 dB input SNR, 20 MHz, M_x = 5, N = 127 (defaults)

        double mean0 = 0.0;
        double mean5 = 0.0;
        int n0 = 0;
        int n5 = 0;
        RandomStream master(cfg.master_seed);
        for (int t = 0; t < 50; ++t) {
            const auto seed =
                master.substream(stream_tag::kTrial, static_cast<std::uint64_t>(t))
                    .next_u64();
            const TrialRecord base =
                run_trial(cfg, seed, SchedulerKind::GusThreshold, 0);
            const TrialRecord noisy =
                run_trial(cfg, seed, SchedulerKind::GusThreshold, 5);
            if (!base.failed) {
                mean0 += base.sum_rate;
                ++n0;
            }
            if (!noisy.failed) {
                mean5 += noisy.sum_rate;
                ++n5;
            }
        }
        mean0 /= std::max(n0, 1);
        mean5 /= std::max(n5, 1);
        const double drop_frac = std::abs(mean5 - mean0) / mean0;
        char buf[100];
        std::snprintf(buf, sizeof(buf), "Ks=%d: %.2f -> %.2f (%.1f%%) ", ks,
                      mean0, mean5, 100.0 * drop_frac);
        parts += buf;
        if (drop_frac > 0.15) ok = false;
    }
    detail = parts + "over 50 trials each";
    return ok;
}

// ---- criterion 7: localization round-trip -----------------------------------

bool localization_roundtrip(std::string& detail) {
    const Point3 bs{0.0, 0.0, 5.0};
    RandomStream rng(1007);
    double worst_leg = 0.0;
    double worst_residual = 0.0;
    double worst_sum = 0.0;
    int done = 0;
    while (done < 1000) {
        const Point3 user{rng.uniform(-600.0, 600.0), rng.uniform(-600.0, 600.0),
                          1.5};
        const Point3 scatter{rng.uniform(-600.0, 600.0),
                             rng.uniform(-600.0, 600.0), rng.uniform(0.0, 30.0)};
        if (horizontal_distance(bs, user) < 1.0) continue;
        const auto est = path_estimate_from_geometry(scatter, bs, user);
        if (!est) continue;
        const auto legs =
            localize_cluster(*est, horizontal_distance(bs, user), bs.z, user.z);
        if (!legs) return false;

        const double d1 = distance(bs, scatter);
        const double d2 = distance(scatter, user);
        worst_leg = std::max({worst_leg, std::abs(legs->bs_leg - d1) / d1,
                              std::abs(legs->ms_leg - d2) / d2});

        const double c_tau = kSpeedOfLight * est->delay;
        const double lhs = (c_tau - legs->bs_leg) * (c_tau - legs->bs_leg);
        const double a = bs.z - user.z + legs->bs_leg * std::sin(est->elevation);
        const double b = horizontal_distance(bs, user) -
                         legs->bs_leg * std::cos(est->elevation) *
                             std::cos(est->azimuth);
        worst_residual = std::max(
            worst_residual, std::abs(lhs - (a * a + b * b)) / (c_tau * c_tau));
        worst_sum = std::max(
            worst_sum, std::abs(legs->bs_leg + legs->ms_leg - c_tau) / c_tau);
        ++done;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "leg err %.2e, residual %.2e, leg-sum err %.2e over 1000 paths",
                  worst_leg, worst_residual, worst_sum);
    detail = buf;
    return worst_leg < 1e-6 && worst_residual < 1e-9 &&
           worst_sum < 16.0 * std::numeric_limits<double>::epsilon();
}

// ---- criterion 8: GUS hand oracle and pruning invariant ----------------------

bool gus_oracle(std::string& detail) {
    VisibilityMatrix v;
    v.v.resize(3, 2);
    v.v << 1.0, 0.0, 0.0, 1.0, 0.9, 0.1;
    const auto a = gus_threshold(v, 2, 0.5);
    const auto b = gus_mincorr(v, 2);
    const bool fixture_ok = a.selected == std::vector<int>{0, 1} &&
                            b.selected == std::vector<int>{0, 1};

    RandomStream rng(1008);
    bool invariant_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        VisibilityMatrix m;
        m.v.resize(25, 10);
        for (Eigen::Index r = 0; r < 25; ++r) {
            for (Eigen::Index c = 0; c < 10; ++c) {
                m.v(r, c) = rng.uniform() < 0.35 ? rng.uniform() : 0.0;
            }
        }
        const double eps = 0.25 + 0.6 * rng.uniform();
        const auto res = gus_threshold(m, 8, eps);
        for (std::size_t i = 0; i < res.selected.size() && invariant_ok; ++i) {
            for (std::size_t j = i + 1; j < res.selected.size(); ++j) {
                const auto ri = m.v.row(res.selected[i]);
                const auto rj = m.v.row(res.selected[j]);
                const double corr = std::abs(ri.dot(rj)) / (ri.norm() * rj.norm());
                if (!(corr < eps)) {
                    invariant_ok = false;
                    break;
                }
            }
        }
        if (!invariant_ok) break;
    }
    detail = std::string("fixture ") + (fixture_ok ? "ok" : "wrong") +
             ", pruning invariant over 1000 random matrices " +
             (invariant_ok ? "ok" : "violated");
    return fixture_ok && invariant_ok;
}

// ---- criterion 9: byte-identical CSVs across thread counts -------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool cli_determinism(std::string& detail) {
    const char* cli = std::getenv("GUSIM_CLI");
    if (!cli) {
        detail = "GUSIM_CLI not set";
        return false;
    }
    const std::string t1 = "acceptance_fig3_t1.csv";
    const std::string t8 = "acceptance_fig3_t8.csv";
    const std::string base = std::string("\"") + cli +
                             "\" sweep --preset fig3 --seed 7";
    if (std::system((base + " --threads 1 --out " + t1 + " > /dev/null").c_str()) !=
        0) {
        detail = "threads=1 run failed";
        return false;
    }
    if (std::system((base + " --threads 8 --out " + t8 + " > /dev/null").c_str()) !=
        0) {
        detail = "threads=8 run failed";
        return false;
    }
    const std::string a = slurp(t1);
    const std::string b = slurp(t8);
    std::remove(t1.c_str());
    std::remove(t8.c_str());
    char buf[100];
    std::snprintf(buf, sizeof(buf), "%zu bytes, %s", a.size(),
                  a == b ? "identical" : "DIFFER");
    detail = buf;
    return !a.empty() && a == b;
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    run(1, "ZF correctness", zf_correctness);
    run(2, "three-user capacity oracle", three_user_oracle);
    run(3, "distinct-cluster decorrelation", cluster_decorrelation);
    run(4, "scheduler ordering", scheduler_ordering);
    run(5, "estimation load", estimation_loads);
    run(6, "robustness to localization error", robustness);
    run(7, "localization round-trip", localization_roundtrip);
    run(8, "GUS hand oracle and pruning invariant", gus_oracle);
    run(9, "deterministic CSVs across thread counts", cli_determinism);
    std::printf("%d of 9 criteria failed\n", g_failures);
    return g_failures;
}
