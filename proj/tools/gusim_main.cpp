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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gusim/channel.hpp"
#include "gusim/harness.hpp"
#include "gusim/localization.hpp"
#include "gusim/receiver.hpp"

namespace {

using namespace gusim;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheduler = std::nullopt;
    std::optional<double> eps_h;
    std::optional<double> eps_g;
    std::optional<int> ks;
    int omega = 0;
};

// Flags beat the GUSIM_CONFIG environment variable, which beats built-in
// defaults.
ScenarioConfig resolve_config(const CommonOpts& opts) {
    std::string path = opts.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("GUSIM_CONFIG")) path = env;
    }
    ScenarioConfig cfg = path.empty() ? ScenarioConfig{} : load_config(path);
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.eps_h) cfg.eps_h = *opts.eps_h;
    if (opts.eps_g) cfg.eps_g = *opts.eps_g;
    if (opts.ks) cfg.num_selected = *opts.ks;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* app, CommonOpts& opts) {
    app->add_option("--config", opts.config_path, "Config file (flat JSON)");
    app->add_option("--seed", opts.seed, "Master seed");
    app->add_option("--eps-h", opts.eps_h, "GUS pruning threshold");
    app->add_option("--eps-g", opts.eps_g, "GWC threshold (0 = grid search)");
    app->add_option("--ks", opts.ks, "Number of selected users");
    app->add_option("--omega", opts.omega, "Localization error scale")
        ->check(CLI::NonNegativeNumber);
}

int cmd_simulate(const CommonOpts& opts, const std::string& dump_path) {
    ScenarioConfig cfg = resolve_config(opts);
    const SchedulerKind kind =
        scheduler_from_string(opts.scheduler.value_or("gus-threshold"));
    const std::uint64_t drop_seed =
        RandomStream(cfg.master_seed).substream(stream_tag::kTrial, 0).next_u64();

    const TrialRecord rec = run_trial(cfg, drop_seed, kind, opts.omega);
    const Drop drop = generate_drop(cfg, drop_seed);

    int n_local = 0;
    int n_single = 0;
    int n_twin = 0;
    for (const auto& c : drop.clusters) {
        switch (c.kind) {
        case ClusterKind::Local: ++n_local; break;
        case ClusterKind::Single: ++n_single; break;
        case ClusterKind::Twin: ++n_twin; break;
        }
    }

    std::printf("scheduler        %s\n", to_string(kind).c_str());
    std::printf("drop seed        %llu\n",
                static_cast<unsigned long long>(drop_seed));
    std::printf("users            %zu\n", drop.users.size());
    std::printf("clusters         %zu (local %d, single %d, twin %d)\n",
                drop.clusters.size(), n_local, n_single, n_twin);
    std::printf("selected         ");
    for (std::size_t i = 0; i < rec.selected.size(); ++i) {
        std::printf("%s%d", i ? "," : "", rec.selected[i]);
    }
    std::printf("\n");
    std::printf("sum-rate         %.6f bits/s/Hz%s\n", rec.sum_rate,
                rec.failed ? "  [FAILED: singular channel]" : "");
    std::printf("estimation load  %llu coefficients\n",
                static_cast<unsigned long long>(rec.estimation_load));
    std::printf("mean common clusters (selected pairs)  %.4f\n",
                rec.mean_common_clusters);
    if (opts.omega > 0) {
        std::printf("omega            %d (lost paths: %d)\n", rec.omega,
                    rec.lost_paths);
    }

    if (!dump_path.empty()) {
        const VisibilityMatrix v = build_v_matrix(cfg, drop);
        const auto active = all_active_sets(v, cfg.activity_fraction);
        const auto mpcs = draw_all_mpcs(cfg, drop, drop_seed);
        const FadingRealization fading =
            draw_fading(drop.clusters.size(), cfg.mpcs_per_cluster,
                        RandomStream(drop_seed).substream(stream_tag::kFading));
        std::vector<int> all_ids(drop.users.size());
        for (std::size_t i = 0; i < drop.users.size(); ++i) {
            all_ids[i] = static_cast<int>(i);
        }
        const ChannelMatrix h =
            assemble_channel(cfg, drop, all_ids, mpcs, active, fading);
        std::ofstream out(dump_path, std::ios::binary);
        if (!out) {
            std::fprintf(stderr, "cannot open %s\n", dump_path.c_str());
            return 1;
        }
        out << channel_csv(h, drop_seed);
        std::printf("channel dump     %s (%d x %d)\n", dump_path.c_str(),
                    static_cast<int>(h.rows()), static_cast<int>(h.cols()));
    }
    return rec.failed ? 2 : 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& preset,
              const std::string& var_name, const std::vector<double>& values,
              int trials, const std::vector<std::string>& scheduler_names,
              int threads, const std::string& out_path) {
    ScenarioConfig base = resolve_config(opts);

    SweepSpec spec;
    if (!preset.empty()) {
        spec = preset_sweep(preset, base);
    } else {
        if (var_name.empty() || values.empty()) {
            std::fprintf(stderr, "sweep: need --preset or --var with --values\n");
            return 1;
        }
        spec.base = base;
        spec.variable = sweep_variable_from_string(var_name);
        spec.values = values;
        spec.schedulers = {SchedulerKind::GusThreshold, SchedulerKind::Gwc,
                           SchedulerKind::RandomSel};
    }
    if (trials > 0) spec.trials = trials;
    if (!scheduler_names.empty()) {
        spec.schedulers.clear();
        for (const auto& name : scheduler_names) {
            spec.schedulers.push_back(scheduler_from_string(name));
        }
    }
    spec.omega = opts.omega;
    if (opts.ks) spec.base.num_selected = *opts.ks;

    const auto rows = run_sweep(spec, threads);
    if (out_path.empty()) {
        std::fputs(sweep_csv(rows).c_str(), stdout);
    } else {
        emit_csv(rows, out_path);
        std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
    }
    return 0;
}

int cmd_localize(const CommonOpts& opts, const std::string& out_path) {
    ScenarioConfig cfg = resolve_config(opts);
    const std::uint64_t drop_seed =
        RandomStream(cfg.master_seed).substream(stream_tag::kTrial, 0).next_u64();
    const Drop drop = generate_drop(cfg, drop_seed);
    const VisibilityMatrix v = build_v_matrix(cfg, drop);
    const auto result = perturb_and_rebuild(
        cfg, drop, v, opts.omega,
        RandomStream(drop_seed).substream(stream_tag::kPerturb));

    std::string csv = "user,cluster,true_bs_leg_m,true_ms_leg_m,est_bs_leg_m,"
                      "est_ms_leg_m,lost\n";
    char buf[160];
    for (const auto& p : result.paths) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.10g,%.10g,%.10g,%.10g,%d\n",
                      p.user, p.cluster, p.true_bs_leg, p.true_ms_leg,
                      p.est_bs_leg, p.est_ms_leg, p.lost ? 1 : 0);
        csv += buf;
    }
    if (out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
            return 1;
        }
        out << csv;
    }
    std::fprintf(stderr, "paths %d, lost %d, ||E||_F/||V||_F = %.6g\n",
                 result.perturbed_paths, result.lost_paths,
                 result.error.norm() / std::max(v.v.norm(), 1e-300));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustered stochastic channel simulator and user-scheduling benchmark"};
    app.require_subcommand(1);

    CommonOpts sim_opts;
    std::string dump_path;
    CLI::App* sim = app.add_subcommand("simulate", "Run one trial, verbose");
    add_common(sim, sim_opts);
    std::string sim_sched = "gus-threshold";
    sim->add_option("--scheduler", sim_sched,
                    "gus-threshold | gus-mincorr | gwc | rs");
    sim->add_option("--dump-channel", dump_path, "Write the full channel as CSV");

    CommonOpts sweep_opts;
    std::string preset;
    std::string var_name;
    std::vector<double> values;
    int trials = 0;
    std::vector<std::string> scheduler_names;
    int threads = 1;
    std::string out_path;
    CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo sweep to CSV");
    add_common(sweep, sweep_opts);
    sweep->add_option("--preset", preset, "fig3 | fig4 | fig5 | fig6");
    sweep->add_option("--var", var_name, "Swept variable: R | K | M | Ks | Omega");
    sweep->add_option("--values", values, "Sweep points")->delimiter(',');
    sweep->add_option("--trials", trials, "Trials per point (preset default 50)");
    sweep->add_option("--scheduler", scheduler_names, "Schedulers to compare")
        ->delimiter(',');
    sweep->add_option("--threads", threads, "Worker threads")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_path, "Output CSV path (default stdout)");

    CommonOpts loc_opts;
    std::string loc_out;
    CLI::App* loc = app.add_subcommand("localize", "Per-path localization diagnostics");
    add_common(loc, loc_opts);
    loc->add_option("--out", loc_out, "Output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            sim_opts.scheduler = sim_sched;
            return cmd_simulate(sim_opts, dump_path);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_opts, preset, var_name, values, trials,
                             scheduler_names, threads, out_path);
        }
        if (loc->parsed()) {
            return cmd_localize(loc_opts, loc_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
