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

#include "gusim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "gusim/channel.hpp"
#include "gusim/localization.hpp"
#include "gusim/receiver.hpp"

namespace gusim {

namespace {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

ChannelMatrix select_columns(const ChannelMatrix& h, const std::vector<int>& ids,
                             const std::vector<int>& all_ids) {
    // `h` holds columns for all_ids in order; pick the requested ones.
    ChannelMatrix out(h.rows(), static_cast<Eigen::Index>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto it = std::find(all_ids.begin(), all_ids.end(), ids[i]);
        out.col(static_cast<Eigen::Index>(i)) =
            h.col(static_cast<Eigen::Index>(it - all_ids.begin()));
    }
    return out;
}

} // namespace

std::vector<TrialRecord> run_trial_set(const ScenarioConfig& cfg,
                                       std::uint64_t drop_seed,
                                       const std::vector<SchedulerKind>& schedulers,
                                       int omega) {
    cfg.validate();
    const Drop drop = generate_drop(cfg, drop_seed);
    const VisibilityMatrix v = build_v_matrix(cfg, drop);
    const auto active = all_active_sets(v, cfg.activity_fraction);
    const auto mpcs = draw_all_mpcs(cfg, drop, drop_seed);
    const FadingRealization fading =
        draw_fading(drop.clusters.size(), cfg.mpcs_per_cluster,
                    RandomStream(drop_seed).substream(stream_tag::kFading));

    // The GUS schedulers see the localization-degraded matrix when an
    // error scale is set; everything downstream uses true geometry.
    int lost_paths = 0;
    VisibilityMatrix v_sched = v;
    if (omega > 0) {
        auto perturbed = perturb_and_rebuild(
            cfg, drop, v, omega,
            RandomStream(drop_seed).substream(stream_tag::kPerturb));
        v_sched.v = std::move(perturbed.v_tilde);
        lost_paths = perturbed.lost_paths;
    }

    const bool need_full =
        std::find(schedulers.begin(), schedulers.end(), SchedulerKind::Gwc) !=
        schedulers.end();
    std::vector<int> all_ids(drop.users.size());
    for (std::size_t i = 0; i < drop.users.size(); ++i) {
        all_ids[i] = static_cast<int>(i);
    }
    ChannelMatrix h_full;
    if (need_full) {
        h_full = assemble_channel(cfg, drop, all_ids, mpcs, active, fading);
    }

    std::vector<TrialRecord> records;
    records.reserve(schedulers.size());
    for (SchedulerKind kind : schedulers) {
        TrialRecord rec;
        rec.drop_seed = drop_seed;
        rec.scheduler = kind;
        rec.omega = omega;
        rec.lost_paths = lost_paths;

        ScheduleResult sched;
        switch (kind) {
        case SchedulerKind::GusThreshold:
            sched = gus_threshold(v_sched, cfg.num_selected, cfg.eps_h);
            break;
        case SchedulerKind::GusMinCorr:
            sched = gus_mincorr(v_sched, cfg.num_selected);
            break;
        case SchedulerKind::Gwc:
            if (cfg.eps_g > 0.0) {
                sched = gwc(h_full, cfg.num_selected, cfg.eps_g);
            } else {
                sched = gwc_grid(h_full, cfg.num_selected, cfg.gwc_eps_grid,
                                 cfg.total_power, cfg.noise_power,
                                 cfg.eq4_literal_noise);
            }
            break;
        case SchedulerKind::RandomSel:
            sched = random_selection(
                cfg.num_users, cfg.num_selected,
                RandomStream(drop_seed).substream(stream_tag::kRandomSelect));
            break;
        }
        rec.selected = sched.selected;
        rec.estimation_load =
            estimation_load(kind, cfg.num_antennas, cfg.num_users, cfg.num_selected);
        rec.mean_common_clusters = mean_pairwise_common(active, rec.selected);

        if (rec.selected.empty()) {
            rec.failed = true;
        } else {
            ChannelMatrix h_sel;
            if (need_full) {
                h_sel = select_columns(h_full, rec.selected, all_ids);
            } else {
                h_sel = assemble_channel(cfg, drop, rec.selected, mpcs, active, fading);
            }
            try {
                const Eigen::MatrixXcd w = zf_weights(h_sel);
                rec.sum_rate = sum_rate(h_sel, w, cfg.total_power, cfg.noise_power,
                                        cfg.eq4_literal_noise);
            } catch (const SingularChannel&) {
                rec.failed = true;
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

TrialRecord run_trial(const ScenarioConfig& cfg, std::uint64_t drop_seed,
                      SchedulerKind scheduler, int omega) {
    return run_trial_set(cfg, drop_seed, {scheduler}, omega).front();
}

std::string to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::CellSize: return "R";
    case SweepVariable::NumUsers: return "K";
    case SweepVariable::NumAntennas: return "M";
    case SweepVariable::NumSelected: return "Ks";
    case SweepVariable::Omega: return "Omega";
    }
    return "unknown";
}

SweepVariable sweep_variable_from_string(const std::string& name) {
    if (name == "R") return SweepVariable::CellSize;
    if (name == "K") return SweepVariable::NumUsers;
    if (name == "M") return SweepVariable::NumAntennas;
    if (name == "Ks") return SweepVariable::NumSelected;
    if (name == "Omega") return SweepVariable::Omega;
    throw std::invalid_argument("unknown sweep variable: " + name);
}

namespace {

void apply_value(ScenarioConfig& cfg, SweepVariable var, double value, int& omega) {
    switch (var) {
    case SweepVariable::CellSize:
        cfg.cell_half_side = value;
        break;
    case SweepVariable::NumUsers:
        cfg.num_users = static_cast<int>(value);
        break;
    case SweepVariable::NumAntennas:
        cfg.num_antennas = static_cast<int>(value);
        break;
    case SweepVariable::NumSelected:
        cfg.num_selected = static_cast<int>(value);
        break;
    case SweepVariable::Omega:
        omega = static_cast<int>(value);
        break;
    }
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads) {
    if (spec.values.empty()) throw std::invalid_argument("run_sweep: empty value list");
    if (spec.trials < 1) throw std::invalid_argument("run_sweep: trials < 1");
    if (spec.schedulers.empty()) {
        throw std::invalid_argument("run_sweep: no schedulers");
    }

    struct Task {
        std::size_t point;
        int trial;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    RandomStream master(spec.base.master_seed);
    for (std::size_t p = 0; p < spec.values.size(); ++p) {
        RandomStream point_stream = master.substream(stream_tag::kTrial, p);
        for (int t = 0; t < spec.trials; ++t) {
            tasks.push_back(Task{
                p, t,
                point_stream.substream(static_cast<std::uint64_t>(t)).next_u64()});
        }
    }

    // Trials land in pre-sized slots, so scheduling order cannot change
    // the aggregate.
    std::vector<std::vector<TrialRecord>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            const Task& task = tasks[i];
            ScenarioConfig cfg = spec.base;
            int omega = spec.omega;
            apply_value(cfg, spec.variable, spec.values[task.point], omega);
            results[i] = run_trial_set(cfg, task.seed, spec.schedulers, omega);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<SweepRow> rows;
    for (std::size_t p = 0; p < spec.values.size(); ++p) {
        for (std::size_t s = 0; s < spec.schedulers.size(); ++s) {
            SweepRow row;
            row.variable = spec.variable;
            row.value = spec.values[p];
            row.scheduler = spec.schedulers[s];
            row.trials = spec.trials;

            double sum = 0.0;
            double sum_sq = 0.0;
            int ok = 0;
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                if (tasks[i].point != p) continue;
                const TrialRecord& rec = results[i][s];
                row.estimation_load = rec.estimation_load;
                if (rec.failed) {
                    ++row.failed;
                    continue;
                }
                sum += rec.sum_rate;
                sum_sq += rec.sum_rate * rec.sum_rate;
                ++ok;
            }
            if (ok > 0) row.mean_sum_rate = sum / ok;
            if (ok > 1) {
                const double var =
                    std::max(0.0, (sum_sq - sum * sum / ok) / (ok - 1));
                row.stderr_sum_rate = std::sqrt(var / ok);
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "sweep_var,value,scheduler,mean_sumrate,stderr,trials,failed,load\n";
    for (const auto& row : rows) {
        out += csv_quote(to_string(row.variable));
        out += ',';
        out += format_double(row.value);
        out += ',';
        out += csv_quote(to_string(row.scheduler));
        out += ',';
        out += format_double(row.mean_sum_rate);
        out += ',';
        if (row.trials > 1) out += format_double(row.stderr_sum_rate);
        out += ',';
        out += std::to_string(row.trials);
        out += ',';
        out += std::to_string(row.failed);
        out += ',';
        out += std::to_string(row.estimation_load);
        out += '\n';
    }
    return out;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    out << sweep_csv(rows);
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

SweepSpec preset_sweep(const std::string& name, const ScenarioConfig& base) {
    SweepSpec spec;
    spec.base = base;
    spec.trials = 50;
    if (name == "fig3") {
        // Sum-rate vs cell size.
        spec.variable = SweepVariable::CellSize;
        spec.values = {200, 400, 600, 800, 1000};
        spec.base.num_users = 400;
        spec.base.num_antennas = 100;
        spec.base.num_selected = 40;
        spec.schedulers = {SchedulerKind::GusThreshold, SchedulerKind::Gwc,
                           SchedulerKind::RandomSel};
    } else if (name == "fig4") {
        // Sum-rate vs total user count.
        spec.variable = SweepVariable::NumUsers;
        spec.values = {100, 200, 300, 400};
        spec.base.cell_half_side = 600;
        spec.base.num_antennas = 100;
        spec.base.num_selected = 40;
        spec.schedulers = {SchedulerKind::GusThreshold, SchedulerKind::Gwc};
    } else if (name == "fig5") {
        // Estimation load vs antenna count; the load column is analytic.
        spec.variable = SweepVariable::NumAntennas;
        spec.values = {50, 100, 200, 400};
        spec.base.num_users = 400;
        spec.base.num_selected = 40;
        spec.schedulers = {SchedulerKind::GusThreshold, SchedulerKind::Gwc};
    } else if (name == "fig6") {
        // Sum-rate vs localization error scale.
        spec.variable = SweepVariable::Omega;
        spec.values = {0, 1, 2, 3, 4, 5};
        spec.base.cell_half_side = 600;
        spec.base.num_users = 400;
        spec.base.num_antennas = 400;
        spec.base.num_selected = 10;
        spec.schedulers = {SchedulerKind::GusThreshold};
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return spec;
}

std::string channel_csv(const ChannelMatrix& h, std::uint64_t seed) {
    std::string out = std::to_string(h.rows()) + "," + std::to_string(h.cols()) +
                      "," + std::to_string(seed) + "\n";
    for (Eigen::Index m = 0; m < h.rows(); ++m) {
        for (Eigen::Index k = 0; k < h.cols(); ++k) {
            if (k > 0) out += ',';
            out += format_double(h(m, k).real());
            out += ',';
            out += format_double(h(m, k).imag());
        }
        out += '\n';
    }
    return out;
}

} // namespace gusim
