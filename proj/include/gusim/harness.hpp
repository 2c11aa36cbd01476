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
#include <string>
#include <vector>

#include "gusim/config.hpp"
#include "gusim/scheduler.hpp"

namespace gusim {

/// Outcome of one Monte Carlo trial for one scheduler.
struct TrialRecord {
    std::uint64_t drop_seed = 0;
    SchedulerKind scheduler = SchedulerKind::GusThreshold;
    std::vector<int> selected;
    double sum_rate = 0.0; // bits/s/Hz
    std::uint64_t estimation_load = 0;
    double mean_common_clusters = 0.0;
    bool failed = false; // ill-conditioned selected channel
    int omega = 0;
    int lost_paths = 0; // localization losses, omega > 0 only
};

/// drop -> V -> schedule -> selected-user channel -> ZF -> sum-rate.
/// GUS variants read only the visibility matrix (the perturbed one when
/// omega > 0); GWC reads the full channel; RS reads neither.
TrialRecord run_trial(const ScenarioConfig& cfg, std::uint64_t drop_seed,
                      SchedulerKind scheduler, int omega = 0);

/// Same drop and fading shared across all requested schedulers.
std::vector<TrialRecord> run_trial_set(const ScenarioConfig& cfg,
                                       std::uint64_t drop_seed,
                                       const std::vector<SchedulerKind>& schedulers,
                                       int omega = 0);

enum class SweepVariable { CellSize, NumUsers, NumAntennas, NumSelected, Omega };

std::string to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(const std::string& name);

struct SweepSpec {
    SweepVariable variable = SweepVariable::CellSize;
    std::vector<double> values;
    int trials = 50;
    std::vector<SchedulerKind> schedulers;
    ScenarioConfig base;
    int omega = 0; // fixed error scale for non-Omega sweeps
};

/// Aggregate of one (value, scheduler) sweep point.
struct SweepRow {
    SweepVariable variable;
    double value = 0.0;
    SchedulerKind scheduler;
    double mean_sum_rate = 0.0;
    double stderr_sum_rate = 0.0; // meaningless when trials < 2
    int trials = 0;               // requested trials
    int failed = 0;               // excluded from the mean
    std::uint64_t estimation_load = 0;
};

/// Runs trials x values x schedulers, optionally on several threads.
/// Results are deterministic in content and order for a fixed master
/// seed, independent of the thread count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads = 1);

/// `sweep_var,value,scheduler,mean_sumrate,stderr,trials,failed,load`
/// with RFC-4180 quoting and full round-trip float precision. Empty
/// stderr field when trials == 1.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Writes the CSV; throws std::runtime_error on I/O failure.
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// Experiment presets binding the benchmark parameter sets; `base` fills
/// everything the preset does not pin.
SweepSpec preset_sweep(const std::string& name, const ScenarioConfig& base);

/// Text dump of a channel matrix: header line `M,K,seed`, then M rows of
/// interleaved re,im pairs (2K fields) in row-major order.
std::string channel_csv(const ChannelMatrix& h, std::uint64_t seed);

} // namespace gusim
