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

#include <span>

#include <Eigen/Dense>

#include "gusim/errors.hpp"

namespace gusim {

inline constexpr double kConditionCap = 1e6;

/// Zero-forcing combiner W = (H^H H)^-1 H^H, rows aligned with users.
/// Throws SingularChannel when the condition number of H exceeds the cap,
/// so degenerate trials surface as flagged failures instead of NaNs.
Eigen::MatrixXcd zf_weights(const Eigen::MatrixXcd& h,
                            double condition_cap = kConditionCap);

/// Per-user log2(1 + SINR) summed over the columns of H, equal power
/// split p = total_power / K_s. The noise term is the filtered per-stream
/// noise power |w_k|^2 sigma^2; `eq4_literal` replaces it with a bare 1.
double sum_rate(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& w,
                double total_power, double noise_power, bool eq4_literal = false);

/// Sample mean of log2 det(I + (P_t/K_s) H^H H) over an ensemble of
/// fading realizations with fixed geometry.
double ergodic_capacity(std::span<const Eigen::MatrixXcd> ensemble,
                        double total_power);

/// Hermitian unit-diagonal inter-user correlation matrix. Construction
/// validates hermitianity and the unit diagonal.
struct CorrelationMatrix {
    explicit CorrelationMatrix(Eigen::MatrixXcd r, double tolerance = 1e-6);
    const Eigen::MatrixXcd& matrix() const { return r_; }

  private:
    Eigen::MatrixXcd r_;
};

/// log2 det(I + p R) on column-normalized channels. Throws when R is not
/// positive semidefinite beyond tolerance.
double capacity_upper_bound(const CorrelationMatrix& r, double p);

/// Sample correlation of an ensemble of channel matrices: mean of H^H H
/// normalized so the diagonal is exactly one.
CorrelationMatrix sample_correlation(std::span<const Eigen::MatrixXcd> ensemble);

/// Closed-form three-user capacity log2 det(I + p R) with
/// r_mn = zeta_mn exp(j beta_mn):
///   det = (1+p)^3 - p^2 (1+p) (z12^2 + z13^2 + z23^2)
///       + 2 p^3 z12 z13 z23 cos(b12 + b23 - b13).
/// Returns -inf when the correlations are not realizable (det <= 0).
double three_user_capacity(double z12, double z13, double z23, double b12,
                           double b13, double b23, double p);

/// The determinant inside three_user_capacity, exposed for cross-checks
/// against a generic log-det route.
double three_user_det(double z12, double z13, double z23, double b12, double b13,
                      double b23, double p);

} // namespace gusim
