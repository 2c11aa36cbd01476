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

#include "gusim/receiver.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace gusim {

Eigen::MatrixXcd zf_weights(const Eigen::MatrixXcd& h, double condition_cap) {
    if (h.rows() < h.cols()) {
        throw std::invalid_argument("zf_weights: more users than antennas");
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > condition_cap) {
        throw SingularChannel("zf_weights: channel condition number above cap");
    }
    return svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

double sum_rate(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& w,
                double total_power, double noise_power, bool eq4_literal) {
    const Eigen::Index k_s = h.cols();
    if (w.rows() != k_s || w.cols() != h.rows()) {
        throw std::invalid_argument("sum_rate: dimension mismatch");
    }
    const double p = total_power / static_cast<double>(k_s);
    const Eigen::MatrixXcd g = w * h; // g(k, i) = w_k h_i
    double rate = 0.0;
    for (Eigen::Index k = 0; k < k_s; ++k) {
        const double signal = p * std::norm(g(k, k));
        double interference = 0.0;
        for (Eigen::Index i = 0; i < k_s; ++i) {
            if (i != k) interference += p * std::norm(g(k, i));
        }
        const double noise =
            eq4_literal ? 1.0 : noise_power * w.row(k).squaredNorm();
        rate += std::log2(1.0 + signal / (noise + interference));
    }
    return rate;
}

double ergodic_capacity(std::span<const Eigen::MatrixXcd> ensemble,
                        double total_power) {
    if (ensemble.empty()) {
        throw std::invalid_argument("ergodic_capacity: empty ensemble");
    }
    double total = 0.0;
    for (const auto& h : ensemble) {
        const double p = total_power / static_cast<double>(h.cols());
        const Eigen::MatrixXcd gram = h.adjoint() * h;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram,
                                                            Eigen::EigenvaluesOnly);
        double logdet = 0.0;
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
            logdet += std::log2(1.0 + p * std::max(eig.eigenvalues()(i), 0.0));
        }
        total += logdet;
    }
    return total / static_cast<double>(ensemble.size());
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXcd r, double tolerance)
    : r_(std::move(r)) {
    if (r_.rows() != r_.cols()) {
        throw std::invalid_argument("CorrelationMatrix: not square");
    }
    if ((r_ - r_.adjoint()).cwiseAbs().maxCoeff() > tolerance) {
        throw std::invalid_argument("CorrelationMatrix: not Hermitian");
    }
    for (Eigen::Index i = 0; i < r_.rows(); ++i) {
        if (std::abs(r_(i, i) - std::complex<double>(1.0, 0.0)) > tolerance) {
            throw std::invalid_argument("CorrelationMatrix: diagonal not unit");
        }
    }
}

double capacity_upper_bound(const CorrelationMatrix& r, double p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r.matrix(),
                                                        Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    double capacity = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-9 * scale) {
            throw std::invalid_argument("capacity_upper_bound: matrix not PSD");
        }
        capacity += std::log2(1.0 + p * std::max(ev(i), 0.0));
    }
    return capacity;
}

CorrelationMatrix sample_correlation(std::span<const Eigen::MatrixXcd> ensemble) {
    if (ensemble.size() < 2) {
        throw std::invalid_argument("sample_correlation: need >= 2 realizations");
    }
    const Eigen::Index k = ensemble.front().cols();
    Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(k, k);
    for (const auto& h : ensemble) {
        mean += h.adjoint() * h;
    }
    mean /= static_cast<double>(ensemble.size());
    mean = ((mean + mean.adjoint()) / 2.0).eval();

    Eigen::VectorXd energy = mean.diagonal().real();
    Eigen::MatrixXcd r(k, k);
    for (Eigen::Index m = 0; m < k; ++m) {
        for (Eigen::Index n = 0; n < k; ++n) {
            r(m, n) = mean(m, n) / std::sqrt(energy(m) * energy(n));
        }
        r(m, m) = 1.0;
    }
    return CorrelationMatrix(std::move(r));
}

double three_user_det(double z12, double z13, double z23, double b12, double b13,
                      double b23, double p) {
    const double q = 1.0 + p;
    const double sum_sq = z12 * z12 + z13 * z13 + z23 * z23;
    return q * q * q - p * p * q * sum_sq +
           2.0 * p * p * p * z12 * z13 * z23 * std::cos(b12 + b23 - b13);
}

double three_user_capacity(double z12, double z13, double z23, double b12,
                           double b13, double b23, double p) {
    const double det = three_user_det(z12, z13, z23, b12, b13, b23, p);
    if (det <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log2(det);
}

} // namespace gusim
