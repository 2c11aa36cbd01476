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

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gusim/config.hpp"
#include "gusim/geometry.hpp"
#include "gusim/random.hpp"
#include "gusim/scenario.hpp"
#include "gusim/scheduler.hpp"

namespace gusim {

/// One path as the offline sounder estimates it at the BS. `elevation` is
/// the angle of the scatter point above the BS horizontal plane, in
/// (-pi/2, pi/2); `azimuth` is the horizontal angle between the BS->user
/// bearing and the BS->scatterer bearing, folded into [0, pi] (the
/// back-projection depends only on its cosine, so the side is
/// unobservable).
struct PathEstimate {
    double delay = 0.0;     // seconds, total path delay
    double elevation = 0.0; // radians
    double azimuth = 0.0;   // radians
};

enum class PathParam { Delay, Elevation, Azimuth };

/// Sounder element field pattern, polynomial in the angle argument. The
/// default keeps the published cubic coefficients as printed (the two
/// nu^3 terms collapse to 3.99 nu^3); the quartic variant reads the last
/// term as -1.71 nu^4 instead. Both agree at nu = 0 and nu = 1.
double pattern_f(double nu, bool quartic = false);

/// Output SNR of the path estimator: antennas x periods x PN length x
/// |f(nu)|^2 x input SNR. `cfg.antennas` must be resolved (> 0).
double gamma_o(const SounderConfig& cfg, double nu);

/// Array geometry factor of the angle bounds.
double array_delta(const SounderConfig& cfg);

/// Closed-form estimation variance floor for one path parameter, at a
/// path arriving with the given elevation. The azimuth bound diverges as
/// elevation approaches +-pi/2 (throws).
double crlb(PathParam param, const SounderConfig& cfg, double elevation);

struct LocalizedLegs {
    double bs_leg = 0.0; // meters, BS to scatterer
    double ms_leg = 0.0; // meters, scatterer to user
};

/// Back-projects a path estimate to the two leg lengths by solving the
/// single-bounce range equation
///   (c tau - x)^2 = (h_bs - h_ms + x sin(elev))^2
///                 + (d_bs_ms - x cos(elev) cos(az))^2
/// for x = bs_leg; ms_leg = c tau - x. Among admissible roots (both legs
/// positive) the smaller bs_leg wins. Returns nullopt when no root is
/// admissible (e.g. the delay does not exceed the straight BS-user
/// distance).
std::optional<LocalizedLegs> localize_cluster(const PathEstimate& est,
                                              double d_bs_ms, double h_bs,
                                              double h_ms);

/// Exact inverse of localize_cluster for a known scatter point: produces
/// the estimate whose back-projection recovers |bs-scatter| and
/// |scatter-user| to rounding error. Returns nullopt for degenerate
/// geometry (scatterer on the BS vertical axis).
std::optional<PathEstimate> path_estimate_from_geometry(const Point3& scatter,
                                                        const Point3& bs,
                                                        const Point3& user);

struct PathDiag {
    int user = -1;
    int cluster = -1;
    double true_bs_leg = 0.0;
    double true_ms_leg = 0.0;
    double est_bs_leg = 0.0;
    double est_ms_leg = 0.0;
    bool lost = false;
};

/// Visibility matrix rebuilt from error-injected path estimates, plus the
/// entrywise error it induces.
struct PerturbedVisibility {
    Eigen::MatrixXd v_tilde;
    Eigen::MatrixXd error; // V - V~
    int perturbed_paths = 0;
    int lost_paths = 0;
    std::vector<PathDiag> paths;
};

/// For every (user, active cluster) path: forms the true estimate, adds
/// errors of magnitude omega * sqrt(CRLB) with independent random signs
/// per parameter, back-projects, and recomputes the VR gain (through the
/// displaced scatter point) and the cluster attenuation (through the
/// perturbed delay). Lost paths zero their entry. With omega == 0 the
/// matrix is returned unchanged; diagnostics still reflect the
/// localization pass.
PerturbedVisibility perturb_and_rebuild(const ScenarioConfig& cfg, const Drop& drop,
                                        const VisibilityMatrix& v, int omega,
                                        RandomStream rng);

} // namespace gusim
