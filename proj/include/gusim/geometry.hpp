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

#include <cmath>

namespace gusim {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.14159265358979323846;

/// Cartesian position in meters. z is height above ground (z >= 0 for
/// placed entities).
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Point3 operator+(const Point3& a, const Point3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}

inline Point3 operator-(const Point3& a, const Point3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}

inline Point3 operator*(double s, const Point3& a) {
    return {s * a.x, s * a.y, s * a.z};
}

inline double norm(const Point3& a) {
    return std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
}

inline double distance(const Point3& a, const Point3& b) {
    return norm(a - b);
}

/// Distance in the ground (x-y) plane, ignoring heights.
inline double horizontal_distance(const Point3& a, const Point3& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

} // namespace gusim
