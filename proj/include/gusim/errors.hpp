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

#include <stdexcept>
#include <string>

namespace gusim {

/// Invalid or inconsistent configuration values.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Channel matrix too ill-conditioned for zero-forcing.
class SingularChannel : public std::runtime_error {
  public:
    explicit SingularChannel(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gusim
