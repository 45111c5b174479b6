// Copyright 2026 The gausstail Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gausstail::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInternal = 1, kInputError = 2, kConfigError = 3, kAcceptanceFailure = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tolerances and resource limits. Every key may be overridden from a JSON
// object given with --config; unknown keys are rejected.
struct Config {
  double coeff_rel_tol = 1e-12;
  double oracle_sigma2_rel = 0.005;
  double oracle_sigma2_abs = 1e-3;  // used when the exact area is 0
  double oracle_l1_rel = 0.02;
  double oracle_l0_abs = 0.05;
  double oracle_3d_rel = 0.03;
  double tangent_rel = 0.02;
  double max_domain_diameter = 4.0;
  double max_grid_cells = 3e8;
  int waves = 66;
  double oracle_h_3d = 0.01;
};

Config load_config(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);

// Formats with 17 significant digits in the C locale.
std::string format_number(double x);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gausstail::cli
