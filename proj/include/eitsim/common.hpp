/* Copyright 2026 The eitsim Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace eitsim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Internal unit system: time in us, angular frequency in rad/us, length in um.
// Laser strengths and interaction coefficients are usually quoted as ordinary
// frequencies; these helpers fold in the 2*pi.
constexpr double angular_from_mhz(double f_mhz) { return kTwoPi * f_mhz; }
constexpr double angular_from_ghz(double f_ghz) { return kTwoPi * 1e3 * f_ghz; }

// Bad user input: malformed config files, invalid schedules, geometry that
// violates hard constraints.  Mapped to exit code 2 by the CLI.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Runtime numerical failure: NaN/Inf in the state, step-size underflow,
// norm growth beyond tolerance.  Mapped to exit code 3 by the CLI.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eitsim
