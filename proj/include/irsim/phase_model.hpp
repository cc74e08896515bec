// SPDX-License-Identifier: Apache-2.0
//
// irsim - phase-dependent reflecting-surface modelling and beamforming simulation
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
// ------------------------------------------------------------------------

#pragma once

#include <numbers>
#include <vector>

#include "irsim/linalg.hpp"

namespace irsim::phase_model {

// Wraps an angle to its principal value in [-pi, pi). The convention used
// throughout: pi maps to -pi.
double wrap_angle(double theta);

// Analytical amplitude-vs-phase response of a reflecting element:
//
//   beta(theta) = (1 - beta_min) * ((sin(theta - phi) + 1) / 2)^k + beta_min
//
// beta_min is the minimum amplitude, phi the horizontal offset of the
// minimum from -pi/2, and k the steepness of the curve. k = 0 reduces to the
// ideal unit-amplitude response. All elements of a surface share one model
// (identical circuits).
struct PhaseShiftModel {
    double beta_min = 0.2;
    double phi = 0.43 * std::numbers::pi;
    double k = 1.6;

    // Unit amplitude at every phase shift.
    static PhaseShiftModel ideal() { return {1.0, 0.0, 0.0}; }
};

// beta(theta) for theta in [-pi, pi). Throws std::domain_error outside that
// interval and std::invalid_argument for an invalid model.
double amplitude(const PhaseShiftModel &model, double theta);

// Complex reflection value beta(theta) * e^{j theta}.
cdouble reflection_value(const PhaseShiftModel &model, double theta);

struct FitSample {
    double theta; // rad, [-pi, pi)
    double beta;  // observed amplitude
};

struct FitResult {
    PhaseShiftModel model;
    double rmse; // root mean squared amplitude residual
};

// Least-squares fit of (beta_min, phi, k) to amplitude samples. Exhaustive
// coarse grid (beta_min step 0.01 on [0,1], phi step 0.01*pi on [0,pi],
// k step 0.05 on [0,5]) followed by three rounds of per-coordinate
// golden-section refinement. Deterministic; non-convergence shows up as a
// large RMSE, never as a failure.
// Requires >= 10 samples spanning at least pi radians of phase.
FitResult fit(const std::vector<FitSample> &samples);

} // namespace irsim::phase_model
