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

#include <cstddef>
#include <numbers>
#include <vector>

#include "irsim/linalg.hpp"

// Equivalent-circuit model of one reflecting element: a parallel resonant
// circuit (bottom-layer inductance in parallel with the series branch
// top-layer inductance + varactor capacitance + loss resistance). The
// reflection coefficient follows from the impedance discontinuity against
// free space. All functions are pure and thread-safe.

namespace irsim::circuit {

// Fixed physical constants of the element and the incident signal.
struct CircuitParams {
    double l1_henry = 2.5e-9;                                // bottom layer inductance
    double l2_henry = 0.7e-9;                                // top layer inductance
    double z0_ohm = 377.0;                                   // free-space impedance (real)
    double omega_rad_s = 2.0 * std::numbers::pi * 2.4e9;     // angular frequency
};

// Tunable state: effective capacitance (charge accumulation) and effective
// resistance (semiconductor/metal/dielectric losses).
struct ElementState {
    double c_farad = 0.47e-12;
    double r_ohm = 2.5;
};

// |denominator| of the parallel combination below this magnitude is treated
// as a physically singular parameter combination. Far below any meaningful
// impedance at GHz frequencies.
inline constexpr double kDegenerateEpsilonOhm = 1e-9;

// Impedance of the parallel resonant circuit, in ohms.
// Throws std::invalid_argument on invalid parameters and std::domain_error
// when the parallel combination is degenerate.
cdouble element_impedance(const CircuitParams &params, const ElementState &state);

// Reflection coefficient v = (Z - Z0) / (Z + Z0). |v| <= 1 whenever R >= 0.
cdouble reflection_coefficient(const CircuitParams &params, const ElementState &state);

struct SweepRow {
    double c_farad;
    double r_ohm;
    double amplitude;
    double phase_rad; // principal value in [-pi, pi)
};

// Sweeps C linearly over [c_min, c_max] with n_points samples for every R in
// r_values. Rows are emitted R-major (all C points of r_values[0] first).
std::vector<SweepRow> sweep_reflection(const CircuitParams &params, double c_min, double c_max,
                                       std::size_t n_points, const std::vector<double> &r_values);

} // namespace irsim::circuit
