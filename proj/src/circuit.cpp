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

#include "irsim/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include "irsim/phase_model.hpp" // wrap_angle

namespace irsim::circuit {

namespace {

void validate(const CircuitParams &params, const ElementState &state) {
    if (!(params.l1_henry > 0.0) || !(params.l2_henry > 0.0) || !(params.z0_ohm > 0.0) ||
        !(params.omega_rad_s > 0.0))
        throw std::invalid_argument("circuit: L1, L2, Z0 and omega must be strictly positive");
    if (!(state.c_farad > 0.0))
        throw std::invalid_argument("circuit: capacitance must be strictly positive");
    if (state.r_ohm < 0.0)
        throw std::invalid_argument("circuit: resistance must be nonnegative");
}

} // namespace

cdouble element_impedance(const CircuitParams &params, const ElementState &state) {
    validate(params, state);
    const double w = params.omega_rad_s;
    const cdouble jwl1(0.0, w * params.l1_henry);
    // Series branch: top inductor, varactor, loss resistance.
    const cdouble series = cdouble(state.r_ohm, w * params.l2_henry - 1.0 / (w * state.c_farad));
    const cdouble den = jwl1 + series;
    if (std::abs(den) < kDegenerateEpsilonOhm)
        throw std::domain_error("circuit: degenerate resonance, parallel combination singular");
    return jwl1 * series / den;
}

cdouble reflection_coefficient(const CircuitParams &params, const ElementState &state) {
    const cdouble z = element_impedance(params, state);
    return (z - params.z0_ohm) / (z + params.z0_ohm);
}

std::vector<SweepRow> sweep_reflection(const CircuitParams &params, double c_min, double c_max,
                                       std::size_t n_points, const std::vector<double> &r_values) {
    if (!(c_min < c_max))
        throw std::invalid_argument("sweep_reflection: require c_min < c_max");
    if (n_points < 2)
        throw std::invalid_argument("sweep_reflection: require n_points >= 2");

    std::vector<SweepRow> rows;
    rows.reserve(n_points * r_values.size());
    const double step = (c_max - c_min) / static_cast<double>(n_points - 1);
    for (double r : r_values) {
        for (std::size_t i = 0; i < n_points; ++i) {
            const double c = (i + 1 == n_points) ? c_max : c_min + step * static_cast<double>(i);
            const cdouble v = reflection_coefficient(params, {c, r});
            rows.push_back({c, r, std::abs(v), phase_model::wrap_angle(std::arg(v))});
        }
    }
    return rows;
}

} // namespace irsim::circuit
