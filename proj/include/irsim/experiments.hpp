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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "irsim/beamform.hpp"
#include "irsim/channel.hpp"
#include "irsim/phase_model.hpp"
#include "irsim/rng.hpp"

// Monte Carlo comparison harness. Five reference schemes:
//
//   ideal-ao             joint design and evaluation under the ideal model
//                        (element-wise AO upper bound)
//   practical-quadratic  AO under the practical model, quadratic-fit solver
//   practical-1d         AO under the practical model, 1D search solver
//   ideal-mismatched     designed under the ideal model, evaluated under the
//                        practical model
//   no-irs               direct link only
//
// plus practical-discrete-b<bits> for quantized phases. Within a trial all
// schemes see the same channel realization, so comparisons are paired.

namespace irsim::experiments {

enum class SchemeKind {
    ideal_ao,
    practical_quadratic,
    practical_one_d,
    ideal_mismatched,
    no_irs,
    practical_discrete,
};

struct Scheme {
    SchemeKind kind = SchemeKind::practical_quadratic;
    int bits = 2; // only for practical_discrete

    std::string id() const;
};

// Parses a canonical scheme id ("practical-discrete-b3" etc.).
// Throws std::invalid_argument for unknown ids.
Scheme parse_scheme(const std::string &id);

// The five comparison schemes in their canonical order.
std::vector<Scheme> default_schemes();

enum class SweepKind { d_sweep, n_sweep, b_sweep };

struct ExperimentConfig {
    std::size_t m_antennas = 2;
    std::size_t n_elements = 40;
    double p_t_dbm = 36.0;
    double sigma2_dbm = -94.0;
    std::size_t trials = 1000;
    phase_model::PhaseShiftModel model{}; // practical model under test
    std::uint64_t seed = 1;
    std::vector<Scheme> schemes = default_schemes();
    SweepKind sweep = SweepKind::d_sweep;
    std::vector<double> d_values = {498.0};
    std::vector<std::size_t> n_values = {};
    std::vector<int> b_values = {};      // b_sweep: one discrete scheme per entry
    channel::Geometry geometry{};        // d is overridden per sweep point
    channel::PathLossConfig path_loss{};
    beamform::AOConfig ao{};
    unsigned threads = 0; // 0 = hardware concurrency
};

struct ResultRow {
    std::string sweep_var; // "d" or "n"
    double sweep_value;
    std::string scheme;
    double mean_rate_bpshz;
    double stderr_bpshz; // standard error of the mean
    std::size_t trials;
    std::uint64_t seed;
};

// Initial phases: each element independently +/-pi (maximum-amplitude start),
// stored as -pi under the half-open angle convention.
std::vector<double> init_phases(rng::Xoshiro256pp &gen, std::size_t n);

// Per-trial rates for a fixed operating point; rates[s][t] is the rate of
// schemes[s] in trial t. Trials are distributed over `threads` workers and
// reduced in trial order, so the result is independent of scheduling.
// A failing trial aborts the run.
std::vector<std::vector<double>> run_trials(const ExperimentConfig &cfg, double d_m,
                                            std::size_t n_elements,
                                            const std::vector<Scheme> &schemes,
                                            std::size_t trials);

// Full sweep: one row per (sweep point, scheme) with mean and standard error.
std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg);

// dBm to watts.
double dbm_to_watt(double dbm);

// Resolved scheme list for a config (expands b_values for b sweeps).
std::vector<Scheme> resolve_schemes(const ExperimentConfig &cfg);

void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows);

// Minimal vector plot of the result table: one polyline per scheme over the
// sweep variable.
void write_results_svg(std::ostream &os, const std::vector<ResultRow> &rows);

// Presets reproducing the three standard studies: rate vs AP-user distance,
// rate vs element count, and the discrete-phase comparison.
ExperimentConfig preset_fig4();
ExperimentConfig preset_fig5();
ExperimentConfig preset_fig6();

} // namespace irsim::experiments
