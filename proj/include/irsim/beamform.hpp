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
#include <vector>

#include "irsim/channel.hpp"
#include "irsim/linalg.hpp"
#include "irsim/phase_model.hpp"

// Joint transmit/reflect beamforming for a single user. The transmit side is
// closed form (maximum-ratio transmission); the reflect side maximizes
//
//   ||v^H Phi + h_d^H||^2,   v_n = beta(theta_n) e^{j theta_n}
//
// by alternating optimization over the per-element phases. Each per-element
// subproblem maximizes a scalar objective
//
//   f(theta) = beta(theta)^2 Psi_nn + beta(theta) |phi_n| cos(arg(phi_n) - theta)
//
// over a trust region [arg(phi_n), +/-pi], with three interchangeable
// solvers: a closed-form quadratic interpolation, a 1D grid search, and an
// exhaustive search over quantized phase levels.

namespace irsim::beamform {

using phase_model::PhaseShiftModel;

// Phases plus the reflection values they induce under a given model.
// The two members are kept consistent by construction.
struct ReflectionState {
    std::vector<double> thetas; // [-pi, pi)
    CVec v;                     // v[n] = beta(thetas[n]) e^{j thetas[n]}
};

ReflectionState make_reflection_state(std::vector<double> thetas, const PhaseShiftModel &model);

// Phi = diag(h_r^H) G, the cascaded AP -> IRS -> user channel (N x M).
CMat composite_matrix(const channel::ChannelSet &ch);

// Row vector v^H Phi + h_d^H, returned as its M entries.
CVec effective_row(const CVec &v, const CMat &phi, const CVec &h_d);

// ||v^H Phi + h_d^H||^2, the reflect-side objective.
double objective(const CVec &v, const CMat &phi, const CVec &h_d);

// Maximum-ratio transmit beamformer for the effective channel; ||w||^2 = p_t.
// Throws std::domain_error when the effective channel is zero.
CVec mrt_beamformer(const CVec &v, const CMat &phi, const CVec &h_d, double p_t_watt);

// log2(1 + |(v^H Phi + h_d^H) w|^2 / sigma2), in bps/Hz.
double achievable_rate(const CVec &v, const CVec &w, const channel::ChannelSet &ch,
                       double sigma2_watt);

// Precomputed quadratic form of the reflect-side objective:
// Psi = diag(h_r^H) G G^H diag(h_r) (Hermitian, real nonnegative diagonal),
// h_hat = diag(h_r^H) G h_d.
struct QuadraticTerms {
    CMat psi;
    CVec h_hat;
};

QuadraticTerms quadratic_terms(const channel::ChannelSet &ch);

// Linear coefficient of element n's subproblem given the other elements'
// reflection values: phi_n = 2 * (sum_{m != n} Psi[n,m] v[m] + h_hat[n]).
cdouble element_phi(const QuadraticTerms &qt, const CVec &v, std::size_t n);

// Per-element objective f(theta). theta must be in [-pi, pi).
double element_objective(double theta, double psi_nn, cdouble phi_n,
                         const PhaseShiftModel &model);

struct Interval {
    double lo;
    double hi;
};

// Trust region [arg(phi_n), (-1)^lambda pi] with lambda = 0 for
// arg(phi_n) >= 0 and 1 otherwise, returned with ordered endpoints.
Interval trust_region(double arg_phi);

// Closed-form approximate solver: fits a parabola through f at the trust
// region endpoints and midpoint and returns its stationary point, clamped
// into the region; falls back to the best sampled point when the fit is
// degenerate or worse than the samples. Result is wrapped to [-pi, pi).
double solve_element_quadratic(double psi_nn, cdouble phi_n, const PhaseShiftModel &model);

// Uniform grid search over the trust region (grid_points >= 3) refined by a
// golden-section pass between the best grid point's neighbours.
double solve_element_1d(double psi_nn, cdouble phi_n, const PhaseShiftModel &model,
                        std::size_t grid_points);

// Exhaustive search over the K = 2^bits levels {0, 2pi/K, ...}, each wrapped
// to [-pi, pi) before evaluation.
double solve_element_discrete(double psi_nn, cdouble phi_n, const PhaseShiftModel &model,
                              int bits);

enum class ElementSolver { quadratic_fit, one_d_search, discrete };

struct AOConfig {
    double tol = 1e-6;          // relative objective change between sweeps
    int max_outer_iters = 100;  // maximum number of full sweeps
    ElementSolver element_solver = ElementSolver::quadratic_fit;
    std::size_t grid_points = 1000; // for one_d_search
    int discrete_bits = 2;          // for discrete
    bool full_circle = false;       // one_d_search over all of [-pi, pi) (diagnostics)
};

struct AOResult {
    ReflectionState state;
    std::vector<double> trace; // objective before any sweep, then after each sweep
    bool converged = false;
    int sweeps = 0;
};

// Alternating optimization: sweeps elements n = 1..N, updating each phase via
// the configured solver with the others fixed. An element update is kept only
// if it does not decrease its subproblem objective, so the trace is
// non-decreasing even with approximate solvers. Stops when the relative
// objective change over one sweep drops below cfg.tol.
AOResult ao_optimize(const channel::ChannelSet &ch, const PhaseShiftModel &model,
                     const AOConfig &cfg, std::vector<double> init_thetas);

// AO specialization for the ideal model (unit amplitude): the per-element
// optimum is theta_n = arg(phi_n) in closed form. Starts from all-(-pi).
AOResult ideal_upper_bound(const channel::ChannelSet &ch, const AOConfig &cfg);

// Rate obtained when phases designed under the ideal model are deployed on
// elements that actually follow `practical`: v_n = beta(theta_n) e^{j theta_n},
// MRT on top, rate per the effective channel.
double evaluate_mismatched(const std::vector<double> &ideal_thetas,
                           const PhaseShiftModel &practical, const channel::ChannelSet &ch,
                           double p_t_watt, double sigma2_watt);

// Baseline without the surface: w = sqrt(p_t) h_d / ||h_d||.
double no_irs_rate(const channel::ChannelSet &ch, double p_t_watt, double sigma2_watt);

} // namespace irsim::beamform
