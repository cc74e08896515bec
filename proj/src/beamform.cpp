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

#include "irsim/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irsim::beamform {

using phase_model::amplitude;
using phase_model::wrap_angle;

namespace {

constexpr double kPi = std::numbers::pi;

// Per-element subproblem with arg/abs of phi_n and the model constants
// unpacked; the solvers evaluate f thousands of times per update, so the
// per-call model validation and angle wrapping of the public entry points
// are hoisted out of the loop.
struct Subproblem {
    double psi_nn;
    double mag; // |phi_n|
    double ang; // arg(phi_n), in [-pi, pi)
    double beta_min;
    double phi;
    double k;

    // Same expression order as phase_model::amplitude so both paths agree
    // bit for bit. theta must already be in [-pi, pi].
    double eval(double theta) const {
        const double base = (std::sin(theta - phi) + 1.0) / 2.0;
        const double b = (1.0 - beta_min) * std::pow(base, k) + beta_min;
        return b * b * psi_nn + b * mag * std::cos(ang - theta);
    }
};

Subproblem make_subproblem(double psi_nn, cdouble phi_n, const PhaseShiftModel &model) {
    (void)amplitude(model, -kPi); // validates the model once
    return {psi_nn, std::abs(phi_n), wrap_angle(std::arg(phi_n)),
            model.beta_min, model.phi, model.k};
}

// Signed trust-region endpoint (-1)^lambda * pi.
double region_end(double arg_phi) { return arg_phi >= 0.0 ? kPi : -kPi; }

// Golden-section maximization over [lo, hi] (subset of [-pi, pi]).
double golden_max(const Subproblem &sp, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = sp.eval(c), fd = sp.eval(d);
    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = sp.eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = sp.eval(d);
        }
    }
    return 0.5 * (a + b);
}

// Internal element-update kinds: the three public solvers plus the
// closed-form ideal-model update and the full-circle 1D diagnostic.
enum class UpdateKind { quadratic, one_d, one_d_full, discrete, ideal };

// Grid argmax over [lo, hi] refined by a golden-section pass between the
// best point's neighbours. The uniform-grid scan advances sin/cos by a
// rotation recurrence instead of calling them per point; the accumulated
// drift over 10^3..10^4 steps is ~1e-13, far below the grid resolution, and
// the winning point is re-evaluated directly before use.
double grid_max(const Subproblem &sp, double lo, double hi, std::size_t grid_points) {
    const double step = (hi - lo) / static_cast<double>(grid_points - 1);
    const double cs = std::cos(step), sn = std::sin(step);
    // s: sin/cos of (t - phi), advanced by +step; a: of (ang - t), by -step.
    double s_s = std::sin(lo - sp.phi), c_s = std::cos(lo - sp.phi);
    double s_a = std::sin(sp.ang - lo), c_a = std::cos(sp.ang - lo);
    double best_f = -std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double base = (s_s + 1.0) / 2.0;
        const double b = (1.0 - sp.beta_min) * std::pow(base, sp.k) + sp.beta_min;
        const double f = b * b * sp.psi_nn + b * sp.mag * c_a;
        if (f > best_f) {
            best_f = f;
            best_i = i;
        }
        const double c_s2 = c_s * cs - s_s * sn;
        s_s = s_s * cs + c_s * sn;
        c_s = c_s2;
        const double c_a2 = c_a * cs + s_a * sn;
        s_a = s_a * cs - c_a * sn;
        c_a = c_a2;
    }
    auto grid_at = [&](std::size_t i) {
        return (i + 1 == grid_points) ? hi : lo + step * static_cast<double>(i);
    };
    const double best = grid_at(best_i);
    best_f = sp.eval(best);
    const double g_lo = (best_i == 0) ? lo : grid_at(best_i - 1);
    const double g_hi = (best_i + 1 >= grid_points) ? hi : grid_at(best_i + 1);
    const double refined = golden_max(sp, g_lo, g_hi);
    return sp.eval(refined) > best_f ? refined : best;
}

// Quadratic interpolation through the trust-region endpoints and midpoint:
// the fitted parabola's stationary point, clamped into the region, guarded
// by the best sampled point.
double quadratic_core(const Subproblem &sp) {
    const double a = sp.ang;
    const double p = region_end(a);
    const double theta_b = 0.5 * (a + p);
    const double f1 = sp.eval(a);
    const double f2 = sp.eval(theta_b);
    const double f3 = sp.eval(p);

    double best = a;
    double best_f = f1;
    if (f2 > best_f) {
        best = theta_b;
        best_f = f2;
    }
    if (f3 > best_f) {
        best = p;
        best_f = f3;
    }

    const double den = 4.0 * (f1 - 2.0 * f2 + f3);
    if (den != 0.0) {
        double hat = (p * (3.0 * f1 - 4.0 * f2 + f3) + a * (f1 - 4.0 * f2 + 3.0 * f3)) / den;
        if (std::isfinite(hat)) {
            hat = std::clamp(hat, std::min(a, p), std::max(a, p));
            // Keep the stationary point unless a sampled point is strictly
            // better.
            if (sp.eval(hat) >= best_f)
                return hat;
        }
    }
    return best;
}

double one_d_core(const Subproblem &sp, std::size_t grid_points) {
    const double end = region_end(sp.ang);
    return grid_max(sp, std::min(sp.ang, end), std::max(sp.ang, end), grid_points);
}

// Exhaustive search over the 2^bits quantized levels.
double discrete_core(const Subproblem &sp, int bits) {
    const std::size_t levels = std::size_t{1} << bits;
    const double delta = 2.0 * kPi / static_cast<double>(levels);
    double best = 0.0;
    double best_f = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < levels; ++i) {
        const double t = wrap_angle(delta * static_cast<double>(i));
        const double f = sp.eval(t);
        if (f > best_f) {
            best_f = f;
            best = t;
        }
    }
    return best;
}

double run_update(UpdateKind kind, const Subproblem &sp, const AOConfig &cfg) {
    switch (kind) {
    case UpdateKind::quadratic:
        return quadratic_core(sp);
    case UpdateKind::one_d:
        return one_d_core(sp, cfg.grid_points);
    case UpdateKind::one_d_full:
        return grid_max(sp, -kPi, kPi, cfg.grid_points);
    case UpdateKind::discrete:
        return discrete_core(sp, cfg.discrete_bits);
    case UpdateKind::ideal:
        // Closed-form per-element optimum under the ideal model: phase
        // alignment.
        return sp.ang;
    }
    return sp.ang;
}

AOResult ao_run(const channel::ChannelSet &ch, const PhaseShiftModel &model, const AOConfig &cfg,
                std::vector<double> init_thetas, UpdateKind update) {
    if (!(cfg.tol > 0.0))
        throw std::invalid_argument("ao: tol must be positive");
    if (cfg.max_outer_iters < 1)
        throw std::invalid_argument("ao: max_outer_iters must be at least 1");
    if (cfg.grid_points < 3)
        throw std::invalid_argument("ao: grid_points must be at least 3");
    if (update == UpdateKind::discrete && (cfg.discrete_bits < 1 || cfg.discrete_bits > 30))
        throw std::invalid_argument("ao: discrete_bits must be in [1, 30]");
    const std::size_t n_elems = ch.h_r.size();
    if (init_thetas.size() != n_elems)
        throw std::invalid_argument("ao: init_thetas size must match the element count");
    for (auto &t : init_thetas)
        t = wrap_angle(t);

    const CMat phi_mat = composite_matrix(ch);
    const QuadraticTerms qt = quadratic_terms(ch);

    AOResult res;
    res.state = make_reflection_state(std::move(init_thetas), model);
    double obj = objective(res.state.v, phi_mat, ch.h_d);
    res.trace.push_back(obj);

    for (int sweep = 0; sweep < cfg.max_outer_iters; ++sweep) {
        for (std::size_t n = 0; n < n_elems; ++n) {
            const cdouble phi_n = element_phi(qt, res.state.v, n);
            const Subproblem sp =
                make_subproblem(qt.psi(n, n).real(), phi_n, model);
            const double cand = wrap_angle(run_update(update, sp, cfg));
            // Keep the update only if it does not lose subproblem value;
            // approximate solvers may propose a worse point than the
            // current phase, which would break monotone convergence.
            if (sp.eval(cand) >= sp.eval(res.state.thetas[n])) {
                res.state.thetas[n] = cand;
                res.state.v[n] = phase_model::reflection_value(model, cand);
            }
        }
        const double new_obj = objective(res.state.v, phi_mat, ch.h_d);
        res.trace.push_back(new_obj);
        ++res.sweeps;
        if (std::abs(new_obj - obj) <= cfg.tol * std::max(std::abs(obj), 1e-300)) {
            res.converged = true;
            break;
        }
        obj = new_obj;
    }
    return res;
}

} // namespace

ReflectionState make_reflection_state(std::vector<double> thetas, const PhaseShiftModel &model) {
    ReflectionState st;
    st.v.resize(thetas.size());
    for (std::size_t n = 0; n < thetas.size(); ++n)
        st.v[n] = phase_model::reflection_value(model, thetas[n]);
    st.thetas = std::move(thetas);
    return st;
}

CMat composite_matrix(const channel::ChannelSet &ch) {
    const std::size_t n_elems = ch.g.rows();
    const std::size_t m_ant = ch.g.cols();
    if (ch.h_r.size() != n_elems)
        throw std::invalid_argument("composite_matrix: h_r length must match rows of G");
    CMat phi(n_elems, m_ant);
    for (std::size_t n = 0; n < n_elems; ++n) {
        const cdouble hrc = std::conj(ch.h_r[n]);
        for (std::size_t m = 0; m < m_ant; ++m)
            phi(n, m) = hrc * ch.g(n, m);
    }
    return phi;
}

CVec effective_row(const CVec &v, const CMat &phi, const CVec &h_d) {
    if (v.size() != phi.rows() || h_d.size() != phi.cols())
        throw std::invalid_argument("effective_row: dimension mismatch");
    CVec e(phi.cols());
    for (std::size_t m = 0; m < phi.cols(); ++m) {
        cdouble acc = std::conj(h_d[m]);
        for (std::size_t n = 0; n < phi.rows(); ++n)
            acc += std::conj(v[n]) * phi(n, m);
        e[m] = acc;
    }
    return e;
}

double objective(const CVec &v, const CMat &phi, const CVec &h_d) {
    return squared_norm(effective_row(v, phi, h_d));
}

CVec mrt_beamformer(const CVec &v, const CMat &phi, const CVec &h_d, double p_t_watt) {
    if (!(p_t_watt > 0.0))
        throw std::invalid_argument("mrt_beamformer: transmit power must be positive");
    const CVec e = effective_row(v, phi, h_d);
    const double norm = std::sqrt(squared_norm(e));
    if (norm == 0.0)
        throw std::domain_error("mrt_beamformer: effective channel is zero");
    const double scale = std::sqrt(p_t_watt) / norm;
    CVec w(e.size());
    for (std::size_t m = 0; m < e.size(); ++m)
        w[m] = scale * std::conj(e[m]);
    return w;
}

double achievable_rate(const CVec &v, const CVec &w, const channel::ChannelSet &ch,
                       double sigma2_watt) {
    if (!(sigma2_watt > 0.0))
        throw std::invalid_argument("achievable_rate: noise power must be positive");
    const CVec e = effective_row(v, composite_matrix(ch), ch.h_d);
    cdouble rx = 0.0;
    for (std::size_t m = 0; m < e.size(); ++m)
        rx += e[m] * w[m];
    return std::log2(1.0 + std::norm(rx) / sigma2_watt);
}

QuadraticTerms quadratic_terms(const channel::ChannelSet &ch) {
    const CMat phi = composite_matrix(ch);
    const std::size_t n_elems = phi.rows();
    const std::size_t m_ant = phi.cols();

    QuadraticTerms qt;
    qt.psi = CMat(n_elems, n_elems);
    qt.h_hat.resize(n_elems);

    // Psi = Phi Phi^H; fill the upper triangle and mirror so the matrix is
    // Hermitian by construction, with an exactly real diagonal.
    for (std::size_t n = 0; n < n_elems; ++n) {
        for (std::size_t m = n; m < n_elems; ++m) {
            cdouble acc = 0.0;
            for (std::size_t j = 0; j < m_ant; ++j)
                acc += phi(n, j) * std::conj(phi(m, j));
            if (m == n)
                acc = cdouble(acc.real(), 0.0);
            qt.psi(n, m) = acc;
            qt.psi(m, n) = std::conj(acc);
        }
        cdouble acc = 0.0;
        for (std::size_t j = 0; j < m_ant; ++j)
            acc += phi(n, j) * ch.h_d[j];
        qt.h_hat[n] = acc;
    }
    return qt;
}

cdouble element_phi(const QuadraticTerms &qt, const CVec &v, std::size_t n) {
    const std::size_t n_elems = qt.h_hat.size();
    if (n >= n_elems || v.size() != n_elems)
        throw std::out_of_range("element_phi: index out of range");
    cdouble cross = 0.0;
    for (std::size_t m = 0; m < n_elems; ++m)
        if (m != n)
            cross += qt.psi(n, m) * v[m];
    return 2.0 * (cross + qt.h_hat[n]);
}

double element_objective(double theta, double psi_nn, cdouble phi_n,
                         const PhaseShiftModel &model) {
    return make_subproblem(psi_nn, phi_n, model).eval(theta);
}

Interval trust_region(double arg_phi) {
    if (!(arg_phi >= -kPi) || !(arg_phi < kPi))
        throw std::domain_error("trust_region: arg_phi outside [-pi, pi)");
    const double end = region_end(arg_phi);
    return {std::min(arg_phi, end), std::max(arg_phi, end)};
}

double solve_element_quadratic(double psi_nn, cdouble phi_n, const PhaseShiftModel &model) {
    return wrap_angle(quadratic_core(make_subproblem(psi_nn, phi_n, model)));
}

double solve_element_1d(double psi_nn, cdouble phi_n, const PhaseShiftModel &model,
                        std::size_t grid_points) {
    if (grid_points < 3)
        throw std::invalid_argument("solve_element_1d: grid_points must be at least 3");
    return wrap_angle(one_d_core(make_subproblem(psi_nn, phi_n, model), grid_points));
}

double solve_element_discrete(double psi_nn, cdouble phi_n, const PhaseShiftModel &model,
                              int bits) {
    if (bits < 1 || bits > 30)
        throw std::invalid_argument("solve_element_discrete: bits must be in [1, 30]");
    return discrete_core(make_subproblem(psi_nn, phi_n, model), bits);
}

AOResult ao_optimize(const channel::ChannelSet &ch, const PhaseShiftModel &model,
                     const AOConfig &cfg, std::vector<double> init_thetas) {
    UpdateKind update = UpdateKind::quadratic;
    switch (cfg.element_solver) {
    case ElementSolver::quadratic_fit:
        update = UpdateKind::quadratic;
        break;
    case ElementSolver::one_d_search:
        update = cfg.full_circle ? UpdateKind::one_d_full : UpdateKind::one_d;
        break;
    case ElementSolver::discrete:
        update = UpdateKind::discrete;
        break;
    }
    return ao_run(ch, model, cfg, std::move(init_thetas), update);
}

AOResult ideal_upper_bound(const channel::ChannelSet &ch, const AOConfig &cfg) {
    std::vector<double> init(ch.h_r.size(), -kPi);
    return ao_run(ch, PhaseShiftModel::ideal(), cfg, std::move(init), UpdateKind::ideal);
}

double evaluate_mismatched(const std::vector<double> &ideal_thetas,
                           const PhaseShiftModel &practical, const channel::ChannelSet &ch,
                           double p_t_watt, double sigma2_watt) {
    const ReflectionState st = make_reflection_state(ideal_thetas, practical);
    const CMat phi = composite_matrix(ch);
    const CVec w = mrt_beamformer(st.v, phi, ch.h_d, p_t_watt);
    return achievable_rate(st.v, w, ch, sigma2_watt);
}

double no_irs_rate(const channel::ChannelSet &ch, double p_t_watt, double sigma2_watt) {
    if (!(p_t_watt > 0.0) || !(sigma2_watt > 0.0))
        throw std::invalid_argument("no_irs_rate: powers must be positive");
    const double g = squared_norm(ch.h_d);
    if (g == 0.0)
        throw std::domain_error("no_irs_rate: direct channel is zero");
    return std::log2(1.0 + p_t_watt * g / sigma2_watt);
}

} // namespace irsim::beamform
