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

#include "irsim/phase_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irsim::phase_model {

namespace {

constexpr double kPi = std::numbers::pi;

void validate(const PhaseShiftModel &model) {
    if (!(model.beta_min >= 0.0) || !(model.beta_min <= 1.0))
        throw std::invalid_argument("phase_model: beta_min must lie in [0, 1]");
    if (!(model.phi >= 0.0))
        throw std::invalid_argument("phase_model: phi must be nonnegative");
    if (!(model.k >= 0.0))
        throw std::invalid_argument("phase_model: k must be nonnegative");
}

// Residual statistics of one (phi, k) slice against the samples. For fixed
// phi and k the residual is quadratic in beta_min:
//   sum_i ((t_i - b_i) + beta_min (1 - t_i))^2 = c + b*beta_min + a*beta_min^2
// with t_i = ((sin(theta_i - phi) + 1)/2)^k.
struct SliceStats {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double sse(double beta_min) const { return c + b * beta_min + a * beta_min * beta_min; }
};

SliceStats slice_stats(const std::vector<FitSample> &samples, double phi, double k) {
    SliceStats s;
    for (const auto &sm : samples) {
        const double t = std::pow((std::sin(sm.theta - phi) + 1.0) / 2.0, k);
        const double d = t - sm.beta;
        const double e = 1.0 - t;
        s.a += e * e;
        s.b += 2.0 * d * e;
        s.c += d * d;
    }
    return s;
}

double sse_of(const std::vector<FitSample> &samples, const PhaseShiftModel &m) {
    double s = 0.0;
    for (const auto &sm : samples) {
        const double t = std::pow((std::sin(sm.theta - m.phi) + 1.0) / 2.0, m.k);
        const double r = (1.0 - m.beta_min) * t + m.beta_min - sm.beta;
        s += r * r;
    }
    return s;
}

// Golden-section minimization of fn over [lo, hi]; deterministic fixed
// iteration count.
template <typename Fn> double golden_min(Fn &&fn, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = fn(c), fd = fn(d);
    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = fn(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double wrap_angle(double theta) {
    double t = std::remainder(theta, 2.0 * kPi); // [-pi, pi], ties toward even
    if (t == kPi)
        t = -kPi;
    return t;
}

double amplitude(const PhaseShiftModel &model, double theta) {
    validate(model);
    if (!(theta >= -kPi) || !(theta < kPi))
        throw std::domain_error("phase_model: theta outside [-pi, pi)");
    const double base = (std::sin(theta - model.phi) + 1.0) / 2.0;
    return (1.0 - model.beta_min) * std::pow(base, model.k) + model.beta_min;
}

cdouble reflection_value(const PhaseShiftModel &model, double theta) {
    return std::polar(amplitude(model, theta), theta);
}

FitResult fit(const std::vector<FitSample> &samples) {
    if (samples.size() < 10)
        throw std::invalid_argument("fit: need at least 10 samples");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto &s : samples) {
        lo = std::min(lo, s.theta);
        hi = std::max(hi, s.theta);
    }
    if (hi - lo < kPi)
        throw std::invalid_argument("fit: samples must span at least pi of phase");

    // Coarse grid. The beta_min scan per (phi, k) slice costs O(1) through
    // the quadratic slice statistics.
    PhaseShiftModel best{0.0, 0.0, 0.0};
    double best_sse = std::numeric_limits<double>::infinity();
    for (int pi_idx = 0; pi_idx <= 100; ++pi_idx) {
        const double phi = 0.01 * kPi * pi_idx;
        for (int k_idx = 0; k_idx <= 100; ++k_idx) {
            const double k = 0.05 * k_idx;
            const SliceStats st = slice_stats(samples, phi, k);
            for (int b_idx = 0; b_idx <= 100; ++b_idx) {
                const double bm = 0.01 * b_idx;
                const double sse = st.sse(bm);
                if (sse < best_sse) {
                    best_sse = sse;
                    best = {bm, phi, k};
                }
            }
        }
    }

    // Local refinement: golden section per coordinate around the grid cell,
    // three rounds. A refined coordinate is kept only if it improves the SSE.
    auto refine = [&](double PhaseShiftModel::*coord, double lo_bound, double hi_bound,
                      double halfwidth) {
        const double cur = best.*coord;
        const double cand = golden_min(
            [&](double x) {
                PhaseShiftModel m = best;
                m.*coord = x;
                return sse_of(samples, m);
            },
            std::max(lo_bound, cur - halfwidth), std::min(hi_bound, cur + halfwidth));
        PhaseShiftModel m = best;
        m.*coord = cand;
        if (sse_of(samples, m) < best_sse) {
            best = m;
            best_sse = sse_of(samples, m);
        }
    };
    for (int round = 0; round < 3; ++round) {
        refine(&PhaseShiftModel::beta_min, 0.0, 1.0, 0.01);
        refine(&PhaseShiftModel::phi, 0.0, kPi, 0.01 * kPi);
        refine(&PhaseShiftModel::k, 0.0, 5.0, 0.05);
    }

    const double sse = sse_of(samples, best);
    return {best, std::sqrt(sse / static_cast<double>(samples.size()))};
}

} // namespace irsim::phase_model
