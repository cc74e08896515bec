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

#include "irsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "irsim/io.hpp"

namespace irsim::experiments {

namespace {

constexpr double kPi = std::numbers::pi;

// Rates of every requested scheme for one channel realization. AO designs are
// shared between schemes that need them (ideal design feeds both ideal-ao and
// ideal-mismatched).
std::vector<double> run_one_trial(const ExperimentConfig &cfg, double d_m,
                                  std::size_t n_elements, const std::vector<Scheme> &schemes,
                                  std::uint64_t trial) {
    channel::Geometry geom = cfg.geometry;
    geom.ap_user_horizontal_m = d_m;
    const channel::ChannelSet ch = channel::sample_channels(cfg.seed, trial, geom, cfg.path_loss,
                                                            cfg.m_antennas, n_elements);
    const double p_t = dbm_to_watt(cfg.p_t_dbm);
    const double sigma2 = dbm_to_watt(cfg.sigma2_dbm);

    auto gen_init = rng::derive_stream(cfg.seed, trial, channel::kTagInitPhases);
    const std::vector<double> init = init_phases(gen_init, n_elements);

    const bool needs_ideal = std::any_of(schemes.begin(), schemes.end(), [](const Scheme &s) {
        return s.kind == SchemeKind::ideal_ao || s.kind == SchemeKind::ideal_mismatched;
    });

    beamform::AOResult ideal_design;
    if (needs_ideal)
        ideal_design = beamform::ideal_upper_bound(ch, cfg.ao);

    const CMat phi = beamform::composite_matrix(ch);
    auto mrt_rate = [&](const beamform::ReflectionState &st) {
        const CVec w = beamform::mrt_beamformer(st.v, phi, ch.h_d, p_t);
        return beamform::achievable_rate(st.v, w, ch, sigma2);
    };

    std::vector<double> rates;
    rates.reserve(schemes.size());
    for (const Scheme &s : schemes) {
        switch (s.kind) {
        case SchemeKind::ideal_ao:
            rates.push_back(mrt_rate(ideal_design.state));
            break;
        case SchemeKind::ideal_mismatched:
            rates.push_back(beamform::evaluate_mismatched(ideal_design.state.thetas, cfg.model,
                                                          ch, p_t, sigma2));
            break;
        case SchemeKind::practical_quadratic: {
            beamform::AOConfig ao = cfg.ao;
            ao.element_solver = beamform::ElementSolver::quadratic_fit;
            rates.push_back(mrt_rate(beamform::ao_optimize(ch, cfg.model, ao, init).state));
            break;
        }
        case SchemeKind::practical_one_d: {
            beamform::AOConfig ao = cfg.ao;
            ao.element_solver = beamform::ElementSolver::one_d_search;
            rates.push_back(mrt_rate(beamform::ao_optimize(ch, cfg.model, ao, init).state));
            break;
        }
        case SchemeKind::practical_discrete: {
            beamform::AOConfig ao = cfg.ao;
            ao.element_solver = beamform::ElementSolver::discrete;
            ao.discrete_bits = s.bits;
            rates.push_back(mrt_rate(beamform::ao_optimize(ch, cfg.model, ao, init).state));
            break;
        }
        case SchemeKind::no_irs:
            rates.push_back(beamform::no_irs_rate(ch, p_t, sigma2));
            break;
        }
    }
    return rates;
}

struct MeanStderr {
    double mean;
    double stderr_;
};

MeanStderr mean_stderr(const std::vector<double> &xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs)
        mean += x;
    mean /= n;
    if (xs.size() < 2)
        return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

} // namespace

std::string Scheme::id() const {
    switch (kind) {
    case SchemeKind::ideal_ao:
        return "ideal-ao";
    case SchemeKind::practical_quadratic:
        return "practical-quadratic";
    case SchemeKind::practical_one_d:
        return "practical-1d";
    case SchemeKind::ideal_mismatched:
        return "ideal-mismatched";
    case SchemeKind::no_irs:
        return "no-irs";
    case SchemeKind::practical_discrete:
        return "practical-discrete-b" + std::to_string(bits);
    }
    return "unknown";
}

Scheme parse_scheme(const std::string &id) {
    if (id == "ideal-ao")
        return {SchemeKind::ideal_ao, 0};
    if (id == "practical-quadratic")
        return {SchemeKind::practical_quadratic, 0};
    if (id == "practical-1d")
        return {SchemeKind::practical_one_d, 0};
    if (id == "ideal-mismatched")
        return {SchemeKind::ideal_mismatched, 0};
    if (id == "no-irs")
        return {SchemeKind::no_irs, 0};
    constexpr const char *prefix = "practical-discrete-b";
    if (id.rfind(prefix, 0) == 0) {
        const std::string suffix = id.substr(std::string(prefix).size());
        if (!suffix.empty() && suffix.find_first_not_of("0123456789") == std::string::npos) {
            const int bits = std::stoi(suffix);
            if (bits >= 1 && bits <= 30)
                return {SchemeKind::practical_discrete, bits};
        }
    }
    throw std::invalid_argument("unknown scheme id: " + id);
}

std::vector<Scheme> default_schemes() {
    return {{SchemeKind::ideal_ao, 0},
            {SchemeKind::practical_quadratic, 0},
            {SchemeKind::practical_one_d, 0},
            {SchemeKind::ideal_mismatched, 0},
            {SchemeKind::no_irs, 0}};
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

std::vector<double> init_phases(rng::Xoshiro256pp &gen, std::size_t n) {
    std::vector<double> thetas(n);
    for (auto &t : thetas) {
        // +/-pi with equal probability; both store as -pi under the
        // half-open convention and give the same reflection value.
        const double raw = (gen.next() & 1u) ? kPi : -kPi;
        t = phase_model::wrap_angle(raw);
    }
    return thetas;
}

std::vector<Scheme> resolve_schemes(const ExperimentConfig &cfg) {
    if (cfg.sweep != SweepKind::b_sweep)
        return cfg.schemes;
    // b sweep: one discrete curve per bit count, then any explicitly listed
    // non-discrete schemes as references.
    std::vector<Scheme> out;
    for (int b : cfg.b_values)
        out.push_back({SchemeKind::practical_discrete, b});
    for (const Scheme &s : cfg.schemes)
        if (s.kind != SchemeKind::practical_discrete)
            out.push_back(s);
    return out;
}

std::vector<std::vector<double>> run_trials(const ExperimentConfig &cfg, double d_m,
                                            std::size_t n_elements,
                                            const std::vector<Scheme> &schemes,
                                            std::size_t trials) {
    if (trials < 1)
        throw std::invalid_argument("run_trials: trials must be at least 1");
    std::vector<std::vector<double>> rates(schemes.size(), std::vector<double>(trials, 0.0));

    unsigned workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(trials)));

    std::atomic<std::uint64_t> next_trial{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::exception_ptr err;

    auto worker = [&] {
        for (;;) {
            const std::uint64_t t = next_trial.fetch_add(1);
            if (t >= trials || failed.load())
                return;
            try {
                const std::vector<double> r = run_one_trial(cfg, d_m, n_elements, schemes, t);
                for (std::size_t s = 0; s < schemes.size(); ++s)
                    rates[s][t] = r[s];
            } catch (...) {
                const std::lock_guard<std::mutex> lock(err_mutex);
                if (!err)
                    err = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    if (err)
        std::rethrow_exception(err); // a failed trial aborts the run
    return rates;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg) {
    const std::vector<Scheme> schemes = resolve_schemes(cfg);
    if (schemes.empty())
        throw std::invalid_argument("run_experiment: no schemes configured");

    struct Point {
        double value;
        double d_m;
        std::size_t n;
    };
    std::vector<Point> points;
    std::string sweep_var;
    switch (cfg.sweep) {
    case SweepKind::d_sweep:
    case SweepKind::b_sweep:
        sweep_var = "d";
        if (cfg.d_values.empty())
            throw std::invalid_argument("run_experiment: d_values is empty");
        for (double d : cfg.d_values)
            points.push_back({d, d, cfg.n_elements});
        break;
    case SweepKind::n_sweep:
        sweep_var = "n";
        if (cfg.n_values.empty())
            throw std::invalid_argument("run_experiment: n_values is empty");
        for (std::size_t n : cfg.n_values)
            points.push_back({static_cast<double>(n), cfg.geometry.ap_user_horizontal_m, n});
        break;
    }

    std::vector<ResultRow> rows;
    rows.reserve(points.size() * schemes.size());
    for (const Point &pt : points) {
        const auto rates = run_trials(cfg, pt.d_m, pt.n, schemes, cfg.trials);
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            const MeanStderr ms = mean_stderr(rates[s]);
            rows.push_back({sweep_var, pt.value, schemes[s].id(), ms.mean, ms.stderr_,
                            cfg.trials, cfg.seed});
        }
    }
    return rows;
}

void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows) {
    using io::format_double;
    os << "sweep_var,sweep_value,scheme,mean_rate_bpshz,stderr,trials,seed\n";
    for (const ResultRow &r : rows)
        os << r.sweep_var << "," << format_double(r.sweep_value) << "," << r.scheme << ","
           << format_double(r.mean_rate_bpshz) << "," << format_double(r.stderr_bpshz) << ","
           << r.trials << "," << r.seed << "\n";
}

void write_results_svg(std::ostream &os, const std::vector<ResultRow> &rows) {
    if (rows.empty())
        throw std::invalid_argument("write_results_svg: no rows");
    // Collect curves in first-seen scheme order.
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<double, double>>> curves;
    double x_min = rows.front().sweep_value, x_max = x_min;
    double y_min = rows.front().mean_rate_bpshz, y_max = y_min;
    for (const ResultRow &r : rows) {
        if (curves.find(r.scheme) == curves.end())
            order.push_back(r.scheme);
        curves[r.scheme].push_back({r.sweep_value, r.mean_rate_bpshz});
        x_min = std::min(x_min, r.sweep_value);
        x_max = std::max(x_max, r.sweep_value);
        y_min = std::min(y_min, r.mean_rate_bpshz);
        y_max = std::max(y_max, r.mean_rate_bpshz);
    }
    if (x_max == x_min)
        x_max = x_min + 1.0;
    if (y_max == y_min)
        y_max = y_min + 1.0;

    constexpr double w = 720.0, h = 480.0, ml = 70.0, mr = 180.0, mt = 30.0, mb = 50.0;
    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - y_min) / (y_max - y_min) * (h - mt - mb); };
    static constexpr const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                              "#ff7f0e", "#9467bd", "#8c564b",
                                              "#e377c2", "#7f7f7f"};

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
       << h - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
       << "\" text-anchor=\"middle\" font-size=\"13\">" << rows.front().sweep_var << "</text>\n";
    os << "<text x=\"18\" y=\"" << (mt + h - mb) / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
       << (mt + h - mb) / 2 << ")\">mean rate (bps/Hz)</text>\n";
    for (double fr : {0.0, 0.5, 1.0}) {
        const double xv = x_min + fr * (x_max - x_min);
        const double yv = y_min + fr * (y_max - y_min);
        os << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 18
           << "\" text-anchor=\"middle\" font-size=\"11\">" << io::format_double(xv)
           << "</text>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << io::format_double(yv) << "</text>\n";
    }
    std::size_t ci = 0;
    for (const std::string &scheme : order) {
        const char *color = palette[ci % (sizeof(palette) / sizeof(palette[0]))];
        auto pts = curves[scheme];
        std::sort(pts.begin(), pts.end());
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto &[x, y] : pts)
            os << px(x) << "," << py(y) << " ";
        os << "\"/>\n";
        for (const auto &[x, y] : pts)
            os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color
               << "\"/>\n";
        const double ly = mt + 18.0 * static_cast<double>(ci);
        os << "<line x1=\"" << w - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << w - mr + 34
           << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << w - mr + 40 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
           << scheme << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
}

ExperimentConfig preset_fig4() {
    ExperimentConfig cfg;
    cfg.sweep = SweepKind::d_sweep;
    cfg.d_values = {400.0, 425.0, 450.0, 470.0, 485.0, 495.0, 498.0};
    return cfg;
}

ExperimentConfig preset_fig5() {
    ExperimentConfig cfg;
    cfg.sweep = SweepKind::n_sweep;
    cfg.n_values = {20, 40, 60, 80};
    cfg.geometry.ap_user_horizontal_m = 498.0;
    return cfg;
}

ExperimentConfig preset_fig6() {
    ExperimentConfig cfg;
    cfg.sweep = SweepKind::b_sweep;
    cfg.d_values = {400.0, 425.0, 450.0, 470.0, 485.0, 495.0, 498.0};
    cfg.b_values = {1, 2, 3};
    cfg.schemes = {{SchemeKind::ideal_ao, 0}, {SchemeKind::ideal_mismatched, 0}};
    return cfg;
}

} // namespace irsim::experiments
