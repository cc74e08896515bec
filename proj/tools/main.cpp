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

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irsim/beamform.hpp"
#include "irsim/channel.hpp"
#include "irsim/circuit.hpp"
#include "irsim/experiments.hpp"
#include "irsim/io.hpp"
#include "irsim/phase_model.hpp"

namespace {

using irsim::io::format_double;
using KV = std::vector<std::pair<std::string, std::string>>;

// Exit codes (sysexits-style): 64 usage, 65 malformed config, 70 internal
// error, 74 filesystem failure.
constexpr int kExitUsage = 64;
constexpr int kExitConfig = 65;
constexpr int kExitSoftware = 70;
constexpr int kExitIo = 74;

std::vector<double> parse_double_list(const std::string &text, const std::string &flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size())
            throw std::invalid_argument(flag + ": cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw std::invalid_argument(flag + ": empty list");
    return out;
}

std::string join_doubles(const std::vector<double> &xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += (i ? "," : "") + format_double(xs[i]);
    return out;
}

// -------------------------------------------------------------- config file
//
// `--config <path>` loads a flat key=value file (# comments allowed) whose
// keys are the long option names of the invoked subcommand. The file values
// are spliced into the argument list before the user's own flags, and every
// option takes its last occurrence, so command-line flags override the file.
// Run manifests use the same format and can be replayed directly.

struct ConfigFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string &s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string &path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigFileError("cannot open config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string l = trim(line);
        if (l.empty() || l[0] == '#')
            continue;
        const auto eq = l.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigFileError(path + ":" + std::to_string(lineno) + ": expected key=value");
        kv.emplace_back(trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
    }
    return kv;
}

bool is_reserved_config_key(const std::string &key) {
    return key == "subcommand" || key == "version" || key == "output" || key == "config";
}

// Strips --config from `args` and, when present, splices the file's values in
// right after the subcommand token.
std::vector<std::string> apply_config_file(std::vector<std::string> args, const CLI::App &app) {
    std::string config_path;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw ConfigFileError("--config requires a path");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            out.push_back(args[i]);
        }
    }
    if (config_path.empty())
        return out;

    const CLI::App *sub = nullptr;
    std::size_t sub_pos = out.size();
    for (std::size_t i = 0; i < out.size() && sub == nullptr; ++i) {
        for (const CLI::App *cand : app.get_subcommands([](const CLI::App *) { return true; })) {
            if (cand->get_name() == out[i]) {
                sub = cand;
                sub_pos = i;
                break;
            }
        }
    }
    if (sub == nullptr)
        throw ConfigFileError("--config requires a subcommand");

    std::vector<std::string> tokens;
    for (const auto &[key, value] : parse_config_file(config_path)) {
        if (is_reserved_config_key(key))
            continue; // manifest bookkeeping keys
        bool known = false;
        for (const CLI::Option *opt : sub->get_options()) {
            const auto lnames = opt->get_lnames();
            if (std::find(lnames.begin(), lnames.end(), key) != lnames.end()) {
                known = true;
                break;
            }
        }
        if (!known)
            throw ConfigFileError(config_path + ": unknown key '" + key + "' for subcommand '" +
                                  sub->get_name() + "'");
        tokens.push_back("--" + key + "=" + value);
    }
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, tokens.begin(),
               tokens.end());
    return out;
}

void attach_config(CLI::App *sub) {
    // Handled by apply_config_file before parsing; registered here so the
    // flag shows up in help.
    static std::string ignored;
    sub->add_option("--config", ignored, "key=value config file; flags override file values");
}

// ------------------------------------------------------------------ circuit

struct CircuitSweepArgs {
    double l1 = 2.5e-9;
    double l2 = 0.7e-9;
    double z0 = 377.0;
    double freq = 2.4e9;
    double c_min = 0.47e-12;
    double c_max = 2.35e-12;
    std::size_t points = 200;
    std::string r_list = "2.5";
    std::string out = "sweep.csv";
};

void add_circuit_sweep(CLI::App &app, CircuitSweepArgs &args) {
    CLI::App *sub =
        app.add_subcommand("circuit-sweep", "Sweep the equivalent-circuit reflection coefficient");
    attach_config(sub);
    sub->add_option("--l1", args.l1, "bottom layer inductance (H)");
    sub->add_option("--l2", args.l2, "top layer inductance (H)");
    sub->add_option("--z0", args.z0, "free-space impedance (ohm)");
    sub->add_option("--freq", args.freq, "signal frequency (Hz)");
    sub->add_option("--c-min", args.c_min, "capacitance sweep start (F)");
    sub->add_option("--c-max", args.c_max, "capacitance sweep end (F)");
    sub->add_option("--points", args.points, "number of capacitance points");
    sub->add_option("--r", args.r_list, "comma-separated resistance values (ohm)");
    sub->add_option("-o,--out", args.out, "output CSV path");
    sub->callback([&args] {
        const irsim::circuit::CircuitParams params{args.l1, args.l2, args.z0,
                                                   2.0 * std::numbers::pi * args.freq};
        const auto r_values = parse_double_list(args.r_list, "--r");
        const auto rows =
            irsim::circuit::sweep_reflection(params, args.c_min, args.c_max, args.points, r_values);

        std::string csv = "C_farads,R_ohms,amplitude,phase_rad\n";
        for (const auto &row : rows)
            csv += format_double(row.c_farad) + "," + format_double(row.r_ohm) + "," +
                   format_double(row.amplitude) + "," + format_double(row.phase_rad) + "\n";
        irsim::io::write_file(args.out, csv);
        irsim::io::write_manifest(args.out, "circuit-sweep",
                                  KV{{"l1", format_double(args.l1)},
                                     {"l2", format_double(args.l2)},
                                     {"z0", format_double(args.z0)},
                                     {"freq", format_double(args.freq)},
                                     {"c-min", format_double(args.c_min)},
                                     {"c-max", format_double(args.c_max)},
                                     {"points", std::to_string(args.points)},
                                     {"r", args.r_list},
                                     {"out", args.out}});
        std::cout << "wrote " << rows.size() << " rows to " << args.out << "\n";
    });
}

// ---------------------------------------------------------------- fit-model

struct FitModelArgs {
    std::string input;
    std::string out;
};

std::vector<irsim::phase_model::FitSample> read_sweep_csv(const std::string &path) {
    std::ifstream is(path);
    if (!is)
        throw irsim::io::IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line))
        throw irsim::io::IoError("'" + path + "' is empty");
    if (line.rfind("C_farads,R_ohms,amplitude,phase_rad", 0) != 0)
        throw std::invalid_argument("'" + path + "' does not look like a circuit-sweep CSV");
    std::vector<irsim::phase_model::FitSample> samples;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != 4)
            throw std::invalid_argument("'" + path + "': malformed row '" + line + "'");
        samples.push_back({std::stod(fields[3]), std::stod(fields[2])});
    }
    return samples;
}

void add_fit_model(CLI::App &app, FitModelArgs &args) {
    CLI::App *sub =
        app.add_subcommand("fit-model", "Fit the amplitude-vs-phase model to sweep data");
    attach_config(sub);
    sub->add_option("--input", args.input, "circuit-sweep CSV to fit")->required();
    sub->add_option("-o,--out", args.out, "write the parameter block here instead of stdout");
    sub->callback([&args] {
        const auto samples = read_sweep_csv(args.input);
        const auto res = irsim::phase_model::fit(samples);
        std::string block;
        block += "beta_min=" + format_double(res.model.beta_min) + "\n";
        block += "phi=" + format_double(res.model.phi) + "\n";
        block += "k=" + format_double(res.model.k) + "\n";
        block += "rmse=" + format_double(res.rmse) + "\n";
        block += "samples=" + std::to_string(samples.size()) + "\n";
        if (args.out.empty()) {
            std::cout << block;
        } else {
            irsim::io::write_file(args.out, block);
            irsim::io::write_manifest(args.out, "fit-model",
                                      KV{{"input", args.input}, {"out", args.out}});
            std::cout << "wrote fit parameters to " << args.out << "\n";
        }
    });
}

// ----------------------------------------------------------------- optimize

struct OptimizeArgs {
    std::string scheme = "practical-quadratic";
    std::size_t n = 40;
    std::size_t m = 2;
    double d = 498.0;
    std::uint64_t seed = 1;
    std::uint64_t trial = 0;
    std::string solver; // optional override: quadratic | 1d | discrete
    int bits = 2;
    double tol = 1e-6;
    int max_sweeps = 100;
    std::size_t grid_points = 1000;
    bool full_circle = false;
    double beta_min = 0.2;
    double phi = 0.43 * std::numbers::pi;
    double k = 1.6;
    double pt_dbm = 36.0;
    double sigma2_dbm = -94.0;
    double ap_irs_distance = 500.0;
    double vertical_offset = 2.0;
    std::string trace_out;
    std::string dump_channels;
};

void add_optimize(CLI::App &app, OptimizeArgs &args) {
    CLI::App *sub =
        app.add_subcommand("optimize", "Run one beamforming design on one channel realization");
    attach_config(sub);
    sub->add_option("--scheme", args.scheme,
                    "ideal-ao | practical-quadratic | practical-1d | ideal-mismatched | no-irs | "
                    "practical-discrete-b<bits>");
    sub->add_option("--n", args.n, "number of reflecting elements");
    sub->add_option("--m", args.m, "number of AP antennas");
    sub->add_option("--d", args.d, "AP-user horizontal distance (m)");
    sub->add_option("--seed", args.seed, "RNG seed");
    sub->add_option("--trial", args.trial, "trial index within the seed's stream");
    sub->add_option("--solver", args.solver, "element solver override: quadratic | 1d | discrete");
    sub->add_option("--bits", args.bits, "phase resolution bits for the discrete solver");
    sub->add_option("--tol", args.tol, "relative objective tolerance");
    sub->add_option("--max-sweeps", args.max_sweeps, "maximum AO sweeps");
    sub->add_option("--grid-points", args.grid_points, "grid points for the 1D solver");
    sub->add_flag("--full-circle", args.full_circle,
                  "1D solver searches all of [-pi, pi) instead of the trust region");
    sub->add_option("--beta-min", args.beta_min, "model: minimum amplitude");
    sub->add_option("--phi", args.phi, "model: phase offset (rad)");
    sub->add_option("--k", args.k, "model: steepness");
    sub->add_option("--pt-dbm", args.pt_dbm, "transmit power (dBm)");
    sub->add_option("--sigma2-dbm", args.sigma2_dbm, "noise power (dBm)");
    sub->add_option("--ap-irs-distance", args.ap_irs_distance, "AP-IRS distance (m)");
    sub->add_option("--vertical-offset", args.vertical_offset, "user line vertical offset (m)");
    sub->add_option("--trace-out", args.trace_out, "write the objective trace CSV here");
    sub->add_option("--dump-channels", args.dump_channels, "dump the channel realization CSV here");
    sub->callback([&args] {
        using namespace irsim;
        const experiments::Scheme scheme = experiments::parse_scheme(args.scheme);

        channel::Geometry geom{args.ap_irs_distance, args.vertical_offset, args.d};
        const channel::PathLossConfig plc{};
        const channel::ChannelSet ch =
            channel::sample_channels(args.seed, args.trial, geom, plc, args.m, args.n);

        if (!args.dump_channels.empty()) {
            std::ostringstream os;
            channel::dump_channels_csv(os, ch);
            io::write_file(args.dump_channels, os.str());
        }

        const phase_model::PhaseShiftModel model{args.beta_min, args.phi, args.k};
        const double p_t = experiments::dbm_to_watt(args.pt_dbm);
        const double sigma2 = experiments::dbm_to_watt(args.sigma2_dbm);

        beamform::AOConfig ao;
        ao.tol = args.tol;
        ao.max_outer_iters = args.max_sweeps;
        ao.grid_points = args.grid_points;
        ao.discrete_bits = scheme.kind == experiments::SchemeKind::practical_discrete
                               ? scheme.bits
                               : args.bits;
        ao.full_circle = args.full_circle;
        switch (scheme.kind) {
        case experiments::SchemeKind::practical_one_d:
            ao.element_solver = beamform::ElementSolver::one_d_search;
            break;
        case experiments::SchemeKind::practical_discrete:
            ao.element_solver = beamform::ElementSolver::discrete;
            break;
        default:
            ao.element_solver = beamform::ElementSolver::quadratic_fit;
            break;
        }
        if (args.solver == "quadratic")
            ao.element_solver = beamform::ElementSolver::quadratic_fit;
        else if (args.solver == "1d")
            ao.element_solver = beamform::ElementSolver::one_d_search;
        else if (args.solver == "discrete")
            ao.element_solver = beamform::ElementSolver::discrete;
        else if (!args.solver.empty())
            throw std::invalid_argument("--solver: unknown value '" + args.solver + "'");

        auto gen_init = rng::derive_stream(args.seed, args.trial, channel::kTagInitPhases);
        const std::vector<double> init = experiments::init_phases(gen_init, args.n);

        const CMat phi_mat = beamform::composite_matrix(ch);
        auto mrt_rate = [&](const beamform::ReflectionState &st) {
            const CVec w = beamform::mrt_beamformer(st.v, phi_mat, ch.h_d, p_t);
            return beamform::achievable_rate(st.v, w, ch, sigma2);
        };

        double rate = 0.0;
        beamform::AOResult design;
        switch (scheme.kind) {
        case experiments::SchemeKind::ideal_ao:
            design = beamform::ideal_upper_bound(ch, ao);
            rate = mrt_rate(design.state);
            break;
        case experiments::SchemeKind::ideal_mismatched:
            design = beamform::ideal_upper_bound(ch, ao);
            rate = beamform::evaluate_mismatched(design.state.thetas, model, ch, p_t, sigma2);
            break;
        case experiments::SchemeKind::no_irs:
            rate = beamform::no_irs_rate(ch, p_t, sigma2);
            design.converged = true;
            break;
        default:
            design = beamform::ao_optimize(ch, model, ao, init);
            rate = mrt_rate(design.state);
            break;
        }

        std::string trace_csv = "sweep,objective\n";
        for (std::size_t i = 0; i < design.trace.size(); ++i)
            trace_csv += std::to_string(i) + "," + format_double(design.trace[i]) + "\n";

        std::cout << "scheme=" << scheme.id() << "\n"
                  << "rate_bpshz=" << format_double(rate) << "\n"
                  << "sweeps=" << design.sweeps << "\n"
                  << "converged=" << (design.converged ? "true" : "false") << "\n";

        const KV manifest{{"scheme", args.scheme},
                          {"n", std::to_string(args.n)},
                          {"m", std::to_string(args.m)},
                          {"d", format_double(args.d)},
                          {"seed", std::to_string(args.seed)},
                          {"trial", std::to_string(args.trial)},
                          {"solver", args.solver},
                          {"bits", std::to_string(args.bits)},
                          {"tol", format_double(args.tol)},
                          {"max-sweeps", std::to_string(args.max_sweeps)},
                          {"grid-points", std::to_string(args.grid_points)},
                          {"full-circle", args.full_circle ? "true" : "false"},
                          {"beta-min", format_double(args.beta_min)},
                          {"phi", format_double(args.phi)},
                          {"k", format_double(args.k)},
                          {"pt-dbm", format_double(args.pt_dbm)},
                          {"sigma2-dbm", format_double(args.sigma2_dbm)},
                          {"ap-irs-distance", format_double(args.ap_irs_distance)},
                          {"vertical-offset", format_double(args.vertical_offset)}};
        if (!args.trace_out.empty()) {
            irsim::io::write_file(args.trace_out, trace_csv);
            irsim::io::write_manifest(args.trace_out, "optimize", manifest);
        } else {
            std::cout << trace_csv;
        }
        if (!args.dump_channels.empty())
            irsim::io::write_manifest(args.dump_channels, "optimize", manifest);
    });
}

// --------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string preset;
    std::string sweep;
    std::string d_list;
    std::string n_list;
    std::string b_list;
    std::string schemes;
    std::size_t n = 40;
    std::size_t m = 2;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    double pt_dbm = 36.0;
    double sigma2_dbm = -94.0;
    double beta_min = 0.2;
    double phi = 0.43 * std::numbers::pi;
    double k = 1.6;
    double tol = 1e-6;
    int max_sweeps = 100;
    std::size_t grid_points = 1000;
    unsigned threads = 0;
    std::string out = "results.csv";
    std::string plot;
};

void add_experiment(CLI::App &app, ExperimentArgs &args) {
    CLI::App *sub = app.add_subcommand("experiment", "Monte Carlo scheme comparison sweeps");
    attach_config(sub);
    auto *opt_preset =
        sub->add_option("--preset", args.preset, "fig4 (rate vs d) | fig5 (rate vs N) | fig6 "
                                                 "(discrete phases vs d)");
    auto *opt_sweep = sub->add_option("--sweep", args.sweep, "sweep kind: d | n | b");
    auto *opt_d = sub->add_option("--d-list", args.d_list, "comma-separated distances (m)");
    auto *opt_nl = sub->add_option("--n-list", args.n_list, "comma-separated element counts");
    auto *opt_b = sub->add_option("--b-list", args.b_list, "comma-separated bit counts");
    auto *opt_schemes = sub->add_option("--schemes", args.schemes, "comma-separated scheme ids");
    auto *opt_n = sub->add_option("--n", args.n, "number of reflecting elements");
    sub->add_option("--m", args.m, "number of AP antennas");
    sub->add_option("--trials", args.trials, "channel realizations per sweep point");
    sub->add_option("--seed", args.seed, "RNG seed");
    sub->add_option("--pt-dbm", args.pt_dbm, "transmit power (dBm)");
    sub->add_option("--sigma2-dbm", args.sigma2_dbm, "noise power (dBm)");
    sub->add_option("--beta-min", args.beta_min, "model: minimum amplitude");
    sub->add_option("--phi", args.phi, "model: phase offset (rad)");
    sub->add_option("--k", args.k, "model: steepness");
    sub->add_option("--tol", args.tol, "AO relative objective tolerance");
    sub->add_option("--max-sweeps", args.max_sweeps, "maximum AO sweeps");
    sub->add_option("--grid-points", args.grid_points, "grid points for the 1D solver");
    sub->add_option("--threads", args.threads, "worker threads (0 = hardware concurrency)");
    sub->add_option("-o,--out", args.out, "output CSV path");
    sub->add_option("--plot", args.plot, "also render the result curves to this SVG");
    sub->callback([&args, opt_preset, opt_sweep, opt_d, opt_nl, opt_b, opt_schemes, opt_n] {
        using namespace irsim::experiments;

        ExperimentConfig cfg;
        if (opt_preset->count() > 0) {
            if (args.preset == "fig4")
                cfg = preset_fig4();
            else if (args.preset == "fig5")
                cfg = preset_fig5();
            else if (args.preset == "fig6")
                cfg = preset_fig6();
            else
                throw std::invalid_argument("--preset: unknown value '" + args.preset + "'");
        }

        if (opt_sweep->count() > 0) {
            if (args.sweep == "d")
                cfg.sweep = SweepKind::d_sweep;
            else if (args.sweep == "n")
                cfg.sweep = SweepKind::n_sweep;
            else if (args.sweep == "b")
                cfg.sweep = SweepKind::b_sweep;
            else
                throw std::invalid_argument("--sweep: unknown value '" + args.sweep + "'");
        }
        if (opt_d->count() > 0)
            cfg.d_values = parse_double_list(args.d_list, "--d-list");
        if (opt_nl->count() > 0) {
            cfg.n_values.clear();
            for (double v : parse_double_list(args.n_list, "--n-list"))
                cfg.n_values.push_back(static_cast<std::size_t>(v));
        }
        if (opt_b->count() > 0) {
            cfg.b_values.clear();
            for (double v : parse_double_list(args.b_list, "--b-list"))
                cfg.b_values.push_back(static_cast<int>(v));
        }
        if (opt_schemes->count() > 0) {
            cfg.schemes.clear();
            std::stringstream ss(args.schemes);
            std::string id;
            while (std::getline(ss, id, ','))
                if (!id.empty())
                    cfg.schemes.push_back(parse_scheme(id));
        }
        if (opt_n->count() > 0)
            cfg.n_elements = args.n;

        cfg.m_antennas = args.m;
        cfg.trials = args.trials;
        cfg.seed = args.seed;
        cfg.p_t_dbm = args.pt_dbm;
        cfg.sigma2_dbm = args.sigma2_dbm;
        cfg.model = {args.beta_min, args.phi, args.k};
        cfg.ao.tol = args.tol;
        cfg.ao.max_outer_iters = args.max_sweeps;
        cfg.ao.grid_points = args.grid_points;
        cfg.threads = args.threads;

        const auto rows = run_experiment(cfg);

        std::ostringstream csv;
        write_results_csv(csv, rows);
        irsim::io::write_file(args.out, csv.str());

        // Resolved configuration: replaying this manifest reproduces the CSV
        // byte for byte.
        std::string scheme_ids;
        for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
            scheme_ids += (i ? "," : "") + cfg.schemes[i].id();
        std::string n_values;
        for (std::size_t i = 0; i < cfg.n_values.size(); ++i)
            n_values += (i ? "," : "") + std::to_string(cfg.n_values[i]);
        std::string b_values;
        for (std::size_t i = 0; i < cfg.b_values.size(); ++i)
            b_values += (i ? "," : "") + std::to_string(cfg.b_values[i]);
        const char *sweep_name = cfg.sweep == SweepKind::d_sweep   ? "d"
                                 : cfg.sweep == SweepKind::n_sweep ? "n"
                                                                   : "b";
        KV manifest{{"sweep", sweep_name},
                    {"d-list", join_doubles(cfg.d_values)},
                    {"schemes", scheme_ids},
                    {"n", std::to_string(cfg.n_elements)},
                    {"m", std::to_string(cfg.m_antennas)},
                    {"trials", std::to_string(cfg.trials)},
                    {"seed", std::to_string(cfg.seed)},
                    {"pt-dbm", format_double(cfg.p_t_dbm)},
                    {"sigma2-dbm", format_double(cfg.sigma2_dbm)},
                    {"beta-min", format_double(cfg.model.beta_min)},
                    {"phi", format_double(cfg.model.phi)},
                    {"k", format_double(cfg.model.k)},
                    {"tol", format_double(cfg.ao.tol)},
                    {"max-sweeps", std::to_string(cfg.ao.max_outer_iters)},
                    {"grid-points", std::to_string(cfg.ao.grid_points)},
                    {"threads", std::to_string(cfg.threads)},
                    {"out", args.out}};
        if (!n_values.empty())
            manifest.push_back({"n-list", n_values});
        if (!b_values.empty())
            manifest.push_back({"b-list", b_values});
        if (!args.plot.empty())
            manifest.push_back({"plot", args.plot});
        irsim::io::write_manifest(args.out, "experiment", manifest);

        if (!args.plot.empty()) {
            std::ostringstream svg;
            write_results_svg(svg, rows);
            irsim::io::write_file(args.plot, svg.str());
            irsim::io::write_manifest(args.plot, "experiment", manifest);
        }
        std::cout << "wrote " << rows.size() << " result rows to " << args.out << "\n";
    });
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"irsim: reflecting-surface phase-shift modelling and beamforming simulation"};
    app.set_version_flag("--version", irsim::io::kToolVersion);
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CircuitSweepArgs circuit_args;
    FitModelArgs fit_args;
    OptimizeArgs optimize_args;
    ExperimentArgs experiment_args;
    add_circuit_sweep(app, circuit_args);
    add_fit_model(app, fit_args);
    add_optimize(app, optimize_args);
    add_experiment(app, experiment_args);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = apply_config_file(std::move(args), app);
        std::reverse(args.begin(), args.end()); // CLI11 parses back to front
        app.parse(args);
    } catch (const ConfigFileError &e) {
        std::cerr << "irsim: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "irsim: " << e.what() << "\n";
        return kExitUsage;
    } catch (const irsim::io::IoError &e) {
        std::cerr << "irsim: io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument &e) {
        std::cerr << "irsim: invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "irsim: error: " << e.what() << "\n";
        return kExitSoftware;
    }
    return 0;
}
