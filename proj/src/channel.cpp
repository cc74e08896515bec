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

#include "irsim/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "irsim/io.hpp"
#include "irsim/rng.hpp"

namespace irsim::channel {

namespace {

void validate(const Geometry &geom) {
    // d = 0 (user at the AP position) is a legitimate corner of the sweep.
    if (!(geom.ap_irs_distance_m > 0.0) || !(geom.vertical_offset_m > 0.0) ||
        !(geom.ap_user_horizontal_m >= 0.0))
        throw std::invalid_argument("channel: geometry distances must be positive");
}

// One CN(0, power) draw: independent real/imag normals at variance power/2.
cdouble sample_entry(rng::Xoshiro256pp &gen, double power) {
    const auto [z0, z1] = gen.normal_pair();
    const double s = std::sqrt(0.5 * power);
    return {s * z0, s * z1};
}

} // namespace

LinkDistances link_distances(const Geometry &geom) {
    validate(geom);
    const double d = geom.ap_user_horizontal_m;
    const double v = geom.vertical_offset_m;
    const double big_d = geom.ap_irs_distance_m;
    return {std::hypot(d, v), std::hypot(big_d - d, v), big_d};
}

double path_loss_linear(double distance_m, double exponent, const PathLossConfig &cfg) {
    if (!(cfg.ref_loss_db > 0.0))
        throw std::invalid_argument("channel: ref_loss_db must be positive");
    if (distance_m < 1.0)
        throw std::domain_error("channel: distance below the 1 m reference");
    return std::pow(10.0, -cfg.ref_loss_db / 10.0) * std::pow(distance_m, -exponent);
}

ChannelSet sample_channels(std::uint64_t seed, std::uint64_t trial, const Geometry &geom,
                           const PathLossConfig &cfg, std::size_t m_antennas,
                           std::size_t n_elements) {
    if (m_antennas < 1 || n_elements < 1)
        throw std::invalid_argument("channel: M and N must be at least 1");
    const LinkDistances dist = link_distances(geom);
    const double p_hd = path_loss_linear(dist.ap_user_m, cfg.exp_ap_user, cfg);
    const double p_hr = path_loss_linear(dist.irs_user_m, cfg.exp_irs_user, cfg);
    const double p_g = path_loss_linear(dist.ap_irs_m, cfg.exp_ap_irs, cfg);

    ChannelSet ch;
    ch.h_d.resize(m_antennas);
    ch.h_r.resize(n_elements);
    ch.g = CMat(n_elements, m_antennas);

    auto gen_hd = rng::derive_stream(seed, trial, kTagHd);
    for (auto &e : ch.h_d)
        e = sample_entry(gen_hd, p_hd);

    auto gen_hr = rng::derive_stream(seed, trial, kTagHr);
    for (auto &e : ch.h_r)
        e = sample_entry(gen_hr, p_hr);

    auto gen_g = rng::derive_stream(seed, trial, kTagG);
    for (std::size_t n = 0; n < n_elements; ++n)
        for (std::size_t m = 0; m < m_antennas; ++m)
            ch.g(n, m) = sample_entry(gen_g, p_g);

    return ch;
}

void dump_channels_csv(std::ostream &os, const ChannelSet &ch) {
    using io::format_double;
    os << "link,row,col,re,im\n";
    for (std::size_t i = 0; i < ch.h_d.size(); ++i)
        os << "h_d," << i << ",0," << format_double(ch.h_d[i].real()) << ","
           << format_double(ch.h_d[i].imag()) << "\n";
    for (std::size_t i = 0; i < ch.h_r.size(); ++i)
        os << "h_r," << i << ",0," << format_double(ch.h_r[i].real()) << ","
           << format_double(ch.h_r[i].imag()) << "\n";
    for (std::size_t n = 0; n < ch.g.rows(); ++n)
        for (std::size_t m = 0; m < ch.g.cols(); ++m)
            os << "G," << n << "," << m << "," << format_double(ch.g(n, m).real()) << ","
               << format_double(ch.g(n, m).imag()) << "\n";
}

} // namespace irsim::channel
