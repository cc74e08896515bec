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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "irsim/channel.hpp"
#include "irsim/rng.hpp"

using namespace irsim;
using channel::Geometry;
using channel::PathLossConfig;

TEST_CASE("raw generator streams are deterministic and tag-separated") {
    auto a = rng::derive_stream(42, 3, 1);
    auto b = rng::derive_stream(42, 3, 1);
    auto c = rng::derive_stream(42, 3, 2);
    auto d = rng::derive_stream(42, 4, 1);
    auto e = rng::derive_stream(43, 3, 1);
    bool all_equal = true, any_diff_tag = false, any_diff_trial = false, any_diff_seed = false;
    for (int i = 0; i < 8; ++i) {
        const auto va = a.next();
        all_equal &= (va == b.next());
        any_diff_tag |= (va != c.next());
        any_diff_trial |= (va != d.next());
        any_diff_seed |= (va != e.next());
    }
    CHECK(all_equal);
    CHECK(any_diff_tag);
    CHECK(any_diff_trial);
    CHECK(any_diff_seed);
}

TEST_CASE("uniform and normal moments") {
    auto gen = rng::derive_stream(1234, 0, 0);
    const int n = 100000;
    double mean_u = 0.0, var_u = 0.0;
    double mean_z = 0.0, var_z = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = gen.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        mean_u += u;
        var_u += (u - 0.5) * (u - 0.5);
        const auto [z0, z1] = gen.normal_pair();
        mean_z += z0 + z1;
        var_z += z0 * z0 + z1 * z1;
        cross += z0 * z1;
    }
    mean_u /= n;
    var_u /= n;
    mean_z /= 2.0 * n;
    var_z /= 2.0 * n;
    cross /= n;
    // 4-sigma bands of the corresponding estimators.
    CHECK(std::abs(mean_u - 0.5) <= 4.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(var_u - 1.0 / 12.0) <= 4.0 * 0.0745 / std::sqrt(double(n)));
    CHECK(std::abs(mean_z) <= 4.0 / std::sqrt(2.0 * n));
    CHECK(std::abs(var_z - 1.0) <= 4.0 * std::sqrt(2.0 / (2.0 * n)));
    CHECK(std::abs(cross) <= 4.0 / std::sqrt(double(n)));
}

TEST_CASE("link distances from the two-line geometry") {
    const auto d1 = channel::link_distances({500.0, 2.0, 500.0});
    CHECK(d1.irs_user_m == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d1.ap_irs_m == 500.0);
    CHECK(d1.ap_user_m == doctest::Approx(std::sqrt(500.0 * 500.0 + 4.0)).epsilon(1e-15));

    const auto d2 = channel::link_distances({500.0, 2.0, 0.0});
    CHECK(d2.ap_user_m == doctest::Approx(2.0).epsilon(1e-15));

    const auto d3 = channel::link_distances({500.0, 2.0, 498.0});
    CHECK(d3.irs_user_m == doctest::Approx(2.8284271247461903).epsilon(1e-15));
}

TEST_CASE("path loss reference points") {
    const PathLossConfig cfg{};
    CHECK(channel::path_loss_linear(1.0, 3.8, cfg) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(channel::path_loss_linear(1.0, 2.2, cfg) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(channel::path_loss_linear(10.0, 2.0, cfg) == doctest::Approx(1e-6).epsilon(1e-12));
    // Frozen direct evaluation of 10^-4 * 498^-3.8.
    CHECK(channel::path_loss_linear(498.0, 3.8, cfg) ==
          doctest::Approx(5.6302606079738044e-15).epsilon(1e-12));
    CHECK_THROWS_AS(channel::path_loss_linear(0.5, 2.0, cfg), std::domain_error);
}

TEST_CASE("doubling the reference loss in dB squares the linear factor") {
    PathLossConfig base{};
    PathLossConfig doubled{};
    doubled.ref_loss_db = 80.0;
    for (double d : {1.0, 7.0, 123.0, 500.0}) {
        const double ratio = channel::path_loss_linear(d, 2.8, doubled) /
                             channel::path_loss_linear(d, 2.8, base);
        CHECK(ratio == doctest::Approx(1e-4).epsilon(1e-12));
    }
}

TEST_CASE("channel sampling shapes and determinism") {
    const Geometry geom{500.0, 2.0, 498.0};
    const PathLossConfig cfg{};
    const auto ch1 = channel::sample_channels(9, 17, geom, cfg, 2, 40);
    CHECK(ch1.h_d.size() == 2);
    CHECK(ch1.h_r.size() == 40);
    CHECK(ch1.g.rows() == 40);
    CHECK(ch1.g.cols() == 2);

    const auto ch2 = channel::sample_channels(9, 17, geom, cfg, 2, 40);
    bool identical = ch1.h_d == ch2.h_d && ch1.h_r == ch2.h_r && ch1.g.data() == ch2.g.data();
    CHECK(identical);

    const auto ch3 = channel::sample_channels(9, 18, geom, cfg, 2, 40);
    CHECK(ch1.h_d != ch3.h_d);

    CHECK_THROWS_AS(channel::sample_channels(9, 0, geom, cfg, 0, 4), std::invalid_argument);
}

TEST_CASE("per-entry power matches the link path loss") {
    const Geometry geom{500.0, 2.0, 498.0};
    const PathLossConfig cfg{};
    const auto dist = channel::link_distances(geom);
    const double p_hd = channel::path_loss_linear(dist.ap_user_m, cfg.exp_ap_user, cfg);
    const double p_hr = channel::path_loss_linear(dist.irs_user_m, cfg.exp_irs_user, cfg);
    const double p_g = channel::path_loss_linear(dist.ap_irs_m, cfg.exp_ap_irs, cfg);

    const int trials = 100000;
    double s_hd = 0.0, s_hr = 0.0, s_g = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto ch = channel::sample_channels(33, static_cast<std::uint64_t>(t), geom, cfg, 1, 1);
        s_hd += std::norm(ch.h_d[0]);
        s_hr += std::norm(ch.h_r[0]);
        s_g += std::norm(ch.g(0, 0));
    }
    s_hd /= trials;
    s_hr /= trials;
    s_g /= trials;
    // |h|^2 is exponential with std = mean, so a 4-sigma band at 1e5 samples
    // is +/-1.27%, inside the 2% budget.
    CHECK(std::abs(s_hd - p_hd) <= 0.02 * p_hd);
    CHECK(std::abs(s_hr - p_hr) <= 0.02 * p_hr);
    CHECK(std::abs(s_g - p_g) <= 0.02 * p_g);
    CHECK(std::abs(s_hd - p_hd) <= 4.0 * p_hd / std::sqrt(double(trials)));
}

TEST_CASE("channel dump format") {
    const auto ch = channel::sample_channels(1, 0, {500.0, 2.0, 498.0}, {}, 2, 3);
    std::ostringstream os;
    channel::dump_channels_csv(os, ch);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "link,row,col,re,im");
    std::size_t rows = 0;
    std::string first_hd;
    while (std::getline(is, line)) {
        if (rows == 0)
            first_hd = line;
        ++rows;
    }
    CHECK(rows == 2 + 3 + 3 * 2);
    // First row carries h_d[0] at full precision.
    std::istringstream fs(first_hd);
    std::string link, row, col, re, im;
    std::getline(fs, link, ',');
    std::getline(fs, row, ',');
    std::getline(fs, col, ',');
    std::getline(fs, re, ',');
    std::getline(fs, im, ',');
    CHECK(link == "h_d");
    CHECK(std::stod(re) == ch.h_d[0].real());
    CHECK(std::stod(im) == ch.h_d[0].imag());
}
