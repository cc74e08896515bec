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

#include "irsim/linalg.hpp"

// Random channel synthesis for the downlink scenario: an M-antenna access
// point, an N-element reflecting surface, and a single-antenna user. The AP
// and the surface sit 500 m apart on a line; the user moves on a parallel
// line at 2 m vertical offset. Rayleigh fading on every link, distance
// path-loss per link with its own exponent.

namespace irsim::channel {

struct Geometry {
    double ap_irs_distance_m = 500.0;    // D: AP to surface
    double vertical_offset_m = 2.0;      // v: separation of the two lines
    double ap_user_horizontal_m = 498.0; // d: AP to user along the line
};

struct PathLossConfig {
    double ref_loss_db = 40.0; // attenuation at the 1 m reference distance
    double exp_ap_irs = 2.2;
    double exp_irs_user = 2.8;
    double exp_ap_user = 3.8;
};

struct LinkDistances {
    double ap_user_m;
    double irs_user_m;
    double ap_irs_m;
};

// Euclidean link distances from the two-parallel-lines geometry.
LinkDistances link_distances(const Geometry &geom);

// Linear power gain 10^(-ref_loss_db/10) * distance^(-exponent).
// Throws std::domain_error for distances below the 1 m reference.
double path_loss_linear(double distance_m, double exponent, const PathLossConfig &cfg);

// One realization of the three baseband channels.
struct ChannelSet {
    CVec h_d; // AP -> user, M entries
    CVec h_r; // IRS -> user, N entries
    CMat g;   // AP -> IRS, N x M
};

// Sub-stream tags for rng::derive_stream. Each link of each trial draws from
// its own stream, so realizations are reproducible in isolation and trials
// parallelize without shared state.
inline constexpr std::uint64_t kTagHd = 0;
inline constexpr std::uint64_t kTagHr = 1;
inline constexpr std::uint64_t kTagG = 2;
inline constexpr std::uint64_t kTagInitPhases = 3;

// Draws one channel realization for (seed, trial). Entries are i.i.d.
// circularly-symmetric complex Gaussian with per-entry power equal to the
// link's linear path loss. G is filled row-major.
ChannelSet sample_channels(std::uint64_t seed, std::uint64_t trial, const Geometry &geom,
                           const PathLossConfig &cfg, std::size_t m_antennas,
                           std::size_t n_elements);

// CSV dump (header link,row,col,re,im), full round-trip precision.
void dump_channels_csv(std::ostream &os, const ChannelSet &ch);

} // namespace irsim::channel
