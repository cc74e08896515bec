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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace irsim::io {

inline constexpr const char *kToolVersion = "0.1.0";

// Filesystem-level failure (distinct exit code at the CLI).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

// Writes <output_path>.manifest: key=value lines recording the subcommand,
// tool version, every resolved option, and the output path. Keys use the CLI
// option names, so the manifest itself can be fed back via --config to replay
// the run byte-identically.
void write_manifest(const std::string &output_path, const std::string &subcommand,
                    const std::vector<std::pair<std::string, std::string>> &entries);

// Writes `contents` to `path`, throwing IoError if the file cannot be
// created or fully written.
void write_file(const std::string &path, const std::string &contents);

} // namespace irsim::io
