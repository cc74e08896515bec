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

#include "irsim/io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

namespace irsim::io {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_file(const std::string &path, const std::string &contents) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    os << contents;
    os.flush();
    if (!os)
        throw IoError("failed writing '" + path + "'");
}

void write_manifest(const std::string &output_path, const std::string &subcommand,
                    const std::vector<std::pair<std::string, std::string>> &entries) {
    std::string text;
    text += "# irsim run manifest; feed back via --config to replay this run\n";
    text += "subcommand=" + subcommand + "\n";
    text += "version=" + std::string(kToolVersion) + "\n";
    for (const auto &[key, value] : entries)
        text += key + "=" + value + "\n";
    text += "output=" + output_path + "\n";
    write_file(output_path + ".manifest", text);
}

} // namespace irsim::io
