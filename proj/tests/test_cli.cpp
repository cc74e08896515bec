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

// End-to-end checks of the installed command line: exit codes, file outputs,
// manifests, and replayability.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kWorkDir = fs::temp_directory_path() / "irsim_cli_tests";

int run(const std::string &args) {
    const std::string cmd = std::string(IRSIM_CLI_PATH) + " " + args + " >" +
                            (kWorkDir / "stdout.txt").string() + " 2>" +
                            (kWorkDir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    if (WIFEXITED(status))
        return WEXITSTATUS(status);
    return -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::string last_stdout() { return slurp(kWorkDir / "stdout.txt"); }

struct WorkDirSetup {
    WorkDirSetup() {
        fs::remove_all(kWorkDir);
        fs::create_directories(kWorkDir);
    }
};
const WorkDirSetup setup_once;

std::string path(const char *name) { return (kWorkDir / name).string(); }

} // namespace

TEST_CASE("circuit-sweep writes CSV plus manifest") {
    const int rc = run("circuit-sweep --points 40 -o " + path("sweep.csv"));
    CHECK(rc == 0);
    const std::string csv = slurp(kWorkDir / "sweep.csv");
    CHECK(csv.rfind("C_farads,R_ohms,amplitude,phase_rad\n", 0) == 0);
    const std::string manifest = slurp(kWorkDir / "sweep.csv.manifest");
    CHECK(manifest.find("subcommand=circuit-sweep") != std::string::npos);
    CHECK(manifest.find("points=40") != std::string::npos);
    CHECK(manifest.find("version=0.1.0") != std::string::npos);
}

TEST_CASE("usage errors exit with 64") {
    CHECK(run("frobnicate") == 64);
    CHECK(run("circuit-sweep --no-such-flag 1") == 64);
    CHECK(run("optimize --scheme nonsense") == 64);
    CHECK(run("") == 64); // a subcommand is required
}

TEST_CASE("malformed or unknown config exits with 65") {
    {
        std::ofstream os(kWorkDir / "bad.cfg");
        os << "this line has no equals sign\n";
    }
    CHECK(run("experiment --config " + path("bad.cfg")) == 65);
    {
        std::ofstream os(kWorkDir / "unknown.cfg");
        os << "definitely-not-an-option=3\n";
    }
    CHECK(run("experiment --config " + path("unknown.cfg")) == 65);
    CHECK(run("experiment --config " + path("missing.cfg")) == 65);
}

TEST_CASE("filesystem failures exit with 74") {
    CHECK(run("fit-model --input " + path("does_not_exist.csv")) == 74);
    CHECK(run("circuit-sweep -o /nonexistent-dir/sweep.csv") == 74);
}

TEST_CASE("flags override config values and the manifest records the result") {
    {
        std::ofstream os(kWorkDir / "points.cfg");
        os << "# sweep resolution\npoints=50\nr=1.0\n";
    }
    const int rc = run("circuit-sweep --config " + path("points.cfg") + " --points 10 -o " +
                       path("cfg_sweep.csv"));
    CHECK(rc == 0);
    const std::string manifest = slurp(kWorkDir / "cfg_sweep.csv.manifest");
    CHECK(manifest.find("points=10") != std::string::npos); // flag wins
    CHECK(manifest.find("r=1.0") != std::string::npos);     // config applies
    // 10 points, one resistance: header + 10 rows.
    const std::string csv = slurp(kWorkDir / "cfg_sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}

TEST_CASE("experiment runs are reproducible and replayable") {
    const std::string base =
        "experiment --d-list 498 --n 8 --trials 10 --seed 5 --schemes no-irs,ideal-ao ";
    CHECK(run(base + "-o " + path("e1.csv")) == 0);
    CHECK(run(base + "-o " + path("e2.csv")) == 0);
    CHECK(slurp(kWorkDir / "e1.csv") == slurp(kWorkDir / "e2.csv"));

    // Replaying the manifest reproduces the bytes exactly.
    CHECK(run("experiment --config " + path("e1.csv.manifest") + " -o " + path("e3.csv")) == 0);
    CHECK(slurp(kWorkDir / "e1.csv") == slurp(kWorkDir / "e3.csv"));

    // A changed seed changes the output.
    CHECK(run("experiment --config " + path("e1.csv.manifest") + " --seed 6 -o " +
              path("e4.csv")) == 0);
    CHECK(slurp(kWorkDir / "e1.csv") != slurp(kWorkDir / "e4.csv"));
}

TEST_CASE("experiment writes an SVG plot on request") {
    const int rc = run("experiment --d-list 400,498 --n 6 --trials 5 --schemes no-irs -o " +
                       path("p.csv") + " --plot " + path("p.svg"));
    CHECK(rc == 0);
    const std::string svg = slurp(kWorkDir / "p.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("no-irs") != std::string::npos);
}

TEST_CASE("sweep-to-fit pipeline recovers a close model") {
    CHECK(run("circuit-sweep --points 200 -o " + path("fit_in.csv")) == 0);
    CHECK(run("fit-model --input " + path("fit_in.csv") + " -o " + path("fit_out.txt")) == 0);
    const std::string block = slurp(kWorkDir / "fit_out.txt");
    CHECK(block.find("beta_min=") != std::string::npos);
    CHECK(block.find("phi=") != std::string::npos);
    CHECK(block.find("k=") != std::string::npos);
    const auto pos = block.find("rmse=");
    REQUIRE(pos != std::string::npos);
    const double rmse = std::stod(block.substr(pos + 5));
    CHECK(rmse <= 0.05);
    CHECK(fs::exists(kWorkDir / "fit_out.txt.manifest"));
}

TEST_CASE("optimize reports the design and emits requested artifacts") {
    const int rc = run("optimize --scheme practical-quadratic --n 8 --d 498 --seed 3 "
                       "--trace-out " +
                       path("trace.csv") + " --dump-channels " + path("ch.csv"));
    CHECK(rc == 0);
    const std::string out = last_stdout();
    CHECK(out.find("scheme=practical-quadratic") != std::string::npos);
    CHECK(out.find("rate_bpshz=") != std::string::npos);
    CHECK(out.find("converged=true") != std::string::npos);
    CHECK(slurp(kWorkDir / "trace.csv").rfind("sweep,objective\n", 0) == 0);
    CHECK(slurp(kWorkDir / "ch.csv").rfind("link,row,col,re,im\n", 0) == 0);
    CHECK(fs::exists(kWorkDir / "trace.csv.manifest"));
    CHECK(fs::exists(kWorkDir / "ch.csv.manifest"));
}

TEST_CASE("version and help") {
    CHECK(run("--version") == 0);
    CHECK(last_stdout().rfind("0.1.0", 0) == 0);
    CHECK(run("--help") == 0);
    CHECK(last_stdout().find("circuit-sweep") != std::string::npos);
}
