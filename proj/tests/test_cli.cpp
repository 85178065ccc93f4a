// Copyright 2026 The qweak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run_solve(const std::string &args) {
    const std::string cmd =
        std::string("\"") + QWEAK_SOLVE_EXE + "\" " + args + " --quiet >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) {
        out.push_back(l);
    }
    return out;
}

std::size_t count(const std::string &hay, const std::string &needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos;
         p = hay.find(needle, p + 1)) {
        ++n;
    }
    return n;
}

std::size_t columns(const std::string &line) { return count(line, ",") + 1; }

fs::path scratch(const std::string &name) {
    const fs::path p = fs::temp_directory_path() / ("qweak_cli_" + name);
    fs::remove_all(p);
    return p;
}

/// Small 1D setup that runs in well under a second per strategy.
const std::string kSmall1D =
    "--problem damped_oscillator --set epochs=3 --set qubits=2 --set depth=1 "
    "--set test_functions=6 ";

} // namespace

TEST_CASE("usage errors exit with code 2", "[cli]") {
    const auto out = scratch("usage");
    CHECK(run_solve("--problem damped_oscillator --out " + out.string() +
                    " --set no_such_key=1") == 2);
    CHECK(run_solve("--problem pendulum --out " + out.string()) == 2);
    CHECK(run_solve("--problem burgers --strategy hybrid --out " + out.string()) == 2);
    CHECK(run_solve("--problem burgers --epochs 0 --out " + out.string()) == 2);
    CHECK(run_solve("--problem burgers") == 2);
    CHECK(run_solve("--problem burgers --set rescale=1.5 --epochs 1 --out " +
                    out.string()) == 2);
    CHECK(!fs::exists(out / "history.csv"));
}

TEST_CASE("1D artifacts follow the documented schema", "[cli]") {
    const auto out = scratch("schema1d");
    REQUIRE(run_solve(kSmall1D + "--strategy all --out " + out.string()) == 0);
    const auto hist = lines(slurp(out / "history.csv"));
    REQUIRE(hist.size() == 1 + 4);
    CHECK(hist[0].rfind("epoch,coll_l_de,coll_l_ibv,coll_l_sbc,coll_l_wf,coll_total,"
                        "coll_metric,coll_join_l_de",
                        0) == 0);
    for (const auto &l : hist) {
        CHECK(columns(l) == 1 + 4 * 6);
    }
    const auto sol = lines(slurp(out / "solution.csv"));
    REQUIRE(sol.size() == 1 + 90);
    CHECK(sol[0] == "x,truth,coll,coll_join,weak,both");
    for (const auto &l : sol) {
        CHECK(columns(l) == 6);
    }
    const std::string overlay = slurp(out / "figures" / "solution.svg");
    CHECK(count(overlay, "<polyline") == 5);
    const std::string training = slurp(out / "figures" / "training.svg");
    CHECK(count(training, "<polyline") == 8);
    CHECK(count(training, "stroke-dasharray") >= 4);
    CHECK(fs::exists(out / "config.snapshot"));
    CHECK(!fs::exists(out / "figures" / "error_heatmap.svg"));
}

TEST_CASE("2D artifacts follow the documented schema", "[cli]") {
    const auto out = scratch("schema2d");
    REQUIRE(run_solve("--problem linear_2d --epochs 2 --set qubits=2 --set depth=1 "
                      "--set points_per_axis=6 --set test_functions=4 --out " +
                      out.string()) == 0);
    const auto sol = lines(slurp(out / "solution.csv"));
    REQUIRE(sol.size() == 1 + 36);
    CHECK(sol[0] == "x,y,truth,coll,coll_join,weak,both");
    const auto hist = lines(slurp(out / "history.csv"));
    CHECK(hist.size() == 1 + 3);
    const std::string heat = slurp(out / "figures" / "error_heatmap.svg");
    CHECK(count(heat, "<g class=\"panel\">") == 5);
    CHECK(!fs::exists(out / "figures" / "solution.svg"));
}

TEST_CASE("single strategy runs", "[cli]") {
    const auto out = scratch("single");
    REQUIRE(run_solve(kSmall1D + "--strategy weak --out " + out.string()) == 0);
    const auto sol = lines(slurp(out / "solution.csv"));
    CHECK(sol[0] == "x,truth,weak");
    CHECK(count(slurp(out / "figures" / "solution.svg"), "<polyline") == 2);
}

TEST_CASE("runs are reproducible", "[cli]") {
    const auto a = scratch("repro_a");
    const auto b = scratch("repro_b");
    const auto c = scratch("repro_c");
    REQUIRE(run_solve(kSmall1D + "--seed 5 --out " + a.string()) == 0);
    REQUIRE(run_solve(kSmall1D + "--seed 5 --out " + b.string()) == 0);
    for (const char *f : {"history.csv", "solution.csv", "config.snapshot",
                          "figures/training.svg", "figures/solution.svg"}) {
        INFO(f);
        CHECK(slurp(a / f) == slurp(b / f));
    }
    // the snapshot alone reproduces the run
    REQUIRE(run_solve("--config " + (a / "config.snapshot").string() + " --out " +
                      c.string()) == 0);
    CHECK(slurp(a / "history.csv") == slurp(c / "history.csv"));
    CHECK(slurp(a / "solution.csv") == slurp(c / "solution.csv"));
    CHECK(slurp(a / "config.snapshot") == slurp(c / "config.snapshot"));

    const auto d = scratch("repro_d");
    REQUIRE(run_solve(kSmall1D + "--seed 6 --out " + d.string()) == 0);
    CHECK(slurp(a / "history.csv") != slurp(d / "history.csv"));
}

TEST_CASE("file-system failures exit with code 3", "[cli]") {
    const auto base = scratch("fs");
    fs::create_directories(base);
    {
        std::ofstream blocker(base / "file");
        blocker << "x";
    }
    CHECK(run_solve(kSmall1D + "--epochs 1 --out " + (base / "file" / "out").string()) ==
          3);
}
