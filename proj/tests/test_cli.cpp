// Copyright 2026 The qubopress Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch2/catch.hpp>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using qubopress::testing::model_manifest;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = qubopress::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct ScratchDir {
    fs::path path;
    ScratchDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("qubopress-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
    std::string operator/(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("cli build reports problem sizes", "[cli]") {
    ScratchDir dir;
    const auto filters = run({"build", model_manifest("lenet5").string(), "--out", dir / "f.qubo"});
    CHECK(filters.code == 0);
    CHECK_THAT(filters.out, Catch::Contains("problem size: 28"));
    CHECK(fs::exists(dir / "f.qubo.index.json"));

    const auto channels =
        run({"build", model_manifest("lenet5").string(), "--granularity", "channel", "--out", dir / "c.qubo"});
    CHECK(channels.code == 0);
    CHECK_THAT(channels.out, Catch::Contains("problem size: 108"));
}

TEST_CASE("cli input errors exit 2", "[cli]") {
    CHECK(run({"build", "/nonexistent/manifest.json"}).code == 2);
    CHECK(run({"build"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"build", model_manifest("lenet5").string(), "--gamma", "-1"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli ingest summarizes a manifest", "[cli]") {
    const auto r = run({"ingest", model_manifest("lenet5").string()});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["problem_size"] == 28);
}

TEST_CASE("cli solve", "[cli]") {
    ScratchDir dir;
    REQUIRE(run({"build", model_manifest("lenet5").string(), "--gamma", "0.5", "--out", dir / "m.qubo"}).code == 0);

    const std::vector<std::string> base{"solve", dir / "m.qubo", "--seed", "11", "--sweeps", "200"};
    auto args = base;
    args.insert(args.end(), {"--out", dir / "a.jsonl", "--plan-out", dir / "a.plan.json"});
    const auto first = run(args);
    REQUIRE(first.code == 0);
    CHECK_THAT(first.out, Catch::Contains("best energy:"));
    CHECK_THAT(first.out, Catch::Contains("reduction:"));
    const auto lines = slurp(dir / "a.jsonl");
    CHECK(count_lines(lines) == 32);
    CHECK(nlohmann::json::parse(slurp(dir / "a.plan.json")).contains("layers"));

    args = base;
    args.insert(args.end(), {"--out", dir / "b.jsonl"});
    REQUIRE(run(args).code == 0);
    CHECK(slurp(dir / "b.jsonl") == lines);

    CHECK(run({"solve", dir / "m.qubo", "--exact"}).code == 2);  // 28 variables is past the enumeration bound
}

TEST_CASE("cli exact solve agrees with the annealer", "[cli]") {
    ScratchDir dir;
    REQUIRE(run({"build", model_manifest("toy").string(), "--gamma", "0.5", "--out", dir / "t.qubo"}).code == 0);
    const auto exact = run({"solve", dir / "t.qubo", "--exact", "--out", dir / "e.jsonl"});
    REQUIRE(exact.code == 0);
    CHECK(count_lines(slurp(dir / "e.jsonl")) == 1);
    REQUIRE(run({"solve", dir / "t.qubo", "--seed", "2", "--sweeps", "2000", "--out", dir / "a.jsonl"}).code == 0);
    const auto lines = slurp(dir / "a.jsonl");
    const auto best = nlohmann::json::parse(lines.substr(0, lines.find('\n')));
    const auto opt = nlohmann::json::parse(slurp(dir / "e.jsonl"));
    CHECK(best["energy"].get<double>() == Approx(opt["energy"].get<double>()).epsilon(1e-9));
}

TEST_CASE("cli solve without a seed reports one", "[cli]") {
    ScratchDir dir;
    REQUIRE(run({"build", model_manifest("lenet5").string(), "--out", dir / "m.qubo"}).code == 0);
    const auto r = run({"solve", dir / "m.qubo", "--sweeps", "10", "--replicas", "2", "--out", dir / "s.jsonl"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out + r.err, Catch::Contains("seed: "));
}

TEST_CASE("cli search is reproducible", "[cli]") {
    ScratchDir dir;
    const std::vector<std::string> base{"search", model_manifest("lenet5").string(), "--surrogate", "--seed", "5",
                                        "--n-iter", "1", "--n-bin", "2", "--sweeps", "100",
                                        "--acc-threshold", "0.9"};
    auto a = base;
    a.insert(a.end(), {"--out", dir / "a.json", "--run-manifest", dir / "a.run.json"});
    auto b = base;
    b.insert(b.end(), {"--out", dir / "b.json", "--run-manifest", dir / "b.run.json"});
    REQUIRE(run(a).code == 0);
    REQUIRE(run(b).code == 0);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    const auto doc = nlohmann::json::parse(slurp(dir / "a.json"));
    CHECK(doc.contains("best"));
    CHECK(doc["trace"].size() >= 5);
    const auto manifest = nlohmann::json::parse(slurp(dir / "a.run.json"));
    CHECK(manifest["command"] == "search");
    CHECK(manifest["inputs"].size() >= 1);
}

TEST_CASE("cli search without a crossing exits 1", "[cli]") {
    ScratchDir dir;
    const auto r = run({"search", model_manifest("lenet5").string(), "--surrogate", "--seed", "1", "--acc-threshold",
                        "0", "--sweeps", "10", "--replicas", "2", "--n-iter", "1", "--out", dir / "s.json"});
    CHECK(r.code == 1);
}

TEST_CASE("cli search oracle failure exits 3", "[cli]") {
    ScratchDir dir;
    const auto r = run({"search", model_manifest("lenet5").string(), "--oracle-cmd", "exit 4 ||", "--seed", "1",
                        "--sweeps", "10", "--out", dir / "s.json"});
    CHECK(r.code == 3);
}

TEST_CASE("cli sweep", "[cli]") {
    ScratchDir dir;
    const auto r = run({"sweep", model_manifest("toy").string(), "--surrogate", "--exact", "--relative-beta",
                        "--betas", "1", "--gammas", "0,0.1,1,10", "--out", dir / "s.csv"});
    REQUIRE(r.code == 0);
    std::istringstream csv(slurp(dir / "s.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "beta,gamma,energy,R,accuracy");
    double previous = -1.0;
    int rows = 0;
    while (std::getline(csv, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        REQUIRE(cells.size() == 5);
        const double reduction = std::stod(cells[3]);
        CHECK(reduction >= previous - 1e-12);
        previous = reduction;
        ++rows;
    }
    CHECK(rows == 4);
}

TEST_CASE("cli one-cell sweep matches build then solve", "[cli]") {
    ScratchDir dir;
    REQUIRE(run({"sweep", model_manifest("toy").string(), "--surrogate", "--exact", "--betas", "0.02", "--gammas",
                 "0.7", "--out", dir / "s.csv"})
                .code == 0);
    REQUIRE(run({"build", model_manifest("toy").string(), "--beta", "0.02", "--gamma", "0.7", "--out", dir / "t.qubo"})
                .code == 0);
    REQUIRE(run({"solve", dir / "t.qubo", "--exact", "--out", dir / "e.jsonl"}).code == 0);
    const auto csv = slurp(dir / "s.csv");
    const auto row = csv.substr(csv.find('\n') + 1);
    std::vector<std::string> cells;
    std::stringstream ss(row);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 5);
    const auto opt = nlohmann::json::parse(slurp(dir / "e.jsonl"));
    CHECK(std::stod(cells[2]) == Approx(opt["energy"].get<double>()).epsilon(1e-12));
}

TEST_CASE("cli sweep grid trends", "[cli]") {
    ScratchDir dir;
    const auto r = run({"sweep", model_manifest("toy").string(), "--surrogate", "--exact", "--relative-beta",
                        "--betas", "0,0.5,1,2", "--gammas", "0.01,0.1,0.3,1,3", "--out", dir / "s.csv"});
    REQUIRE(r.code == 0);
    std::istringstream csv(slurp(dir / "s.csv"));
    std::string line;
    std::getline(csv, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(csv, line)) {
        std::vector<double> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(std::stod(cell));
        rows.push_back(cells);
    }
    REQUIRE(rows.size() == 20);
    auto at = [&](int b, int g) { return rows[static_cast<std::size_t>(b * 5 + g)]; };
    for (int b = 0; b < 4; ++b)
        for (int g = 1; g < 5; ++g) CHECK(at(b, g)[4] <= at(b, g - 1)[4]);  // accuracy rises as gamma falls
    // R is not monotone in beta: at gamma 0.3 the optimum trades a code bit for a pruned group as beta grows.
    CHECK(at(1, 2)[3] < at(2, 2)[3]);
}

TEST_CASE("cli verify", "[cli]") {
    const auto r = run({"verify", model_manifest("lenet5").string(), "--seed", "3", "--samples", "100"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, Catch::Contains("PASS"));
    CHECK_THAT(r.out, !Catch::Contains("FAIL"));
}
