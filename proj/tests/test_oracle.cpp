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

#include <chrono>
#include <filesystem>
#include <fstream>

#include <catch2/catch.hpp>

#include "qubopress/error.hpp"
#include "qubopress/oracle.hpp"
#include "support/fixtures.hpp"

using namespace qubopress;
namespace fs = std::filesystem;

namespace {

ModelDescriptor small() {
    std::vector<WeightTensor> t{{0, {2, 2, 1, 1}, {1.0f, 1.0f, 0.5f, 0.5f}},
                                {1, {2, 1, 1, 1}, {2.0f, 1.0f}}};
    return build_descriptor(t, Granularity::Filter, 8);
}

// Writes a shell script and returns a command line that runs it.
struct Script {
    fs::path path;
    explicit Script(const std::string& body) {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("qubopress-oracle-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".sh");
        std::ofstream(path) << body;
    }
    ~Script() { fs::remove(path); }
    std::string command() const { return "sh " + path.string(); }
};

}  // namespace

TEST_CASE("surrogate oracle", "[oracle]") {
    const auto d = small();
    SurrogateOracle oracle(d);
    auto plan = CompressionPlan::identity(d);
    CHECK(oracle.evaluate(plan) == 0.99);

    plan.layers[0].prune[0] = 1;
    const double pruned = oracle.evaluate(plan);
    CHECK(pruned < 0.99);
    plan.layers[1].bits_removed = 4;
    CHECK(oracle.evaluate(plan) < pruned);

    plan = CompressionPlan::identity(d);
    plan.layers[1].prune = {1, 1};
    CHECK(oracle.evaluate(plan) == 0.0);

    SurrogateOracle custom(d, {0.5, 0.3, 0.2});
    CHECK(custom.evaluate(CompressionPlan::identity(d)) == 0.5);
}

TEST_CASE("accuracy parsing", "[oracle]") {
    CHECK(parse_accuracy("0.9817\n") == 0.9817);
    CHECK(parse_accuracy("  1 ") == 1.0);
    CHECK_THROWS_AS(parse_accuracy(""), OracleError);
    CHECK_THROWS_AS(parse_accuracy("0.9 0.8"), OracleError);
    CHECK_THROWS_AS(parse_accuracy("acc=0.9"), OracleError);
}

TEST_CASE("external oracle", "[oracle]") {
    const auto d = small();
    const auto plan = CompressionPlan::identity(d);

    SECTION("reads one decimal") {
        Script s("echo 0.9817\n");
        ExternalOracle oracle(s.command(), std::chrono::seconds(30));
        CHECK(evaluate_accuracy(plan, oracle) == 0.9817);
    }
    SECTION("receives the plan file") {
        Script s("grep -q bits_removed \"$1\" && echo 0.5\n");
        ExternalOracle oracle(s.command(), std::chrono::seconds(30));
        CHECK(oracle.evaluate(plan) == 0.5);
    }
    SECTION("receives the seed") {
        Script s("echo \"0.$QUBOPRESS_ORACLE_SEED\"\n");
        ExternalOracle oracle(s.command(), std::chrono::seconds(30), 25);
        CHECK(oracle.evaluate(plan) == 0.25);
    }
    SECTION("out of range") {
        Script s("echo 1.5\n");
        ExternalOracle oracle(s.command(), std::chrono::seconds(30));
        CHECK_THROWS_AS(evaluate_accuracy(plan, oracle), OracleError);
    }
    SECTION("nonzero exit") {
        Script s("echo 0.9; exit 3\n");
        ExternalOracle oracle(s.command(), std::chrono::seconds(30));
        CHECK_THROWS_AS(oracle.evaluate(plan), OracleError);
    }
    SECTION("timeout") {
        Script s("sleep 30\necho 0.9\n");
        ExternalOracle oracle(s.command(), std::chrono::seconds(1));
        const auto start = std::chrono::steady_clock::now();
        CHECK_THROWS_AS(oracle.evaluate(plan), OracleError);
        CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
    }
}
