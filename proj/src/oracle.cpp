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
#include "qubopress/oracle.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "qubopress/error.hpp"
#include "qubopress/formats.hpp"

namespace qubopress {

SurrogateOracle::SurrogateOracle(ModelDescriptor descriptor, SurrogateParams params)
    : descriptor_(std::move(descriptor)), params_(params) {
    for (const auto& layer : descriptor_.layers) {
        for (const auto& g : layer.groups) max_magnitude_ += g.mean_magnitude();
        max_bits_removed_ += descriptor_.b_max - 1;
    }
}

double SurrogateOracle::evaluate(const CompressionPlan& plan) {
    validate(plan, descriptor_);
    double magnitude = 0.0;
    double removed = 0.0;
    bool collapsed = false;
    for (std::size_t n = 0; n < plan.layers.size(); ++n) {
        const auto& lp = plan.layers[n];
        for (std::size_t i = 0; i < lp.prune.size(); ++i)
            if (lp.prune[i]) magnitude += descriptor_.layers[n].groups[i].mean_magnitude();
        removed += lp.bits_removed;
        collapsed = collapsed || std::all_of(lp.prune.begin(), lp.prune.end(), [](auto p) { return p != 0; });
    }
    double a = params_.base_accuracy;
    if (max_magnitude_ > 0) a -= params_.prune_penalty * magnitude / max_magnitude_;
    if (max_bits_removed_ > 0) a -= params_.quant_penalty * removed / max_bits_removed_;
    if (collapsed) a -= 1.0;
    return std::clamp(a, 0.0, 1.0);
}

double parse_accuracy(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    const auto last = text.find_last_not_of(" \t\r\n");
    if (first == std::string::npos) throw OracleError("oracle printed nothing");
    const std::string token = text.substr(first, last - first + 1);
    double value = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size())
        throw OracleError("oracle output is not a single decimal: '" + token + "'");
    return value;
}

double evaluate_accuracy(const CompressionPlan& plan, AccuracyOracle& oracle) {
    const double a = oracle.evaluate(plan);
    if (!std::isfinite(a) || a < 0.0 || a > 1.0)
        throw OracleError("oracle accuracy " + format_double(a) + " is outside [0, 1]");
    return a;
}

ExternalOracle::ExternalOracle(std::string command, std::chrono::seconds timeout,
                               std::optional<std::uint64_t> seed)
    : command_(std::move(command)), timeout_(timeout), seed_(seed) {
    if (command_.empty()) throw InputError("oracle command is empty");
}

namespace {

// Removes the plan file on scope exit.
class TempPlanFile {
 public:
    explicit TempPlanFile(const std::string& contents) {
        std::string tmpl = (std::filesystem::temp_directory_path() / "qubopress-plan-XXXXXX.json").string();
        const int fd = ::mkstemps(tmpl.data(), 5);
        if (fd < 0) throw OracleError(std::string("cannot create plan file: ") + std::strerror(errno));
        ::close(fd);
        path_ = tmpl;
        std::ofstream out(path_);
        out << contents;
        if (!out) throw OracleError("cannot write plan file " + path_);
    }
    ~TempPlanFile() { std::filesystem::remove(path_); }
    TempPlanFile(const TempPlanFile&) = delete;
    TempPlanFile& operator=(const TempPlanFile&) = delete;
    const std::string& path() const { return path_; }

 private:
    std::string path_;
};

}  // namespace

double ExternalOracle::evaluate(const CompressionPlan& plan) {
    TempPlanFile file(plan_to_json(plan).dump());
    int fds[2];
    if (::pipe(fds) != 0) throw OracleError(std::string("pipe failed: ") + std::strerror(errno));
    const std::string script = command_ + " \"$1\"";
    const std::string seed_text = seed_ ? std::to_string(*seed_) : std::string();

    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(fds[0]);
        ::close(fds[1]);
        throw OracleError(std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(fds[1], STDOUT_FILENO);
        ::close(fds[0]);
        ::close(fds[1]);
        if (seed_) ::setenv(kOracleSeedEnv, seed_text.c_str(), 1);
        ::execl("/bin/sh", "sh", "-c", script.c_str(), "sh", file.path().c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(fds[1]);

    std::string output;
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    bool timed_out = false;
    char buf[4096];
    for (;;) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            timed_out = true;
            break;
        }
        pollfd pfd{fds[0], POLLIN, 0};
        const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
        if (ready < 0 && errno == EINTR) continue;
        if (ready == 0) continue;
        const ssize_t got = ::read(fds[0], buf, sizeof buf);
        if (got < 0 && errno == EINTR) continue;
        if (got <= 0) break;
        output.append(buf, static_cast<std::size_t>(got));
    }
    ::close(fds[0]);
    if (timed_out) ::kill(-pid, SIGKILL);
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (timed_out) throw OracleError("oracle command timed out after " + std::to_string(timeout_.count()) + " s");
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        throw OracleError("oracle command failed with status " +
                          std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));
    return parse_accuracy(output);
}

}  // namespace qubopress
