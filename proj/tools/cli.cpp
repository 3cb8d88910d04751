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
#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "qubopress/compress.hpp"
#include "qubopress/descriptor.hpp"
#include "qubopress/error.hpp"
#include "qubopress/formats.hpp"
#include "qubopress/oracle.hpp"
#include "qubopress/qubo.hpp"
#include "qubopress/reference.hpp"
#include "qubopress/search.hpp"
#include "qubopress/solver.hpp"

#ifndef QUBOPRESS_VERSION
#define QUBOPRESS_VERSION "0.0.0"
#endif

namespace qubopress::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << int{digest[k]};
    return os.str();
}

// Everything needed to reproduce one invocation.
class RunManifest {
 public:
    explicit RunManifest(std::string command) {
        doc_ = {{"command", std::move(command)}, {"version", QUBOPRESS_VERSION}, {"parameters", json::object()},
                {"inputs", json::array()}};
    }

    template <class T>
    void param(const std::string& key, const T& value) { doc_["parameters"][key] = value; }

    void input(const fs::path& path) {
        doc_["inputs"].push_back({{"path", path.string()}, {"sha256", sha256_file(path)}});
    }

    // A weight manifest also pulls in the blobs it references.
    void model_inputs(const fs::path& manifest) {
        input(manifest);
        std::ifstream in(manifest);
        if (!in) return;
        const json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.contains("layers")) return;
        for (const auto& layer : doc["layers"])
            if (layer.contains("weights") && layer["weights"].is_string())
                input(manifest.parent_path() / layer["weights"].get<std::string>());
    }

    void emit(const std::string& explicit_path, const std::string& out_path, std::ostream& err) const {
        const std::string path = !explicit_path.empty() ? explicit_path : (!out_path.empty() ? out_path + ".run.json" : "");
        if (path.empty()) {
            err << "run-manifest: " << doc_.dump() << '\n';
            return;
        }
        std::ofstream f(path);
        f << doc_.dump(2) << '\n';
    }

 private:
    json doc_;
};

struct AnnealOptions {
    int replicas = 32;
    std::uint64_t sweeps = 10'000;
    double t_hot = 0.0;
    double t_cold = 0.0;
    int rungs = 16;
    std::uint64_t exchange_interval = 1;
    unsigned threads = 0;

    void attach(CLI::App* app) {
        app->add_option("--replicas", replicas, "Independent samples")->capture_default_str();
        app->add_option("--sweeps", sweeps, "Metropolis sweeps per replica")->capture_default_str();
        app->add_option("--t-hot", t_hot, "Hottest temperature (default 10 max|U|)");
        app->add_option("--t-cold", t_cold, "Coldest temperature (default 1e-3 min|U|)");
        app->add_option("--rungs", rungs, "Temperatures in the ladder")->capture_default_str();
        app->add_option("--exchange-interval", exchange_interval, "Sweeps between replica exchanges")
            ->capture_default_str();
        app->add_option("--threads", threads, "Worker threads (0 = all cores)");
    }

    AnnealConfig config(std::uint64_t seed) const {
        AnnealConfig c;
        c.replicas = replicas;
        c.sweeps = sweeps;
        c.ladder = {t_hot, t_cold, rungs};
        c.exchange_interval = exchange_interval;
        c.threads = threads;
        c.seed = seed;
        return c;
    }

    void record(RunManifest& run) const {
        run.param("replicas", replicas);
        run.param("sweeps", sweeps);
        run.param("t_hot", t_hot);
        run.param("t_cold", t_cold);
        run.param("rungs", rungs);
        run.param("exchange_interval", exchange_interval);
    }
};

struct ModelOptions {
    std::string manifest;
    std::string granularity = "filter";
    std::optional<int> b_max;

    void attach(CLI::App* app) {
        app->add_option("manifest", manifest, "Model manifest (weights or stats-only)")->required();
        app->add_option("--granularity", granularity, "filter | channel")->capture_default_str();
        app->add_option("--b-max", b_max, "Original bit width (default: from manifest)");
    }

    ModelDescriptor load() const { return load_descriptor(manifest, parse_granularity(granularity), b_max); }

    void record(RunManifest& run, const ModelDescriptor& d) const {
        run.model_inputs(manifest);
        run.param("granularity", granularity);
        run.param("b_max", d.b_max);
    }
};

struct OracleOptions {
    std::string command;
    bool surrogate = false;
    int timeout_s = 3600;

    void attach(CLI::App* app) {
        auto* cmd = app->add_option("--oracle-cmd", command, "Accuracy oracle: invoked as '<cmd> <plan.json>'");
        auto* sur = app->add_flag("--surrogate", surrogate, "Use the built-in surrogate accuracy model");
        cmd->excludes(sur);
        app->add_option("--oracle-timeout", timeout_s, "Seconds before the oracle is killed")->capture_default_str();
    }

    std::unique_ptr<AccuracyOracle> make(const ModelDescriptor& d, std::uint64_t seed) const {
        if (surrogate) return std::make_unique<SurrogateOracle>(d);
        if (command.empty()) throw InputError("pass either --oracle-cmd or --surrogate");
        return std::make_unique<ExternalOracle>(command, std::chrono::seconds(timeout_s), seed);
    }

    void record(RunManifest& run) const {
        run.param("oracle", surrogate ? std::string("surrogate") : command);
        run.param("oracle_timeout_s", timeout_s);
    }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& out) {
    if (seed) return *seed;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    out << "seed: " << s << '\n';
    return s;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError("cannot parse grid value '" + item + "'");
        }
    }
    if (values.empty()) throw InputError("grid is empty");
    return values;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f << text;
}

json trace_json(const SearchState& state) {
    json rows = json::array();
    for (const auto& r : state.trace)
        rows.push_back({{"beta", r.beta}, {"gamma", r.gamma}, {"energy", r.energy}, {"R", r.reduction},
                        {"accuracy", r.accuracy}});
    json best = nullptr;
    if (state.best)
        best = {{"R", state.best->reduction}, {"beta", state.best->beta}, {"gamma", state.best->gamma},
                {"accuracy", state.best->accuracy}, {"plan", plan_to_json(state.best->plan)}};
    return {{"best", best}, {"beta", state.beta}, {"gamma", state.gamma}, {"trace", rows}};
}

// ---------------------------------------------------------------------------

int cmd_ingest(const ModelOptions& model, const std::string& run_path, std::ostream& out, std::ostream& err) {
    const auto d = model.load();
    RunManifest run("ingest");
    model.record(run, d);
    json layers = json::array();
    for (const auto& l : d.layers)
        layers.push_back({{"id", l.id}, {"groups", l.groups.size()}, {"q_bits", l.q_bits}, {"weights", l.weight_count()}});
    out << json{{"b_max", d.b_max}, {"granularity", std::string(to_string(d.granularity))},
                {"total_bits", d.total_bits()}, {"problem_size", d.problem_size()}, {"layers", layers}}
                .dump(2)
        << '\n';
    run.emit(run_path, "", err);
    return kOk;
}

struct BuildArgs {
    ModelOptions model;
    std::optional<double> beta;
    double gamma = 1.0;
    std::string out;
    std::string index;
    std::string run;
};

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
    const auto d = a.model.load();
    const auto coeffs = build_coefficients(d);
    const VariableIndex index(d);
    const Hyperparameters hp{a.beta.value_or(init_beta(coeffs)), a.gamma};
    const auto qubo = assemble_qubo(coeffs, hp, index);
    out << "problem size: " << d.problem_size() << '\n';
    out << "beta: " << format_double(hp.beta) << '\n';
    out << "gamma: " << format_double(hp.gamma) << '\n';
    out << "nonzeros: " << qubo.entries().size() << '\n';
    RunManifest run("build");
    a.model.record(run, d);
    run.param("beta", hp.beta);
    run.param("gamma", hp.gamma);
    if (!a.out.empty()) {
        std::ostringstream text;
        write_qubo_text(text, qubo);
        write_text(a.out, text.str());
        const std::string index_path = a.index.empty() ? a.out + ".index.json" : a.index;
        write_text(index_path, index_sidecar(d).dump(1) + "\n");
        run.param("out", a.out);
        run.param("index", index_path);
    }
    run.emit(a.run, a.out, err);
    return kOk;
}

struct SolveArgs {
    std::string qubo;
    std::string index;
    AnnealOptions anneal;
    std::optional<std::uint64_t> seed;
    bool exact = false;
    std::string out;
    std::string plan_out;
    std::string run;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    std::ifstream in(a.qubo);
    if (!in) throw InputError("cannot open qubo file: " + a.qubo);
    const QuboMatrix qubo = read_qubo_text(in);

    std::optional<ModelDescriptor> desc;
    const std::string index_path = a.index.empty() ? a.qubo + ".index.json" : a.index;
    if (fs::exists(index_path)) {
        std::ifstream idx(index_path);
        json doc;
        try {
            doc = json::parse(idx);
        } catch (const json::exception& e) {
            throw InputError(std::string("malformed index sidecar: ") + e.what());
        }
        desc = descriptor_from_sidecar(doc);
        if (desc->problem_size() != qubo.dim()) throw InputError("index sidecar does not match the qubo dimension");
    } else if (!a.index.empty()) {
        throw InputError("cannot open index sidecar: " + a.index);
    }

    RunManifest run("solve");
    run.input(a.qubo);
    if (desc) run.input(index_path);
    std::vector<Solution> solutions;
    if (a.exact) {
        solutions.push_back(brute_force_solve(qubo));
        run.param("solver", "exact");
    } else {
        const std::uint64_t seed = resolve_seed(a.seed, out);
        solutions = anneal(qubo, a.anneal.config(seed));
        run.param("solver", "anneal");
        run.param("seed", seed);
        a.anneal.record(run);
    }

    std::ostringstream lines;
    for (const auto& s : solutions) lines << solution_json_line(s) << '\n';
    if (a.out.empty())
        out << lines.str();
    else
        write_text(a.out, lines.str());

    const Solution& best = solutions.front();
    out << "best energy: " << format_double(best.energy) << '\n';
    if (desc) {
        const VariableIndex index(*desc);
        const auto coeffs = build_coefficients(*desc);
        out << "reduction: " << format_double(reduction_from_coefficients(coeffs, index, best.x)) << '\n';
        if (!a.plan_out.empty())
            write_text(a.plan_out, plan_to_json(decode_solution(best.x, index, *desc)).dump(2) + "\n");
    } else if (!a.plan_out.empty()) {
        throw InputError("--plan-out needs the index sidecar");
    }
    run.emit(a.run, a.out, err);
    return kOk;
}

struct SearchArgs {
    ModelOptions model;
    OracleOptions oracle;
    AnnealOptions anneal;
    double acc_threshold = 0.97;
    int n_bin = 5;
    int n_iter = 5;
    std::optional<double> gamma_init;
    std::optional<std::uint64_t> seed;
    bool exact = false;
    std::string out;
    std::string plan_out;
    std::string run;
};

int cmd_search(const SearchArgs& a, std::ostream& out, std::ostream& err) {
    const auto d = a.model.load();
    const std::uint64_t seed = resolve_seed(a.seed, out);
    SearchConfig config;
    config.acc_threshold = a.acc_threshold;
    config.n_bin = a.n_bin;
    config.n_iter = a.n_iter;
    config.gamma_init = a.gamma_init;
    config.seed = seed;
    config.solver = a.exact ? SolverKind::Exact : SolverKind::Anneal;
    config.anneal = a.anneal.config(seed);
    auto oracle = a.oracle.make(d, seed);

    RunManifest run("search");
    a.model.record(run, d);
    a.oracle.record(run);
    a.anneal.record(run);
    run.param("acc_threshold", a.acc_threshold);
    run.param("n_bin", a.n_bin);
    run.param("n_iter", a.n_iter);
    run.param("seed", seed);
    run.param("solver", a.exact ? "exact" : "anneal");
    if (a.gamma_init) run.param("gamma_init", *a.gamma_init);

    auto publish = [&](const json& doc) {
        if (a.out.empty())
            out << doc.dump(2) << '\n';
        else
            write_text(a.out, doc.dump(2) + "\n");
        run.emit(a.run, a.out, err);
    };

    SearchState state;
    try {
        state = hyperparameter_search(config, d, *oracle);
    } catch (const SearchAborted& e) {
        json doc = trace_json(e.partial());
        doc["aborted"] = e.what();
        publish(doc);
        err << "search aborted: " << e.what() << '\n';
        return e.oracle_failure() ? kOracleError : kNoSolution;
    }
    publish(trace_json(state));
    if (!state.best) {
        err << "search found no solution meeting the accuracy threshold\n";
        return kNoSolution;
    }
    out << "best R: " << format_double(state.best->reduction) << '\n';
    out << "best accuracy: " << format_double(state.best->accuracy) << '\n';
    out << "beta: " << format_double(state.best->beta) << "  gamma: " << format_double(state.best->gamma) << '\n';
    out << "oracle calls: " << state.trace.size() << '\n';
    if (!a.plan_out.empty()) write_text(a.plan_out, plan_to_json(state.best->plan).dump(2) + "\n");
    return kOk;
}

struct SweepArgs {
    ModelOptions model;
    OracleOptions oracle;
    AnnealOptions anneal;
    std::string betas;
    std::string gammas;
    bool relative_beta = false;
    std::optional<std::uint64_t> seed;
    bool exact = false;
    std::string out;
    std::string run;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    const auto d = a.model.load();
    auto betas = parse_list(a.betas);
    const auto gammas = parse_list(a.gammas);
    if (a.relative_beta) {
        const double base = init_beta(build_coefficients(d));
        for (double& b : betas) b *= base;
    }
    const std::uint64_t seed = resolve_seed(a.seed, out);
    auto oracle = a.oracle.make(d, seed);
    const auto rows = grid_sweep(d, betas, gammas, *oracle, a.exact ? SolverKind::Exact : SolverKind::Anneal,
                                 a.anneal.config(seed));
    std::ostringstream csv;
    csv << "beta,gamma,energy,R,accuracy\n";
    for (const auto& r : rows) {
        csv << format_double(r.beta) << ',' << format_double(r.gamma) << ',' << format_double(r.energy) << ','
            << format_double(r.reduction) << ',';
        if (r.accuracy) csv << format_double(*r.accuracy);
        csv << '\n';
    }
    if (a.out.empty())
        out << csv.str();
    else
        write_text(a.out, csv.str());
    RunManifest run("sweep");
    a.model.record(run, d);
    a.oracle.record(run);
    a.anneal.record(run);
    run.param("betas", betas);
    run.param("gammas", gammas);
    run.param("seed", seed);
    run.param("solver", a.exact ? "exact" : "anneal");
    run.emit(a.run, a.out, err);
    return kOk;
}

struct VerifyArgs {
    ModelOptions model;
    int samples = 1000;
    int hyperparameters = 5;
    int plans = 500;
    std::optional<std::uint64_t> seed;
    std::string run;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    const auto d = a.model.load();
    const std::uint64_t seed = resolve_seed(a.seed, out);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto coeffs = build_coefficients(d);
    const VariableIndex index(d);
    const double beta0 = init_beta(coeffs);
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
        all_ok = all_ok && ok;
    };

    std::vector<Hyperparameters> hps;
    for (int h = 0; h < a.hyperparameters; ++h)
        hps.push_back({2.0 * beta0 * unit(rng), std::pow(10.0, -3.0 + 4.0 * unit(rng))});

    double worst = 0.0;
    for (const auto& hp : hps) {
        const auto qubo = assemble_qubo(coeffs, hp, index);
        for (int s = 0; s < a.samples; ++s) {
            Assignment x(index.size());
            for (auto& v : x) v = static_cast<std::uint8_t>(bit(rng));
            const auto plan = decode_solution(x, index, d);
            const double direct = reference::hamiltonian(d, plan, hp);
            const double scale = reference::pruning_loss(d, plan) + hp.beta * reference::quantization_loss(plan) +
                                 hp.gamma * reference::reduction(d, plan);
            const double err_rel = std::abs(evaluate_energy(qubo, x) - direct) / std::max(scale, 1e-300);
            worst = std::max(worst, err_rel);
        }
    }
    report("energy-identity", worst <= 1e-9, "max relative error " + format_double(worst));

    worst = 0.0;
    for (int p = 0; p < a.plans; ++p) {
        Assignment x(index.size());
        for (auto& v : x) v = static_cast<std::uint8_t>(bit(rng));
        const auto plan = decode_solution(x, index, d);
        const double direct = reduction_rate(d, plan);
        const double coeff = reduction_from_coefficients(coeffs, index, encode_plan(plan, index));
        worst = std::max(worst, std::abs(direct - coeff) / std::max(std::abs(direct), 1e-300));
    }
    report("reduction-identity", worst <= 1e-12, "max relative error " + format_double(worst));

    if (d.problem_size() <= 20) {
        int hits = 0;
        for (const auto& hp : hps) {
            const auto qubo = assemble_qubo(coeffs, hp, index);
            const double exact = brute_force_solve(qubo).energy;
            AnnealConfig cfg;
            cfg.seed = seed;
            const double got = anneal(qubo, cfg).front().energy;
            if (got <= exact + 1e-9 * std::max(std::abs(exact), 1e-12)) ++hits;
        }
        report("oracle-equivalence", hits == static_cast<int>(hps.size()),
               std::to_string(hits) + "/" + std::to_string(hps.size()) + " annealed minima match brute force");
    } else {
        out << "SKIP oracle-equivalence  problem size " << d.problem_size() << " exceeds 20\n";
    }

    RunManifest run("verify");
    a.model.record(run, d);
    run.param("seed", seed);
    run.param("samples", a.samples);
    run.param("plans", a.plans);
    run.emit(a.run, "", err);
    return all_ok ? kOk : kNoSolution;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"qubopress: joint pruning-quantization as a QUBO"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QUBOPRESS_VERSION);

    ModelOptions ingest_model;
    std::string ingest_run;
    auto* ingest = app.add_subcommand("ingest", "Summarize a model manifest");
    ingest_model.attach(ingest);
    ingest->add_option("--run-manifest", ingest_run, "Where to write the run manifest");

    BuildArgs build_args;
    auto* build = app.add_subcommand("build", "Assemble the QUBO for one (beta, gamma)");
    build_args.model.attach(build);
    build->add_option("--beta", build_args.beta, "Quantization-loss weight (default ||A||_1 / ||B||_1)");
    build->add_option("--gamma", build_args.gamma, "Compression-reward weight")->capture_default_str();
    build->add_option("--out,-o", build_args.out, "QUBO text file to write");
    build->add_option("--index", build_args.index, "Index sidecar path (default <out>.index.json)");
    build->add_option("--run-manifest", build_args.run, "Where to write the run manifest");

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Minimize a QUBO file");
    solve->add_option("qubo", solve_args.qubo, "QUBO text file")->required();
    solve->add_option("--index", solve_args.index, "Index sidecar (default <qubo>.index.json if present)");
    solve_args.anneal.attach(solve);
    solve->add_option("--seed", solve_args.seed, "RNG seed (random if omitted)");
    solve->add_flag("--exact", solve_args.exact, "Brute-force enumeration instead of annealing");
    solve->add_option("--out,-o", solve_args.out, "JSON-lines solutions (default stdout)");
    solve->add_option("--plan-out", solve_args.plan_out, "Write the best solution's plan");
    solve->add_option("--run-manifest", solve_args.run, "Where to write the run manifest");

    SearchArgs search_args;
    auto* search = app.add_subcommand("search", "Hyperparameter search against an accuracy oracle");
    search_args.model.attach(search);
    search_args.oracle.attach(search);
    search_args.anneal.attach(search);
    search->add_option("--acc-threshold", search_args.acc_threshold, "Minimum valid accuracy")->capture_default_str();
    search->add_option("--n-bin", search_args.n_bin, "Binary-search iterations")->capture_default_str();
    search->add_option("--n-iter", search_args.n_iter, "Outer iterations")->capture_default_str();
    search->add_option("--gamma-init", search_args.gamma_init, "Initial gamma (random if omitted)");
    search->add_option("--seed", search_args.seed, "RNG seed (random if omitted)");
    search->add_flag("--exact", search_args.exact, "Brute-force solver instead of annealing");
    search->add_option("--out,-o", search_args.out, "Search result JSON (default stdout)");
    search->add_option("--plan-out", search_args.plan_out, "Write the best plan");
    search->add_option("--run-manifest", search_args.run, "Where to write the run manifest");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Evaluate a beta x gamma grid");
    sweep_args.model.attach(sweep);
    sweep_args.oracle.attach(sweep);
    sweep_args.anneal.attach(sweep);
    sweep->add_option("--betas", sweep_args.betas, "Comma-separated beta values")->required();
    sweep->add_option("--gammas", sweep_args.gammas, "Comma-separated gamma values")->required();
    sweep->add_flag("--relative-beta", sweep_args.relative_beta, "Betas are multiples of ||A||_1 / ||B||_1");
    sweep->add_option("--seed", sweep_args.seed, "RNG seed (random if omitted)");
    sweep->add_flag("--exact", sweep_args.exact, "Brute-force solver instead of annealing");
    sweep->add_option("--out,-o", sweep_args.out, "CSV output (default stdout)");
    sweep->add_option("--run-manifest", sweep_args.run, "Where to write the run manifest");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Check energy and reduction identities on a model");
    verify_args.model.attach(verify);
    verify->add_option("--samples", verify_args.samples, "Random assignments per hyperparameter pair")
        ->capture_default_str();
    verify->add_option("--plans", verify_args.plans, "Random plans for the reduction identity")->capture_default_str();
    verify->add_option("--seed", verify_args.seed, "RNG seed (random if omitted)");
    verify->add_option("--run-manifest", verify_args.run, "Where to write the run manifest");

    std::vector<std::string> argv_store{"qubopress"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(ingest_model, ingest_run, out, err);
        if (build->parsed()) return cmd_build(build_args, out, err);
        if (solve->parsed()) return cmd_solve(solve_args, out, err);
        if (search->parsed()) return cmd_search(search_args, out, err);
        if (sweep->parsed()) return cmd_sweep(sweep_args, out, err);
        if (verify->parsed()) return cmd_verify(verify_args, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const OracleError& e) {
        err << "oracle error: " << e.what() << '\n';
        return kOracleError;
    }
    return kInputError;
}

}  // namespace qubopress::cli
