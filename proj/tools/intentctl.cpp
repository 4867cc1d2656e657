// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "intent/compiler/compiler.hpp"
#include "intent/icl/parser.hpp"
#include "intent/ledger/genesis.hpp"
#include "intent/workbench/evaluate.hpp"
#include "intent/workbench/pipeline.hpp"

using namespace intent;
using J = nlohmann::ordered_json;

namespace {

// Usage problems exit with 2, everything the modules reject with 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string config;
    std::string genesis = "builtin";
    std::uint64_t seed = 0;
    std::string out;
    bool autoConfirm = false;
    bool serial = false;
    bool timing = false;
    std::optional<double> k;
    std::optional<std::size_t> contexts;
};

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

J readJson(const std::string& path) {
    try {
        return J::parse(readFile(path));
    } catch (const J::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

struct Settings {
    ledger::LedgerState genesis;
    optimizer::ExecOptions exec;
    feasibility::FeasibilityConfig feasibility;
    compiler::DecisionPolicy policy;
};

ledger::LedgerState loadGenesis(const std::string& spec) {
    if (spec == "builtin") return ledger::builtinGenesis();
    if (spec == "sample") return ledger::sampleGenesis();
    return ledger::genesisFromJson(readJson(spec));
}

Settings settings(const Globals& g) {
    Settings s;
    std::string genesis = g.genesis;
    J cfg = g.config.empty() ? J::object() : readJson(g.config);
    try {
        if (cfg.contains("genesis")) {
            if (cfg["genesis"].is_string()) {
                genesis = cfg["genesis"].get<std::string>();
            } else {
                s.genesis = ledger::genesisFromJson(cfg["genesis"]);
                genesis.clear();
            }
        }
        if (cfg.contains("exec")) {
            const auto& e = cfg["exec"];
            s.exec.workers = e.value("workers", s.exec.workers);
            s.exec.blockLatencyMs = e.value("blockLatencyMs", s.exec.blockLatencyMs);
            s.exec.triggerDeadlineBlocks = e.value("triggerDeadlineBlocks", s.exec.triggerDeadlineBlocks);
        }
        if (cfg.contains("feasibility")) {
            const auto& f = cfg["feasibility"];
            s.feasibility.k = f.value("k", s.feasibility.k);
            s.feasibility.contexts = f.value("contexts", s.feasibility.contexts);
            s.feasibility.thetaHigh = f.value("thetaHigh", s.feasibility.thetaHigh);
            s.feasibility.thetaLow = f.value("thetaLow", s.feasibility.thetaLow);
        }
    } catch (const J::exception& e) {
        throw UsageError(g.config + ": " + e.what());
    }
    if (!genesis.empty()) s.genesis = loadGenesis(genesis);
    if (g.k) s.feasibility.k = *g.k;
    if (g.contexts) s.feasibility.contexts = *g.contexts;
    s.feasibility.seed = g.seed;
    s.exec.serial = g.serial;
    try {
        s.feasibility.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (s.exec.workers == 0) throw UsageError("workers must be positive");
    return s;
}

std::array<std::uint8_t, 32> enclaveSeed(std::uint64_t seed) {
    Rng rng(deriveSeed(seed, hashTag("enclave-key")));
    std::array<std::uint8_t, 32> out{};
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.below(256));
    return out;
}

void emit(const Globals& g, const J& j) {
    std::string text = j.dump(2) + "\n";
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out);
    if (!f) throw UsageError("cannot write " + g.out);
    f << text;
}

// yes / no / all, asked once per WARN transaction
optimizer::ConfirmHook interactiveConfirm() {
    auto all = std::make_shared<bool>(false);
    return [all](const ledger::SignedTransaction& tx, const optimizer::FeasibilityVerdict& v) {
        if (*all) return true;
        for (;;) {
            std::cerr << tx.plan.id << ": " << ledger::describe(tx.plan.action) << "\n  risk "
                      << optimizer::name(v.risk) << ", estimated success " << v.score << "\nsubmit? [yes/no/all] "
                      << std::flush;
            std::string answer;
            if (!std::getline(std::cin, answer)) return false;
            for (auto& c : answer) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (answer == "y" || answer == "yes") return true;
            if (answer == "n" || answer == "no") return false;
            if (answer == "a" || answer == "all") {
                *all = true;
                return true;
            }
        }
    };
}

std::vector<double> parseList(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("not a number: " + item);
        }
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Intent workbench: compile, execute and evaluate ICL programs"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "JSON settings file (genesis, exec, feasibility)");
    app.add_option("--genesis", g.genesis, "builtin, sample or a genesis JSON file");
    app.add_option("--seed", g.seed, "Seed for every random choice");
    app.add_option("--out", g.out, "Write the JSON result here instead of stdout");
    app.add_flag("--auto-confirm", g.autoConfirm, "Submit WARN transactions without asking");
    app.add_flag("--serial", g.serial, "One submission per block");
    app.add_flag("--timing", g.timing, "Include measured latencies in the output");
    app.add_option("--k", g.k, "Feasibility gas horizon in blocks")->check(CLI::PositiveNumber);
    app.add_option("--contexts", g.contexts, "Feasibility execution contexts")->check(CLI::PositiveNumber);

    std::string file;
    auto* compileCmd = app.add_subcommand("compile", "Parse and compile a program against the genesis");
    compileCmd->add_option("file", file, "ICL source")->required();

    bool compareSerial = false;
    auto* runCmd = app.add_subcommand("run", "Attest, compile, sign and execute a program");
    runCmd->add_option("file", file, "ICL source")->required();
    runCmd->add_flag("--compare-serial", compareSerial, "Also execute serially and report the speedup");

    auto* checkCmd = app.add_subcommand("check", "Feasibility verdict for a signed transaction");
    checkCmd->add_option("txjson", file, "Signed transaction, or {\"target\": tx, \"mempool\": [tx...]}")
        ->required();

    auto* genCmd = app.add_subcommand("gen", "Workload generators");
    genCmd->require_subcommand(1);
    workbench::GeneratorConfig genCfg;
    std::string mix;
    std::string icl;
    auto* genProgram = genCmd->add_subcommand("program", "Random ICL program with a dependency index");
    genProgram->add_option("--n", genCfg.statementCount, "Statements")->check(CLI::PositiveNumber);
    genProgram->add_option("--di", genCfg.dependencyIndex, "Dependency index")->check(CLI::Range(0.0, 1.0));
    genProgram->add_option("--mix", mix, "Family weights, e.g. swap:2,transfer:1");
    genProgram->add_option("--icl", icl, "Also write the program source here");

    workbench::FlowConfig flowCfg;
    std::string flowMix;
    auto* genFlows = genCmd->add_subcommand("flows", "Run background flows and trace the mempool");
    genFlows->add_option("--rate", flowCfg.ratePerBlock, "Transactions per block")->check(CLI::NonNegativeNumber);
    genFlows->add_option("--duration", flowCfg.durationBlocks, "Blocks");
    genFlows->add_option("--mix", flowMix, "transfer:w,swap:w,liquidity:w");
    std::uint64_t flowGas = 0;
    genFlows->add_option("--block-gas", flowGas, "Override the block gas limit");

    auto* evalCmd = app.add_subcommand("eval", "Evaluation harness");
    evalCmd->require_subcommand(1);
    workbench::CheckerWorkload checkerWl;
    std::string ks = "1,1.5,2";
    auto* evalChecker = evalCmd->add_subcommand("checker", "Feasibility checker against the naive baseline");
    evalChecker->add_option("--candidates", checkerWl.candidates, "Candidate transactions");
    evalChecker->add_option("--rate", checkerWl.flows.ratePerBlock, "Background transactions per block");
    evalChecker->add_option("--block-gas", checkerWl.blockGasLimit, "Block gas limit");
    evalChecker->add_option("--slippage", checkerWl.slippage, "Candidate slippage bound");
    evalChecker->add_option("--ks", ks, "Comma-separated K values");

    workbench::SpeedupWorkload speedWl;
    std::string dis = "0,0.5,1";
    auto* evalSpeedup = evalCmd->add_subcommand("speedup", "Parallel against serial execution");
    evalSpeedup->add_option("--n", speedWl.statements, "Statements per program");
    evalSpeedup->add_option("--seeds", speedWl.seeds, "Programs per dependency index");
    evalSpeedup->add_option("--dis", dis, "Comma-separated dependency indices");
    evalSpeedup->add_option("--workers", speedWl.workers, "Parallel submissions per block")
        ->check(CLI::PositiveNumber);
    evalSpeedup->add_option("--latency", speedWl.blockLatencyMs, "Simulated block latency, ms");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (compileCmd->parsed()) {
            auto s = settings(g);
            auto program = icl::parse(readFile(file));
            auto key = SigningKey::fromSeed(enclaveSeed(g.seed));
            auto set = compiler::compileProgram(program, s.genesis, s.policy, key.publicKey());
            emit(g, compiler::toJson(set));
        } else if (runCmd->parsed()) {
            auto s = settings(g);
            workbench::PipelineOptions opts;
            opts.seed = g.seed;
            opts.enclave.keySeed = enclaveSeed(g.seed);
            opts.enclave.policy = s.policy;
            opts.exec = s.exec;
            opts.feasibility = s.feasibility;
            opts.compareSerial = compareSerial;
            if (!g.autoConfirm) opts.confirm = interactiveConfirm();
            auto result = workbench::runPipeline(readFile(file), s.genesis, opts);
            emit(g, workbench::toJson(result, g.timing));
        } else if (checkCmd->parsed()) {
            auto s = settings(g);
            J doc = readJson(file);
            std::vector<ledger::PendingTx> mempool;
            ledger::SignedTransaction target;
            try {
                if (doc.contains("target")) {
                    target = ledger::signedFromJson(doc["target"]);
                    std::uint64_t seq = 0;
                    for (const auto& m : doc.value("mempool", J::array())) {
                        auto tx = ledger::signedFromJson(m);
                        mempool.push_back({tx, ledger::txHashHex(tx), seq++});
                    }
                } else {
                    target = ledger::signedFromJson(doc);
                }
            } catch (const J::exception& e) {
                throw UsageError(file + ": " + e.what());
            }
            auto v = feasibility::checkFeasibility(target, s.genesis, mempool, s.genesis.config.blockGasLimit,
                                                   s.feasibility);
            J out = feasibility::toJson(v, g.timing);
            out["naive"] = feasibility::naiveCheck(target, s.genesis);
            emit(g, out);
        } else if (genProgram->parsed()) {
            auto s = settings(g);
            genCfg.seed = g.seed;
            if (!mix.empty()) {
                try {
                    genCfg.mix = workbench::parseMix(mix);
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            }
            auto p = workbench::generateProgram(genCfg, s.genesis);
            if (!icl.empty()) {
                std::ofstream f(icl);
                if (!f) throw UsageError("cannot write " + icl);
                f << p.source();
            }
            emit(g, workbench::toJson(p));
        } else if (genFlows->parsed()) {
            auto s = settings(g);
            flowCfg.seed = g.seed;
            if (!flowMix.empty()) {
                try {
                    flowCfg.mix = workbench::FlowConfig::parseMix(flowMix);
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            }
            if (flowGas > 0) s.genesis.config.blockGasLimit = flowGas;
            ledger::Node node(s.genesis);
            emit(g, workbench::runFlows(flowCfg, node));
        } else if (evalChecker->parsed()) {
            auto s = settings(g);
            checkerWl.seed = g.seed;
            std::vector<feasibility::FeasibilityConfig> cfgs;
            for (double k : parseList(ks)) {
                auto c = s.feasibility;
                c.k = k;
                cfgs.push_back(c);
            }
            emit(g, workbench::toJson(workbench::evaluateChecker(checkerWl, cfgs), g.timing));
        } else if (evalSpeedup->parsed()) {
            auto s = settings(g);
            speedWl.seed = g.seed;
            speedWl.dependencyIndices = parseList(dis);
            emit(g, workbench::toJson(workbench::evaluateSpeedup(speedWl, s.genesis)));
        }
    } catch (const UsageError& e) {
        std::cerr << J{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump() << "\n";
        return 2;
    } catch (const workbench::PipelineError& e) {
        std::cerr << J{{"error", {{"kind", "domain"}, {"stage", e.stage()}, {"message", e.what()}}}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << J{{"error", {{"kind", "domain"}, {"message", e.what()}}}}.dump() << "\n";
        return 1;
    }
    return 0;
}
