// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "intent/feasibility/checker.hpp"
#include "intent/workbench/flows.hpp"
#include "intent/workbench/generator.hpp"

namespace intent::workbench {

/// Positive class: predicted or actual success.
struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    void add(bool predicted, bool actual);
    std::size_t total() const { return tp + fp + tn + fn; }
    double accuracy() const;
    double precision() const;  // 1 when nothing was predicted positive
    double recall() const;     // 1 when nothing was actually positive
};

struct EvalMetrics {
    std::string label;
    Confusion confusion;
    double meanLatencyMs = 0;
    double maxLatencyMs = 0;
};

struct CheckerWorkload {
    FlowConfig flows;
    std::size_t candidates = 500;
    std::uint64_t blockGasLimit = 2'000'000;
    std::uint64_t warmupBlocks = 5;
    /// Candidate swaps accept this much slippage against the head quote.
    double slippage = 0.005;
    std::uint64_t seed = 0;
};

struct CheckerEvaluation {
    std::vector<EvalMetrics> configs;  // one per FeasibilityConfig, same order
    EvalMetrics baseline;
    std::size_t candidates = 0;
    std::size_t actualSuccesses = 0;
    std::size_t notIncluded = 0;  // mined only after the next block
};

/// One candidate per block: flows are submitted, every config predicts,
/// the candidate is bid just above the cheapest predicted inclusion and
/// submitted, then the block is mined and its receipt is the label.
CheckerEvaluation evaluateChecker(const CheckerWorkload& workload,
                                  const std::vector<feasibility::FeasibilityConfig>& configs);

nlohmann::ordered_json toJson(const CheckerEvaluation& eval, bool timing = false);

struct SpeedupWorkload {
    std::size_t statements = 50;
    std::vector<double> dependencyIndices{0.0, 0.5, 1.0};
    std::size_t seeds = 20;
    std::uint64_t seed = 0;
    std::size_t workers = 8;
    std::uint64_t blockLatencyMs = 100;
    IntentMix mix = kUniformMix;
};

struct SpeedupRun {
    double dependencyIndex = 0;
    std::uint64_t seed = 0;
    double dependencyFraction = 0;
    std::uint64_t parallelMs = 0;
    std::uint64_t serialMs = 0;
    std::size_t executed = 0;
    std::size_t serialExecuted = 0;
    double speedup = 0;
};

struct SpeedupEvaluation {
    std::vector<SpeedupRun> runs;
    std::vector<std::pair<double, double>> meanByIndex;  // (DI, mean speedup)
};

SpeedupEvaluation evaluateSpeedup(const SpeedupWorkload& workload, const ledger::LedgerState& genesis);

nlohmann::ordered_json toJson(const SpeedupEvaluation& eval);

}  // namespace intent::workbench
