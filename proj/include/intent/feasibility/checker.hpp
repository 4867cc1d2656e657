// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "intent/ledger/node.hpp"
#include "intent/optimizer/executor.hpp"

namespace intent::feasibility {

using optimizer::Risk;

struct FeasibilityConfig {
    double k = 1.0;          // gas horizon, in blocks
    std::size_t contexts = 20;
    double thetaHigh = 0.9;
    double thetaLow = 0.5;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument.
    void validate() const;
};

/// Descending gas price, insertion order on ties, skipping whatever no
/// longer fits in k x blockGasLimit.
std::vector<ledger::PendingTx> predictNextBlock(const std::vector<ledger::PendingTx>& pending,
                                                const FeasibilityConfig& cfg, std::uint64_t blockGasLimit);

struct ExecutionContext {
    std::vector<ledger::PendingTx> prefix;
    std::size_t group = 0;  // union-find root of the target
    std::uint64_t seed = 0;
};

/// Indices of `predicted` in the target's interference component.
std::vector<std::size_t> interferenceSet(const ledger::SignedTransaction& target,
                                         const std::vector<ledger::PendingTx>& predicted);

std::vector<ExecutionContext> buildContexts(const ledger::SignedTransaction& target,
                                            const std::vector<ledger::PendingTx>& predicted,
                                            const FeasibilityConfig& cfg);

struct Verdict {
    double rho = 0.0;
    Risk risk = Risk::High;
    std::vector<bool> perContext;
    std::vector<std::string> reasons;  // target's revert reason per context, empty on success
    std::size_t interference = 0;
    double latencyMs = 0.0;
};

Risk classify(double rho, const FeasibilityConfig& cfg);

/// Simulates every context on its own fork of `state` at the next height.
Verdict checkFeasibility(const ledger::SignedTransaction& target, const ledger::LedgerState& state,
                         const std::vector<ledger::PendingTx>& mempool, std::uint64_t blockGasLimit,
                         const FeasibilityConfig& cfg);

Verdict checkFeasibility(const ledger::SignedTransaction& target, const ledger::Node& node,
                         const FeasibilityConfig& cfg);

/// The target alone on the current state, no mempool.
bool naiveCheck(const ledger::SignedTransaction& target, const ledger::LedgerState& state);

optimizer::FeasibilityHook makeHook(FeasibilityConfig cfg);

nlohmann::ordered_json toJson(const Verdict& verdict, bool timing = false);

}  // namespace intent::feasibility
