// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "intent/enclave/enclave.hpp"
#include "intent/feasibility/checker.hpp"
#include "intent/optimizer/executor.hpp"
#include "intent/optimizer/prune.hpp"

namespace intent::workbench {

/// A failure in one pipeline stage; what() carries the module's message.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct PipelineOptions {
    enclave::EnclaveConfig enclave;
    optimizer::ExecOptions exec;
    optimizer::PruneOptions prune;
    feasibility::FeasibilityConfig feasibility;
    bool checkFeasibility = true;
    optimizer::ConfirmHook confirm;  // empty: auto-confirm
    /// Also executes the same signed set one submission per block on a
    /// fresh node and reports the ratio.
    bool compareSerial = false;
    std::uint64_t seed = 0;
};

struct PipelineResult {
    enclave::AttestationReport attestation;
    Address eoa;
    std::uint64_t snapshotHeight = 0;
    std::vector<ledger::SignedTransaction> signedTxs;
    nlohmann::ordered_json graphBefore;
    nlohmann::ordered_json graphAfter;
    optimizer::PruneStats prune;
    optimizer::ExecutionReport report;
    std::optional<optimizer::ExecutionReport> serialReport;
};

/// attest, approve, acquire, compileAndSign, build and prune, execute.
PipelineResult runPipeline(const std::string& source, const ledger::LedgerState& genesis,
                           const PipelineOptions& options = {});

nlohmann::ordered_json toJson(const PipelineResult& result, bool timing = false);

}  // namespace intent::workbench
