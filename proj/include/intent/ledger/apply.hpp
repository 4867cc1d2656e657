// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "intent/ledger/state.hpp"
#include "intent/ledger/transaction.hpp"

namespace intent::ledger {

enum class ReceiptStatus { Success, Revert };

struct Receipt {
    std::string txHash;
    std::string txId;
    ReceiptStatus status = ReceiptStatus::Success;
    std::string reason;  // empty on success
    std::uint64_t gasUsed = 0;
    std::map<BalanceKey, Amount> realizedDeltas;  // signed net change per (wallet, asset)
    std::optional<Rational> realizedSlippage;
    std::optional<Amount> amountOut;
    std::uint64_t blockHeight = 0;
    std::uint32_t position = 0;

    bool success() const { return status == ReceiptStatus::Success; }
};

nlohmann::ordered_json toJson(const Receipt& receipt);

/// Executes the plan's action atomically against `state`. A REVERT leaves
/// the state exactly as it was. Gas is reported, not charged to balances.
/// The trigger is not consulted here.
Receipt applyPlan(LedgerState& state, const TransactionPlan& plan);

/// Signature check (REVERT InvalidSignature) followed by applyPlan.
Receipt applyTransaction(LedgerState& state, const SignedTransaction& tx, bool checkSignature = true);

}  // namespace intent::ledger
