// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "intent/common/crypto.hpp"
#include "intent/icl/ast.hpp"
#include "intent/ledger/action.hpp"

namespace intent::ledger {

using DeltaMap = std::map<BalanceKey, Amount>;

/// A compiled, fully resolved ledger action with its declared asset flows
/// (increases are guaranteed credits, decreases are upper bounds on debits).
struct TransactionPlan {
    std::string id;
    int intentIndex = 0;
    PublicKey sender{};
    std::uint64_t gasLimit = 0;
    std::uint64_t gasPrice = 0;
    Action action;
    DeltaMap declaredIncreases;
    DeltaMap declaredDecreases;
    icl::ConditionPtr trigger;
    icl::ConditionPtr constraint;

    Address senderAddress() const { return addressOf(sender); }
};

/// Canonical byte encoding; see README for the field layout.
Bytes encodePlan(const TransactionPlan& plan);

struct SignedTransaction {
    TransactionPlan plan;
    Digest stateRoot{};
    PublicKey signer{};
    Signature signature{};
};

/// The signed message: encodePlan(plan) followed by the 32-byte state root.
Bytes signingPayload(const TransactionPlan& plan, const Digest& stateRoot);

/// SHA-256 of the signing payload; unique per (plan, root) binding.
Digest txHash(const SignedTransaction& tx);
std::string txHashHex(const SignedTransaction& tx);

/// Signature check plus signer == plan.sender.
bool verifyTransaction(const SignedTransaction& tx);

nlohmann::ordered_json deltasToJson(const DeltaMap& deltas);
DeltaMap deltasFromJson(const nlohmann::ordered_json& j);

nlohmann::ordered_json actionToJson(const Action& action);
Action actionFromJson(const nlohmann::ordered_json& j);

nlohmann::ordered_json toJson(const TransactionPlan& plan);
TransactionPlan planFromJson(const nlohmann::ordered_json& j);

nlohmann::ordered_json toJson(const SignedTransaction& tx);
SignedTransaction signedFromJson(const nlohmann::ordered_json& j);

}  // namespace intent::ledger
