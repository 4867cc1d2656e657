// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "intent/common/crypto.hpp"
#include "intent/ledger/transaction.hpp"

namespace intent::testing {

inline SigningKey keyFromByte(std::uint8_t b) {
    std::array<std::uint8_t, 32> seed{};
    seed.fill(b);
    return SigningKey::fromSeed(seed);
}

inline ledger::TransactionPlan plan(const SigningKey& key, std::string id, ledger::Action action,
                                    std::uint64_t gasPrice = 1, std::uint64_t gasLimit = 1'000'000) {
    ledger::TransactionPlan p;
    p.id = std::move(id);
    p.sender = key.publicKey();
    p.gasLimit = gasLimit;
    p.gasPrice = gasPrice;
    p.action = std::move(action);
    return p;
}

inline ledger::SignedTransaction sign(const SigningKey& key, ledger::TransactionPlan p, const Digest& root) {
    ledger::SignedTransaction tx;
    tx.plan = std::move(p);
    tx.stateRoot = root;
    tx.signer = key.publicKey();
    tx.signature = key.sign(ledger::signingPayload(tx.plan, root));
    return tx;
}

}  // namespace intent::testing
