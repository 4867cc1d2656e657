// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "intent/ledger/apply.hpp"
#include "intent/ledger/merkle.hpp"
#include "intent/ledger/state.hpp"
#include "intent/ledger/transaction.hpp"

namespace intent::ledger {

struct Block {
    std::uint64_t height = 0;
    std::vector<Receipt> receipts;  // packed order
    std::uint64_t gasUsed = 0;
    Digest stateRoot{};
};

nlohmann::ordered_json toJson(const Block& block);

struct PackCandidate {
    std::uint64_t gasPrice = 0;
    std::uint64_t gasLimit = 0;
};

/// Indices of candidates in packing order: descending gas price, ties in
/// input order, each taken if it still fits (later smaller ones may fit
/// after a larger one was skipped).
std::vector<std::size_t> packByGasPrice(const std::vector<PackCandidate>& candidates, std::uint64_t gasBudget);

class NodeError : public std::runtime_error {
public:
    enum class Kind { InvalidSignature, UnknownStateRoot, Duplicate, MempoolFull, StaleHeight, NodeUnavailable };
    NodeError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct NodeConfig {
    std::size_t historyDepth = 64;
    std::size_t mempoolCapacity = 1'000'000;
    std::uint64_t blockIntervalMs = 100;
};

struct PendingTx {
    SignedTransaction tx;
    std::string hash;
    std::uint64_t seq = 0;
};

/// In-process chain node. All calls are serialised on one mutex, so the
/// apply order is the order in which mineBlock runs.
class Node {
public:
    explicit Node(LedgerState genesis, NodeConfig config = {});
    ~Node();
    Node(const Node&) = delete;
    Node& operator=(const Node&) = delete;

    std::uint64_t headHeight() const;
    Digest headRoot() const;
    /// Copy of the head state; the caller's fork.
    LedgerState headState() const;
    /// Throws NodeError(StaleHeight) outside the retained history.
    std::shared_ptr<const LedgerState> stateAt(std::uint64_t height) const;

    /// Proved answers to `queries` against the state at `height`.
    StateProof getSnapshot(std::uint64_t height, const std::vector<KeyQuery>& queries) const;

    /// Admits a transaction after checking its signature, root binding and
    /// uniqueness; returns the tx hash.
    std::string sendRawTransaction(const SignedTransaction& tx);
    std::vector<PendingTx> getPending() const;
    std::size_t pendingCount() const;
    std::optional<Receipt> getReceipt(const std::string& txHash) const;

    /// System operations take effect at the start of the next block.
    void approve(const Address& owner, const Address& spender, const std::string& asset, const Amount& amount);
    void mint(const Address& wallet, const AssetId& asset, const Amount& amount);
    void setOraclePrice(Asset asset, const Amount& microUsd);

    Block mineBlock();

    using HeadCallback = std::function<void(const Block&)>;
    std::size_t subscribeHeads(HeadCallback callback);
    void unsubscribe(std::size_t id);

    /// Background mining every blockIntervalMs of wall-clock time.
    void startLive();
    void stopLive();
    /// Blocks until the head reaches `height` or the node stops.
    bool waitForHeight(std::uint64_t height);

    std::uint64_t blockIntervalMs() const { return config_.blockIntervalMs; }
    std::uint64_t blockGasLimit() const;

private:
    Block mineLocked(std::vector<HeadCallback>& toNotify);

    NodeConfig config_;
    mutable std::mutex mu_;
    std::condition_variable headCv_;
    LedgerState state_;
    Digest root_{};
    std::deque<std::pair<std::uint64_t, std::shared_ptr<const LedgerState>>> history_;
    std::map<Digest, std::uint64_t> knownRoots_;
    std::deque<Digest> rootOrder_;
    std::vector<PendingTx> mempool_;
    std::set<std::string> pendingHashes_;
    std::set<std::string> minedHashes_;
    std::map<std::string, Receipt> receipts_;
    std::vector<std::function<void(LedgerState&)>> systemOps_;
    std::map<std::size_t, HeadCallback> subscribers_;
    std::size_t nextSubscriber_ = 0;
    std::uint64_t nextSeq_ = 0;
    std::atomic<bool> live_{false};
    std::thread miner_;
};

}  // namespace intent::ledger
