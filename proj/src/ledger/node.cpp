// SPDX-License-Identifier: Apache-2.0
#include "intent/ledger/node.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace intent::ledger {

using J = nlohmann::ordered_json;

J toJson(const Block& block) {
    J receipts = J::array();
    for (const auto& r : block.receipts) receipts.push_back(toJson(r));
    return J{{"height", block.height},
             {"gasUsed", block.gasUsed},
             {"stateRoot", toHex(block.stateRoot)},
             {"receipts", receipts}};
}

std::vector<std::size_t> packByGasPrice(const std::vector<PackCandidate>& candidates, std::uint64_t gasBudget) {
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return candidates[a].gasPrice > candidates[b].gasPrice;
    });
    std::vector<std::size_t> out;
    std::uint64_t used = 0;
    for (std::size_t i : order) {
        if (candidates[i].gasLimit <= gasBudget - used) {
            used += candidates[i].gasLimit;
            out.push_back(i);
        }
    }
    return out;
}

Node::Node(LedgerState genesis, NodeConfig config) : config_(config), state_(std::move(genesis)) {
    root_ = computeRoot(state_);
    history_.emplace_back(state_.height, std::make_shared<const LedgerState>(state_));
    knownRoots_[root_] = state_.height;
    rootOrder_.push_back(root_);
}

Node::~Node() { stopLive(); }

std::uint64_t Node::headHeight() const {
    std::lock_guard lock(mu_);
    return state_.height;
}

Digest Node::headRoot() const {
    std::lock_guard lock(mu_);
    return root_;
}

LedgerState Node::headState() const {
    std::lock_guard lock(mu_);
    return state_;
}

std::uint64_t Node::blockGasLimit() const {
    std::lock_guard lock(mu_);
    return state_.config.blockGasLimit;
}

std::shared_ptr<const LedgerState> Node::stateAt(std::uint64_t height) const {
    std::lock_guard lock(mu_);
    for (const auto& [h, s] : history_) {
        if (h == height) return s;
    }
    throw NodeError(NodeError::Kind::StaleHeight, "height " + std::to_string(height) + " is outside the history");
}

StateProof Node::getSnapshot(std::uint64_t height, const std::vector<KeyQuery>& queries) const {
    auto s = stateAt(height);
    return proveQueries(*s, queries);
}

std::string Node::sendRawTransaction(const SignedTransaction& tx) {
    std::string hash = txHashHex(tx);
    bool valid = verifyTransaction(tx);
    std::lock_guard lock(mu_);
    if (!valid) throw NodeError(NodeError::Kind::InvalidSignature, "signature does not verify");
    if (!knownRoots_.count(tx.stateRoot)) {
        throw NodeError(NodeError::Kind::UnknownStateRoot, "transaction is bound to an unknown state root");
    }
    if (pendingHashes_.count(hash) || minedHashes_.count(hash)) {
        throw NodeError(NodeError::Kind::Duplicate, "transaction already known: " + hash);
    }
    if (mempool_.size() >= config_.mempoolCapacity) throw NodeError(NodeError::Kind::MempoolFull, "mempool full");
    mempool_.push_back(PendingTx{tx, hash, nextSeq_++});
    pendingHashes_.insert(hash);
    return hash;
}

std::vector<PendingTx> Node::getPending() const {
    std::lock_guard lock(mu_);
    return mempool_;
}

std::size_t Node::pendingCount() const {
    std::lock_guard lock(mu_);
    return mempool_.size();
}

std::optional<Receipt> Node::getReceipt(const std::string& txHash) const {
    std::lock_guard lock(mu_);
    auto it = receipts_.find(txHash);
    if (it == receipts_.end()) return std::nullopt;
    return it->second;
}

void Node::approve(const Address& owner, const Address& spender, const std::string& asset, const Amount& amount) {
    std::lock_guard lock(mu_);
    systemOps_.push_back([=](LedgerState& s) {
        AllowanceKey key{owner, spender, asset};
        if (amount == 0) {
            s.allowances.erase(key);
        } else {
            s.allowances[key] = amount;
        }
    });
}

void Node::mint(const Address& wallet, const AssetId& asset, const Amount& amount) {
    std::lock_guard lock(mu_);
    systemOps_.push_back([=](LedgerState& s) { s.setBalance(wallet, asset, s.balanceOf(wallet, asset) + amount); });
}

void Node::setOraclePrice(Asset asset, const Amount& microUsd) {
    std::lock_guard lock(mu_);
    systemOps_.push_back([=](LedgerState& s) { s.prices[asset] = microUsd; });
}

Block Node::mineLocked(std::vector<HeadCallback>& toNotify) {
    state_.height += 1;
    for (auto& op : systemOps_) op(state_);
    systemOps_.clear();

    std::vector<PackCandidate> cands;
    cands.reserve(mempool_.size());
    for (const auto& p : mempool_) cands.push_back({p.tx.plan.gasPrice, p.tx.plan.gasLimit});
    auto packed = packByGasPrice(cands, state_.config.blockGasLimit);

    Block block;
    block.height = state_.height;
    std::vector<bool> taken(mempool_.size(), false);
    for (std::size_t i : packed) {
        taken[i] = true;
        // admission already verified the signature
        Receipt r = applyTransaction(state_, mempool_[i].tx, false);
        r.blockHeight = block.height;
        r.position = static_cast<std::uint32_t>(block.receipts.size());
        block.gasUsed += r.gasUsed;
        receipts_[mempool_[i].hash] = r;
        minedHashes_.insert(mempool_[i].hash);
        pendingHashes_.erase(mempool_[i].hash);
        block.receipts.push_back(std::move(r));
    }
    std::vector<PendingTx> rest;
    rest.reserve(mempool_.size() - packed.size());
    for (std::size_t i = 0; i < mempool_.size(); ++i) {
        if (!taken[i]) rest.push_back(std::move(mempool_[i]));
    }
    mempool_ = std::move(rest);

    root_ = computeRoot(state_);
    block.stateRoot = root_;
    history_.emplace_back(state_.height, std::make_shared<const LedgerState>(state_));
    knownRoots_[root_] = state_.height;
    rootOrder_.push_back(root_);
    while (history_.size() > config_.historyDepth) history_.pop_front();
    while (rootOrder_.size() > config_.historyDepth) {
        auto it = knownRoots_.find(rootOrder_.front());
        // the same root can reappear at a later height
        if (it != knownRoots_.end() && it->second + config_.historyDepth <= state_.height) knownRoots_.erase(it);
        rootOrder_.pop_front();
    }
    for (const auto& [id, cb] : subscribers_) toNotify.push_back(cb);
    return block;
}

Block Node::mineBlock() {
    std::vector<HeadCallback> notify;
    Block block;
    {
        std::lock_guard lock(mu_);
        block = mineLocked(notify);
    }
    headCv_.notify_all();
    for (auto& cb : notify) cb(block);
    return block;
}

std::size_t Node::subscribeHeads(HeadCallback callback) {
    std::lock_guard lock(mu_);
    subscribers_[nextSubscriber_] = std::move(callback);
    return nextSubscriber_++;
}

void Node::unsubscribe(std::size_t id) {
    std::lock_guard lock(mu_);
    subscribers_.erase(id);
}

void Node::startLive() {
    if (live_.exchange(true)) return;
    miner_ = std::thread([this] {
        while (live_.load()) {
            std::this_thread::sleep_for(std::chrono::milliseconds(config_.blockIntervalMs));
            if (!live_.load()) break;
            mineBlock();
        }
    });
}

void Node::stopLive() {
    if (!live_.exchange(false)) return;
    headCv_.notify_all();
    if (miner_.joinable()) miner_.join();
}

bool Node::waitForHeight(std::uint64_t height) {
    std::unique_lock lock(mu_);
    headCv_.wait(lock, [&] { return state_.height >= height || !live_.load(); });
    return state_.height >= height;
}

}  // namespace intent::ledger
