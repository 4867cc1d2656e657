// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "intent/common/random.hpp"
#include "intent/ledger/node.hpp"

namespace intent::workbench {

enum class FlowKind { Transfer, Swap, Liquidity };

struct FlowConfig {
    double ratePerBlock = 20;          // transactions submitted per block, fractional rates accumulate
    std::array<double, 3> mix{2, 3, 1};  // transfer, swap, liquidity
    std::uint64_t durationBlocks = 100;
    std::uint64_t seed = 0;
    std::size_t walletCount = 64;
    std::uint64_t maxGasPrice = 1000;

    /// Parses "transfer:1,swap:2,liquidity:0".
    static std::array<double, 3> parseMix(std::string_view text);
};

/// `usd` dollars of `asset` at the state's oracle price.
Amount worthAt(const ledger::LedgerState& state, Asset asset, std::int64_t usd);

/// The pools that background swaps and checked candidates trade on.
std::vector<ledger::PoolKey> hotPools();

/// Background load: funds its wallets through system mints, then submits
/// a seeded stream of transfers, swaps and liquidity adds. Everything is
/// signed by wallet-owning keys, so no allowances are involved.
class FlowGenerator {
public:
    explicit FlowGenerator(FlowConfig cfg);
    ~FlowGenerator();
    FlowGenerator(const FlowGenerator&) = delete;
    FlowGenerator& operator=(const FlowGenerator&) = delete;

    const FlowConfig& config() const { return cfg_; }

    /// Queues the funding mints; they land with the next block.
    void fund(ledger::Node& node);

    /// Submits one block's worth. Rejections are counted, not thrown.
    std::size_t submitBlock(ledger::Node& node);

    /// Submits a block's worth on every new head until stop().
    void start(ledger::Node& node);
    void stop();

    std::size_t submitted() const { return submitted_; }
    std::size_t rejected() const { return rejected_; }
    std::size_t count(FlowKind kind) const { return byKind_[static_cast<std::size_t>(kind)]; }
    const std::vector<SigningKey>& keys() const { return keys_; }

private:
    ledger::SignedTransaction make(const ledger::Node& node, const ledger::LedgerState& head);

    FlowConfig cfg_;
    Rng rng_;
    std::vector<SigningKey> keys_;
    double carry_ = 0;
    std::uint64_t serial_ = 0;
    std::atomic<std::size_t> submitted_{0};
    std::atomic<std::size_t> rejected_{0};
    std::array<std::size_t, 3> byKind_{};
    ledger::Node* live_ = nullptr;
    std::optional<std::size_t> subscription_;
};

/// Runs the flows for cfg.durationBlocks on `node`, mining after each
/// submission round; the per-block trace is deterministic.
nlohmann::ordered_json runFlows(const FlowConfig& cfg, ledger::Node& node);

}  // namespace intent::workbench
