// SPDX-License-Identifier: Apache-2.0
#include "intent/workbench/flows.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "intent/ledger/genesis.hpp"

namespace intent::workbench {

namespace {

Amount pow10(unsigned n) {
    Amount v = 1;
    for (unsigned i = 0; i < n; ++i) v *= 10;
    return v;
}

SigningKey keyFrom(Rng& rng) {
    std::array<std::uint8_t, 32> seed{};
    for (std::size_t i = 0; i < seed.size(); i += 8) {
        std::uint64_t v = rng.next();
        for (std::size_t b = 0; b < 8; ++b) seed[i + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
    return SigningKey::fromSeed(seed);
}

constexpr std::array<std::string_view, 3> kKindNames{"transfer", "swap", "liquidity"};

}  // namespace

Amount worthAt(const ledger::LedgerState& state, Asset asset, std::int64_t usd) {
    Amount price = state.priceMicroUsd(asset).value_or(Amount(1'000'000));
    return Amount(usd) * 1'000'000 * pow10(decimals(asset)) / price;
}

std::vector<ledger::PoolKey> hotPools() {
    return {
        ledger::PoolKey::of(Platform::Uniswap, Asset::USDC, Asset::ETH),
        ledger::PoolKey::of(Platform::Uniswap, Asset::USDC, Asset::USDT),
        ledger::PoolKey::of(Platform::Sushiswap, Asset::USDT, Asset::ETH),
        ledger::PoolKey::of(Platform::Uniswap, Asset::DAI, Asset::ETH),
    };
}

std::array<double, 3> FlowConfig::parseMix(std::string_view text) {
    std::array<double, 3> mix{};
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        std::string key = item.substr(0, colon);
        std::size_t k = 0;
        while (k < kKindNames.size() && kKindNames[k] != key) ++k;
        if (k == kKindNames.size()) throw std::invalid_argument("unknown flow kind: " + key);
        double w = colon == std::string::npos ? 1.0 : std::stod(item.substr(colon + 1));
        if (w < 0) throw std::invalid_argument("negative weight for " + key);
        mix[k] = w;
    }
    return mix;
}

FlowGenerator::FlowGenerator(FlowConfig cfg) : cfg_(cfg), rng_(deriveSeed(cfg.seed, hashTag("flows"))) {
    if (cfg_.ratePerBlock < 0) throw std::invalid_argument("flow rate must be non-negative");
    if (cfg_.walletCount < 2) throw std::invalid_argument("flows need at least two wallets");
    if (cfg_.mix[0] + cfg_.mix[1] + cfg_.mix[2] <= 0) throw std::invalid_argument("flow mix is empty");
    for (std::size_t i = 0; i < cfg_.walletCount; ++i) keys_.push_back(keyFrom(rng_));
}

FlowGenerator::~FlowGenerator() { stop(); }

void FlowGenerator::fund(ledger::Node& node) {
    auto head = node.headState();
    for (const auto& k : keys_) {
        Address a = addressOf(k.publicKey());
        for (Asset asset : {Asset::USDC, Asset::USDT, Asset::DAI, Asset::ETH}) {
            node.mint(a, asset, worthAt(head, asset, 20'000'000));
        }
    }
}

ledger::SignedTransaction FlowGenerator::make(const ledger::Node& node, const ledger::LedgerState& head) {
    double total = cfg_.mix[0] + cfg_.mix[1] + cfg_.mix[2];
    double r = rng_.unit() * total;
    std::size_t kind = r < cfg_.mix[0] ? 0 : (r < cfg_.mix[0] + cfg_.mix[1] ? 1 : 2);
    if (cfg_.mix[kind] <= 0) kind = cfg_.mix[1] > 0 ? 1 : (cfg_.mix[0] > 0 ? 0 : 2);

    const SigningKey& key = keys_[rng_.below(keys_.size())];
    Address me = addressOf(key.publicKey());
    std::uint64_t price = 1 + rng_.below(cfg_.maxGasPrice);

    std::vector<ledger::PoolKey> pools;
    for (const auto& p : hotPools()) {
        if (head.pools.count(p)) pools.push_back(p);
    }
    if (pools.empty() && kind != 0) kind = 0;

    ledger::TransactionPlan plan;
    plan.id = "flow-" + std::to_string(++serial_);
    plan.sender = key.publicKey();
    plan.gasPrice = price;
    if (kind == 0) {
        const SigningKey& to = keys_[rng_.below(keys_.size())];
        Asset a = std::array{Asset::USDC, Asset::USDT, Asset::DAI, Asset::ETH}[rng_.below(4)];
        plan.action = ledger::TokenTransfer{me, addressOf(to.publicKey()), a,
                                            worthAt(head, a, rng_.between(100, 5000))};
    } else {
        const auto& pk = pools[rng_.below(pools.size())];
        bool forward = rng_.chance(0.5);
        Asset in = forward ? pk.a : pk.b;
        Asset out = forward ? pk.b : pk.a;
        if (kind == 1) {
            Amount amount = worthAt(head, in, rng_.between(1'000, 120'000));
            auto quote = ledger::quoteSwap(head, pk.platform, in, amount, out).value_or(Amount(0));
            plan.action = ledger::DexSwap{pk.platform, me, in, amount, out, Amount(0), quote};
        } else {
            const auto& pool = head.pools.at(pk);
            Amount a = worthAt(head, pk.a, rng_.between(2'000, 20'000));
            Amount b = a * pool.reserveB / pool.reserveA + 1;
            plan.action = ledger::DexMint{pk.platform, me, pk.a, a, pk.b, b, Amount(0)};
        }
    }
    byKind_[kind]++;
    plan.gasLimit = head.gasCost(ledger::kindOf(plan.action));
    ledger::SignedTransaction tx;
    tx.plan = std::move(plan);
    tx.stateRoot = node.headRoot();
    tx.signer = key.publicKey();
    tx.signature = key.sign(ledger::signingPayload(tx.plan, tx.stateRoot));
    return tx;
}

std::size_t FlowGenerator::submitBlock(ledger::Node& node) {
    carry_ += cfg_.ratePerBlock;
    auto n = static_cast<std::size_t>(std::floor(carry_));
    carry_ -= static_cast<double>(n);
    if (n == 0) return 0;
    auto head = node.headState();
    std::size_t ok = 0;
    for (std::size_t i = 0; i < n; ++i) {
        try {
            node.sendRawTransaction(make(node, head));
            ++ok;
            ++submitted_;
        } catch (const ledger::NodeError&) {
            ++rejected_;
        }
    }
    return ok;
}

void FlowGenerator::start(ledger::Node& node) {
    stop();
    live_ = &node;
    subscription_ = node.subscribeHeads([this](const ledger::Block&) { submitBlock(*live_); });
}

void FlowGenerator::stop() {
    if (subscription_ && live_) live_->unsubscribe(*subscription_);
    subscription_.reset();
    live_ = nullptr;
}

nlohmann::ordered_json runFlows(const FlowConfig& cfg, ledger::Node& node) {
    FlowGenerator flows(cfg);
    flows.fund(node);
    node.mineBlock();
    nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
    std::size_t mined = 0;
    std::size_t reverted = 0;
    for (std::uint64_t b = 0; b < cfg.durationBlocks; ++b) {
        std::size_t sent = flows.submitBlock(node);
        auto block = node.mineBlock();
        std::size_t failed = 0;
        for (const auto& r : block.receipts) failed += r.success() ? 0 : 1;
        mined += block.receipts.size();
        reverted += failed;
        blocks.push_back({{"height", block.height},
                          {"submitted", sent},
                          {"mined", block.receipts.size()},
                          {"reverted", failed},
                          {"gasUsed", block.gasUsed},
                          {"backlog", node.pendingCount()}});
    }
    return {{"seed", cfg.seed},
            {"ratePerBlock", cfg.ratePerBlock},
            {"submitted", flows.submitted()},
            {"rejected", flows.rejected()},
            {"byKind",
             {{"transfer", flows.count(FlowKind::Transfer)},
              {"swap", flows.count(FlowKind::Swap)},
              {"liquidity", flows.count(FlowKind::Liquidity)}}},
            {"mined", mined},
            {"reverted", reverted},
            {"backlog", node.pendingCount()},
            {"blocks", blocks}};
}

}  // namespace intent::workbench
