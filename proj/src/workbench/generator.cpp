// SPDX-License-Identifier: Apache-2.0
#include "intent/workbench/generator.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "intent/common/random.hpp"
#include "intent/compiler/compiler.hpp"
#include "intent/icl/ast.hpp"
#include "intent/ledger/genesis.hpp"

namespace intent::workbench {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, kFamilyCount> kFamilies{{
    {Family::Transfer, "transfer"},
    {Family::Borrow, "borrow"},
    {Family::Repay, "repay"},
    {Family::Swap, "swap"},
    {Family::AddLiquidity, "add-liquidity"},
    {Family::RemoveLiquidity, "remove-liquidity"},
    {Family::Stake, "stake"},
    {Family::BuyNft, "buy-nft"},
    {Family::SellNft, "sell-nft"},
}};

// assets every builtin wallet starts with
const std::vector<Asset> kHeld{Asset::USDC, Asset::USDT, Asset::DAI, Asset::ETH};

Amount pow10(unsigned n) {
    Amount v = 1;
    for (unsigned i = 0; i < n; ++i) v *= 10;
    return v;
}

struct Output {
    enum class Kind { Fungible, Position, Liquidity } kind = Kind::Fungible;
    Address wallet;
    Asset asset = Asset::USDC;
    Asset assetB = Asset::USDC;
    Platform platform = Platform::Uniswap;
    Amount remaining;                  // base units, micro-USD of borrow capacity, or LP units
    std::optional<Platform> debtOn;    // set on borrowed funds
};

class Builder {
public:
    Builder(const GeneratorConfig& cfg, const ledger::LedgerState& g, Rng& rng)
        : cfg_(cfg), g_(g), rng_(rng), market_(compiler::MarketInfo::fromState(g)) {
        std::set<Address> sellers;
        for (const auto& l : market_.nftListings) sellers.insert(l.seller);
        for (const auto& w : ledger::builtinWallets()) {
            if (!sellers.count(w)) wallets_.push_back(w);
        }
        rng_.shuffle(std::span<Address>(wallets_));
        for (const auto& [k, p] : g_.pools) {
            if (p.lpSupply > 0) pools_.push_back(k);
        }
    }

    bool build(GeneratedProgram& out) {
        for (std::size_t x = 0; x < cfg_.statementCount; ++x) {
            bool dependent = x > 0 && rng_.chance(cfg_.dependencyIndex);
            GeneratedStatement st;
            std::vector<Output> produced;
            bool ok = dependent ? consume(st, produced) : fresh(st, produced);
            if (!ok) return false;
            out.statements.push_back(std::move(st));
            outputs_.push_back(std::move(produced));
        }
        return true;
    }

private:
    const GeneratorConfig& cfg_;
    const ledger::LedgerState& g_;
    Rng& rng_;
    compiler::MarketInfo market_;
    std::vector<Address> wallets_;
    std::size_t nextWallet_ = 0;
    std::vector<ledger::PoolKey> pools_;
    std::set<std::size_t> usedListings_;
    std::vector<std::vector<Output>> outputs_;

    Address freshWallet() { return wallets_[nextWallet_++ % wallets_.size()]; }

    std::string w(const Address& a) const { return "wallet[" + a.str() + "]"; }
    std::string amt(Asset a, const Amount& v) const { return humanAmount(a, v) + " " + std::string(symbol(a)); }

    Amount price(Asset a) const { return g_.priceMicroUsd(a).value_or(Amount(1'000'000)); }

    // a USD value in [lo, hi] dollars expressed in `a`, rounded to four decimals
    Amount worth(Asset a, std::int64_t lo, std::int64_t hi) {
        Amount usdMicro = Amount(rng_.between(lo, hi)) * 1'000'000;
        Amount v = usdMicro * pow10(decimals(a)) / price(a);
        unsigned d = decimals(a);
        Amount grain = pow10(d > 4 ? d - 4 : 0);
        v = v / grain * grain;
        return v > 0 ? v : grain;
    }

    Amount valueUsd(Asset a, const Amount& v) const { return v * price(a) / pow10(decimals(a)) / 1'000'000; }

    Amount round(Asset a, const Amount& v) const {
        unsigned d = decimals(a);
        Amount grain = pow10(d > 4 ? d - 4 : 0);
        return v / grain * grain;
    }

    std::optional<Family> pick(const std::vector<Family>& eligible) {
        double total = 0;
        for (Family f : eligible) total += cfg_.mix[static_cast<std::size_t>(f)];
        if (total <= 0) return std::nullopt;
        double r = rng_.unit() * total;
        for (Family f : eligible) {
            r -= cfg_.mix[static_cast<std::size_t>(f)];
            if (r < 0) return f;
        }
        for (auto it = eligible.rbegin(); it != eligible.rend(); ++it) {
            if (cfg_.mix[static_cast<std::size_t>(*it)] > 0) return *it;
        }
        return std::nullopt;
    }

    std::vector<ledger::PoolKey> poolsWith(Asset a, bool bothHeld) const {
        std::vector<ledger::PoolKey> out;
        for (const auto& k : pools_) {
            if (k.a != a && k.b != a) continue;
            Asset other = k.a == a ? k.b : k.a;
            if (bothHeld && std::find(kHeld.begin(), kHeld.end(), other) == kHeld.end()) continue;
            out.push_back(k);
        }
        return out;
    }

    std::vector<Platform> stakingOn(Asset a) const {
        std::vector<Platform> out;
        for (const auto& [k, p] : g_.stakingPools) {
            if (k.asset == a) out.push_back(k.platform);
        }
        return out;
    }

    bool lends(Platform p, Asset a) const { return g_.lendingReserves.count(ledger::MarketKey{p, a}) > 0; }

    std::vector<std::size_t> openListings(bool needSellerFree) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < market_.nftListings.size(); ++i) {
            const auto& l = market_.nftListings[i];
            if (usedListings_.count(i)) continue;
            if (!needSellerFree && l.ask > ledger::units(Asset::ETH, "50")) continue;
            out.push_back(i);
        }
        return out;
    }

    // statement writers ------------------------------------------------------

    void transfer(GeneratedStatement& st, std::vector<Output>& out, const Address& from, Asset a, const Amount& v) {
        Address to = freshWallet();
        st.family = Family::Transfer;
        st.text = "transfer " + amt(a, v) + " from " + w(from) + " to " + w(to) + ";";
        out.push_back({Output::Kind::Fungible, to, a, a, Platform::Uniswap, v, std::nullopt});
    }

    void swap(GeneratedStatement& st, std::vector<Output>& out, const Address& from, Asset a, const Amount& v,
              const ledger::PoolKey& k) {
        Asset b = k.a == a ? k.b : k.a;
        st.family = Family::Swap;
        st.text = "swap " + amt(a, v) + " from " + w(from) + " for " + std::string(symbol(b)) + " on " +
                  std::string(name(k.platform)) + " checking slippage < 0.01;";
        auto quote = ledger::quoteSwap(g_, k.platform, a, v, b).value_or(Amount(0));
        Amount guaranteed = round(b, quote * 99 / 100);
        if (guaranteed > 0) out.push_back({Output::Kind::Fungible, from, b, b, k.platform, guaranteed, std::nullopt});
    }

    void addLiquidity(GeneratedStatement& st, std::vector<Output>& out, const Address& from, Asset a,
                      const Amount& v, const ledger::PoolKey& k) {
        Asset b = k.a == a ? k.b : k.a;
        const auto& pool = g_.pools.at(k);
        const Amount& ra = k.a == a ? pool.reserveA : pool.reserveB;
        const Amount& rb = k.a == a ? pool.reserveB : pool.reserveA;
        Amount vb = round(b, v * rb / ra) + pow10(decimals(b) > 4 ? decimals(b) - 4 : 0);
        st.family = Family::AddLiquidity;
        st.text = "add " + amt(a, v) + ", " + amt(b, vb) + " to " + std::string(name(k.platform)) +
                  " receiving liquidity token to " + w(from) + ";";
        Amount minted = v * pool.lpSupply / ra * 99 / 100;
        if (minted > 1) out.push_back({Output::Kind::Liquidity, from, k.a, k.b, k.platform, minted, std::nullopt});
    }

    void stake(GeneratedStatement& st, std::vector<Output>& out, const Address& from, Asset a, const Amount& v) {
        auto platforms = stakingOn(a);
        Platform p;
        st.family = Family::Stake;
        if (rng_.chance(0.5)) {
            static const std::vector<std::vector<icl::StakeQualifier>> strategies{
                {icl::StakeQualifier::LowRisk, icl::StakeQualifier::LongTerm},
                {icl::StakeQualifier::HighRisk, icl::StakeQualifier::ShortTerm},
                {icl::StakeQualifier::MiddleRisk},
                {icl::StakeQualifier::MiddleTerm},
            };
            const auto& s = strategies[rng_.below(strategies.size())];
            p = compiler::decideStake(market_, a, s, {}).platform;
            std::string words;
            for (auto q : s) words += std::string(icl::keyword(q)) + " ";
            st.text = "stake " + amt(a, v) + " from " + w(from) + " using " + words + "strategy;";
        } else {
            p = platforms[rng_.below(platforms.size())];
            st.text = "stake " + amt(a, v) + " from " + w(from) + " on " + std::string(name(p)) + ";";
        }
        bool canBorrow = false;
        for (Asset c : kHeld) canBorrow = canBorrow || lends(p, c);
        if (canBorrow) {
            // borrowing capacity at 1.5x collateral, micro-USD
            Amount capacity = valueUsd(a, v) * 1'000'000 * 2 / 3;
            out.push_back({Output::Kind::Position, from, a, a, p, capacity, std::nullopt});
        }
    }

    // independent statements -------------------------------------------------

    bool fresh(GeneratedStatement& st, std::vector<Output>& out) {
        std::vector<Family> eligible{Family::Transfer, Family::Swap, Family::AddLiquidity, Family::Stake};
        if (!openListings(false).empty()) eligible.push_back(Family::BuyNft);
        if (!openListings(true).empty()) eligible.push_back(Family::SellNft);
        auto f = pick(eligible);
        if (!f) return false;
        Address from = freshWallet();
        Asset a = kHeld[rng_.below(kHeld.size())];
        Amount v = worth(a, 500, 5000);
        switch (*f) {
            case Family::Transfer: transfer(st, out, from, a, v); break;
            case Family::Swap: {
                auto ps = poolsWith(a, false);
                swap(st, out, from, a, v, ps[rng_.below(ps.size())]);
                break;
            }
            case Family::AddLiquidity: {
                auto ps = poolsWith(a, true);
                addLiquidity(st, out, from, a, v, ps[rng_.below(ps.size())]);
                break;
            }
            case Family::Stake: stake(st, out, from, a, v); break;
            case Family::BuyNft: {
                auto open = openListings(false);
                std::size_t i = open[rng_.below(open.size())];
                usedListings_.insert(i);
                const auto& l = market_.nftListings[i];
                st.family = Family::BuyNft;
                st.text = "buy NFT [" + l.token.str() + "] in collection [" + l.collection.str() + "] using at most " +
                          amt(l.currency, l.ask) + " from " + w(from) + ";";
                break;
            }
            case Family::SellNft: {
                auto open = openListings(true);
                std::size_t i = open[rng_.below(open.size())];
                usedListings_.insert(i);
                const auto& l = market_.nftListings[i];
                st.family = Family::SellNft;
                st.text = "sell NFT [" + l.token.str() + "] in collection [" + l.collection.str() + "] from " +
                          w(l.seller) + (rng_.chance(0.5) ? " using time-saving strategy;" : " using profitable strategy;");
                break;
            }
            default: return false;
        }
        return true;
    }

    // dependent statements ---------------------------------------------------

    bool live(const Output& o) const {
        switch (o.kind) {
            case Output::Kind::Fungible: return valueUsd(o.asset, o.remaining) >= 2;
            case Output::Kind::Position: return o.remaining >= 2'000'000;
            case Output::Kind::Liquidity: return o.remaining >= 2;
        }
        return false;
    }

    std::vector<Family> consumersOf(const Output& o) const {
        switch (o.kind) {
            case Output::Kind::Position: return {Family::Borrow};
            case Output::Kind::Liquidity: return {Family::RemoveLiquidity};
            case Output::Kind::Fungible: break;
        }
        std::vector<Family> out{Family::Transfer};
        if (!poolsWith(o.asset, false).empty()) out.push_back(Family::Swap);
        if (!stakingOn(o.asset).empty()) out.push_back(Family::Stake);
        if (!poolsWith(o.asset, true).empty()) out.push_back(Family::AddLiquidity);
        if (o.debtOn) out.push_back(Family::Repay);
        return out;
    }

    bool consume(GeneratedStatement& st, std::vector<Output>& out) {
        std::vector<std::size_t> candidates;
        for (std::size_t y = 0; y < outputs_.size(); ++y) {
            if (std::any_of(outputs_[y].begin(), outputs_[y].end(), [&](const Output& o) { return live(o); })) {
                candidates.push_back(y);
            }
        }
        for (int attempt = 0; attempt < 32 && !candidates.empty(); ++attempt) {
            std::size_t y = candidates[rng_.below(candidates.size())];
            std::vector<std::size_t> slots;
            for (std::size_t i = 0; i < outputs_[y].size(); ++i) {
                if (live(outputs_[y][i])) slots.push_back(i);
            }
            Output& o = outputs_[y][slots[rng_.below(slots.size())]];
            auto f = pick(consumersOf(o));
            if (!f) continue;
            st.dependsOn = y;
            emitConsumer(st, out, o, *f);
            return true;
        }
        return false;
    }

    void emitConsumer(GeneratedStatement& st, std::vector<Output>& out, Output& o, Family f) {
        if (o.kind == Output::Kind::Position) {
            std::vector<Asset> lendable;
            for (Asset c : kHeld) {
                if (lends(o.platform, c)) lendable.push_back(c);
            }
            Asset c = lendable[rng_.below(lendable.size())];
            Amount usd = o.remaining / 2;
            o.remaining -= usd;
            Amount v = std::max(round(c, usd * pow10(decimals(c)) / price(c)), Amount(1));
            st.family = Family::Borrow;
            st.text = "borrow " + amt(c, v) + " for " + w(o.wallet) + " from " + std::string(name(o.platform)) + ";";
            out.push_back({Output::Kind::Fungible, o.wallet, c, c, o.platform, v, o.platform});
            return;
        }
        if (o.kind == Output::Kind::Liquidity) {
            auto key = ledger::PoolKey{o.platform, o.asset, o.assetB};
            const auto& pool = g_.pools.at(key);
            Amount lp = o.remaining / 2;
            o.remaining -= lp;
            Amount minA = round(o.asset, lp * pool.reserveA / pool.lpSupply * 9 / 10);
            Amount minB = round(o.assetB, lp * pool.reserveB / pool.lpSupply * 9 / 10);
            st.family = Family::RemoveLiquidity;
            st.text = "remove " + amt(o.asset, minA) + ", " + amt(o.assetB, minB) + " from " +
                      std::string(name(o.platform)) + " returning " + lp.str() + " liquidity from " + w(o.wallet) +
                      ";";
            if (minA > 0) out.push_back({Output::Kind::Fungible, o.wallet, o.asset, o.asset, o.platform, minA, {}});
            if (minB > 0) out.push_back({Output::Kind::Fungible, o.wallet, o.assetB, o.assetB, o.platform, minB, {}});
            return;
        }
        Amount v = round(o.asset, o.remaining / 2);
        if (v == 0) v = o.remaining;
        // liquidity partners come from the wallet's own funds, keep them small
        if (f == Family::AddLiquidity) {
            Amount cap = worth(o.asset, 2000, 2000);
            if (v > cap) v = cap;
        }
        o.remaining -= v;
        switch (f) {
            case Family::Transfer: transfer(st, out, o.wallet, o.asset, v); break;
            case Family::Swap: {
                auto ps = poolsWith(o.asset, false);
                swap(st, out, o.wallet, o.asset, v, ps[rng_.below(ps.size())]);
                break;
            }
            case Family::Stake: stake(st, out, o.wallet, o.asset, v); break;
            case Family::AddLiquidity: {
                auto ps = poolsWith(o.asset, true);
                addLiquidity(st, out, o.wallet, o.asset, v, ps[rng_.below(ps.size())]);
                break;
            }
            case Family::Repay:
                st.family = Family::Repay;
                st.text = "repay " + amt(o.asset, v) + " from " + w(o.wallet) + " to " + std::string(name(*o.debtOn)) + ";";
                break;
            default: break;
        }
    }
};

}  // namespace

std::string_view name(Family f) {
    for (const auto& [k, s] : kFamilies) {
        if (k == f) return s;
    }
    return "?";
}

std::optional<Family> parseFamily(std::string_view text) {
    for (const auto& [k, s] : kFamilies) {
        if (s == text) return k;
    }
    return std::nullopt;
}

IntentMix parseMix(std::string_view text) {
    IntentMix mix{};
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        auto f = parseFamily(item.substr(0, colon));
        if (!f) throw std::invalid_argument("unknown intent family: " + item.substr(0, colon));
        double weight = colon == std::string::npos ? 1.0 : std::stod(item.substr(colon + 1));
        if (weight < 0) throw std::invalid_argument("negative weight for " + item.substr(0, colon));
        mix[static_cast<std::size_t>(*f)] = weight;
    }
    return mix;
}

std::string humanAmount(Asset asset, const Amount& amount) {
    Amount scale = pow10(decimals(asset));
    std::string whole = Amount(amount / scale).str();
    std::string frac = Amount(amount % scale).str();
    if (frac == "0") return whole;
    frac.insert(0, decimals(asset) - frac.size(), '0');
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    return whole + "." + frac;
}

std::string GeneratedProgram::source() const {
    std::string out;
    for (const auto& s : statements) out += s.text + "\n";
    return out;
}

double GeneratedProgram::dependencyFraction() const {
    if (statements.size() < 2) return 0.0;
    auto deps = std::count_if(statements.begin() + 1, statements.end(),
                              [](const GeneratedStatement& s) { return s.dependsOn.has_value(); });
    return static_cast<double>(deps) / static_cast<double>(statements.size() - 1);
}

GeneratedProgram generateProgram(const GeneratorConfig& cfg, const ledger::LedgerState& genesis) {
    if (cfg.dependencyIndex < 0 || cfg.dependencyIndex > 1) {
        throw std::invalid_argument("dependency index must lie in [0, 1]");
    }
    Rng rng(deriveSeed(cfg.seed, hashTag("program")));
    for (int attempt = 0; attempt < 64; ++attempt) {
        GeneratedProgram program;
        Builder b(cfg, genesis, rng);
        if (b.build(program)) return program;
    }
    throw GenerationExhausted("could not satisfy the intent mix and dependency index after 64 attempts");
}

nlohmann::ordered_json toJson(const GeneratedProgram& program) {
    nlohmann::ordered_json stmts = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < program.statements.size(); ++i) {
        const auto& s = program.statements[i];
        nlohmann::ordered_json j{{"index", i + 1}, {"family", name(s.family)}};
        j["dependsOn"] = s.dependsOn ? nlohmann::ordered_json(*s.dependsOn + 1) : nlohmann::ordered_json(nullptr);
        j["text"] = s.text;
        stmts.push_back(j);
    }
    return {{"statements", stmts}, {"dependencyFraction", program.dependencyFraction()}, {"source", program.source()}};
}

}  // namespace intent::workbench
