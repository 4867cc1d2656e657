// SPDX-License-Identifier: Apache-2.0
#include "intent/ledger/genesis.hpp"

#include <cstdio>
#include <stdexcept>

#include "intent/common/random.hpp"

namespace intent::ledger {
namespace {

Asset assetField(const nlohmann::json& j, const char* key) {
    auto a = parseAsset(j.at(key).get<std::string>());
    if (!a) throw std::invalid_argument(std::string("genesis: unknown asset in ") + key);
    return *a;
}

Platform platformField(const nlohmann::json& j, const char* key) {
    auto p = parsePlatform(j.at(key).get<std::string>());
    if (!p) throw std::invalid_argument(std::string("genesis: unknown platform in ") + key);
    return *p;
}

std::string text(const nlohmann::json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
    return j.dump();
}

std::int64_t ppm(const nlohmann::json& j) {
    return static_cast<std::int64_t>(floorRational(parseDecimal(text(j)) * 1'000'000));
}

Amount microUsd(std::string_view usd) { return floorRational(parseDecimal(usd) * 1'000'000); }

Address hexAddress(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
    return Address::parse(buf);
}

void addPool(LedgerState& s, Platform p, Asset x, const Amount& rx, Asset y, const Amount& ry) {
    auto key = PoolKey::of(p, x, y);
    Pool pool;
    pool.reserveA = key.a == x ? rx : ry;
    pool.reserveB = key.a == x ? ry : rx;
    pool.lpSupply = isqrt(pool.reserveA * pool.reserveB);
    s.pools[key] = pool;
}

void addListing(LedgerState& s, const Address& coll, const Address& tok, const Address& seller, Amount ask,
                Amount volume, std::int64_t trendPpm, std::int64_t holders) {
    AssetId id = AssetId::nft(coll, tok);
    s.setBalance(seller, id, 1);
    Listing l;
    l.seller = seller;
    l.ask = std::move(ask);
    l.currency = Asset::ETH;
    l.volume7d = std::move(volume);
    l.trendPpm = trendPpm;
    l.holderCount = holders;
    s.listings[id] = l;
}

std::int64_t usdPrice(Asset a) {
    switch (a) {
        case Asset::USDT:
        case Asset::USDC:
        case Asset::DAI:
        case Asset::SUSHI:
        case Asset::MATIC: return 1;
        case Asset::ETH:
        case Asset::WETH: return 4000;
        case Asset::BTC:
        case Asset::WBTC: return 60000;
        case Asset::UNI: return 10;
        case Asset::AAVE: return 100;
        case Asset::COMP: return 50;
    }
    return 1;
}

Amount worth(Asset a, std::int64_t usd) { return Amount(usd) * pow10(decimals(a)) / usdPrice(a); }

}  // namespace

Amount units(Asset asset, std::string_view human) {
    return floorRational(parseDecimal(human) * Rational(pow10(decimals(asset))));
}

Address demoWallet() { return Address::parse("0xa"); }

LedgerState genesisFromJson(const nlohmann::json& j) {
    LedgerState s;
    if (j.contains("config")) {
        const auto& c = j.at("config");
        s.config.blockGasLimit = c.value("blockGasLimit", s.config.blockGasLimit);
        s.config.genesisTime = c.value("genesisTime", s.config.genesisTime);
        s.config.blockTimeSeconds = c.value("blockTimeSeconds", s.config.blockTimeSeconds);
    }
    for (const auto& b : j.value("balances", nlohmann::json::array())) {
        AssetId id = AssetId::parse(b.at("asset").get<std::string>());
        Address w = Address::parse(b.at("wallet").get<std::string>());
        Amount amount = id.fungible() ? units(*id.fungible(), text(b.at("amount"))) : parseAmount(text(b.at("amount")));
        s.setBalance(w, id, s.balanceOf(w, id) + amount);
    }
    if (j.contains("prices")) {
        for (const auto& [sym, v] : j.at("prices").items()) {
            auto a = parseAsset(sym);
            if (!a) throw std::invalid_argument("genesis: unknown asset " + sym);
            s.prices[*a] = microUsd(text(v));
        }
    }
    for (const auto& p : j.value("pools", nlohmann::json::array())) {
        Asset a = assetField(p, "a");
        Asset b = assetField(p, "b");
        addPool(s, platformField(p, "platform"), a, units(a, text(p.at("reserveA"))), b,
                units(b, text(p.at("reserveB"))));
    }
    for (const auto& l : j.value("lending", nlohmann::json::array())) {
        Asset a = assetField(l, "asset");
        s.lendingReserves[MarketKey{platformField(l, "platform"), a}] = units(a, text(l.at("liquidity")));
    }
    for (const auto& sp : j.value("stakingPools", nlohmann::json::array())) {
        Asset a = assetField(sp, "asset");
        StakingPool pool;
        pool.apyPpm = ppm(sp.at("apy"));
        pool.riskPpm = ppm(sp.at("risk"));
        pool.depth = units(a, text(sp.at("depth")));
        s.stakingPools[MarketKey{platformField(sp, "platform"), a}] = pool;
    }
    for (const auto& l : j.value("listings", nlohmann::json::array())) {
        Asset cur = l.contains("currency") ? assetField(l, "currency") : Asset::ETH;
        addListing(s, Address::parse(l.at("collection").get<std::string>()),
                   Address::parse(l.at("token").get<std::string>()), Address::parse(l.at("seller").get<std::string>()),
                   units(cur, text(l.at("ask"))), units(cur, text(l.value("volume7d", nlohmann::json("0")))),
                   ppm(l.value("trend", nlohmann::json("0"))), l.value("holders", std::int64_t{0}));
        s.listings[AssetId::nft(Address::parse(l.at("collection").get<std::string>()),
                                Address::parse(l.at("token").get<std::string>()))]
            .currency = cur;
    }
    for (const auto& a : j.value("allowances", nlohmann::json::array())) {
        std::string asset = a.at("asset").get<std::string>();
        std::string amount = text(a.at("amount"));
        Amount value;
        if (amount == "unlimited") {
            value = unlimitedAllowance();
        } else if (auto f = parseAsset(asset)) {
            value = units(*f, amount);
        } else {
            value = parseAmount(amount);
        }
        s.allowances[AllowanceKey{Address::parse(a.at("owner").get<std::string>()),
                                  Address::parse(a.at("spender").get<std::string>()), asset}] = value;
    }
    if (j.contains("gasSchedule")) {
        for (const auto& [k, v] : j.at("gasSchedule").items()) {
            auto kind = parseActionKind(k);
            if (!kind) throw std::invalid_argument("genesis: unknown action kind " + k);
            s.gasSchedule[*kind] = v.get<std::uint64_t>();
        }
    }
    return s;
}

std::vector<Address> builtinWallets() {
    std::vector<Address> out;
    for (std::uint64_t i = 0; i < 256; ++i) out.push_back(hexAddress(0xb000 + i));
    return out;
}

LedgerState builtinGenesis() {
    LedgerState s;
    Rng rng(0x6e65736973ULL);
    for (Asset a : {Asset::USDT, Asset::USDC, Asset::ETH, Asset::DAI, Asset::BTC, Asset::WBTC, Asset::WETH, Asset::UNI,
                    Asset::SUSHI, Asset::AAVE, Asset::MATIC, Asset::COMP}) {
        s.setPrice(a, usdPrice(a));
    }
    const Address demo = demoWallet();
    s.setBalance(demo, Asset::USDC, units(Asset::USDC, "1000000"));
    s.setBalance(demo, Asset::ETH, units(Asset::ETH, "200"));
    for (const Address& w : builtinWallets()) {
        s.setBalance(w, Asset::USDC, worth(Asset::USDC, 200'000));
        s.setBalance(w, Asset::USDT, worth(Asset::USDT, 200'000));
        s.setBalance(w, Asset::DAI, worth(Asset::DAI, 100'000));
        s.setBalance(w, Asset::ETH, units(Asset::ETH, "100"));
        s.setBalance(w, Asset::WBTC, units(Asset::WBTC, "2"));
        s.setBalance(w, Asset::UNI, units(Asset::UNI, "5000"));
        s.setBalance(w, Asset::AAVE, units(Asset::AAVE, "500"));
    }

    const std::pair<Asset, Asset> pairs[] = {
        {Asset::USDC, Asset::USDT}, {Asset::USDC, Asset::DAI},  {Asset::USDT, Asset::DAI},
        {Asset::USDC, Asset::ETH},  {Asset::USDT, Asset::ETH},  {Asset::DAI, Asset::ETH},
        {Asset::ETH, Asset::WBTC},  {Asset::USDC, Asset::WBTC}, {Asset::ETH, Asset::UNI},
        {Asset::ETH, Asset::AAVE},  {Asset::ETH, Asset::SUSHI}, {Asset::ETH, Asset::COMP},
        {Asset::ETH, Asset::MATIC}, {Asset::ETH, Asset::WETH},
    };
    for (auto [x, y] : pairs) {
        addPool(s, Platform::Uniswap, x, worth(x, 40'000'000), y, worth(y, 40'000'000));
        addPool(s, Platform::Sushiswap, x, worth(x, 20'000'000), y, worth(y, 20'000'000));
    }
    for (auto [x, y] : {std::pair{Asset::USDC, Asset::USDT}, std::pair{Asset::USDC, Asset::DAI},
                        std::pair{Asset::USDT, Asset::DAI}}) {
        addPool(s, Platform::Curve, x, worth(x, 60'000'000), y, worth(y, 60'000'000));
    }

    for (Platform p : {Platform::Aave, Platform::Compound}) {
        for (Asset a : {Asset::USDC, Asset::USDT, Asset::DAI, Asset::ETH, Asset::WBTC}) {
            s.lendingReserves[MarketKey{p, a}] = worth(a, 50'000'000);
        }
    }

    struct PoolSpec {
        Platform platform;
        Asset asset;
        std::int64_t apyPpm;
        std::int64_t riskPpm;
        std::int64_t depthUsd;
    };
    const PoolSpec staking[] = {
        {Platform::Aave, Asset::ETH, 30'000, 100'000, 400'000'000},
        {Platform::Compound, Asset::ETH, 45'000, 300'000, 150'000'000},
        {Platform::Yearn, Asset::ETH, 90'000, 800'000, 60'000'000},
        {Platform::Curve, Asset::ETH, 60'000, 500'000, 90'000'000},
        {Platform::Aave, Asset::USDC, 40'000, 100'000, 300'000'000},
        {Platform::Compound, Asset::USDC, 50'000, 200'000, 120'000'000},
        {Platform::Yearn, Asset::USDC, 80'000, 600'000, 40'000'000},
        {Platform::Aave, Asset::USDT, 38'000, 150'000, 200'000'000},
        {Platform::Curve, Asset::USDT, 55'000, 350'000, 80'000'000},
        {Platform::Compound, Asset::DAI, 42'000, 200'000, 90'000'000},
        {Platform::Yearn, Asset::DAI, 75'000, 650'000, 30'000'000},
        {Platform::Aave, Asset::WBTC, 15'000, 150'000, 250'000'000},
    };
    for (const auto& p : staking) {
        s.stakingPools[MarketKey{p.platform, p.asset}] = StakingPool{p.apyPpm, p.riskPpm, worth(p.asset, p.depthUsd)};
    }

    auto wallets = builtinWallets();
    for (std::uint64_t c = 1; c <= 8; ++c) {
        Address coll = hexAddress(0xc000 + c);
        Amount floor = units(Asset::ETH, std::to_string(rng.between(1, 70)));
        Amount volume = units(Asset::ETH, std::to_string(rng.between(100, 5000)));
        std::int64_t trend = rng.between(-100'000, 100'000);
        std::int64_t holders = rng.between(500, 10'000);
        for (std::uint64_t t = 1; t <= 6; ++t) {
            Amount ask = floor * (100 + rng.between(0, 50)) / 100;
            addListing(s, coll, hexAddress(t), wallets[rng.below(wallets.size())], ask, volume, trend, holders);
        }
    }
    return s;
}

LedgerState sampleGenesis() {
    LedgerState s;
    for (Asset a : {Asset::USDT, Asset::USDC, Asset::DAI}) s.setPrice(a, 1);
    s.setPrice(Asset::ETH, 4200);
    const Address demo = demoWallet();
    s.setBalance(demo, Asset::USDC, units(Asset::USDC, "1000000"));
    s.setBalance(demo, Asset::ETH, units(Asset::ETH, "200"));

    // skewed so 400,000 USDC quotes about 403,500 USDT
    addPool(s, Platform::Uniswap, Asset::USDC, units(Asset::USDC, "20000000"), Asset::USDT,
            units(Asset::USDT, "20640000"));
    addPool(s, Platform::Uniswap, Asset::USDC, units(Asset::USDC, "40000000"), Asset::ETH, units(Asset::ETH, "10000"));
    addPool(s, Platform::Sushiswap, Asset::USDC, units(Asset::USDC, "5000000"), Asset::USDT,
            units(Asset::USDT, "5000000"));
    s.lendingReserves[MarketKey{Platform::Aave, Asset::USDC}] = units(Asset::USDC, "50000000");

    s.stakingPools[MarketKey{Platform::Aave, Asset::ETH}] = StakingPool{30'000, 100'000, units(Asset::ETH, "100000")};
    s.stakingPools[MarketKey{Platform::Yearn, Asset::ETH}] = StakingPool{90'000, 800'000, units(Asset::ETH, "15000")};
    s.stakingPools[MarketKey{Platform::Compound, Asset::ETH}] =
        StakingPool{45'000, 300'000, units(Asset::ETH, "40000")};

    const Address seller = Address::parse("0xb");
    const Address popular = Address::parse("0xc1");
    const Address fading = Address::parse("0xc2");
    const Address niche = Address::parse("0xc3");
    addListing(s, popular, Address::parse("0x1"), seller, units(Asset::ETH, "62"), units(Asset::ETH, "2400"), 60'000,
               6'000);
    addListing(s, popular, Address::parse("0x2"), seller, units(Asset::ETH, "95"), units(Asset::ETH, "2400"), 60'000,
               6'000);
    addListing(s, fading, Address::parse("0x1"), seller, units(Asset::ETH, "40"), units(Asset::ETH, "3100"), -40'000,
               8'000);
    addListing(s, niche, Address::parse("0x1"), seller, units(Asset::ETH, "12"), units(Asset::ETH, "150"), 20'000,
               900);
    return s;
}

}  // namespace intent::ledger
