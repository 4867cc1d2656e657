// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "intent/ledger/state.hpp"

namespace intent::ledger {

/// Loads a genesis description. Quantities are human decimals scaled by
/// the asset's decimals; prices are USD decimals. Example:
///   {"config": {"blockGasLimit": 30000000},
///    "balances": [{"wallet": "0xa", "asset": "USDC", "amount": "1000000"}],
///    "prices": {"ETH": "4000"},
///    "pools": [{"platform": "Uniswap", "a": "USDC", "b": "USDT",
///               "reserveA": "1e7", "reserveB": "1e7"}],
///    "lending": [{"platform": "Aave", "asset": "USDC", "liquidity": "5e7"}],
///    "stakingPools": [{"platform": "Aave", "asset": "ETH", "apy": "0.03",
///                      "risk": "0.1", "depth": "50000"}],
///    "listings": [{"collection": "0xc1", "token": "0x1", "seller": "0xb",
///                  "ask": "62", "currency": "ETH", "volume7d": "900",
///                  "trend": "0.05", "holders": 3000}],
///    "allowances": [{"owner": "0xa", "spender": "0xb", "asset": "*",
///                    "amount": "unlimited"}],
///    "gasSchedule": {"DexSwap": 110793}}
/// Throws std::invalid_argument on malformed input.
LedgerState genesisFromJson(const nlohmann::json& j);

/// Human-decimal quantity of `asset` in base units, floored.
Amount units(Asset asset, std::string_view human);

/// The wallet every demo program spends from: 0xa.
Address demoWallet();

/// Deterministic market with ~256 funded wallets, DEX pools on several
/// platforms, lending reserves, staking pools and NFT listings. The demo
/// wallet holds 1,000,000 USDC and 200 ETH.
LedgerState builtinGenesis();
std::vector<Address> builtinWallets();

/// Market tuned so the five-statement sample program executes fully.
LedgerState sampleGenesis();

}  // namespace intent::ledger
