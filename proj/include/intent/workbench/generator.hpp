// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "intent/ledger/state.hpp"

namespace intent::workbench {

enum class Family { Transfer, Borrow, Repay, Swap, AddLiquidity, RemoveLiquidity, Stake, BuyNft, SellNft };
inline constexpr std::size_t kFamilyCount = 9;

std::string_view name(Family f);
std::optional<Family> parseFamily(std::string_view text);

using IntentMix = std::array<double, kFamilyCount>;
inline constexpr IntentMix kUniformMix{1, 1, 1, 1, 1, 1, 1, 1, 1};

/// Parses "swap:2,transfer:1"; unnamed families get weight 0.
IntentMix parseMix(std::string_view text);

struct GeneratorConfig {
    std::size_t statementCount = 50;
    double dependencyIndex = 0.0;
    IntentMix mix = kUniformMix;
    std::uint64_t seed = 0;
};

class GenerationExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GeneratedStatement {
    Family family;
    std::optional<std::size_t> dependsOn;  // earlier statement whose output is consumed
    std::string text;
};

struct GeneratedProgram {
    std::vector<GeneratedStatement> statements;

    std::string source() const;
    /// Share of statements after the first that consume an earlier output.
    double dependencyFraction() const;
};

/// Borrow, repay and remove-liquidity only appear as consumers: on their own
/// they would have nothing to draw from.
GeneratedProgram generateProgram(const GeneratorConfig& cfg, const ledger::LedgerState& genesis);

nlohmann::ordered_json toJson(const GeneratedProgram& program);

/// Human decimal rendering of a base-unit amount, exact.
std::string humanAmount(Asset asset, const Amount& amount);

}  // namespace intent::workbench
