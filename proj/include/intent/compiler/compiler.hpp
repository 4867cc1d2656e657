// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "intent/icl/ast.hpp"
#include "intent/ledger/state.hpp"
#include "intent/ledger/transaction.hpp"

namespace intent::compiler {

/// Weighted-ranking decision module. Weights are exact rationals so that
/// ties are real ties.
struct DecisionPolicy {
    Rational apy{2, 5};
    Rational poolDepth{1, 5};
    Rational riskScore{2, 5};
    Rational volume{3, 10};
    Rational priceTrend{3, 10};
    Rational floorDistance{2, 5};
    std::uint64_t rngSeed = 0;
};

struct StakeCandidate {
    Platform platform;
    Asset asset;
    std::int64_t apyPpm;
    std::int64_t riskPpm;
    Amount depth;
};

struct NftCandidate {
    Address collection;
    Address token;
    Address seller;
    Amount ask;
    Asset currency;
    Amount volume7d;
    std::int64_t trendPpm;
    std::int64_t holderCount;
};

/// Market feed read from a verified snapshot; listings are active only.
struct MarketInfo {
    std::vector<StakeCandidate> stakingPools;
    std::vector<NftCandidate> nftListings;

    static MarketInfo fromState(const ledger::LedgerState& state);
};

class CompileError : public std::runtime_error {
public:
    enum class Cause { UnknownPairing, NoCandidate, QuoteUnavailable, InvalidAmount, NotOwner };
    CompileError(int statementIndex, Cause cause, const std::string& detail);
    int statementIndex() const { return index_; }
    Cause cause() const { return cause_; }
    const std::string& detail() const { return detail_; }

private:
    int index_;
    Cause cause_;
    std::string detail_;
};

std::string_view name(CompileError::Cause cause);

struct CompileOptions {
    std::string idPrefix = "tx";
    std::uint64_t gasPrice = 1;
};

struct TransactionSet {
    std::vector<ledger::TransactionPlan> plans;  // intent order
    std::uint64_t snapshotHeight = 0;
    Digest snapshotRoot{};
};

/// One plan per statement, in source order. Triggers and constraints are
/// copied through without evaluation.
TransactionSet compileProgram(const icl::IclProgram& program, const ledger::LedgerState& snapshot,
                              const DecisionPolicy& policy, const PublicKey& sender, const CompileOptions& options = {});

ledger::TransactionPlan compileStatement(const icl::TriggerStatement& stmt, const ledger::LedgerState& snapshot,
                                         const DecisionPolicy& policy, const PublicKey& sender,
                                         const CompileOptions& options = {});

/// Score used by decideStake; exposed for exhaustive-comparison tests.
Rational stakeScore(const StakeCandidate& pool, const std::vector<StakeCandidate>& peers,
                    const std::vector<icl::StakeQualifier>& strategy, const DecisionPolicy& policy);

/// Throws CompileError(NoCandidate) with index 0 when no pool matches.
StakeCandidate decideStake(const MarketInfo& market, Asset asset,
                           const std::vector<icl::StakeQualifier>& strategy, const DecisionPolicy& policy);

/// Listings that pass the budget and every qualifier predicate.
std::vector<NftCandidate> filterNftListings(const MarketInfo& market, Asset currency, const Amount& budget,
                                            const std::vector<icl::NftQualifier>& qualifiers,
                                            const Address& buyer);

NftCandidate decideNftPurchase(const MarketInfo& market, Asset currency, const Amount& budget,
                               const std::vector<icl::NftQualifier>& qualifiers, const Address& buyer,
                               const DecisionPolicy& policy);

/// Asking price for a sale: floor x 0.98 when time-saving, the highest ask
/// in the collection when profitable, the floor otherwise.
std::pair<Amount, Asset> decideSalePrice(const MarketInfo& market, const Address& collection, const Address& token,
                                         const std::vector<icl::SellQualifier>& strategy);

/// Declared flows of a resolved action: exact or worst-case debits and
/// guaranteed credits only.
std::pair<ledger::DeltaMap, ledger::DeltaMap> estimateDeltas(const ledger::TransactionPlan& plan,
                                                            const ledger::LedgerState& snapshot);

/// Largest slippage bound implied by the constraint (min over conjunctive
/// `slippage < x` terms), or 1/100 when there is none.
Rational slippageBound(const icl::ConditionPtr& constraint);

/// Gas ceiling from a conjunctive `fee < N` / `fee <= N` term.
std::optional<std::uint64_t> feeBound(const icl::ConditionPtr& constraint);

/// Table-1 style listing: idx, trigger, main operation, constraint, plan.
nlohmann::ordered_json toJson(const TransactionSet& set);

}  // namespace intent::compiler
