// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "intent/common/amount.hpp"
#include "intent/common/asset.hpp"
#include "intent/icl/token.hpp"

namespace intent::icl {

// Arithmetic (amount) expressions -------------------------------------------

enum class ArithOp { Add, Sub, Mul, Div, Mod };
enum class UnaryOp { Plus, Minus, Not };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct NumberExpr {
    std::string lexeme;
    Rational value;
};

struct UnaryExpr {
    UnaryOp op;
    ExprPtr operand;
};

struct BinaryExpr {
    ArithOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct Expr {
    std::variant<NumberExpr, UnaryExpr, BinaryExpr> node;
    Span span;
};

/// `binaryExpression asset` in statement position.
struct AmountExpr {
    ExprPtr expr;
    Asset asset;
    Span span;
};

// Conditions ------------------------------------------------------------------

enum class CompareOp { Eq, Neq, Lt, Gt, Le, Ge };

struct Condition;
using ConditionPtr = std::shared_ptr<const Condition>;

struct WalletBalanceRef {
    Address wallet;
};
struct PriceRef {
    Asset asset;
};
struct AmountLiteral {
    std::string lexeme;
    Rational value;
    Asset asset;
};
struct NumberLiteral {
    std::string lexeme;
    Rational value;
};
struct SlippageRef {};
struct FeeRef {};
/// A parenthesised condition used as a comparison operand.
struct NestedCondition {
    ConditionPtr inner;
};

using ComparisonElement = std::variant<WalletBalanceRef, PriceRef, AmountLiteral, NumberLiteral,
                                       SlippageRef, FeeRef, NestedCondition>;

struct Comparison {
    ComparisonElement lhs;
    CompareOp op;
    ComparisonElement rhs;
};

struct TimeLiteral {
    std::string lexeme;
    std::int64_t epochSeconds;  // UTC
};

struct TimeCondition {
    enum class Kind { Before, After, During };
    Kind kind;
    TimeLiteral from;
    std::optional<TimeLiteral> to;  // During only
};

/// `( condition )` standing alone as a conjunct.
struct GroupCondition {
    ConditionPtr inner;
};

struct AndCondition {
    std::vector<ConditionPtr> terms;  // size >= 2
};

struct OrCondition {
    std::vector<ConditionPtr> terms;  // size >= 2
};

struct Condition {
    std::variant<OrCondition, AndCondition, Comparison, TimeCondition, GroupCondition> node;
    Span span;
};

// Statements ------------------------------------------------------------------

struct TransferStmt {
    AmountExpr amount;
    Address from;
    Address to;
};

struct BorrowStmt {
    AmountExpr amount;
    Address wallet;
    Platform platform;
};

struct RepayStmt {
    AmountExpr amount;
    Address wallet;
    Platform platform;
};

struct SwapStmt {
    AmountExpr amount;
    Address wallet;
    Asset toAsset;
    Platform platform;
};

struct AddLiquidityStmt {
    AmountExpr amountA;
    AmountExpr amountB;
    Platform platform;
    Address receiver;
};

struct RemoveLiquidityStmt {
    AmountExpr amountA;
    AmountExpr amountB;
    Platform platform;
    std::string liquidity;  // DEC_INT lexeme
    std::optional<Address> tokenKey;
    Address wallet;
};

enum class StakeQualifier { LowRisk, MiddleRisk, HighRisk, ShortTerm, MiddleTerm, LongTerm };

struct StakeStmt {
    AmountExpr amount;
    Address wallet;
    /// Present when the source has `using ... strategy` (possibly with no
    /// qualifiers); qualifiers kept in source order.
    std::optional<std::vector<StakeQualifier>> strategy;
};

struct SimpleStakeStmt {
    AmountExpr amount;
    Address wallet;
    Platform platform;
};

enum class NftQualifier { Mainstream, Popular, Rare, Inexpensive, PriceIncreasing, PriceDecreasing };

struct BuyNftStmt {
    std::vector<NftQualifier> qualifiers;
    AmountExpr budget;
    Address wallet;
};

struct SimpleBuyNftStmt {
    Address nft;
    Address collection;
    AmountExpr budget;
    Address wallet;
};

enum class SellQualifier { TimeSaving, Profitable };

struct SellNftStmt {
    Address nft;
    Address collection;
    Address wallet;
    std::optional<std::vector<SellQualifier>> strategy;
};

struct SimpleSellNftStmt {
    Address nft;
    Address collection;
    Address wallet;
    AmountExpr minAmount;
};

using Statement = std::variant<TransferStmt, BorrowStmt, RepayStmt, SwapStmt, AddLiquidityStmt,
                               RemoveLiquidityStmt, StakeStmt, SimpleStakeStmt, BuyNftStmt,
                               SimpleBuyNftStmt, SellNftStmt, SimpleSellNftStmt>;

struct TriggerStatement {
    ConditionPtr trigger;  // may be null
    Statement statement;
    ConditionPtr constraint;  // may be null
    int index = 0;            // 1-based
    Span span;
};

struct IclProgram {
    std::vector<TriggerStatement> statements;
    std::string source;
};

std::string_view keyword(StakeQualifier q);
std::string_view keyword(NftQualifier q);
std::string_view keyword(SellQualifier q);
std::string_view symbol(CompareOp op);
std::string_view symbol(ArithOp op);

/// Family name used in reports, e.g. "swap", "buy-nft".
std::string_view statementKind(const Statement& stmt);

}  // namespace intent::icl
