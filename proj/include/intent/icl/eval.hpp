// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "intent/common/amount.hpp"
#include "intent/common/asset.hpp"
#include "intent/icl/ast.hpp"

namespace intent::icl {

/// Read access the evaluator needs; implemented by ledger states and
/// verified snapshots.
class ConditionState {
public:
    virtual ~ConditionState() = default;
    /// Base units; unknown wallets read as zero.
    virtual Amount balanceOf(const Address& wallet, const AssetId& asset) const = 0;
    /// Oracle price in micro-USD, if one is set.
    virtual std::optional<Amount> priceMicroUsd(Asset asset) const = 0;
};

struct RuntimeObservations {
    Rational slippage;  // fraction, e.g. 1/200
    Amount fee;         // gas units
};

struct EvalContext {
    const ConditionState& state;
    std::int64_t now = 0;  // UTC seconds
    std::optional<RuntimeObservations> observations;
};

class EvalError : public std::runtime_error {
public:
    enum class Kind { MissingPrice, RuntimeRefInTrigger, TypeError, DivisionByZero };
    EvalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

bool evaluateCondition(const Condition& cond, const EvalContext& ctx);

/// Exact value of an arithmetic expression. `not x` is 1 when x is zero
/// and 0 otherwise. Throws EvalError(DivisionByZero).
Rational evaluateExpr(const Expr& expr);

/// Amount in base units of its asset, floored. Negative results are
/// returned as-is; callers decide whether they are legal.
Amount toBaseUnits(const AmountExpr& amount);

/// Static operand-type check over the whole tree (no short-circuit).
/// Throws EvalError(TypeError) or, when `allowRuntimeRefs` is false,
/// EvalError(RuntimeRefInTrigger).
void typeCheck(const Condition& cond, bool allowRuntimeRefs);

}  // namespace intent::icl
