// SPDX-License-Identifier: Apache-2.0
#include "intent/icl/eval.hpp"

#include <compare>

namespace intent::icl {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Operand classes for typing comparisons.
enum class Sort { Balance, Price, Amount, Number, Slippage, Fee, Bool };

Sort sortOf(const ComparisonElement& el) {
    return std::visit(Overloaded{
                          [](const WalletBalanceRef&) { return Sort::Balance; },
                          [](const PriceRef&) { return Sort::Price; },
                          [](const AmountLiteral&) { return Sort::Amount; },
                          [](const NumberLiteral&) { return Sort::Number; },
                          [](const SlippageRef&) { return Sort::Slippage; },
                          [](const FeeRef&) { return Sort::Fee; },
                          [](const NestedCondition&) { return Sort::Bool; },
                      },
                      el);
}

bool isScalar(Sort s) { return s == Sort::Price || s == Sort::Number || s == Sort::Slippage || s == Sort::Fee; }

[[noreturn]] void typeError(const std::string& msg) { throw EvalError(EvalError::Kind::TypeError, msg); }

void checkComparison(const Comparison& c, bool allowRuntimeRefs) {
    Sort l = sortOf(c.lhs);
    Sort r = sortOf(c.rhs);
    if (!allowRuntimeRefs) {
        for (Sort s : {l, r}) {
            if (s == Sort::Slippage || s == Sort::Fee) {
                throw EvalError(EvalError::Kind::RuntimeRefInTrigger,
                                "slippage and fee are only observable while the transaction executes");
            }
        }
    }
    if (l == Sort::Bool || r == Sort::Bool) {
        if (l != r) typeError("a condition can only be compared with another condition");
        if (c.op != CompareOp::Eq && c.op != CompareOp::Neq) typeError("conditions support only == and !=");
        return;
    }
    if (l == Sort::Balance || r == Sort::Balance) {
        Sort other = l == Sort::Balance ? r : l;
        if (other != Sort::Amount) typeError("a wallet balance must be compared with an amount such as '100 USDC'");
        return;
    }
    if (l == Sort::Amount || r == Sort::Amount) {
        if (l != r) typeError("an asset amount cannot be compared with a unitless value");
        const auto& la = std::get<AmountLiteral>(c.lhs);
        const auto& ra = std::get<AmountLiteral>(c.rhs);
        if (la.asset != ra.asset) {
            typeError("cannot compare " + std::string(symbol(la.asset)) + " with " + std::string(symbol(ra.asset)));
        }
        return;
    }
    if (!isScalar(l) || !isScalar(r)) typeError("incomparable operands");
}

bool applyOp(CompareOp op, std::strong_ordering ord) {
    switch (op) {
        case CompareOp::Eq: return ord == 0;
        case CompareOp::Neq: return ord != 0;
        case CompareOp::Lt: return ord < 0;
        case CompareOp::Gt: return ord > 0;
        case CompareOp::Le: return ord <= 0;
        case CompareOp::Ge: return ord >= 0;
    }
    return false;
}

std::strong_ordering cmp(const Rational& a, const Rational& b) {
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational scalarValue(const ComparisonElement& el, const EvalContext& ctx) {
    return std::visit(Overloaded{
                          [&](const PriceRef& p) -> Rational {
                              auto micro = ctx.state.priceMicroUsd(p.asset);
                              if (!micro) {
                                  throw EvalError(EvalError::Kind::MissingPrice,
                                                  "no oracle price for " + std::string(symbol(p.asset)));
                              }
                              return Rational(*micro, Amount(1000000));
                          },
                          [](const NumberLiteral& n) -> Rational { return n.value; },
                          [&](const SlippageRef&) -> Rational { return ctx.observations->slippage; },
                          [&](const FeeRef&) -> Rational { return Rational(ctx.observations->fee); },
                          [](const auto&) -> Rational { return Rational(0); },
                      },
                      el);
}

Rational amountBaseUnits(const AmountLiteral& a) { return a.value * Rational(pow10(decimals(a.asset))); }

bool evalComparison(const Comparison& c, const EvalContext& ctx) {
    checkComparison(c, ctx.observations.has_value());
    Sort l = sortOf(c.lhs);
    Sort r = sortOf(c.rhs);
    if (l == Sort::Bool) {
        bool a = evaluateCondition(*std::get<NestedCondition>(c.lhs).inner, ctx);
        bool b = evaluateCondition(*std::get<NestedCondition>(c.rhs).inner, ctx);
        return c.op == CompareOp::Eq ? a == b : a != b;
    }
    if (l == Sort::Balance || r == Sort::Balance) {
        const auto& lit = std::get<AmountLiteral>(l == Sort::Balance ? c.rhs : c.lhs);
        const auto& ref = std::get<WalletBalanceRef>(l == Sort::Balance ? c.lhs : c.rhs);
        Rational bal(ctx.state.balanceOf(ref.wallet, AssetId(lit.asset)));
        Rational lim = amountBaseUnits(lit);
        return applyOp(c.op, l == Sort::Balance ? cmp(bal, lim) : cmp(lim, bal));
    }
    if (l == Sort::Amount) {
        return applyOp(c.op, cmp(std::get<AmountLiteral>(c.lhs).value, std::get<AmountLiteral>(c.rhs).value));
    }
    return applyOp(c.op, cmp(scalarValue(c.lhs, ctx), scalarValue(c.rhs, ctx)));
}

}  // namespace

bool evaluateCondition(const Condition& cond, const EvalContext& ctx) {
    return std::visit(Overloaded{
                          [&](const OrCondition& o) {
                              for (const auto& t : o.terms) {
                                  if (evaluateCondition(*t, ctx)) return true;
                              }
                              return false;
                          },
                          [&](const AndCondition& a) {
                              for (const auto& t : a.terms) {
                                  if (!evaluateCondition(*t, ctx)) return false;
                              }
                              return true;
                          },
                          [&](const Comparison& c) { return evalComparison(c, ctx); },
                          [&](const TimeCondition& t) {
                              switch (t.kind) {
                                  case TimeCondition::Kind::Before: return ctx.now < t.from.epochSeconds;
                                  case TimeCondition::Kind::After: return ctx.now > t.from.epochSeconds;
                                  case TimeCondition::Kind::During:
                                      return ctx.now >= t.from.epochSeconds && ctx.now <= t.to->epochSeconds;
                              }
                              return false;
                          },
                          [&](const GroupCondition& g) { return evaluateCondition(*g.inner, ctx); },
                      },
                      cond.node);
}

void typeCheck(const Condition& cond, bool allowRuntimeRefs) {
    std::visit(Overloaded{
                   [&](const OrCondition& o) {
                       for (const auto& t : o.terms) typeCheck(*t, allowRuntimeRefs);
                   },
                   [&](const AndCondition& a) {
                       for (const auto& t : a.terms) typeCheck(*t, allowRuntimeRefs);
                   },
                   [&](const Comparison& c) {
                       checkComparison(c, allowRuntimeRefs);
                       for (const auto* el : {&c.lhs, &c.rhs}) {
                           if (const auto* n = std::get_if<NestedCondition>(el)) typeCheck(*n->inner, allowRuntimeRefs);
                       }
                   },
                   [](const TimeCondition&) {},
                   [&](const GroupCondition& g) { typeCheck(*g.inner, allowRuntimeRefs); },
               },
               cond.node);
}

Rational evaluateExpr(const Expr& expr) {
    return std::visit(Overloaded{
                          [](const NumberExpr& n) { return n.value; },
                          [](const UnaryExpr& u) {
                              Rational v = evaluateExpr(*u.operand);
                              switch (u.op) {
                                  case UnaryOp::Plus: return v;
                                  case UnaryOp::Minus: return Rational(-v);
                                  case UnaryOp::Not: return Rational(v == 0 ? 1 : 0);
                              }
                              return v;
                          },
                          [](const BinaryExpr& b) {
                              Rational l = evaluateExpr(*b.lhs);
                              Rational r = evaluateExpr(*b.rhs);
                              switch (b.op) {
                                  case ArithOp::Add: return Rational(l + r);
                                  case ArithOp::Sub: return Rational(l - r);
                                  case ArithOp::Mul: return Rational(l * r);
                                  case ArithOp::Div:
                                  case ArithOp::Mod: {
                                      if (r == 0) throw EvalError(EvalError::Kind::DivisionByZero, "division by zero");
                                      Rational q = l / r;
                                      if (b.op == ArithOp::Div) return q;
                                      // floored modulo: l - r * floor(l / r)
                                      return Rational(l - r * Rational(floorRational(q)));
                                  }
                              }
                              return l;
                          },
                      },
                      expr.node);
}

Amount toBaseUnits(const AmountExpr& amount) {
    return floorRational(evaluateExpr(*amount.expr) * Rational(pow10(decimals(amount.asset))));
}

}  // namespace intent::icl
