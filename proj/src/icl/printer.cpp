// SPDX-License-Identifier: Apache-2.0
#include "intent/icl/printer.hpp"

namespace intent::icl {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

int precedence(const Expr& e) {
    if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
        return b->op == ArithOp::Add || b->op == ArithOp::Sub ? 1 : 2;
    }
    return 3;
}

std::string walletText(const Address& a) { return "wallet[" + a.str() + "]"; }

std::string elementText(const ComparisonElement& el) {
    return std::visit(Overloaded{
                          [](const WalletBalanceRef& w) { return "balance " + walletText(w.wallet); },
                          [](const PriceRef& p) { return "price " + std::string(symbol(p.asset)); },
                          [](const AmountLiteral& a) { return a.lexeme + " " + std::string(symbol(a.asset)); },
                          [](const NumberLiteral& n) { return n.lexeme; },
                          [](const SlippageRef&) { return std::string("slippage"); },
                          [](const FeeRef&) { return std::string("fee"); },
                          [](const NestedCondition& n) { return "(" + print(*n.inner) + ")"; },
                      },
                      el);
}

nlohmann::ordered_json elementJson(const ComparisonElement& el) {
    using J = nlohmann::ordered_json;
    return std::visit(Overloaded{
                          [](const WalletBalanceRef& w) { return J{{"kind", "balance"}, {"wallet", w.wallet.str()}}; },
                          [](const PriceRef& p) { return J{{"kind", "price"}, {"asset", symbol(p.asset)}}; },
                          [](const AmountLiteral& a) {
                              return J{{"kind", "amount"}, {"value", toString(a.value)}, {"asset", symbol(a.asset)}};
                          },
                          [](const NumberLiteral& n) { return J{{"kind", "number"}, {"value", toString(n.value)}}; },
                          [](const SlippageRef&) { return J{{"kind", "slippage"}}; },
                          [](const FeeRef&) { return J{{"kind", "fee"}}; },
                          [](const NestedCondition& n) { return J{{"kind", "condition"}, {"condition", toJson(*n.inner)}}; },
                      },
                      el);
}

nlohmann::ordered_json amountJson(const AmountExpr& a) {
    return {{"expr", toJson(*a.expr)}, {"asset", symbol(a.asset)}};
}

template <class Q>
nlohmann::ordered_json qualifierJson(const std::vector<Q>& qs) {
    auto arr = nlohmann::ordered_json::array();
    for (Q q : qs) arr.push_back(keyword(q));
    return arr;
}

template <class Q>
std::string qualifierText(const std::vector<Q>& qs) {
    std::string out;
    for (Q q : qs) {
        out += " ";
        out += keyword(q);
    }
    return out;
}

nlohmann::ordered_json statementJson(const Statement& stmt) {
    using J = nlohmann::ordered_json;
    J j{{"kind", statementKind(stmt)}};
    std::visit(Overloaded{
                   [&](const TransferStmt& s) {
                       j["amount"] = amountJson(s.amount);
                       j["from"] = s.from.str();
                       j["to"] = s.to.str();
                   },
                   [&](const BorrowStmt& s) {
                       j["amount"] = amountJson(s.amount);
                       j["wallet"] = s.wallet.str();
                       j["platform"] = name(s.platform);
                   },
                   [&](const RepayStmt& s) {
                       j["amount"] = amountJson(s.amount);
                       j["wallet"] = s.wallet.str();
                       j["platform"] = name(s.platform);
                   },
                   [&](const SwapStmt& s) {
                       j["amount"] = amountJson(s.amount);
                       j["wallet"] = s.wallet.str();
                       j["toAsset"] = symbol(s.toAsset);
                       j["platform"] = name(s.platform);
                   },
                   [&](const AddLiquidityStmt& s) {
                       j["amountA"] = amountJson(s.amountA);
                       j["amountB"] = amountJson(s.amountB);
                       j["platform"] = name(s.platform);
                       j["receiver"] = s.receiver.str();
                   },
                   [&](const RemoveLiquidityStmt& s) {
                       j["amountA"] = amountJson(s.amountA);
                       j["amountB"] = amountJson(s.amountB);
                       j["platform"] = name(s.platform);
                       j["liquidity"] = s.liquidity;
                       j["tokenKey"] = s.tokenKey ? J(s.tokenKey->str()) : J(nullptr);
                       j["wallet"] = s.wallet.str();
                   },
                   [&](const StakeStmt& s) {
                       j["amount"] = amountJson(s.amount);
                       j["wallet"] = s.wallet.str();
                       j["strategy"] = s.strategy ? qualifierJson(*s.strategy) : J(nullptr);
                   },
                   [&](const SimpleStakeStmt& s) {
                       j["amount"] = amountJson(s.amount);
                       j["wallet"] = s.wallet.str();
                       j["platform"] = name(s.platform);
                   },
                   [&](const BuyNftStmt& s) {
                       j["qualifiers"] = qualifierJson(s.qualifiers);
                       j["budget"] = amountJson(s.budget);
                       j["wallet"] = s.wallet.str();
                   },
                   [&](const SimpleBuyNftStmt& s) {
                       j["nft"] = s.nft.str();
                       j["collection"] = s.collection.str();
                       j["budget"] = amountJson(s.budget);
                       j["wallet"] = s.wallet.str();
                   },
                   [&](const SellNftStmt& s) {
                       j["nft"] = s.nft.str();
                       j["collection"] = s.collection.str();
                       j["wallet"] = s.wallet.str();
                       j["strategy"] = s.strategy ? qualifierJson(*s.strategy) : J(nullptr);
                   },
                   [&](const SimpleSellNftStmt& s) {
                       j["nft"] = s.nft.str();
                       j["collection"] = s.collection.str();
                       j["wallet"] = s.wallet.str();
                       j["minAmount"] = amountJson(s.minAmount);
                   },
               },
               stmt);
    return j;
}

std::string_view timeKind(TimeCondition::Kind k) {
    switch (k) {
        case TimeCondition::Kind::Before: return "before";
        case TimeCondition::Kind::After: return "after";
        case TimeCondition::Kind::During: return "during";
    }
    return "?";
}

}  // namespace

std::string_view keyword(StakeQualifier q) {
    switch (q) {
        case StakeQualifier::LowRisk: return "low-risk";
        case StakeQualifier::MiddleRisk: return "middle-risk";
        case StakeQualifier::HighRisk: return "high-risk";
        case StakeQualifier::ShortTerm: return "short-term";
        case StakeQualifier::MiddleTerm: return "middle-term";
        case StakeQualifier::LongTerm: return "long-term";
    }
    return "?";
}

std::string_view keyword(NftQualifier q) {
    switch (q) {
        case NftQualifier::Mainstream: return "mainstream";
        case NftQualifier::Popular: return "popular";
        case NftQualifier::Rare: return "rare";
        case NftQualifier::Inexpensive: return "inexpensive";
        case NftQualifier::PriceIncreasing: return "price-increasing";
        case NftQualifier::PriceDecreasing: return "price-decreaseing";
    }
    return "?";
}

std::string_view keyword(SellQualifier q) {
    return q == SellQualifier::TimeSaving ? "time-saving" : "profitable";
}

std::string_view symbol(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "==";
        case CompareOp::Neq: return "!=";
        case CompareOp::Lt: return "<";
        case CompareOp::Gt: return ">";
        case CompareOp::Le: return "<=";
        case CompareOp::Ge: return ">=";
    }
    return "?";
}

std::string_view symbol(ArithOp op) {
    switch (op) {
        case ArithOp::Add: return "+";
        case ArithOp::Sub: return "-";
        case ArithOp::Mul: return "*";
        case ArithOp::Div: return "/";
        case ArithOp::Mod: return "%";
    }
    return "?";
}

std::string_view statementKind(const Statement& stmt) {
    return std::visit(Overloaded{
                          [](const TransferStmt&) { return std::string_view("transfer"); },
                          [](const BorrowStmt&) { return std::string_view("borrow"); },
                          [](const RepayStmt&) { return std::string_view("repay"); },
                          [](const SwapStmt&) { return std::string_view("swap"); },
                          [](const AddLiquidityStmt&) { return std::string_view("add-liquidity"); },
                          [](const RemoveLiquidityStmt&) { return std::string_view("remove-liquidity"); },
                          [](const StakeStmt&) { return std::string_view("stake"); },
                          [](const SimpleStakeStmt&) { return std::string_view("simple-stake"); },
                          [](const BuyNftStmt&) { return std::string_view("buy-nft"); },
                          [](const SimpleBuyNftStmt&) { return std::string_view("simple-buy-nft"); },
                          [](const SellNftStmt&) { return std::string_view("sell-nft"); },
                          [](const SimpleSellNftStmt&) { return std::string_view("simple-sell-nft"); },
                      },
                      stmt);
}

std::string print(const Expr& expr) {
    return std::visit(Overloaded{
                          [](const NumberExpr& n) { return n.lexeme; },
                          [](const UnaryExpr& u) {
                              std::string inner = print(*u.operand);
                              if (precedence(*u.operand) < 3) inner = "(" + inner + ")";
                              switch (u.op) {
                                  case UnaryOp::Plus: return "+" + inner;
                                  case UnaryOp::Minus: return "-" + inner;
                                  case UnaryOp::Not: return "not " + inner;
                              }
                              return inner;
                          },
                          [&](const BinaryExpr& b) {
                              int p = precedence(expr);
                              std::string lhs = print(*b.lhs);
                              std::string rhs = print(*b.rhs);
                              if (precedence(*b.lhs) < p) lhs = "(" + lhs + ")";
                              // left-associative: equal precedence on the right needs parentheses
                              if (precedence(*b.rhs) <= p) rhs = "(" + rhs + ")";
                              return lhs + " " + std::string(symbol(b.op)) + " " + rhs;
                          },
                      },
                      expr.node);
}

std::string print(const AmountExpr& amount) { return print(*amount.expr) + " " + std::string(symbol(amount.asset)); }

std::string print(const Condition& cond) {
    return std::visit(Overloaded{
                          [](const OrCondition& o) {
                              std::string out;
                              for (std::size_t i = 0; i < o.terms.size(); ++i) {
                                  if (i > 0) out += " or ";
                                  out += print(*o.terms[i]);
                              }
                              return out;
                          },
                          [](const AndCondition& a) {
                              std::string out;
                              for (std::size_t i = 0; i < a.terms.size(); ++i) {
                                  if (i > 0) out += " and ";
                                  out += print(*a.terms[i]);
                              }
                              return out;
                          },
                          [](const Comparison& c) {
                              return elementText(c.lhs) + " " + std::string(symbol(c.op)) + " " + elementText(c.rhs);
                          },
                          [](const TimeCondition& t) {
                              std::string out = "time " + std::string(timeKind(t.kind)) + " " + t.from.lexeme;
                              if (t.to) out += " to " + t.to->lexeme;
                              return out;
                          },
                          [](const GroupCondition& g) { return "(" + print(*g.inner) + ")"; },
                      },
                      cond.node);
}

std::string print(const Statement& stmt) {
    return std::visit(
        Overloaded{
            [](const TransferStmt& s) {
                return "transfer " + print(s.amount) + " from " + walletText(s.from) + " to " + walletText(s.to);
            },
            [](const BorrowStmt& s) {
                return "borrow " + print(s.amount) + " for " + walletText(s.wallet) + " from " +
                       std::string(name(s.platform));
            },
            [](const RepayStmt& s) {
                return "repay " + print(s.amount) + " from " + walletText(s.wallet) + " to " +
                       std::string(name(s.platform));
            },
            [](const SwapStmt& s) {
                return "swap " + print(s.amount) + " from " + walletText(s.wallet) + " for " +
                       std::string(symbol(s.toAsset)) + " on " + std::string(name(s.platform));
            },
            [](const AddLiquidityStmt& s) {
                return "add " + print(s.amountA) + ", " + print(s.amountB) + " to " + std::string(name(s.platform)) +
                       " receiving liquidity token to " + walletText(s.receiver);
            },
            [](const RemoveLiquidityStmt& s) {
                std::string out = "remove " + print(s.amountA) + ", " + print(s.amountB) + " from " +
                                  std::string(name(s.platform)) + " returning " + s.liquidity + " liquidity";
                if (s.tokenKey) out += " of token [" + s.tokenKey->str() + "]";
                return out + " from " + walletText(s.wallet);
            },
            [](const StakeStmt& s) {
                std::string out = "stake " + print(s.amount) + " from " + walletText(s.wallet);
                if (s.strategy) out += " using" + qualifierText(*s.strategy) + " strategy";
                return out;
            },
            [](const SimpleStakeStmt& s) {
                return "stake " + print(s.amount) + " from " + walletText(s.wallet) + " on " +
                       std::string(name(s.platform));
            },
            [](const BuyNftStmt& s) {
                return "buy" + qualifierText(s.qualifiers) + " NFT using at most " + print(s.budget) + " from " +
                       walletText(s.wallet);
            },
            [](const SimpleBuyNftStmt& s) {
                return "buy NFT [" + s.nft.str() + "] in collection [" + s.collection.str() + "] using at most " +
                       print(s.budget) + " from " + walletText(s.wallet);
            },
            [](const SellNftStmt& s) {
                std::string out = "sell NFT [" + s.nft.str() + "] in collection [" + s.collection.str() +
                                  "] from " + walletText(s.wallet);
                if (s.strategy) out += " using" + qualifierText(*s.strategy) + " strategy";
                return out;
            },
            [](const SimpleSellNftStmt& s) {
                return "sell NFT [" + s.nft.str() + "] in collection [" + s.collection.str() + "] from " +
                       walletText(s.wallet) + " for at least " + print(s.minAmount);
            },
        },
        stmt);
}

std::string print(const TriggerStatement& stmt) {
    std::string out;
    if (stmt.trigger) out += "trigger " + print(*stmt.trigger) + " then ";
    out += print(stmt.statement);
    if (stmt.constraint) out += " checking " + print(*stmt.constraint);
    return out + ";";
}

std::string print(const IclProgram& program) {
    std::string out;
    for (const auto& s : program.statements) {
        out += print(s);
        out += "\n";
    }
    return out;
}

nlohmann::ordered_json toJson(const Expr& expr) {
    using J = nlohmann::ordered_json;
    return std::visit(Overloaded{
                          [](const NumberExpr& n) { return J{{"kind", "number"}, {"value", toString(n.value)}}; },
                          [](const UnaryExpr& u) {
                              const char* op = u.op == UnaryOp::Plus ? "+" : u.op == UnaryOp::Minus ? "-" : "not";
                              return J{{"kind", "unary"}, {"op", op}, {"operand", toJson(*u.operand)}};
                          },
                          [](const BinaryExpr& b) {
                              return J{{"kind", "binary"},
                                       {"op", symbol(b.op)},
                                       {"lhs", toJson(*b.lhs)},
                                       {"rhs", toJson(*b.rhs)}};
                          },
                      },
                      expr.node);
}

nlohmann::ordered_json toJson(const Condition& cond) {
    using J = nlohmann::ordered_json;
    return std::visit(Overloaded{
                          [](const OrCondition& o) {
                              J terms = J::array();
                              for (const auto& t : o.terms) terms.push_back(toJson(*t));
                              return J{{"kind", "or"}, {"terms", terms}};
                          },
                          [](const AndCondition& a) {
                              J terms = J::array();
                              for (const auto& t : a.terms) terms.push_back(toJson(*t));
                              return J{{"kind", "and"}, {"terms", terms}};
                          },
                          [](const Comparison& c) {
                              return J{{"kind", "compare"},
                                       {"op", symbol(c.op)},
                                       {"lhs", elementJson(c.lhs)},
                                       {"rhs", elementJson(c.rhs)}};
                          },
                          [](const TimeCondition& t) {
                              J j{{"kind", "time"}, {"when", timeKind(t.kind)}, {"from", t.from.epochSeconds}};
                              if (t.to) j["to"] = t.to->epochSeconds;
                              return j;
                          },
                          [](const GroupCondition& g) { return J{{"kind", "group"}, {"inner", toJson(*g.inner)}}; },
                      },
                      cond.node);
}

nlohmann::ordered_json toJson(const TriggerStatement& stmt) {
    using J = nlohmann::ordered_json;
    return J{{"index", stmt.index},
             {"trigger", stmt.trigger ? toJson(*stmt.trigger) : J(nullptr)},
             {"statement", statementJson(stmt.statement)},
             {"constraint", stmt.constraint ? toJson(*stmt.constraint) : J(nullptr)}};
}

nlohmann::ordered_json toJson(const IclProgram& program) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : program.statements) arr.push_back(toJson(s));
    return {{"statements", arr}};
}

bool structurallyEqual(const IclProgram& a, const IclProgram& b) { return toJson(a) == toJson(b); }

bool structurallyEqual(const Condition& a, const Condition& b) { return toJson(a) == toJson(b); }

}  // namespace intent::icl
