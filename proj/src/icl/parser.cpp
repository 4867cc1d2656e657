// SPDX-License-Identifier: Apache-2.0
#include "intent/icl/parser.hpp"

#include <initializer_list>
#include <stdexcept>

namespace intent::icl {
namespace {

bool isLeap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

// Days from 1970-01-01 to the given civil date (proleptic Gregorian).
std::int64_t daysFromCivil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2 ? 1 : 0;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

class Parser {
public:
    explicit Parser(std::string_view source) : source_(source), tokens_(tokenize(source)) {}

    IclProgram program() {
        IclProgram prog;
        prog.source = std::string(source_);
        if (at(TokenKind::EndOfInput)) {
            fail({"'trigger'", "statement keyword"});
        }
        while (!at(TokenKind::EndOfInput)) {
            TriggerStatement ts = triggerStatement();
            ts.index = static_cast<int>(prog.statements.size()) + 1;
            prog.statements.push_back(std::move(ts));
        }
        return prog;
    }

    ConditionPtr standaloneCondition() {
        ConditionPtr c = orExpression();
        expect(TokenKind::EndOfInput);
        return c;
    }

private:
    const Token& cur() const { return tokens_[i_]; }
    bool at(TokenKind k) const { return cur().kind == k; }

    const Token& advance() {
        const Token& t = tokens_[i_];
        if (t.kind != TokenKind::EndOfInput) {
            ++i_;
        }
        return t;
    }

    std::size_t prevEnd() const { return i_ == 0 ? 0 : tokens_[i_ - 1].span.end; }

    Span spanFrom(SourcePos begin) const { return Span{begin, prevEnd()}; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = cur();
        std::string msg = std::to_string(t.span.begin.line) + ":" + std::to_string(t.span.begin.column) +
                          ": expected ";
        for (std::size_t k = 0; k < expected.size(); ++k) {
            if (k > 0) msg += k + 1 == expected.size() ? " or " : ", ";
            msg += expected[k];
        }
        msg += ", found ";
        msg += t.kind == TokenKind::EndOfInput ? "end of input" : "'" + t.lexeme + "'";
        throw ParseError(msg, t.span.begin, t.span.end - t.span.begin.offset, std::move(expected));
    }

    const Token& expect(TokenKind k) {
        if (!at(k)) {
            fail({std::string(describe(k))});
        }
        return advance();
    }

    void expectSeq(std::initializer_list<TokenKind> kinds) {
        for (TokenKind k : kinds) {
            expect(k);
        }
    }

    // -- leaves -------------------------------------------------------------

    Address wallet() {
        expectSeq({TokenKind::KwWallet, TokenKind::LBrack});
        Address a = Address::parse(expect(TokenKind::Key).lexeme);
        expect(TokenKind::RBrack);
        return a;
    }

    Address bracketKey() {
        expect(TokenKind::LBrack);
        Address a = Address::parse(expect(TokenKind::Key).lexeme);
        expect(TokenKind::RBrack);
        return a;
    }

    Asset asset() {
        const Token& t = expect(TokenKind::Asset);
        return *parseAsset(t.lexeme);
    }

    Platform platform() {
        const Token& t = expect(TokenKind::Platform);
        return *parsePlatform(t.lexeme);
    }

    bool atNumber() const { return at(TokenKind::DecInt) || at(TokenKind::DecFloat); }

    std::pair<std::string, Rational> number() {
        if (!atNumber()) {
            fail({"integer", "decimal"});
        }
        const Token& t = advance();
        try {
            return {t.lexeme, parseDecimal(t.lexeme)};
        } catch (const std::invalid_argument& e) {
            throw LexError(std::to_string(t.span.begin.line) + ":" + std::to_string(t.span.begin.column) +
                               ": " + e.what(),
                           t.span.begin, t.lexeme.size());
        }
    }

    TimeLiteral timeLiteral() {
        const Token& t = expect(TokenKind::Time);
        try {
            return TimeLiteral{t.lexeme, parseTimeLiteral(t.lexeme)};
        } catch (const std::invalid_argument& e) {
            throw LexError(std::to_string(t.span.begin.line) + ":" + std::to_string(t.span.begin.column) +
                               ": " + e.what(),
                           t.span.begin, t.lexeme.size());
        }
    }

    // -- arithmetic -----------------------------------------------------------

    ExprPtr additive() {
        SourcePos begin = cur().span.begin;
        ExprPtr lhs = multiplicative();
        while (at(TokenKind::Add) || at(TokenKind::Sub)) {
            ArithOp op = advance().kind == TokenKind::Add ? ArithOp::Add : ArithOp::Sub;
            ExprPtr rhs = multiplicative();
            lhs = std::make_shared<Expr>(Expr{BinaryExpr{op, lhs, rhs}, spanFrom(begin)});
        }
        return lhs;
    }

    ExprPtr multiplicative() {
        SourcePos begin = cur().span.begin;
        ExprPtr lhs = unary();
        while (at(TokenKind::Mul) || at(TokenKind::Div) || at(TokenKind::Mod)) {
            TokenKind k = advance().kind;
            ArithOp op = k == TokenKind::Mul ? ArithOp::Mul : k == TokenKind::Div ? ArithOp::Div : ArithOp::Mod;
            ExprPtr rhs = unary();
            lhs = std::make_shared<Expr>(Expr{BinaryExpr{op, lhs, rhs}, spanFrom(begin)});
        }
        return lhs;
    }

    ExprPtr unary() {
        SourcePos begin = cur().span.begin;
        if (at(TokenKind::Add) || at(TokenKind::Sub) || at(TokenKind::LogicNot)) {
            TokenKind k = advance().kind;
            UnaryOp op = k == TokenKind::Add ? UnaryOp::Plus : k == TokenKind::Sub ? UnaryOp::Minus : UnaryOp::Not;
            ExprPtr operand = unary();
            return std::make_shared<Expr>(Expr{UnaryExpr{op, operand}, spanFrom(begin)});
        }
        return primary();
    }

    ExprPtr primary() {
        SourcePos begin = cur().span.begin;
        if (at(TokenKind::LParen)) {
            advance();
            ExprPtr inner = additive();
            expect(TokenKind::RParen);
            return inner;
        }
        if (!atNumber()) {
            fail({"integer", "decimal", "'('", "'+'", "'-'", "'not'"});
        }
        auto [lexeme, value] = number();
        return std::make_shared<Expr>(Expr{NumberExpr{lexeme, value}, spanFrom(begin)});
    }

    AmountExpr amount() {
        SourcePos begin = cur().span.begin;
        ExprPtr e = additive();
        Asset a = asset();
        return AmountExpr{e, a, spanFrom(begin)};
    }

    // -- conditions -----------------------------------------------------------

    static bool isCompareOp(TokenKind k) {
        return k == TokenKind::Eq || k == TokenKind::Neq || k == TokenKind::Lt || k == TokenKind::Gt ||
               k == TokenKind::Le || k == TokenKind::Ge;
    }

    CompareOp compareOp() {
        if (!isCompareOp(cur().kind)) {
            fail({"'=='", "'!='", "'<'", "'>'", "'<='", "'>='"});
        }
        switch (advance().kind) {
            case TokenKind::Eq: return CompareOp::Eq;
            case TokenKind::Neq: return CompareOp::Neq;
            case TokenKind::Lt: return CompareOp::Lt;
            case TokenKind::Gt: return CompareOp::Gt;
            case TokenKind::Le: return CompareOp::Le;
            default: return CompareOp::Ge;
        }
    }

    ConditionPtr orExpression() {
        SourcePos begin = cur().span.begin;
        std::vector<ConditionPtr> terms{andExpression()};
        while (at(TokenKind::LogicOr)) {
            advance();
            terms.push_back(andExpression());
        }
        if (terms.size() == 1) {
            return terms.front();
        }
        return std::make_shared<Condition>(Condition{OrCondition{std::move(terms)}, spanFrom(begin)});
    }

    ConditionPtr andExpression() {
        SourcePos begin = cur().span.begin;
        std::vector<ConditionPtr> terms{conjunct()};
        while (at(TokenKind::LogicAnd)) {
            advance();
            terms.push_back(conjunct());
        }
        if (terms.size() == 1) {
            return terms.front();
        }
        return std::make_shared<Condition>(Condition{AndCondition{std::move(terms)}, spanFrom(begin)});
    }

    ConditionPtr conjunct() {
        SourcePos begin = cur().span.begin;
        if (at(TokenKind::KwTime)) {
            return timeCondition();
        }
        if (at(TokenKind::LParen)) {
            advance();
            ConditionPtr inner = orExpression();
            expect(TokenKind::RParen);
            if (!isCompareOp(cur().kind)) {
                return std::make_shared<Condition>(Condition{GroupCondition{inner}, spanFrom(begin)});
            }
            CompareOp op = compareOp();
            ComparisonElement rhs = element();
            return std::make_shared<Condition>(
                Condition{Comparison{NestedCondition{inner}, op, std::move(rhs)}, spanFrom(begin)});
        }
        ComparisonElement lhs = element();
        CompareOp op = compareOp();
        ComparisonElement rhs = element();
        return std::make_shared<Condition>(Condition{Comparison{std::move(lhs), op, std::move(rhs)}, spanFrom(begin)});
    }

    ConditionPtr timeCondition() {
        SourcePos begin = cur().span.begin;
        expect(TokenKind::KwTime);
        TimeCondition tc{};
        if (at(TokenKind::KwBefore)) {
            advance();
            tc.kind = TimeCondition::Kind::Before;
            tc.from = timeLiteral();
        } else if (at(TokenKind::KwAfter)) {
            advance();
            tc.kind = TimeCondition::Kind::After;
            tc.from = timeLiteral();
        } else if (at(TokenKind::KwDuring)) {
            advance();
            tc.kind = TimeCondition::Kind::During;
            tc.from = timeLiteral();
            expect(TokenKind::KwTo);
            tc.to = timeLiteral();
        } else {
            fail({"'before'", "'after'", "'during'"});
        }
        return std::make_shared<Condition>(Condition{std::move(tc), spanFrom(begin)});
    }

    ComparisonElement element() {
        switch (cur().kind) {
            case TokenKind::KwBalance:
                advance();
                return WalletBalanceRef{wallet()};
            case TokenKind::KwPrice:
                advance();
                return PriceRef{asset()};
            case TokenKind::KwSlippage:
                advance();
                return SlippageRef{};
            case TokenKind::KwFee:
                advance();
                return FeeRef{};
            case TokenKind::LParen: {
                advance();
                ConditionPtr inner = orExpression();
                expect(TokenKind::RParen);
                return NestedCondition{inner};
            }
            case TokenKind::DecInt:
            case TokenKind::DecFloat: {
                auto [lexeme, value] = number();
                if (at(TokenKind::Asset)) {
                    return AmountLiteral{lexeme, value, asset()};
                }
                return NumberLiteral{lexeme, value};
            }
            default:
                fail({"'balance'", "'price'", "'slippage'", "'fee'", "number", "'('"});
        }
    }

    // -- statements -----------------------------------------------------------

    TriggerStatement triggerStatement() {
        SourcePos begin = cur().span.begin;
        TriggerStatement ts;
        if (at(TokenKind::KwTrigger)) {
            advance();
            ts.trigger = orExpression();
            expect(TokenKind::KwThen);
        }
        ts.statement = statement();
        if (at(TokenKind::KwChecking)) {
            advance();
            ts.constraint = orExpression();
        }
        if (!at(TokenKind::Semi)) {
            fail(ts.constraint ? std::vector<std::string>{"'and'", "'or'", "';'"}
                               : std::vector<std::string>{"'checking'", "';'"});
        }
        advance();
        ts.span = spanFrom(begin);
        return ts;
    }

    Statement statement() {
        switch (cur().kind) {
            case TokenKind::KwTransfer: {
                advance();
                TransferStmt s{amount(), {}, {}};
                expect(TokenKind::KwFrom);
                s.from = wallet();
                expect(TokenKind::KwTo);
                s.to = wallet();
                return s;
            }
            case TokenKind::KwBorrow: {
                advance();
                BorrowStmt s{amount(), {}, {}};
                expect(TokenKind::KwFor);
                s.wallet = wallet();
                expect(TokenKind::KwFrom);
                s.platform = platform();
                return s;
            }
            case TokenKind::KwRepay: {
                advance();
                RepayStmt s{amount(), {}, {}};
                expect(TokenKind::KwFrom);
                s.wallet = wallet();
                expect(TokenKind::KwTo);
                s.platform = platform();
                return s;
            }
            case TokenKind::KwSwap: {
                advance();
                SwapStmt s{amount(), {}, {}, {}};
                expect(TokenKind::KwFrom);
                s.wallet = wallet();
                expect(TokenKind::KwFor);
                s.toAsset = asset();
                expect(TokenKind::KwOn);
                s.platform = platform();
                return s;
            }
            case TokenKind::KwAdd: {
                advance();
                AmountExpr a = amount();
                expect(TokenKind::Comma);
                AmountExpr b = amount();
                expect(TokenKind::KwTo);
                Platform p = platform();
                expectSeq({TokenKind::KwReceiving, TokenKind::KwLiquidity, TokenKind::KwToken, TokenKind::KwTo});
                return AddLiquidityStmt{std::move(a), std::move(b), p, wallet()};
            }
            case TokenKind::KwRemove: {
                advance();
                AmountExpr a = amount();
                expect(TokenKind::Comma);
                AmountExpr b = amount();
                expect(TokenKind::KwFrom);
                Platform p = platform();
                expect(TokenKind::KwReturning);
                std::string units = expect(TokenKind::DecInt).lexeme;
                expect(TokenKind::KwLiquidity);
                std::optional<Address> key;
                if (at(TokenKind::KwOf)) {
                    advance();
                    expect(TokenKind::KwToken);
                    key = bracketKey();
                }
                expect(TokenKind::KwFrom);
                return RemoveLiquidityStmt{std::move(a), std::move(b), p, std::move(units), key, wallet()};
            }
            case TokenKind::KwStake: {
                advance();
                AmountExpr a = amount();
                expect(TokenKind::KwFrom);
                Address w = wallet();
                if (at(TokenKind::KwOn)) {
                    advance();
                    return SimpleStakeStmt{std::move(a), w, platform()};
                }
                StakeStmt s{std::move(a), w, std::nullopt};
                if (at(TokenKind::KwUsing)) {
                    advance();
                    s.strategy = stakeQualifiers();
                    expect(TokenKind::KwStrategy);
                }
                return s;
            }
            case TokenKind::KwBuy: {
                advance();
                std::vector<NftQualifier> quals = nftQualifiers();
                expect(TokenKind::KwNft);
                if (quals.empty() && at(TokenKind::LBrack)) {
                    Address nft = bracketKey();
                    expectSeq({TokenKind::KwIn, TokenKind::KwCollection});
                    Address coll = bracketKey();
                    expectSeq({TokenKind::KwUsing, TokenKind::KwAt, TokenKind::KwMost});
                    AmountExpr budget = amount();
                    expect(TokenKind::KwFrom);
                    return SimpleBuyNftStmt{nft, coll, std::move(budget), wallet()};
                }
                if (!at(TokenKind::KwUsing)) {
                    fail(quals.empty() ? std::vector<std::string>{"'['", "'using'"}
                                       : std::vector<std::string>{"'using'"});
                }
                expectSeq({TokenKind::KwUsing, TokenKind::KwAt, TokenKind::KwMost});
                AmountExpr budget = amount();
                expect(TokenKind::KwFrom);
                return BuyNftStmt{std::move(quals), std::move(budget), wallet()};
            }
            case TokenKind::KwSell: {
                advance();
                expect(TokenKind::KwNft);
                Address nft = bracketKey();
                expectSeq({TokenKind::KwIn, TokenKind::KwCollection});
                Address coll = bracketKey();
                expect(TokenKind::KwFrom);
                Address w = wallet();
                if (at(TokenKind::KwFor)) {
                    expectSeq({TokenKind::KwFor, TokenKind::KwAt, TokenKind::KwLeast});
                    return SimpleSellNftStmt{nft, coll, w, amount()};
                }
                SellNftStmt s{nft, coll, w, std::nullopt};
                if (at(TokenKind::KwUsing)) {
                    advance();
                    std::vector<SellQualifier> quals;
                    while (at(TokenKind::TimeSaving) || at(TokenKind::Profitable)) {
                        quals.push_back(advance().kind == TokenKind::TimeSaving ? SellQualifier::TimeSaving
                                                                                : SellQualifier::Profitable);
                    }
                    s.strategy = std::move(quals);
                    expect(TokenKind::KwStrategy);
                }
                return s;
            }
            default:
                fail({"'transfer'", "'borrow'", "'repay'", "'swap'", "'add'", "'remove'", "'stake'", "'buy'",
                      "'sell'"});
        }
    }

    std::vector<StakeQualifier> stakeQualifiers() {
        std::vector<StakeQualifier> out;
        while (true) {
            switch (cur().kind) {
                case TokenKind::LowRisk: out.push_back(StakeQualifier::LowRisk); break;
                case TokenKind::MiddleRisk: out.push_back(StakeQualifier::MiddleRisk); break;
                case TokenKind::HighRisk: out.push_back(StakeQualifier::HighRisk); break;
                case TokenKind::ShortTerm: out.push_back(StakeQualifier::ShortTerm); break;
                case TokenKind::MiddleTerm: out.push_back(StakeQualifier::MiddleTerm); break;
                case TokenKind::LongTerm: out.push_back(StakeQualifier::LongTerm); break;
                default: return out;
            }
            advance();
        }
    }

    std::vector<NftQualifier> nftQualifiers() {
        std::vector<NftQualifier> out;
        while (true) {
            switch (cur().kind) {
                case TokenKind::Mainstream: out.push_back(NftQualifier::Mainstream); break;
                case TokenKind::Popular: out.push_back(NftQualifier::Popular); break;
                case TokenKind::Rare: out.push_back(NftQualifier::Rare); break;
                case TokenKind::Inexpensive: out.push_back(NftQualifier::Inexpensive); break;
                case TokenKind::PriceIncreasing: out.push_back(NftQualifier::PriceIncreasing); break;
                case TokenKind::PriceDecreaseing: out.push_back(NftQualifier::PriceDecreasing); break;
                default: return out;
            }
            advance();
        }
    }

    std::string_view source_;
    std::vector<Token> tokens_;
    std::size_t i_ = 0;
};

}  // namespace

IclProgram parse(std::string_view source) { return Parser(source).program(); }

ConditionPtr parseCondition(std::string_view source) { return Parser(source).standaloneCondition(); }

std::int64_t parseTimeLiteral(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS with optionally single-digit time fields.
    auto num = [&](std::size_t& pos) {
        std::int64_t v = 0;
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            v = v * 10 + (text[pos] - '0');
            ++pos;
        }
        if (pos == start) throw std::invalid_argument("malformed time literal");
        return v;
    };
    auto sep = [&](std::size_t& pos, char c) {
        if (pos >= text.size() || text[pos] != c) throw std::invalid_argument("malformed time literal");
        ++pos;
    };
    std::size_t pos = 0;
    std::int64_t y = num(pos);
    sep(pos, '-');
    std::int64_t mo = num(pos);
    sep(pos, '-');
    std::int64_t d = num(pos);
    sep(pos, 'T');
    std::int64_t h = num(pos);
    sep(pos, ':');
    std::int64_t mi = num(pos);
    sep(pos, ':');
    std::int64_t s = num(pos);
    if (pos != text.size()) throw std::invalid_argument("malformed time literal");
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (mo < 1 || mo > 12 || d < 1) throw std::invalid_argument("invalid date");
    int dim = kDays[mo - 1] + (mo == 2 && isLeap(y) ? 1 : 0);
    if (d > dim) throw std::invalid_argument("day out of range for month in time literal");
    if (h > 23 || mi > 59 || s > 59) throw std::invalid_argument("invalid time of day");
    return daysFromCivil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400 + h * 3600 + mi * 60 + s;
}

}  // namespace intent::icl
