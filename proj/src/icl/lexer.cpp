// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cctype>
#include <utility>

#include "intent/common/asset.hpp"
#include "intent/icl/token.hpp"

namespace intent::icl {
namespace {

struct Keyword {
    std::string_view text;
    TokenKind kind;
};

constexpr std::array<Keyword, 59> kKeywords{{
    {"and", TokenKind::LogicAnd},
    {"or", TokenKind::LogicOr},
    {"not", TokenKind::LogicNot},
    {"trigger", TokenKind::KwTrigger},
    {"then", TokenKind::KwThen},
    {"checking", TokenKind::KwChecking},
    {"balance", TokenKind::KwBalance},
    {"price", TokenKind::KwPrice},
    {"slippage", TokenKind::KwSlippage},
    {"fee", TokenKind::KwFee},
    {"wallet", TokenKind::KwWallet},
    {"time", TokenKind::KwTime},
    {"before", TokenKind::KwBefore},
    {"after", TokenKind::KwAfter},
    {"during", TokenKind::KwDuring},
    {"to", TokenKind::KwTo},
    {"transfer", TokenKind::KwTransfer},
    {"from", TokenKind::KwFrom},
    {"borrow", TokenKind::KwBorrow},
    {"for", TokenKind::KwFor},
    {"repay", TokenKind::KwRepay},
    {"swap", TokenKind::KwSwap},
    {"on", TokenKind::KwOn},
    {"add", TokenKind::KwAdd},
    {"receiving", TokenKind::KwReceiving},
    {"liquidity", TokenKind::KwLiquidity},
    {"token", TokenKind::KwToken},
    {"remove", TokenKind::KwRemove},
    {"returning", TokenKind::KwReturning},
    {"of", TokenKind::KwOf},
    {"stake", TokenKind::KwStake},
    {"using", TokenKind::KwUsing},
    {"strategy", TokenKind::KwStrategy},
    {"buy", TokenKind::KwBuy},
    {"NFT", TokenKind::KwNft},
    {"at", TokenKind::KwAt},
    {"most", TokenKind::KwMost},
    {"in", TokenKind::KwIn},
    {"collection", TokenKind::KwCollection},
    {"sell", TokenKind::KwSell},
    {"least", TokenKind::KwLeast},
    {"low-risk", TokenKind::LowRisk},
    {"middle-risk", TokenKind::MiddleRisk},
    {"high-risk", TokenKind::HighRisk},
    {"short-term", TokenKind::ShortTerm},
    {"middle-term", TokenKind::MiddleTerm},
    {"long-term", TokenKind::LongTerm},
    {"mainstream", TokenKind::Mainstream},
    {"popular", TokenKind::Popular},
    {"rare", TokenKind::Rare},
    {"inexpensive", TokenKind::Inexpensive},
    {"price-increasing", TokenKind::PriceIncreasing},
    {"price-decreaseing", TokenKind::PriceDecreaseing},
    {"time-saving", TokenKind::TimeSaving},
    {"profitable", TokenKind::Profitable},
    // Marketplace names are lexical tokens with no parser production.
    {"OpenSea", TokenKind::NftPlatform},
    {"Rarible", TokenKind::NftPlatform},
    {"SuperRare", TokenKind::NftPlatform},
    {"Foundation", TokenKind::NftPlatform},
}};

constexpr std::array<std::string_view, 3> kMoreNftPlatforms{"Mintable", "BakerySwap", "LooksRare"};

bool isDigit(char c) { return c >= '0' && c <= '9'; }
bool isAlpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool isAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool isHex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skipTrivia();
            if (pos_.offset >= src_.size()) {
                out.push_back(Token{TokenKind::EndOfInput, "", Span{pos_, pos_.offset}});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    char peek(std::size_t ahead = 0) const {
        std::size_t i = pos_.offset + ahead;
        return i < src_.size() ? src_[i] : '\0';
    }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_.offset < src_.size(); ++i) {
            if (src_[pos_.offset] == '\n') {
                ++pos_.line;
                pos_.column = 1;
            } else {
                ++pos_.column;
            }
            ++pos_.offset;
        }
    }

    [[noreturn]] void fail(const std::string& msg, SourcePos at, std::size_t len) const {
        throw LexError(std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + msg, at,
                       len == 0 ? 1 : len);
    }

    void skipTrivia() {
        while (pos_.offset < src_.size()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_.offset < src_.size() && peek() != '\n') {
                    advance();
                }
            } else if (c == '/' && peek(1) == '*') {
                SourcePos start = pos_;
                advance(2);
                while (!(peek() == '*' && peek(1) == '/')) {
                    if (pos_.offset >= src_.size()) {
                        fail("unterminated block comment", start, 2);
                    }
                    advance();
                }
                advance(2);
            } else {
                return;
            }
        }
    }

    Token make(TokenKind kind, SourcePos start) const {
        return Token{kind, std::string(src_.substr(start.offset, pos_.offset - start.offset)),
                     Span{start, pos_.offset}};
    }

    Token next() {
        SourcePos start = pos_;
        char c = peek();
        switch (c) {
            case '(': advance(); return make(TokenKind::LParen, start);
            case ')': advance(); return make(TokenKind::RParen, start);
            case '[': advance(); return make(TokenKind::LBrack, start);
            case ']': advance(); return make(TokenKind::RBrack, start);
            case ',': advance(); return make(TokenKind::Comma, start);
            case ';': advance(); return make(TokenKind::Semi, start);
            case '+': advance(); return make(TokenKind::Add, start);
            case '-': advance(); return make(TokenKind::Sub, start);
            case '*': advance(); return make(TokenKind::Mul, start);
            case '/': advance(); return make(TokenKind::Div, start);
            case '%': advance(); return make(TokenKind::Mod, start);
            case '=':
                if (peek(1) == '=') {
                    advance(2);
                    return make(TokenKind::Eq, start);
                }
                fail("unexpected character '='", start, 1);
            case '!':
                if (peek(1) == '=') {
                    advance(2);
                    return make(TokenKind::Neq, start);
                }
                fail("unexpected character '!'", start, 1);
            case '<':
                advance();
                if (peek() == '=') {
                    advance();
                    return make(TokenKind::Le, start);
                }
                return make(TokenKind::Lt, start);
            case '>':
                advance();
                if (peek() == '=') {
                    advance();
                    return make(TokenKind::Ge, start);
                }
                return make(TokenKind::Gt, start);
            default:
                break;
        }
        if (isDigit(c) || (c == '.' && isDigit(peek(1)))) {
            return number(start);
        }
        if (isAlpha(c)) {
            return word(start);
        }
        std::string shown = (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
                                ? "byte 0x" + std::to_string(static_cast<unsigned char>(c))
                                : std::string("'") + c + "'";
        fail("unexpected character " + shown, start, 1);
    }

    // Returns the byte length of a TIME literal at the cursor, 0 if the
    // text is not a date prefix at all. Throws on a malformed date/time.
    std::size_t timeLength(SourcePos start) const {
        std::size_t i = 0;
        auto at = [&](std::size_t k) { return peek(k); };
        for (; i < 4; ++i) {
            if (!isDigit(at(i))) return 0;
        }
        if (at(4) != '-' || !isDigit(at(5))) return 0;
        auto bad = [&]() { fail("malformed time literal", start, 4); };
        i = 5;
        // month
        if (at(i) == '0' && at(i + 1) >= '1' && at(i + 1) <= '9') {
        } else if (at(i) == '1' && at(i + 1) >= '0' && at(i + 1) <= '2') {
        } else {
            bad();
        }
        i += 2;
        if (at(i) != '-') bad();
        ++i;
        if (at(i) == '0' && at(i + 1) >= '1' && at(i + 1) <= '9') {
        } else if ((at(i) == '1' || at(i) == '2') && isDigit(at(i + 1))) {
        } else if (at(i) == '3' && (at(i + 1) == '0' || at(i + 1) == '1')) {
        } else {
            bad();
        }
        i += 2;
        if (at(i) != 'T') bad();
        ++i;
        // hour: [01]?[0-9] | '2'[0-3]
        if ((at(i) == '0' || at(i) == '1') && isDigit(at(i + 1))) {
            i += 2;
        } else if (at(i) == '2' && at(i + 1) >= '0' && at(i + 1) <= '3') {
            i += 2;
        } else if (isDigit(at(i))) {
            i += 1;
        } else {
            bad();
        }
        for (int field = 0; field < 2; ++field) {
            if (at(i) != ':') bad();
            ++i;
            if (at(i) >= '0' && at(i) <= '5' && isDigit(at(i + 1))) {
                i += 2;
            } else if (isDigit(at(i))) {
                i += 1;
            } else {
                bad();
            }
        }
        if (isAlnum(at(i))) bad();
        return i;
    }

    Token number(SourcePos start) {
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X') && isHex(peek(2))) {
            advance(2);
            while (isHex(peek())) advance();
            return make(TokenKind::Key, start);
        }
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            std::size_t n = 2;
            while (isAlnum(peek(n)) || peek(n) == '_') ++n;
            fail("malformed hex key '" + std::string(src_.substr(start.offset, n)) + "'", start, n);
        }
        if (src_.substr(pos_.offset, 5) == "1inch" && !isAlnum(peek(5)) && peek(5) != '-') {
            advance(5);
            return make(TokenKind::Platform, start);
        }
        if (std::size_t n = timeLength(start); n > 0) {
            advance(n);
            return make(TokenKind::Time, start);
        }
        bool isFloat = false;
        while (isDigit(peek())) advance();
        if (peek() == '.') {
            isFloat = true;
            advance();
            while (isDigit(peek())) advance();
        }
        char e = peek();
        if (e == 'e' || e == 'E' || e == 'p' || e == 'P') {
            std::size_t k = 1;
            if (peek(k) == '+' || peek(k) == '-') ++k;
            if (isDigit(peek(k))) {
                isFloat = true;
                advance(k);
                while (isDigit(peek())) advance();
            }
        }
        Token tok = make(isFloat ? TokenKind::DecFloat : TokenKind::DecInt, start);
        if (!isFloat && tok.lexeme.size() > 1 && tok.lexeme[0] == '0') {
            fail("integer literal '" + tok.lexeme + "' has a leading zero", start, tok.lexeme.size());
        }
        return tok;
    }

    Token word(SourcePos start) {
        while (isAlnum(peek()) || peek() == '_') advance();
        while (peek() == '-' && isAlpha(peek(1))) {
            advance();
            while (isAlnum(peek())) advance();
        }
        Token tok = make(TokenKind::EndOfInput, start);
        const std::string& w = tok.lexeme;
        for (const auto& kw : kKeywords) {
            if (kw.text == w) {
                tok.kind = kw.kind;
                return tok;
            }
        }
        for (auto p : kMoreNftPlatforms) {
            if (p == w) {
                tok.kind = TokenKind::NftPlatform;
                return tok;
            }
        }
        if (w == "COMAP") {
            // Appendix spelling of the COMP token; normalised here.
            tok.kind = TokenKind::Asset;
            tok.lexeme = "COMP";
            return tok;
        }
        if (parseAsset(w)) {
            tok.kind = TokenKind::Asset;
            return tok;
        }
        if (parsePlatform(w)) {
            tok.kind = TokenKind::Platform;
            return tok;
        }
        fail("unknown identifier '" + w + "'", start, w.size());
    }

    std::string_view src_;
    SourcePos pos_;
};

}  // namespace

std::string_view describe(TokenKind kind) {
    switch (kind) {
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::LBrack: return "'['";
        case TokenKind::RBrack: return "']'";
        case TokenKind::Comma: return "','";
        case TokenKind::Semi: return "';'";
        case TokenKind::Eq: return "'=='";
        case TokenKind::Neq: return "'!='";
        case TokenKind::Lt: return "'<'";
        case TokenKind::Gt: return "'>'";
        case TokenKind::Le: return "'<='";
        case TokenKind::Ge: return "'>='";
        case TokenKind::Add: return "'+'";
        case TokenKind::Sub: return "'-'";
        case TokenKind::Mul: return "'*'";
        case TokenKind::Div: return "'/'";
        case TokenKind::Mod: return "'%'";
        case TokenKind::LogicAnd: return "'and'";
        case TokenKind::LogicOr: return "'or'";
        case TokenKind::LogicNot: return "'not'";
        case TokenKind::DecInt: return "integer";
        case TokenKind::DecFloat: return "decimal";
        case TokenKind::Key: return "hex key";
        case TokenKind::Time: return "time literal";
        case TokenKind::Asset: return "asset";
        case TokenKind::Platform: return "platform";
        case TokenKind::NftPlatform: return "NFT marketplace";
        case TokenKind::KwTrigger: return "'trigger'";
        case TokenKind::KwThen: return "'then'";
        case TokenKind::KwChecking: return "'checking'";
        case TokenKind::KwBalance: return "'balance'";
        case TokenKind::KwPrice: return "'price'";
        case TokenKind::KwSlippage: return "'slippage'";
        case TokenKind::KwFee: return "'fee'";
        case TokenKind::KwWallet: return "'wallet'";
        case TokenKind::KwTime: return "'time'";
        case TokenKind::KwBefore: return "'before'";
        case TokenKind::KwAfter: return "'after'";
        case TokenKind::KwDuring: return "'during'";
        case TokenKind::KwTo: return "'to'";
        case TokenKind::KwTransfer: return "'transfer'";
        case TokenKind::KwFrom: return "'from'";
        case TokenKind::KwBorrow: return "'borrow'";
        case TokenKind::KwFor: return "'for'";
        case TokenKind::KwRepay: return "'repay'";
        case TokenKind::KwSwap: return "'swap'";
        case TokenKind::KwOn: return "'on'";
        case TokenKind::KwAdd: return "'add'";
        case TokenKind::KwReceiving: return "'receiving'";
        case TokenKind::KwLiquidity: return "'liquidity'";
        case TokenKind::KwToken: return "'token'";
        case TokenKind::KwRemove: return "'remove'";
        case TokenKind::KwReturning: return "'returning'";
        case TokenKind::KwOf: return "'of'";
        case TokenKind::KwStake: return "'stake'";
        case TokenKind::KwUsing: return "'using'";
        case TokenKind::KwStrategy: return "'strategy'";
        case TokenKind::KwBuy: return "'buy'";
        case TokenKind::KwNft: return "'NFT'";
        case TokenKind::KwAt: return "'at'";
        case TokenKind::KwMost: return "'most'";
        case TokenKind::KwIn: return "'in'";
        case TokenKind::KwCollection: return "'collection'";
        case TokenKind::KwSell: return "'sell'";
        case TokenKind::KwLeast: return "'least'";
        case TokenKind::LowRisk: return "'low-risk'";
        case TokenKind::MiddleRisk: return "'middle-risk'";
        case TokenKind::HighRisk: return "'high-risk'";
        case TokenKind::ShortTerm: return "'short-term'";
        case TokenKind::MiddleTerm: return "'middle-term'";
        case TokenKind::LongTerm: return "'long-term'";
        case TokenKind::Mainstream: return "'mainstream'";
        case TokenKind::Popular: return "'popular'";
        case TokenKind::Rare: return "'rare'";
        case TokenKind::Inexpensive: return "'inexpensive'";
        case TokenKind::PriceIncreasing: return "'price-increasing'";
        case TokenKind::PriceDecreaseing: return "'price-decreaseing'";
        case TokenKind::TimeSaving: return "'time-saving'";
        case TokenKind::Profitable: return "'profitable'";
        case TokenKind::EndOfInput: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::vector<LintHint> lint(std::string_view source) {
    std::vector<LintHint> hints;
    for (const Token& tok : tokenize(source)) {
        if (tok.kind == TokenKind::PriceDecreaseing) {
            hints.push_back({tok.span.begin,
                             "'price-decreaseing' is the accepted spelling of the "
                             "decreasing-price qualifier (did you mean 'decreasing'?)"});
        }
        if (tok.kind == TokenKind::Asset && tok.lexeme == "COMP" &&
            source.substr(tok.span.begin.offset, 5) == "COMAP") {
            hints.push_back({tok.span.begin, "'COMAP' is read as the COMP asset"});
        }
    }
    return hints;
}

}  // namespace intent::icl
