// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intent::icl {

enum class TokenKind {
    // punctuation
    LParen, RParen, LBrack, RBrack, Comma, Semi,
    // comparison and arithmetic operators
    Eq, Neq, Lt, Gt, Le, Ge,
    Add, Sub, Mul, Div, Mod,
    LogicAnd, LogicOr, LogicNot,
    // literals
    DecInt, DecFloat, Key, Time,
    // closed enumerations; the lexeme carries the member
    Asset, Platform, NftPlatform,
    // keywords
    KwTrigger, KwThen, KwChecking,
    KwBalance, KwPrice, KwSlippage, KwFee, KwWallet,
    KwTime, KwBefore, KwAfter, KwDuring, KwTo,
    KwTransfer, KwFrom, KwBorrow, KwFor, KwRepay, KwSwap, KwOn,
    KwAdd, KwReceiving, KwLiquidity, KwToken, KwRemove, KwReturning, KwOf,
    KwStake, KwUsing, KwStrategy,
    KwBuy, KwNft, KwAt, KwMost, KwIn, KwCollection, KwSell, KwLeast,
    // qualifiers
    LowRisk, MiddleRisk, HighRisk, ShortTerm, MiddleTerm, LongTerm,
    Mainstream, Popular, Rare, Inexpensive, PriceIncreasing, PriceDecreaseing,
    TimeSaving, Profitable,
    EndOfInput,
};

std::string_view describe(TokenKind kind);

struct SourcePos {
    std::size_t offset = 0;
    int line = 1;
    int column = 1;
};

struct Span {
    SourcePos begin;
    std::size_t end = 0;  // exclusive byte offset
};

struct Token {
    TokenKind kind;
    std::string lexeme;
    Span span;
};

/// Base for diagnostics that point into source text.
class SourceError : public std::runtime_error {
public:
    SourceError(const std::string& what, SourcePos pos, std::size_t length)
        : std::runtime_error(what), pos_(pos), length_(length) {}
    SourcePos position() const { return pos_; }
    /// Byte length of the offending token (at least 1 unless at end of input).
    std::size_t length() const { return length_; }

private:
    SourcePos pos_;
    std::size_t length_;
};

class LexError : public SourceError {
public:
    using SourceError::SourceError;
};

class ParseError : public SourceError {
public:
    ParseError(const std::string& what, SourcePos pos, std::size_t length,
               std::vector<std::string> expected)
        : SourceError(what, pos, length), expected_(std::move(expected)) {}
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::vector<std::string> expected_;
};

/// Tokenises ICL source. Whitespace and `//` / `/* */` comments are
/// skipped. Throws LexError on characters or words outside the grammar.
std::vector<Token> tokenize(std::string_view source);

struct LintHint {
    SourcePos position;
    std::string message;
};

/// Non-fatal hints, e.g. the grammar's `price-decreaseing` spelling.
std::vector<LintHint> lint(std::string_view source);

}  // namespace intent::icl
