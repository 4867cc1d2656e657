// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "intent/common/random.hpp"
#include "intent/icl/eval.hpp"
#include "intent/icl/parser.hpp"
#include "intent/icl/printer.hpp"

using namespace intent;
using namespace intent::icl;

namespace {

const char* kSample =
    "swap 400000 USDC from wallet[0xA] for USDT on Uniswap checking slippage < 0.005;\n"
    "swap 200000 USDC from wallet[0xA] for ETH on Uniswap checking slippage < 0.005 and fee < 150000;\n"
    "buy popular price-increasing NFT using at most 80 ETH from wallet[0xA];\n"
    "trigger balance wallet[0xA] > 400000 USDT then\n"
    "    add 400000 USDC, 400000 USDT to Sushiswap receiving liquidity token to wallet[0xA];\n"
    "stake 160 ETH from wallet[0xA] using long-term low-risk strategy checking price ETH > 4000;\n";

class MapState : public ConditionState {
public:
    std::map<std::pair<std::string, std::string>, Amount> balances;
    std::map<Asset, Amount> prices;

    Amount balanceOf(const Address& w, const AssetId& a) const override {
        auto it = balances.find({w.str(), a.str()});
        return it == balances.end() ? Amount(0) : it->second;
    }
    std::optional<Amount> priceMicroUsd(Asset a) const override {
        auto it = prices.find(a);
        if (it == prices.end()) return std::nullopt;
        return it->second;
    }
};

std::string readFile(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::filesystem::path> corpus(const char* sub) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(INTENT_CORPUS_DIR) / sub)) {
        if (e.path().extension() == ".icl") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool evalText(const std::string& cond, const ConditionState& st, std::int64_t now = 0) {
    return evaluateCondition(*parseCondition(cond), EvalContext{st, now, std::nullopt});
}

}  // namespace

TEST_CASE("lexer classifies the grammar's token classes") {
    auto toks = tokenize("swap 1.5e3 USDC from wallet[0xAbC] on 1inch; // tail");
    REQUIRE(toks.size() == 12);
    CHECK(toks[0].kind == TokenKind::KwSwap);
    CHECK(toks[1].kind == TokenKind::DecFloat);
    CHECK(toks[2].kind == TokenKind::Asset);
    CHECK(toks[5].kind == TokenKind::LBrack);
    CHECK(toks[6].kind == TokenKind::Key);
    CHECK(toks[6].lexeme == "0xAbC");
    CHECK(toks[9].kind == TokenKind::Platform);
    CHECK(toks[9].lexeme == "1inch");
    CHECK(toks[10].kind == TokenKind::Semi);
    CHECK(toks[11].kind == TokenKind::EndOfInput);
    CHECK(toks[6].span.begin.line == 1);
    CHECK(toks[6].span.begin.column == 29);

    auto t = tokenize("time before 2025-01-01T00:00:00 /* x\n y */ 0 12 .5 5.");
    CHECK(t[2].kind == TokenKind::Time);
    CHECK(t[3].kind == TokenKind::DecInt);
    CHECK(t[3].span.begin.line == 2);
    CHECK(t[4].kind == TokenKind::DecInt);
    CHECK(t[5].kind == TokenKind::DecFloat);
    CHECK(t[6].kind == TokenKind::DecFloat);
}

TEST_CASE("lexer rejects text outside the grammar") {
    CHECK_THROWS_AS(tokenize("007"), LexError);
    CHECK_THROWS_AS(tokenize("swap 1 DOGE"), LexError);
    CHECK_THROWS_AS(tokenize("on Binance"), LexError);
    CHECK_THROWS_AS(tokenize("x = 1"), LexError);
    CHECK_THROWS_AS(tokenize("/* open"), LexError);
    CHECK_THROWS_AS(tokenize("a $ b"), LexError);
    CHECK_THROWS_AS(tokenize("2025-13-01T00:00:00"), LexError);
    try {
        tokenize("swap 10 USDC\n  from @");
        FAIL("expected LexError");
    } catch (const LexError& e) {
        CHECK(e.position().line == 2);
        CHECK(e.position().column == 8);
        CHECK(e.position().offset == 20);
    }
}

TEST_CASE("lint flags the grammar's misspelt qualifier") {
    auto hints = lint("buy price-decreaseing NFT using at most 1 ETH from wallet[0x1];");
    REQUIRE(hints.size() == 1);
    CHECK(hints[0].message.find("decreasing") != std::string::npos);
    CHECK(lint("transfer 1 COMAP from wallet[0x1] to wallet[0x2];").size() == 1);
}

TEST_CASE("the sample program parses into five statements") {
    IclProgram p = parse(kSample);
    REQUIRE(p.statements.size() == 5);
    const char* kinds[] = {"swap", "swap", "buy-nft", "add-liquidity", "stake"};
    for (int i = 0; i < 5; ++i) {
        CHECK(p.statements[i].index == i + 1);
        CHECK(statementKind(p.statements[i].statement) == kinds[i]);
        CHECK((p.statements[i].trigger != nullptr) == (i == 3));
    }
    CHECK(p.statements[0].constraint != nullptr);
    CHECK(p.statements[1].constraint != nullptr);
    CHECK(p.statements[2].constraint == nullptr);
    CHECK(p.statements[3].constraint == nullptr);
    CHECK(p.statements[4].constraint != nullptr);

    const auto& swap = std::get<SwapStmt>(p.statements[0].statement);
    CHECK(swap.amount.asset == Asset::USDC);
    CHECK(evaluateExpr(*swap.amount.expr) == 400000);
    CHECK(swap.wallet.str() == "0xa");
    CHECK(swap.toAsset == Asset::USDT);
    CHECK(swap.platform == Platform::Uniswap);
    CHECK(print(*p.statements[0].constraint) == "slippage < 0.005");

    const auto& buy = std::get<BuyNftStmt>(p.statements[2].statement);
    CHECK(buy.qualifiers == std::vector<NftQualifier>{NftQualifier::Popular, NftQualifier::PriceIncreasing});

    CHECK(print(*p.statements[3].trigger) == "balance wallet[0xa] > 400000 USDT");
    const auto& stake = std::get<StakeStmt>(p.statements[4].statement);
    REQUIRE(stake.strategy.has_value());
    CHECK(*stake.strategy == std::vector<StakeQualifier>{StakeQualifier::LongTerm, StakeQualifier::LowRisk});
}

TEST_CASE("the underscore wallet spelling is not a grammar key") {
    CHECK_THROWS_AS(parse("trigger balance wallet[0x_A] > 1 USDT then transfer 1 USDT from wallet[0xA] to "
                          "wallet[0xB];"),
                    LexError);
}

TEST_CASE("empty input is a parse error") {
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("  // only a comment\n"), ParseError);
}

TEST_CASE("parse errors report the expected token set") {
    try {
        parse("swap 10 USDC from wallet[0x1] for USDT Uniswap;");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position().column == 40);
        CHECK(e.expected() == std::vector<std::string>{"'on'"});
    }
}

TEST_CASE("statement variants are recognised") {
    auto kindOf = [](const char* src) { return std::string(statementKind(parse(src).statements[0].statement)); };
    CHECK(kindOf("transfer 5 DAI from wallet[0x1] to wallet[0x2];") == "transfer");
    CHECK(kindOf("borrow 5 DAI for wallet[0x1] from Aave;") == "borrow");
    CHECK(kindOf("repay 5 DAI from wallet[0x1] to Compound;") == "repay");
    CHECK(kindOf("remove 1 ETH, 2 DAI from Curve returning 7 liquidity from wallet[0x1];") == "remove-liquidity");
    CHECK(kindOf("remove 1 ETH, 2 DAI from Curve returning 7 liquidity of token [0xF] from wallet[0x1];") ==
          "remove-liquidity");
    CHECK(kindOf("stake 1 ETH from wallet[0x1];") == "stake");
    CHECK(kindOf("stake 1 ETH from wallet[0x1] using strategy;") == "stake");
    CHECK(kindOf("stake 1 ETH from wallet[0x1] on Yearn;") == "simple-stake");
    CHECK(kindOf("buy NFT [0x1] in collection [0x2] using at most 3 ETH from wallet[0x3];") == "simple-buy-nft");
    CHECK(kindOf("buy NFT using at most 3 ETH from wallet[0x3];") == "buy-nft");
    CHECK(kindOf("sell NFT [0x1] in collection [0x2] from wallet[0x3];") == "sell-nft");
    CHECK(kindOf("sell NFT [0x1] in collection [0x2] from wallet[0x3] using time-saving strategy;") == "sell-nft");
    CHECK(kindOf("sell NFT [0x1] in collection [0x2] from wallet[0x3] for at least 2 ETH;") == "simple-sell-nft");

    auto rm = std::get<RemoveLiquidityStmt>(
        parse("remove 1 ETH, 2 DAI from Curve returning 7 liquidity of token [0xF] from wallet[0x1];")
            .statements[0]
            .statement);
    CHECK(rm.liquidity == "7");
    REQUIRE(rm.tokenKey.has_value());
    CHECK(rm.tokenKey->str() == "0xf");
    CHECK_THROWS_AS(parse("buy rare NFT [0x1] in collection [0x2] using at most 3 ETH from wallet[0x3];"), ParseError);
    CHECK_THROWS_AS(parse("remove 1 ETH, 2 DAI from Curve returning 7.5 liquidity from wallet[0x1];"), ParseError);
}

TEST_CASE("arithmetic amounts are exact and floored to base units") {
    auto amountOf = [](const std::string& expr, const char* asset) {
        auto p = parse("transfer " + expr + " " + asset + " from wallet[0x1] to wallet[0x2];");
        return std::get<TransferStmt>(p.statements[0].statement).amount;
    };
    CHECK(toBaseUnits(amountOf("1 / 3", "USDC")) == 333333);
    CHECK(toBaseUnits(amountOf("0.1 + 0.2", "USDC")) == 300000);
    CHECK(toBaseUnits(amountOf("1.5", "ETH")) == Amount("1500000000000000000"));
    CHECK(evaluateExpr(*amountOf("2 + 3 * 4", "DAI").expr) == 14);
    CHECK(evaluateExpr(*amountOf("(2 + 3) * 4", "DAI").expr) == 20);
    CHECK(evaluateExpr(*amountOf("10 - 4 - 3", "DAI").expr) == 3);
    CHECK(evaluateExpr(*amountOf("-7 % 3", "DAI").expr) == 2);
    CHECK(evaluateExpr(*amountOf("not 0 + not 5", "DAI").expr) == 1);
    CHECK(evaluateExpr(*amountOf("- -2", "DAI").expr) == 2);
    CHECK_THROWS_AS(evaluateExpr(*amountOf("1 / (2 - 2)", "DAI").expr), EvalError);
}

TEST_CASE("condition evaluation follows the documented semantics") {
    MapState st;
    st.balances[{"0xa", "USDT"}] = Amount(500000) * pow10(6);
    st.prices[Asset::ETH] = Amount(4000) * 1000000;

    CHECK(evalText("balance wallet[0xA] > 400000 USDT", st));
    CHECK(evalText("400000 USDT < balance wallet[0xA]", st));
    CHECK_FALSE(evalText("balance wallet[0xA] > 500000 USDT", st));
    CHECK(evalText("balance wallet[0xB] == 0 USDT", st));
    CHECK_FALSE(evalText("price ETH > 4000", st));
    CHECK(evalText("price ETH >= 4000", st));
    CHECK(evalText("price ETH > 3999.999999", st));
    CHECK(evalText("1 USDC < 2 USDC", st));

    CHECK_THROWS_AS(evalText("price BTC > 1", st), EvalError);
    try {
        evalText("balance wallet[0xA] > 5", st);
        FAIL("expected TypeError");
    } catch (const EvalError& e) {
        CHECK(e.kind() == EvalError::Kind::TypeError);
    }
    try {
        evalText("1 USDC < 2 USDT", st);
        FAIL("expected TypeError");
    } catch (const EvalError& e) {
        CHECK(e.kind() == EvalError::Kind::TypeError);
    }
    try {
        evalText("slippage < 0.01", st);
        FAIL("expected RuntimeRefInTrigger");
    } catch (const EvalError& e) {
        CHECK(e.kind() == EvalError::Kind::RuntimeRefInTrigger);
    }

    auto c = parseCondition("slippage < 0.005 and fee < 150000");
    CHECK(evaluateCondition(*c, EvalContext{st, 0, RuntimeObservations{Rational(1, 1000), Amount(110793)}}));
    CHECK_FALSE(evaluateCondition(*c, EvalContext{st, 0, RuntimeObservations{Rational(1, 100), Amount(1)}}));
    CHECK_FALSE(evaluateCondition(*c, EvalContext{st, 0, RuntimeObservations{Rational(0), Amount(150000)}}));

    // short-circuit: the right operand would be a type error
    CHECK_FALSE(evalText("1 > 2 and balance wallet[0xA] > 5", st));
    CHECK(evalText("1 < 2 or price BTC > 1", st));
    CHECK_THROWS_AS(typeCheck(*parseCondition("1 < 2 or balance wallet[0xA] > 5"), false), EvalError);

    CHECK(evalText("(1 < 2) == (3 < 4)", st));
    CHECK(evalText("(1 < 2) != (3 > 4)", st));
    CHECK_THROWS_AS(evalText("(1 < 2) < (3 < 4)", st), EvalError);
}

TEST_CASE("time conditions compare against UTC") {
    MapState st;
    st.balances[{"0xa", "USDC"}] = 1;
    const std::int64_t t0 = parseTimeLiteral("2025-01-01T00:00:00");
    CHECK(t0 == 1735689600);
    CHECK(parseTimeLiteral("2024-02-29T1:2:3") == 1709168523);
    CHECK_THROWS_AS(parseTimeLiteral("2025-02-29T00:00:00"), std::invalid_argument);
    CHECK_THROWS_AS(parse("transfer 1 USDC from wallet[0x1] to wallet[0x2] checking time before 2023-02-29T00:00:00;"),
                    LexError);

    const std::string cond = "(time before 2025-01-01T00:00:00) and (balance wallet[0xA] > 0 USDC)";
    // truth-table oracle over the two leaves
    for (std::int64_t now : {t0 - 1, t0, t0 + 1}) {
        for (int bal : {0, 1}) {
            st.balances[{"0xa", "USDC"}] = bal;
            bool expect = (now < t0) && (bal > 0);
            CHECK(evalText(cond, st, now) == expect);
        }
    }
    CHECK(evalText("time after 2025-01-01T00:00:00", st, t0 + 1));
    CHECK_FALSE(evalText("time after 2025-01-01T00:00:00", st, t0));
    CHECK(evalText("time during 2025-01-01T00:00:00 to 2025-01-02T00:00:00", st, t0));
    CHECK(evalText("time during 2025-01-01T00:00:00 to 2025-01-02T00:00:00", st, t0 + 86400));
    CHECK_FALSE(evalText("time during 2025-01-01T00:00:00 to 2025-01-02T00:00:00", st, t0 + 86401));
}

TEST_CASE("and binds tighter than or: random flat conditions against a brute-force oracle") {
    MapState st;
    Rng rng(20250101);
    for (int iter = 0; iter < 2000; ++iter) {
        int n = static_cast<int>(rng.between(1, 7));
        std::vector<bool> leaf;
        std::vector<bool> isOr;  // connective before leaf i
        std::string text;
        for (int i = 0; i < n; ++i) {
            bool v = rng.chance(0.5);
            leaf.push_back(v);
            if (i > 0) {
                isOr.push_back(rng.chance(0.5));
                text += isOr.back() ? " or " : " and ";
            }
            text += v ? "1 < 2" : "2 < 1";
        }
        // oracle: disjunction of maximal and-runs
        bool result = false, run = leaf[0];
        for (int i = 1; i < n; ++i) {
            if (isOr[i - 1]) {
                result = result || run;
                run = leaf[i];
            } else {
                run = run && leaf[i];
            }
        }
        result = result || run;
        CHECK(evalText(text, st) == result);
    }
}

TEST_CASE("arithmetic precedence: random flat expressions against a two-pass reducer") {
    Rng rng(77);
    for (int iter = 0; iter < 2000; ++iter) {
        int n = static_cast<int>(rng.between(1, 6));
        std::vector<Rational> atoms;
        std::vector<char> ops;
        std::string text;
        for (int i = 0; i < n; ++i) {
            if (i > 0) {
                char op = "+-*/%"[rng.below(5)];
                ops.push_back(op);
                text += std::string(" ") + op + " ";
            }
            Rational v(static_cast<long>(rng.between(1, 9)));
            std::string atom = toString(v);
            switch (rng.below(4)) {
                case 0: v = -v; atom = "-" + atom; break;
                case 1: v = v == 0 ? 1 : 0; atom = "not " + atom; break;
                default: break;
            }
            atoms.push_back(v);
            text += atom;
        }
        // pass 1: * / % left to right
        std::vector<Rational> terms{atoms[0]};
        std::vector<char> addOps;
        bool divZero = false;
        for (std::size_t i = 0; i < ops.size(); ++i) {
            Rational rhs = atoms[i + 1];
            char op = ops[i];
            if (op == '+' || op == '-') {
                addOps.push_back(op);
                terms.push_back(rhs);
                continue;
            }
            Rational& lhs = terms.back();
            if (op == '*') {
                lhs = lhs * rhs;
            } else if (rhs == 0) {
                divZero = true;
                break;
            } else if (op == '/') {
                lhs = lhs / rhs;
            } else {
                lhs = lhs - rhs * Rational(floorRational(lhs / rhs));
            }
        }
        auto parsed = parse("transfer " + text + " DAI from wallet[0x1] to wallet[0x2];");
        const auto& expr = *std::get<TransferStmt>(parsed.statements[0].statement).amount.expr;
        if (divZero) {
            CHECK_THROWS_AS(evaluateExpr(expr), EvalError);
            continue;
        }
        // pass 2: + - left to right
        Rational acc = terms[0];
        for (std::size_t i = 0; i < addOps.size(); ++i) {
            acc = addOps[i] == '+' ? Rational(acc + terms[i + 1]) : Rational(acc - terms[i + 1]);
        }
        INFO(text);
        CHECK(evaluateExpr(expr) == acc);
    }
}

TEST_CASE("printer normal form round-trips nested arithmetic") {
    const char* src =
        "transfer (1 - (2 - 3)) * -(4 + 5) % 2 / (6 * 7) ETH from wallet[0x1] to wallet[0x2] "
        "checking ((price ETH > 1 or 1 < 2) and time before 2030-01-01T00:00:00) or (1 < 2) == (2 < 1);";
    IclProgram a = parse(src);
    std::string printed = print(a);
    IclProgram b = parse(printed);
    CHECK(structurallyEqual(a, b));
    CHECK(print(b) == printed);
    CHECK(evaluateExpr(*std::get<TransferStmt>(a.statements[0].statement).amount.expr) ==
          evaluateExpr(*std::get<TransferStmt>(b.statements[0].statement).amount.expr));
}

TEST_CASE("valid corpus parses and round-trips") {
    auto files = corpus("valid");
    CHECK(files.size() >= 50);
    for (const auto& f : files) {
        INFO(f.filename().string());
        std::string src = readFile(f);
        IclProgram a;
        REQUIRE_NOTHROW(a = parse(src));
        IclProgram b = parse(print(a));
        CHECK(structurallyEqual(a, b));
        CHECK(print(a) == print(b));
    }
}

TEST_CASE("invalid corpus fails at the annotated position") {
    auto files = corpus("invalid");
    CHECK(files.size() >= 30);
    const std::regex marker(R"(^// error: (lex|parse) (\d+):(\d+))");
    for (const auto& f : files) {
        INFO(f.filename().string());
        std::string src = readFile(f);
        std::smatch m;
        REQUIRE(std::regex_search(src, m, marker));
        const std::string kind = m[1];
        const int line = std::stoi(m[2]);
        const int col = std::stoi(m[3]);
        bool threw = false;
        try {
            parse(src);
        } catch (const SourceError& e) {
            threw = true;
            CHECK((dynamic_cast<const LexError*>(&e) != nullptr) == (kind == "lex"));
            CHECK(e.position().line == line);
            CHECK(e.position().column == col);
            REQUIRE(e.position().offset <= src.size());
            if (e.position().offset < src.size()) {
                // the reported span covers the offending text, which is never blank
                CHECK(e.length() >= 1);
                CHECK(e.position().offset + e.length() <= src.size());
                CHECK_FALSE(std::isspace(static_cast<unsigned char>(src[e.position().offset])));
            }
        }
        CHECK(threw);
    }
}

TEST_CASE("ast json is stable and span-free") {
    auto a = parse("swap 1 USDC from wallet[0xAA] for ETH on Uniswap;");
    auto b = parse("swap   1.0  USDC from wallet[0xaa]\n for ETH on Uniswap ;");
    CHECK(toJson(a).dump() == toJson(b).dump());
    CHECK(toJson(a).dump() ==
          R"({"statements":[{"index":1,"trigger":null,"statement":{"kind":"swap","amount":{"expr":{"kind":"number","value":"1"},"asset":"USDC"},"wallet":"0xaa","toAsset":"ETH","platform":"Uniswap"},"constraint":null}]})");
}
