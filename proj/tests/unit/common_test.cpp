// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "intent/common/amount.hpp"
#include "intent/common/asset.hpp"
#include "intent/common/crypto.hpp"
#include "intent/common/random.hpp"

using namespace intent;

TEST_CASE("decimal literals parse to exact rationals") {
    CHECK(parseDecimal("12") == Rational(12));
    CHECK(parseDecimal("0.005") == Rational(1, 200));
    CHECK(parseDecimal(".5") == Rational(1, 2));
    CHECK(parseDecimal("5.") == Rational(5));
    CHECK(parseDecimal("1e3") == Rational(1000));
    CHECK(parseDecimal("1.5E-2") == Rational(3, 200));
    CHECK(parseDecimal("3p4") == Rational(48));
    CHECK(parseDecimal("1p-1") == Rational(1, 2));
    CHECK_THROWS_AS(parseDecimal("."), std::invalid_argument);
    CHECK_THROWS_AS(parseDecimal("1e"), std::invalid_argument);
}

TEST_CASE("floor rounds toward negative infinity") {
    CHECK(floorRational(Rational(7, 2)) == 3);
    CHECK(floorRational(Rational(-7, 2)) == -4);
    CHECK(floorRational(Rational(-4)) == -4);
    CHECK(toString(Rational(6, 4)) == "3/2");
    CHECK(toString(Rational(8, 4)) == "2");
}

TEST_CASE("integer square root") {
    CHECK(isqrt(Amount(0)) == 0);
    CHECK(isqrt(Amount(15)) == 3);
    CHECK(isqrt(Amount(16)) == 4);
    Amount big = pow10(40) + 12345;
    Amount r = isqrt(big);
    CHECK(r * r <= big);
    CHECK((r + 1) * (r + 1) > big);
}

TEST_CASE("addresses normalise to lowercase") {
    CHECK(Address::parse("0xAbC").str() == "0xabc");
    CHECK(Address::parse("0XFF").str() == "0xff");
    CHECK_THROWS_AS(Address::parse("0x_A"), std::invalid_argument);
    CHECK_THROWS_AS(Address::parse("abc"), std::invalid_argument);
}

TEST_CASE("asset ids round-trip through their string form") {
    AssetId lp = AssetId::lpShare(Platform::Sushiswap, Asset::USDT, Asset::USDC);
    CHECK(lp.str() == "LP:Sushiswap:USDT:USDC");
    CHECK(AssetId::parse(lp.str()) == lp);
    CHECK(lp.isLpShare());
    CHECK(lp.decimals() == 0);

    AssetId nft = AssetId::nft(Address::parse("0xC0"), Address::parse("0x7"));
    CHECK(nft.isNft());
    CHECK(AssetId::parse(nft.str()) == nft);

    CHECK(AssetId(Asset::USDC).decimals() == 6);
    CHECK(AssetId(Asset::ETH).decimals() == 18);
    CHECK_THROWS_AS(AssetId::parse("1inch"), std::invalid_argument);
}

TEST_CASE("ed25519 signatures are deterministic and bound to the message") {
    std::array<std::uint8_t, 32> seed{};
    seed[0] = 7;
    auto key = SigningKey::fromSeed(seed);
    Bytes msg{1, 2, 3};
    Signature a = key.sign(msg);
    Signature b = key.sign(msg);
    CHECK(a == b);
    CHECK(verifySignature(key.publicKey(), msg, a));
    msg[0] ^= 1;
    CHECK_FALSE(verifySignature(key.publicKey(), msg, a));
    CHECK(key.secretBytesForAudit() == Bytes(seed.begin(), seed.end()));
}

TEST_CASE("sha256 matches the published test vector") {
    CHECK(toHex(sha256(std::string_view("abc"))) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("canonical byte encoding round-trips") {
    ByteWriter w;
    w.u8(9).u32(0xdeadbeef).i64(-5).str("hello").bigint(Amount(0)).bigint(pow10(30));
    Bytes bytes = w.take();
    ByteReader r(bytes);
    CHECK(r.u8() == 9);
    CHECK(r.u32() == 0xdeadbeefU);
    CHECK(r.i64() == -5);
    CHECK(r.str() == "hello");
    CHECK(r.bigint() == 0);
    CHECK(r.bigint() == pow10(30));
    CHECK(r.done());

    ByteWriter z;
    z.bigint(Amount(0));
    CHECK(z.bytes() == Bytes{0, 0, 0, 0});

    Bytes truncated(bytes.begin(), bytes.begin() + 3);
    ByteReader t(truncated);
    t.u8();
    CHECK_THROWS_AS(t.u32(), std::out_of_range);
}

TEST_CASE("rng streams are reproducible and shuffles are permutations") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    Rng r(1);
    std::vector<int> v(20);
    std::iota(v.begin(), v.end(), 0);
    r.shuffle(std::span<int>(v));
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(20);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(sorted == expect);

    std::set<std::uint64_t> seen;
    for (std::uint64_t t = 0; t < 100; ++t) seen.insert(deriveSeed(5, t));
    CHECK(seen.size() == 100);

    for (int i = 0; i < 1000; ++i) {
        auto x = r.between(-3, 3);
        CHECK(x >= -3);
        CHECK(x <= 3);
    }
}
