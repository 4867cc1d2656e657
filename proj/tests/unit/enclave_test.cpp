// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "intent/enclave/enclave.hpp"
#include "intent/icl/parser.hpp"
#include "intent/ledger/genesis.hpp"

using namespace intent;
using namespace intent::enclave;
using ledger::KeyQuery;

namespace {

std::array<std::uint8_t, 32> seedOf(std::uint8_t b) {
    std::array<std::uint8_t, 32> s{};
    s.fill(b);
    return s;
}

EnclaveConfig canaryConfig(std::uint8_t b = 0x5a) {
    EnclaveConfig c;
    c.keySeed = seedOf(b);
    return c;
}

std::string sampleSource() {
    std::ifstream in(std::string(INTENT_CORPUS_DIR) + "/valid/sample_program.icl");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Serves honest proofs but lets a test rewrite them first.
class TamperingSource : public StateSource {
public:
    TamperingSource(const ledger::Node& node, std::function<void(ledger::StateProof&)> edit)
        : inner_(&node), edit_(std::move(edit)) {}
    std::uint64_t headHeight() const override { return inner_.headHeight(); }
    ledger::StateProof getSnapshot(std::uint64_t h, const std::vector<KeyQuery>& q) const override {
        auto p = inner_.getSnapshot(h, q);
        edit_(p);
        return p;
    }

private:
    NodeSource inner_;
    std::function<void(ledger::StateProof&)> edit_;
};

void approveAll(ledger::Node& node, const Address& owner, const Address& spender) {
    node.approve(owner, spender, ledger::kAnyAsset, ledger::unlimitedAllowance());
    node.mineBlock();
}

}  // namespace

TEST_CASE("attestation reports verify only with fresh nonces and the expected measurement") {
    Enclave e(canaryConfig());
    AttestationVerifier v(measure(canaryConfig()));
    Digest n = v.challenge();
    auto report = e.attest(n);
    CHECK(report.pk == e.exportPk());
    CHECK(v.verify(report));
    CHECK_FALSE(v.verify(report));  // replay

    Digest n2 = v.challenge();
    auto flipped = e.attest(n2);
    flipped.measurement[7] ^= 0x01;
    CHECK_FALSE(v.verify(flipped));

    auto unknown = e.attest(sha256(std::string_view("never issued")));
    CHECK_FALSE(v.verify(unknown));

    EnclaveConfig other = canaryConfig();
    other.buildId = "intent-compiler/2";
    Enclave e2(other);
    CHECK_FALSE(v.verify(e2.attest(v.challenge())));

    auto forged = e.attest(v.challenge());
    forged.pk[0] ^= 0x80;
    CHECK_FALSE(v.verify(forged));
}

TEST_CASE("measurement changes with every configuration field but not with the key") {
    Digest base = measure(EnclaveConfig{});
    std::vector<EnclaveConfig> variants(9);
    variants[0].buildId += "x";
    variants[1].policy.apy = Rational(2, 7);
    variants[2].policy.poolDepth = Rational(1, 4);
    variants[3].policy.riskScore = Rational(1, 2);
    variants[4].policy.volume = Rational(1, 3);
    variants[5].policy.priceTrend = Rational(1, 7);
    variants[6].policy.floorDistance = Rational(1, 3);
    variants[7].policy.rngSeed = 1;
    variants[8].options.gasPrice = 2;
    std::set<Digest> seen{base};
    for (const auto& v : variants) seen.insert(measure(v));
    CHECK(seen.size() == variants.size() + 1);

    EnclaveConfig keyed;
    keyed.keySeed = seedOf(9);
    CHECK(measure(keyed) == base);

    // flipping any single byte of the encoded configuration changes the digest
    Bytes enc = encodeConfig(EnclaveConfig{});
    for (std::size_t i = 0; i < enc.size(); ++i) {
        Bytes m = enc;
        m[i] ^= 0x01;
        CHECK(sha256(m) != base);
    }
}

TEST_CASE("verified state acquisition") {
    ledger::Node node(ledger::sampleGenesis());
    node.mineBlock();
    Enclave e(canaryConfig());
    NodeSource honest(&node);

    CHECK_THROWS_AS(e.acquireVerifiedState(honest, 1, {}), ProtocolError);
    e.attest(Digest{});

    std::vector<KeyQuery> three{KeyQuery::exact("bal/0xa/USDC"), KeyQuery::exact("bal/0xa/ETH"),
                                KeyQuery::exact("price/ETH")};
    auto snap = e.acquireVerifiedState(honest, 1, three);
    CHECK(snap.verifiedKeys.size() == 3);
    CHECK(snap.stateRoot == node.headRoot());
    CHECK(snap.state.balanceOf(Address::parse("0xa"), Asset::ETH) == ledger::units(Asset::ETH, "200"));
    CHECK(e.stage() == Stage::StateAcquired);

    auto empty = e.acquireVerifiedState(honest, 1, {});
    CHECK(empty.verifiedKeys.empty());
    CHECK(empty.stateRoot == node.headRoot());

    TamperingSource inflate(node, [](ledger::StateProof& p) {
        for (auto& q : p.queries) {
            for (auto& lp : q.leaves) {
                if (lp.leaf.key == "bal/0xa/USDC") {
                    ByteReader r(lp.leaf.value);
                    lp.leaf.value = ByteWriter().bigint(r.bigint() + 1).take();
                }
            }
        }
    });
    try {
        e.acquireVerifiedState(inflate, 1, three);
        FAIL("inflated balance accepted");
    } catch (const AcquireError& err) {
        CHECK(err.kind() == AcquireError::Kind::ProofInvalid);
        CHECK(err.key() == "bal/0xa/USDC");
    }
    CHECK(e.stage() == Stage::Attested);

    TamperingSource dropped(node, [](ledger::StateProof& p) { p.queries.pop_back(); });
    CHECK_THROWS_AS(e.acquireVerifiedState(dropped, 1, three), AcquireError);

    TamperingSource reRooted(node, [](ledger::StateProof& p) { p.root[0] ^= 1; });
    CHECK_THROWS_AS(e.acquireVerifiedState(reRooted, 1, three), AcquireError);

    try {
        e.acquireVerifiedState(honest, 5, three);
        FAIL("future height accepted");
    } catch (const AcquireError& err) {
        CHECK(err.kind() == AcquireError::Kind::StaleHeight);
    }
    ledger::Node shallow(ledger::sampleGenesis(), ledger::NodeConfig{2});
    for (int i = 0; i < 4; ++i) shallow.mineBlock();
    try {
        e.acquireVerifiedState(NodeSource(&shallow), 1, three);
        FAIL("pruned height accepted");
    } catch (const AcquireError& err) {
        CHECK(err.kind() == AcquireError::Kind::StaleHeight);
    }
    try {
        e.acquireVerifiedState(NodeSource(nullptr), 0, three);
        FAIL("missing node accepted");
    } catch (const AcquireError& err) {
        CHECK(err.kind() == AcquireError::Kind::NodeUnavailable);
    }
}

TEST_CASE("compile-and-sign follows the protocol order and binds to the snapshot") {
    ledger::Node node(ledger::sampleGenesis());
    Enclave e(canaryConfig());
    auto program = icl::parse(sampleSource());
    CHECK_THROWS_AS(e.compileAndSign(program), ProtocolError);

    e.attest(Digest{});
    CHECK_THROWS_AS(e.compileAndSign(program), ProtocolError);
    approveAll(node, Address::parse("0xa"), e.eoa());

    auto keys = neededKeys(program);
    CHECK(keys.front().key == "bal/0xa/");
    e.acquireVerifiedState(NodeSource(&node), node.headHeight(), keys);
    auto txs = e.compileAndSign(program);
    REQUIRE(txs.size() == 5);
    CHECK(e.stage() == Stage::Signed);
    CHECK_THROWS_AS(e.compileAndSign(program), ProtocolError);
    for (const auto& tx : txs) {
        CHECK(tx.signer == e.exportPk());
        CHECK(tx.stateRoot == node.headRoot());
        CHECK(ledger::verifyTransaction(tx));
        auto moved = tx;
        moved.stateRoot[31] ^= 0x01;
        CHECK_FALSE(ledger::verifyTransaction(moved));
    }

    auto tampered = txs[0];
    std::get<ledger::DexSwap>(tampered.plan.action).amountIn += 1;
    try {
        node.sendRawTransaction(tampered);
        FAIL("tampered plan admitted");
    } catch (const ledger::NodeError& err) {
        CHECK(err.kind() == ledger::NodeError::Kind::InvalidSignature);
    }
    CHECK_FALSE(ledger::applyTransaction(*std::make_unique<ledger::LedgerState>(node.headState()), tampered)
                     .success());
    CHECK_NOTHROW(node.sendRawTransaction(txs[0]));
}

TEST_CASE("a failing program produces no signatures") {
    ledger::Node node(ledger::sampleGenesis());
    Enclave e(canaryConfig());
    e.attest(Digest{});
    auto program = icl::parse(
        "transfer 1 USDC from wallet[0xA] to wallet[0xB];\n"
        "swap 10 USDC from wallet[0xA] for ETH on Curve;\n");
    e.acquireVerifiedState(NodeSource(&node), 0, neededKeys(program));
    auto before = e.crossings().size();
    CHECK_THROWS_AS(e.compileAndSign(program), compiler::CompileError);
    auto after = e.crossings();
    REQUIRE(after.size() == before + 1);
    std::string last(after.back().begin(), after.back().end());
    CHECK(last.find("signature") == std::string::npos);
    CHECK(e.stage() == Stage::StateAcquired);
}

TEST_CASE("the secret key never crosses the boundary") {
    ledger::Node node(ledger::sampleGenesis());
    for (std::uint8_t b : {0x11, 0x5a, 0xee}) {
        Enclave e(canaryConfig(b));
        approveAll(node, Address::parse("0xa"), e.eoa());
        auto program = icl::parse(sampleSource());
        for (int round = 0; round < 10; ++round) {
            e.attest(sha256(ByteWriter().u64(round).take()));
            e.exportPk();
            e.acquireVerifiedState(NodeSource(&node), node.headHeight(), neededKeys(program));
            e.compileAndSign(program);
        }
        auto canary = SigningKey::fromSeed(seedOf(b)).secretBytesForAudit();
        CHECK_FALSE(containsSecret(e.crossings(), canary));
        Bytes seed(seedOf(b).begin(), seedOf(b).end());
        CHECK_FALSE(containsSecret(e.crossings(), seed));
        // the audit itself finds a planted copy
        auto planted = e.crossings();
        planted.push_back(Bytes(canary.begin(), canary.end()));
        CHECK(containsSecret(planted, canary));
    }
}
