// SPDX-License-Identifier: Apache-2.0
#include "intent/enclave/enclave.hpp"

#include <algorithm>

#include "intent/common/random.hpp"
#include "intent/compiler/compiler.hpp"
#include "intent/ledger/transaction.hpp"

namespace intent::enclave {

using ledger::KeyQuery;
using J = nlohmann::ordered_json;

namespace {

const SigningKey& rootKey() {
    static const SigningKey key = [] {
        std::array<std::uint8_t, 32> seed{};
        Digest d = sha256(std::string_view("simulated-hardware-root"));
        std::copy(d.begin(), d.end(), seed.begin());
        return SigningKey::fromSeed(seed);
    }();
    return key;
}

void rational(ByteWriter& w, const Rational& r) {
    w.str(boost::multiprecision::numerator(r).str());
    w.str(boost::multiprecision::denominator(r).str());
}

Bytes textBytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

template <class Stmt>
void walletsOf(const Stmt& s, std::set<Address>& out) {
    using T = std::decay_t<Stmt>;
    if constexpr (std::is_same_v<T, icl::TransferStmt>) {
        out.insert(s.from);
        out.insert(s.to);
    } else if constexpr (std::is_same_v<T, icl::AddLiquidityStmt>) {
        out.insert(s.receiver);
    } else {
        out.insert(s.wallet);
    }
}

void walletsOf(const icl::ConditionPtr& c, std::set<Address>& out);

void walletsOf(const icl::ComparisonElement& e, std::set<Address>& out) {
    if (auto* w = std::get_if<icl::WalletBalanceRef>(&e)) out.insert(w->wallet);
    if (auto* n = std::get_if<icl::NestedCondition>(&e)) walletsOf(n->inner, out);
}

void walletsOf(const icl::ConditionPtr& c, std::set<Address>& out) {
    if (!c) return;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, icl::OrCondition> || std::is_same_v<T, icl::AndCondition>) {
                for (const auto& t : n.terms) walletsOf(t, out);
            } else if constexpr (std::is_same_v<T, icl::Comparison>) {
                walletsOf(n.lhs, out);
                walletsOf(n.rhs, out);
            } else if constexpr (std::is_same_v<T, icl::GroupCondition>) {
                walletsOf(n.inner, out);
            }
        },
        c->node);
}

}  // namespace

Bytes encodeConfig(const EnclaveConfig& config) {
    ByteWriter w;
    w.str("EMC1").str(config.buildId);
    const auto& p = config.policy;
    for (const Rational* r : {&p.apy, &p.poolDepth, &p.riskScore, &p.volume, &p.priceTrend, &p.floorDistance}) {
        rational(w, *r);
    }
    w.u64(p.rngSeed);
    w.str(config.options.idPrefix).u64(config.options.gasPrice);
    return w.take();
}

Digest measure(const EnclaveConfig& config) { return sha256(encodeConfig(config)); }

PublicKey rootOfTrustKey() { return rootKey().publicKey(); }

Bytes reportPayload(const AttestationReport& r) {
    return ByteWriter().str("ATT1").raw(r.measurement).raw(r.pk).raw(r.nonce).take();
}

J toJson(const AttestationReport& r) {
    return J{{"measurement", toHex(r.measurement)},
             {"pk", toHex(r.pk)},
             {"nonce", toHex(r.nonce)},
             {"signature", toHex(r.signature)}};
}

AttestationVerifier::AttestationVerifier(Digest expectedMeasurement, PublicKey rootKey, std::uint64_t seed)
    : expected_(expectedMeasurement), root_(rootKey), seed_(seed) {}

Digest AttestationVerifier::challenge() {
    Digest n = sha256(ByteWriter().str("nonce").u64(seed_).u64(counter_++).take());
    outstanding_.insert(n);
    return n;
}

bool AttestationVerifier::verify(const AttestationReport& report) {
    if (!verifySignature(root_, reportPayload(report), report.signature)) return false;
    if (report.measurement != expected_) return false;
    // consume the nonce even when it was ours, so a replay fails
    return outstanding_.erase(report.nonce) == 1;
}

std::uint64_t NodeSource::headHeight() const {
    if (!node_) throw AcquireError(AcquireError::Kind::NodeUnavailable, "", "no node");
    return node_->headHeight();
}

ledger::StateProof NodeSource::getSnapshot(std::uint64_t height, const std::vector<KeyQuery>& queries) const {
    if (!node_) throw AcquireError(AcquireError::Kind::NodeUnavailable, "", "no node");
    return node_->getSnapshot(height, queries);
}

std::set<Address> programWallets(const icl::IclProgram& program) {
    std::set<Address> wallets;
    for (const auto& ts : program.statements) {
        std::visit([&](const auto& s) { walletsOf(s, wallets); }, ts.statement);
        walletsOf(ts.trigger, wallets);
        walletsOf(ts.constraint, wallets);
    }
    return wallets;
}

std::vector<KeyQuery> neededKeys(const icl::IclProgram& program) {
    std::vector<KeyQuery> out;
    for (const auto& w : programWallets(program)) out.push_back(KeyQuery::prefix("bal/" + w.str() + "/"));
    for (const char* feed : {"gas/", "lendres/", "listing/", "pool/", "price/", "stakepool/"}) {
        out.push_back(KeyQuery::prefix(feed));
    }
    out.push_back(KeyQuery::exact("meta"));
    return out;
}

std::string_view name(Stage stage) {
    switch (stage) {
        case Stage::Initialized: return "initialized";
        case Stage::Attested: return "attested";
        case Stage::StateAcquired: return "state-acquired";
        case Stage::Signed: return "signed";
    }
    return "?";
}

namespace {

SigningKey makeKey(const EnclaveConfig& config) {
    return config.keySeed ? SigningKey::fromSeed(*config.keySeed) : SigningKey::generate();
}

}  // namespace

Enclave::Enclave(EnclaveConfig config)
    : config_(std::move(config)), measurement_(measure(config_)), key_(makeKey(config_)) {}

Stage Enclave::stage() const {
    std::lock_guard lock(mu_);
    return stage_;
}

void Enclave::record(Bytes bytes) { crossings_.push_back(std::move(bytes)); }

std::vector<Bytes> Enclave::crossings() const {
    std::lock_guard lock(mu_);
    return crossings_;
}

AttestationReport Enclave::attest(const Digest& nonce) {
    std::lock_guard lock(mu_);
    AttestationReport r;
    r.measurement = measurement_;
    r.pk = key_.publicKey();
    r.nonce = nonce;
    r.signature = rootKey().sign(reportPayload(r));
    record(textBytes(toJson(r).dump()));
    if (stage_ == Stage::Initialized) stage_ = Stage::Attested;
    return r;
}

PublicKey Enclave::exportPk() {
    std::lock_guard lock(mu_);
    record(Bytes(key_.publicKey().begin(), key_.publicKey().end()));
    return key_.publicKey();
}

ledger::StateSnapshot Enclave::acquireVerifiedState(const StateSource& source, std::uint64_t height,
                                                    const std::vector<KeyQuery>& keys) {
    std::lock_guard lock(mu_);
    if (stage_ == Stage::Initialized) throw ProtocolError("state requested before attestation");
    snapshot_.reset();
    stage_ = Stage::Attested;

    ledger::StateProof proof;
    try {
        if (height > source.headHeight()) {
            throw AcquireError(AcquireError::Kind::StaleHeight, "", "height is ahead of the node");
        }
        proof = source.getSnapshot(height, keys);
    } catch (const ledger::NodeError& e) {
        auto kind = e.kind() == ledger::NodeError::Kind::StaleHeight ? AcquireError::Kind::StaleHeight
                                                                     : AcquireError::Kind::NodeUnavailable;
        throw AcquireError(kind, "", e.what());
    }
    if (proof.height != height) throw AcquireError(AcquireError::Kind::ProofInvalid, "meta", "wrong height");
    if (proof.queries.size() != keys.size()) {
        throw AcquireError(AcquireError::Kind::ProofInvalid, "", "query count mismatch");
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (proof.queries[i].query.kind != keys[i].kind || proof.queries[i].query.key != keys[i].key) {
            throw AcquireError(AcquireError::Kind::ProofInvalid, keys[i].key, "answer to a different query");
        }
    }
    ledger::StateSnapshot snap;
    try {
        snap = ledger::verifySnapshot(proof);
    } catch (const ledger::ProofError& e) {
        throw AcquireError(AcquireError::Kind::ProofInvalid, e.key(), e.what());
    }
    snapshot_ = snap;
    stage_ = Stage::StateAcquired;
    J keysJson = snap.verifiedKeys;
    record(textBytes(J{{"root", toHex(snap.stateRoot)}, {"height", snap.height}, {"keys", keysJson}}.dump()));
    return snap;
}

std::vector<ledger::SignedTransaction> Enclave::compileAndSign(const icl::IclProgram& program) {
    std::lock_guard lock(mu_);
    if (stage_ != Stage::StateAcquired || !snapshot_) {
        throw ProtocolError(std::string("compile requested in stage ") + std::string(name(stage_)));
    }
    compiler::TransactionSet set;
    try {
        set = compiler::compileProgram(program, snapshot_->state, config_.policy, key_.publicKey(), config_.options);
    } catch (const compiler::CompileError& e) {
        record(textBytes(e.what()));
        throw;
    }
    std::vector<ledger::SignedTransaction> out;
    out.reserve(set.plans.size());
    for (auto& plan : set.plans) {
        ledger::SignedTransaction tx;
        tx.plan = std::move(plan);
        tx.stateRoot = snapshot_->stateRoot;
        tx.signer = key_.publicKey();
        tx.signature = key_.sign(ledger::signingPayload(tx.plan, tx.stateRoot));
        if (!ledger::verifyTransaction(tx)) throw SigningError("signature does not verify");
        out.push_back(std::move(tx));
    }
    for (const auto& tx : out) record(textBytes(ledger::toJson(tx).dump()));
    stage_ = Stage::Signed;
    return out;
}

bool containsSecret(const std::vector<Bytes>& haystacks, const Bytes& needle) {
    if (needle.empty()) return false;
    std::string hex = toHex(needle);
    Bytes hexBytes(hex.begin(), hex.end());
    std::string upper = hex;
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    Bytes upperBytes(upper.begin(), upper.end());
    for (const auto& h : haystacks) {
        for (const Bytes* n : std::initializer_list<const Bytes*>{&needle, &hexBytes, &upperBytes}) {
            if (std::search(h.begin(), h.end(), n->begin(), n->end()) != h.end()) return true;
        }
    }
    return false;
}

}  // namespace intent::enclave
