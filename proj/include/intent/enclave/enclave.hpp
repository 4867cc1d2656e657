// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "intent/common/crypto.hpp"
#include "intent/compiler/compiler.hpp"
#include "intent/icl/ast.hpp"
#include "intent/ledger/merkle.hpp"
#include "intent/ledger/node.hpp"

namespace intent::enclave {

/// Everything that goes into the measurement. The key seed is not part of
/// it: two enclaves built from the same artifact must measure the same.
struct EnclaveConfig {
    std::string buildId = "intent-compiler/1";
    compiler::DecisionPolicy policy;
    compiler::CompileOptions options;
    /// Unset means a fresh random key.
    std::optional<std::array<std::uint8_t, 32>> keySeed;
};

Bytes encodeConfig(const EnclaveConfig& config);
Digest measure(const EnclaveConfig& config);

/// Simulated hardware root of trust. The key is fixed so reports can be
/// checked across processes.
PublicKey rootOfTrustKey();

struct AttestationReport {
    Digest measurement{};
    PublicKey pk{};
    Digest nonce{};
    Signature signature{};
};

Bytes reportPayload(const AttestationReport& report);
nlohmann::ordered_json toJson(const AttestationReport& report);

/// Challenger side of stage 1. Each nonce is accepted once.
class AttestationVerifier {
public:
    AttestationVerifier(Digest expectedMeasurement, PublicKey rootKey = rootOfTrustKey(), std::uint64_t seed = 0);

    Digest challenge();
    bool verify(const AttestationReport& report);

private:
    Digest expected_;
    PublicKey root_;
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    std::set<Digest> outstanding_;
};

class ProtocolError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class AcquireError : public std::runtime_error {
public:
    enum class Kind { ProofInvalid, StaleHeight, NodeUnavailable };
    AcquireError(Kind kind, std::string key, const std::string& what)
        : std::runtime_error(what), kind_(kind), key_(std::move(key)) {}
    Kind kind() const { return kind_; }
    const std::string& key() const { return key_; }

private:
    Kind kind_;
    std::string key_;
};

class SigningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Where snapshots come from. Tests substitute a lying node.
class StateSource {
public:
    virtual ~StateSource() = default;
    virtual std::uint64_t headHeight() const = 0;
    virtual ledger::StateProof getSnapshot(std::uint64_t height, const std::vector<ledger::KeyQuery>& queries) const = 0;
};

class NodeSource : public StateSource {
public:
    explicit NodeSource(const ledger::Node* node) : node_(node) {}
    std::uint64_t headHeight() const override;
    ledger::StateProof getSnapshot(std::uint64_t height, const std::vector<ledger::KeyQuery>& queries) const override;

private:
    const ledger::Node* node_;
};

/// Every wallet a program names, in statements, triggers and constraints.
std::set<Address> programWallets(const icl::IclProgram& program);

/// Leaves a program needs: its wallets' balances plus the market feeds.
std::vector<ledger::KeyQuery> neededKeys(const icl::IclProgram& program);

enum class Stage { Initialized, Attested, StateAcquired, Signed };
std::string_view name(Stage stage);

/// The boundary. Every value returned from a public method is serialized
/// into the crossing log before it leaves.
class Enclave {
public:
    explicit Enclave(EnclaveConfig config);

    Enclave(const Enclave&) = delete;
    Enclave& operator=(const Enclave&) = delete;

    AttestationReport attest(const Digest& nonce);
    PublicKey exportPk();
    Address eoa() const { return addressOf(key_.publicKey()); }
    const Digest& measurement() const { return measurement_; }
    Stage stage() const;

    ledger::StateSnapshot acquireVerifiedState(const StateSource& source, std::uint64_t height,
                                               const std::vector<ledger::KeyQuery>& keys);

    /// Fails as a whole: either every statement compiles and is signed,
    /// or nothing is returned.
    std::vector<ledger::SignedTransaction> compileAndSign(const icl::IclProgram& program);

    /// Serialized copies of everything that crossed the boundary.
    std::vector<Bytes> crossings() const;

private:
    void record(Bytes bytes);

    EnclaveConfig config_;
    Digest measurement_;
    SigningKey key_;
    mutable std::mutex mu_;
    Stage stage_ = Stage::Initialized;
    std::optional<ledger::StateSnapshot> snapshot_;
    std::vector<Bytes> crossings_;
};

/// True when `needle` occurs in any of the haystacks, raw or hex encoded.
bool containsSecret(const std::vector<Bytes>& haystacks, const Bytes& needle);

}  // namespace intent::enclave
