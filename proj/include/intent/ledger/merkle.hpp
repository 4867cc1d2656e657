// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "intent/common/crypto.hpp"
#include "intent/ledger/state.hpp"

namespace intent::ledger {

/// One committed key/value pair. Keys are '/'-separated paths:
/// bal/<wallet>/<asset>, allow/<owner>/<spender>/<asset>, price/<asset>,
/// pool/<platform>/<a>/<b>, lendres/<platform>/<asset>,
/// debt/<platform>/<wallet>/<asset>, stakepool/<platform>/<asset>,
/// stake/<platform>/<wallet>/<asset>, listing/<nft>, gas/<kind>, meta.
struct Leaf {
    std::string key;
    Bytes value;
    bool operator==(const Leaf&) const = default;
};

std::string balanceLeafKey(const Address& wallet, const AssetId& asset);
std::string priceLeafKey(Asset asset);

/// All leaves of the state, sorted by key.
std::vector<Leaf> encodeLeaves(const LedgerState& state);

/// Inverse of encodeLeaves for one leaf; throws std::invalid_argument.
void decodeLeaf(const Leaf& leaf, LedgerState& into);

Digest leafHash(const Leaf& leaf);
Digest nodeHash(const Digest& left, const Digest& right);

/// Binary SHA-256 tree; an unpaired node is promoted unchanged to the
/// next level. The empty tree has the all-zero root.
class MerkleTree {
public:
    explicit MerkleTree(std::vector<Digest> leaves);
    const Digest& root() const { return root_; }
    std::size_t leafCount() const { return levels_.empty() ? 0 : levels_.front().size(); }
    std::vector<Digest> siblings(std::size_t index) const;

private:
    std::vector<std::vector<Digest>> levels_;
    Digest root_{};
};

Digest computeRoot(const LedgerState& state);

/// Hash-chain check for one leaf at `index` of `leafCount`.
bool verifyPath(const Digest& leaf, std::uint64_t index, std::uint64_t leafCount,
                const std::vector<Digest>& siblings, const Digest& root);

struct LeafProof {
    std::uint64_t index = 0;
    Leaf leaf;
    std::vector<Digest> siblings;
};

struct KeyQuery {
    enum class Kind { Exact, Prefix };
    Kind kind = Kind::Exact;
    std::string key;

    static KeyQuery exact(std::string k) { return {Kind::Exact, std::move(k)}; }
    static KeyQuery prefix(std::string k) { return {Kind::Prefix, std::move(k)}; }
    bool matches(const std::string& leafKey) const;
};

/// Proves the complete set of leaves answering a query: the matching run
/// plus the neighbours on either side, which pins down absence too.
struct QueryProof {
    KeyQuery query;
    std::vector<LeafProof> leaves;
};

struct StateProof {
    std::uint64_t height = 0;
    Digest root{};
    std::uint64_t leafCount = 0;
    std::vector<QueryProof> queries;
};

StateProof proveQueries(const LedgerState& state, const std::vector<KeyQuery>& queries);

class ProofError : public std::runtime_error {
public:
    ProofError(std::string key, const std::string& what) : std::runtime_error(what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Matching leaves of a verified query; throws ProofError.
std::vector<Leaf> verifyQuery(const QueryProof& proof, std::uint64_t leafCount, const Digest& root);

/// A verified partial view of the ledger: only proved leaves are present.
struct StateSnapshot {
    std::uint64_t height = 0;
    Digest stateRoot{};
    LedgerState state;
    std::vector<std::string> verifiedKeys;
};

/// Verifies every query and decodes the matching leaves; throws ProofError
/// on the first failure, so a snapshot is never partially accepted.
StateSnapshot verifySnapshot(const StateProof& proof);

nlohmann::ordered_json toJson(const StateProof& proof);
StateProof stateProofFromJson(const nlohmann::ordered_json& j);

}  // namespace intent::ledger
