// SPDX-License-Identifier: Apache-2.0
#include "intent/ledger/merkle.hpp"

#include <algorithm>

namespace intent::ledger {
namespace {

using J = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& key) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        auto slash = key.find('/', start);
        parts.push_back(key.substr(start, slash - start));
        if (slash == std::string::npos) break;
        start = slash + 1;
    }
    return parts;
}

Asset assetOf(const std::string& s) {
    auto a = parseAsset(s);
    if (!a) throw std::invalid_argument("leaf: unknown asset " + s);
    return *a;
}

Platform platformOf(const std::string& s) {
    auto p = parsePlatform(s);
    if (!p) throw std::invalid_argument("leaf: unknown platform " + s);
    return *p;
}

std::string plat(Platform p) { return std::string(name(p)); }
std::string sym(Asset a) { return std::string(symbol(a)); }

Bytes bigintValue(const Amount& v) { return ByteWriter().bigint(v).take(); }

Amount readBigint(const Bytes& b) {
    ByteReader r(b);
    Amount v = r.bigint();
    if (!r.done()) throw std::invalid_argument("leaf: trailing bytes");
    return v;
}

}  // namespace

std::string balanceLeafKey(const Address& wallet, const AssetId& asset) {
    return "bal/" + wallet.str() + "/" + asset.str();
}

std::string priceLeafKey(Asset asset) { return "price/" + sym(asset); }

std::vector<Leaf> encodeLeaves(const LedgerState& s) {
    std::vector<Leaf> out;
    for (const auto& [k, v] : s.balances) {
        if (v != 0) out.push_back({balanceLeafKey(k.wallet, k.asset), bigintValue(v)});
    }
    for (const auto& [k, v] : s.allowances) {
        if (v != 0) out.push_back({"allow/" + k.owner.str() + "/" + k.spender.str() + "/" + k.asset, bigintValue(v)});
    }
    for (const auto& [a, v] : s.prices) out.push_back({priceLeafKey(a), bigintValue(v)});
    for (const auto& [k, p] : s.pools) {
        out.push_back({"pool/" + plat(k.platform) + "/" + sym(k.a) + "/" + sym(k.b),
                       ByteWriter().bigint(p.reserveA).bigint(p.reserveB).bigint(p.lpSupply).take()});
    }
    for (const auto& [k, v] : s.lendingReserves) {
        out.push_back({"lendres/" + plat(k.platform) + "/" + sym(k.asset), bigintValue(v)});
    }
    for (const auto& [k, v] : s.debts) {
        if (v != 0) {
            out.push_back({"debt/" + plat(k.platform) + "/" + k.wallet.str() + "/" + sym(k.asset), bigintValue(v)});
        }
    }
    for (const auto& [k, p] : s.stakingPools) {
        out.push_back({"stakepool/" + plat(k.platform) + "/" + sym(k.asset),
                       ByteWriter().i64(p.apyPpm).i64(p.riskPpm).bigint(p.depth).take()});
    }
    for (const auto& [k, v] : s.stakes) {
        if (v != 0) {
            out.push_back({"stake/" + plat(k.platform) + "/" + k.wallet.str() + "/" + sym(k.asset), bigintValue(v)});
        }
    }
    for (const auto& [id, l] : s.listings) {
        ByteWriter w;
        w.str(l.seller.str()).bigint(l.ask).str(sym(l.currency)).bigint(l.volume7d);
        w.i64(l.trendPpm).i64(l.holderCount).u8(l.active ? 1 : 0);
        out.push_back({"listing/" + id.str(), w.take()});
    }
    for (const auto& [kind, gas] : s.gasSchedule) {
        out.push_back({"gas/" + std::string(name(kind)), ByteWriter().u64(gas).take()});
    }
    out.push_back({"meta", ByteWriter()
                               .u64(s.height)
                               .u64(s.config.blockGasLimit)
                               .i64(s.config.genesisTime)
                               .i64(s.config.blockTimeSeconds)
                               .take()});
    std::sort(out.begin(), out.end(), [](const Leaf& a, const Leaf& b) { return a.key < b.key; });
    return out;
}

void decodeLeaf(const Leaf& leaf, LedgerState& s) {
    auto parts = split(leaf.key);
    const std::string& kind = parts[0];
    auto want = [&](std::size_t n) {
        if (parts.size() != n) throw std::invalid_argument("leaf: malformed key " + leaf.key);
    };
    if (kind == "bal") {
        want(3);
        s.setBalance(Address::parse(parts[1]), AssetId::parse(parts[2]), readBigint(leaf.value));
    } else if (kind == "allow") {
        want(4);
        s.allowances[AllowanceKey{Address::parse(parts[1]), Address::parse(parts[2]), parts[3]}] =
            readBigint(leaf.value);
    } else if (kind == "price") {
        want(2);
        s.prices[assetOf(parts[1])] = readBigint(leaf.value);
    } else if (kind == "pool") {
        want(4);
        ByteReader r(leaf.value);
        Pool p;
        p.reserveA = r.bigint();
        p.reserveB = r.bigint();
        p.lpSupply = r.bigint();
        s.pools[PoolKey::of(platformOf(parts[1]), assetOf(parts[2]), assetOf(parts[3]))] = p;
    } else if (kind == "lendres") {
        want(3);
        s.lendingReserves[MarketKey{platformOf(parts[1]), assetOf(parts[2])}] = readBigint(leaf.value);
    } else if (kind == "debt") {
        want(4);
        s.debts[PositionKey{platformOf(parts[1]), Address::parse(parts[2]), assetOf(parts[3])}] =
            readBigint(leaf.value);
    } else if (kind == "stakepool") {
        want(3);
        ByteReader r(leaf.value);
        StakingPool p;
        p.apyPpm = r.i64();
        p.riskPpm = r.i64();
        p.depth = r.bigint();
        s.stakingPools[MarketKey{platformOf(parts[1]), assetOf(parts[2])}] = p;
    } else if (kind == "stake") {
        want(4);
        s.stakes[PositionKey{platformOf(parts[1]), Address::parse(parts[2]), assetOf(parts[3])}] =
            readBigint(leaf.value);
    } else if (kind == "listing") {
        want(2);
        ByteReader r(leaf.value);
        Listing l;
        l.seller = Address::parse(r.str());
        l.ask = r.bigint();
        l.currency = assetOf(r.str());
        l.volume7d = r.bigint();
        l.trendPpm = r.i64();
        l.holderCount = r.i64();
        l.active = r.u8() != 0;
        s.listings[AssetId::parse(parts[1])] = l;
    } else if (kind == "gas") {
        want(2);
        auto k = parseActionKind(parts[1]);
        if (!k) throw std::invalid_argument("leaf: unknown action kind " + parts[1]);
        ByteReader r(leaf.value);
        s.gasSchedule[*k] = r.u64();
    } else if (kind == "meta") {
        want(1);
        ByteReader r(leaf.value);
        s.height = r.u64();
        s.config.blockGasLimit = r.u64();
        s.config.genesisTime = r.i64();
        s.config.blockTimeSeconds = r.i64();
    } else {
        throw std::invalid_argument("leaf: unknown key kind " + leaf.key);
    }
}

Digest leafHash(const Leaf& leaf) {
    ByteWriter w;
    w.u8(0x00).str(leaf.key).u32(static_cast<std::uint32_t>(leaf.value.size())).raw(leaf.value);
    return sha256(w.bytes());
}

Digest nodeHash(const Digest& left, const Digest& right) {
    std::array<std::uint8_t, 65> buf{};
    buf[0] = 0x01;
    std::copy(left.begin(), left.end(), buf.begin() + 1);
    std::copy(right.begin(), right.end(), buf.begin() + 33);
    return sha256(buf);
}

MerkleTree::MerkleTree(std::vector<Digest> leaves) {
    if (leaves.empty()) return;
    levels_.push_back(std::move(leaves));
    while (levels_.back().size() > 1) {
        const auto& cur = levels_.back();
        std::vector<Digest> next;
        next.reserve((cur.size() + 1) / 2);
        for (std::size_t i = 0; i < cur.size(); i += 2) {
            next.push_back(i + 1 < cur.size() ? nodeHash(cur[i], cur[i + 1]) : cur[i]);
        }
        levels_.push_back(std::move(next));
    }
    root_ = levels_.back().front();
}

std::vector<Digest> MerkleTree::siblings(std::size_t index) const {
    std::vector<Digest> out;
    for (std::size_t level = 0; level + 1 < levels_.size(); ++level) {
        const auto& nodes = levels_[level];
        std::size_t sib = index ^ 1U;
        if (sib < nodes.size()) out.push_back(nodes[sib]);
        index /= 2;
    }
    return out;
}

Digest computeRoot(const LedgerState& state) {
    auto leaves = encodeLeaves(state);
    std::vector<Digest> hashes;
    hashes.reserve(leaves.size());
    for (const auto& l : leaves) hashes.push_back(leafHash(l));
    return MerkleTree(std::move(hashes)).root();
}

bool verifyPath(const Digest& leaf, std::uint64_t index, std::uint64_t leafCount,
                const std::vector<Digest>& siblings, const Digest& root) {
    if (index >= leafCount) return false;
    Digest h = leaf;
    std::size_t used = 0;
    for (std::uint64_t n = leafCount; n > 1; n = (n + 1) / 2, index /= 2) {
        if (index % 2 == 1) {
            if (used >= siblings.size()) return false;
            h = nodeHash(siblings[used++], h);
        } else if (index + 1 < n) {
            if (used >= siblings.size()) return false;
            h = nodeHash(h, siblings[used++]);
        }
    }
    return used == siblings.size() && h == root;
}

bool KeyQuery::matches(const std::string& leafKey) const {
    if (kind == Kind::Exact) return leafKey == key;
    return leafKey.compare(0, key.size(), key) == 0;
}

StateProof proveQueries(const LedgerState& state, const std::vector<KeyQuery>& queries) {
    auto leaves = encodeLeaves(state);
    std::vector<Digest> hashes;
    hashes.reserve(leaves.size());
    for (const auto& l : leaves) hashes.push_back(leafHash(l));
    MerkleTree tree(hashes);

    StateProof proof;
    proof.height = state.height;
    proof.root = tree.root();
    proof.leafCount = leaves.size();
    for (const auto& q : queries) {
        auto first = std::lower_bound(leaves.begin(), leaves.end(), q.key,
                                      [](const Leaf& l, const std::string& k) { return l.key < k; });
        auto last = first;
        while (last != leaves.end() && q.matches(last->key)) ++last;
        std::size_t lo = static_cast<std::size_t>(first - leaves.begin());
        std::size_t hi = static_cast<std::size_t>(last - leaves.begin());
        if (lo > 0) --lo;
        if (hi < leaves.size()) ++hi;
        QueryProof qp{q, {}};
        for (std::size_t i = lo; i < hi; ++i) qp.leaves.push_back({i, leaves[i], tree.siblings(i)});
        proof.queries.push_back(std::move(qp));
    }
    return proof;
}

std::vector<Leaf> verifyQuery(const QueryProof& proof, std::uint64_t leafCount, const Digest& root) {
    const auto& q = proof.query;
    const auto& items = proof.leaves;
    if (items.empty()) {
        if (leafCount != 0) throw ProofError(q.key, "empty proof for non-empty tree");
        return {};
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!verifyPath(leafHash(items[i].leaf), items[i].index, leafCount, items[i].siblings, root)) {
            throw ProofError(items[i].leaf.key, "leaf does not hash to the state root: " + items[i].leaf.key);
        }
        if (i > 0 && (items[i].index != items[i - 1].index + 1 || !(items[i - 1].leaf.key < items[i].leaf.key))) {
            throw ProofError(q.key, "proof leaves are not adjacent");
        }
    }
    std::size_t begin = 0;
    std::size_t end = items.size();
    if (!q.matches(items.front().leaf.key) && items.front().leaf.key < q.key) {
        begin = 1;
    } else if (items.front().index != 0) {
        throw ProofError(q.key, "missing left neighbour");
    }
    if (end > begin && !q.matches(items.back().leaf.key)) {
        if (!(items.back().leaf.key > q.key)) throw ProofError(q.key, "right neighbour is not above the query");
        end -= 1;
    } else if (items.back().index + 1 != leafCount) {
        throw ProofError(q.key, "missing right neighbour");
    }
    std::vector<Leaf> out;
    for (std::size_t i = begin; i < end; ++i) {
        if (!q.matches(items[i].leaf.key)) throw ProofError(q.key, "gap inside the matching run");
        out.push_back(items[i].leaf);
    }
    return out;
}

StateSnapshot verifySnapshot(const StateProof& proof) {
    StateSnapshot snap;
    snap.height = proof.height;
    snap.stateRoot = proof.root;
    snap.state.gasSchedule.clear();
    snap.state.height = proof.height;
    for (const auto& qp : proof.queries) {
        for (const auto& leaf : verifyQuery(qp, proof.leafCount, proof.root)) {
            try {
                decodeLeaf(leaf, snap.state);
            } catch (const std::exception& e) {
                throw ProofError(leaf.key, e.what());
            }
            snap.verifiedKeys.push_back(leaf.key);
        }
    }
    if (snap.state.height != proof.height) throw ProofError("meta", "height does not match the proof");
    std::sort(snap.verifiedKeys.begin(), snap.verifiedKeys.end());
    snap.verifiedKeys.erase(std::unique(snap.verifiedKeys.begin(), snap.verifiedKeys.end()), snap.verifiedKeys.end());
    return snap;
}

J toJson(const StateProof& proof) {
    J queries = J::array();
    for (const auto& qp : proof.queries) {
        J leaves = J::array();
        for (const auto& lp : qp.leaves) {
            J sibs = J::array();
            for (const auto& s : lp.siblings) sibs.push_back(toHex(s));
            leaves.push_back(
                J{{"index", lp.index}, {"key", lp.leaf.key}, {"value", toHex(lp.leaf.value)}, {"siblings", sibs}});
        }
        queries.push_back(J{{"kind", qp.query.kind == KeyQuery::Kind::Exact ? "exact" : "prefix"},
                            {"key", qp.query.key},
                            {"leaves", leaves}});
    }
    return J{{"height", proof.height},
             {"root", toHex(proof.root)},
             {"leafCount", proof.leafCount},
             {"queries", queries}};
}

StateProof stateProofFromJson(const J& j) {
    StateProof p;
    p.height = j.at("height").get<std::uint64_t>();
    p.root = fromHexFixed<32>(j.at("root").get<std::string>());
    p.leafCount = j.at("leafCount").get<std::uint64_t>();
    for (const auto& qj : j.at("queries")) {
        QueryProof qp;
        qp.query.kind = qj.at("kind") == "exact" ? KeyQuery::Kind::Exact : KeyQuery::Kind::Prefix;
        qp.query.key = qj.at("key").get<std::string>();
        for (const auto& lj : qj.at("leaves")) {
            LeafProof lp;
            lp.index = lj.at("index").get<std::uint64_t>();
            lp.leaf.key = lj.at("key").get<std::string>();
            lp.leaf.value = fromHex(lj.at("value").get<std::string>());
            for (const auto& s : lj.at("siblings")) lp.siblings.push_back(fromHexFixed<32>(s.get<std::string>()));
            qp.leaves.push_back(std::move(lp));
        }
        p.queries.push_back(std::move(qp));
    }
    return p;
}

}  // namespace intent::ledger
