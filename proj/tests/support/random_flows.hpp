// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "intent/common/random.hpp"
#include "intent/optimizer/graph.hpp"
#include "intent/optimizer/knapsack.hpp"

namespace intent::testing {

// Random declared-flow sets over a tiny (wallet, asset) universe, so that
// producers and consumers collide often.
inline std::vector<ledger::TransactionPlan> randomFlowPlans(Rng& rng, std::size_t n, ledger::DeltaMap& base) {
    const Address wallets[] = {Address::parse("0x1"), Address::parse("0x2"), Address::parse("0x3")};
    const Asset assets[] = {Asset::USDC, Asset::ETH};
    auto key = [&] { return BalanceKey{wallets[rng.below(3)], assets[rng.below(2)]}; };
    base.clear();
    for (const auto& w : wallets) {
        for (Asset a : assets) base[BalanceKey{w, a}] = rng.between(0, 150);
    }
    std::vector<ledger::TransactionPlan> out;
    for (std::size_t i = 0; i < n; ++i) {
        ledger::TransactionPlan p;
        p.id = "f" + std::to_string(i + 1);
        p.intentIndex = static_cast<int>(i + 1);
        p.action = ledger::TokenTransfer{wallets[0], wallets[1], Asset::USDC, 0};
        std::size_t decs = 1 + rng.below(2);
        for (std::size_t k = 0; k < decs; ++k) p.declaredDecreases[key()] += rng.between(1, 50);
        std::size_t incs = rng.below(3);
        for (std::size_t k = 0; k < incs; ++k) p.declaredIncreases[key()] += rng.between(1, 60);
        out.push_back(std::move(p));
    }
    return out;
}

struct OrderCheck {
    std::size_t orders = 0;
    std::size_t violations = 0;
};

// Plays one order with declared deltas. A node whose parent did not run is
// skipped; one that cannot cover its debits reverts. A revert of a node
// that was safe before pruning counts as a violation.
inline std::size_t playOrder(const optimizer::DependencyGraph& g, const std::vector<bool>& wasSafe,
                             const std::vector<std::size_t>& order) {
    ledger::DeltaMap bal = g.base;
    std::vector<bool> ran(g.size(), false);
    std::size_t violations = 0;
    for (std::size_t i : order) {
        const auto& n = g.nodes[i];
        if (!std::all_of(n.parents.begin(), n.parents.end(), [&](std::size_t p) { return ran[p]; })) continue;
        bool covered = true;
        for (const auto& [k, v] : n.plan.declaredDecreases) {
            if (bal[k] < v) covered = false;
        }
        if (!covered) {
            if (wasSafe[i]) ++violations;
            continue;
        }
        for (const auto& [k, v] : n.plan.declaredDecreases) bal[k] -= v;
        for (const auto& [k, v] : n.plan.declaredIncreases) bal[k] += v;
        ran[i] = true;
    }
    return violations;
}

inline OrderCheck allTopologicalOrders(const optimizer::DependencyGraph& g, const std::vector<bool>& wasSafe) {
    OrderCheck out;
    std::vector<std::size_t> indeg(g.size()), order;
    for (std::size_t i = 0; i < g.size(); ++i) indeg[i] = g.nodes[i].parents.size();
    std::vector<bool> used(g.size(), false);
    std::function<void()> rec = [&] {
        if (order.size() == g.size()) {
            ++out.orders;
            out.violations += playOrder(g, wasSafe, order);
            return;
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (used[i] || indeg[i] != 0) continue;
            used[i] = true;
            order.push_back(i);
            for (std::size_t c : g.nodes[i].children) --indeg[c];
            rec();
            for (std::size_t c : g.nodes[i].children) ++indeg[c];
            order.pop_back();
            used[i] = false;
        }
    };
    rec();
    return out;
}

inline std::vector<std::size_t> randomTopologicalOrder(const optimizer::DependencyGraph& g, Rng& rng) {
    std::vector<std::size_t> indeg(g.size()), ready, order;
    for (std::size_t i = 0; i < g.size(); ++i) {
        indeg[i] = g.nodes[i].parents.size();
        if (indeg[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
        std::size_t pick = rng.below(ready.size());
        std::size_t i = ready[pick];
        ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
        order.push_back(i);
        for (std::size_t c : g.nodes[i].children) {
            if (--indeg[c] == 0) ready.push_back(c);
        }
    }
    return order;
}

template <class Item>
std::size_t bruteForceKnapsack(const std::vector<optimizer::Contents<Item>>& packages,
                               const optimizer::Contents<Item>& capacities) {
    std::size_t best = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << packages.size()); ++mask) {
        optimizer::Contents<Item> used;
        bool fits = true;
        std::size_t count = 0;
        for (std::size_t i = 0; i < packages.size() && fits; ++i) {
            if (!(mask >> i & 1)) continue;
            ++count;
            for (const auto& [item, q] : packages[i]) {
                used[item] += q;
                auto it = capacities.find(item);
                if (q > 0 && (it == capacities.end() || used[item] > it->second)) fits = false;
            }
        }
        if (fits) best = std::max(best, count);
    }
    return best;
}

}  // namespace intent::testing
