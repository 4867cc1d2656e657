// SPDX-License-Identifier: Apache-2.0
#include "intent/optimizer/prune.hpp"

#include <algorithm>

#include "intent/optimizer/knapsack.hpp"

namespace intent::optimizer {

namespace {

Amount get(const DeltaMap& m, const BalanceKey& k) {
    auto it = m.find(k);
    return it == m.end() ? Amount(0) : it->second;
}

void subtract(DeltaMap& into, const DeltaMap& what) {
    for (const auto& [k, v] : what) into[k] -= v;
}

}  // namespace

PruneStats pruneGraph(DependencyGraph& g, const PruneOptions& options) {
    PruneStats stats;
    auto order = g.topologicalOrder();
    std::reverse(order.begin(), order.end());
    for (std::size_t j : order) {
        auto& node = g.nodes[j];
        const DeltaMap& dec = node.plan.declaredDecreases;

        Contents<BalanceKey> slack;
        bool negative = false;
        for (const auto& [k, v] : dec) {
            if (v == 0) continue;
            Amount s = get(node.predicted, k) - v;
            if (s < 0) negative = true;
            slack[k] = s;
        }
        if (negative) {
            node.infeasible = true;
            stats.infeasibleNodes.push_back(j);
            continue;
        }
        if (node.parents.empty() || slack.empty()) continue;

        auto reach = g.reachability();
        std::vector<std::size_t> candidates;
        std::vector<Contents<BalanceKey>> packages;
        for (std::size_t p : node.parents) {
            if (g.edgeKind(p, j) == EdgeKind::Protocol) continue;
            bool implied = std::any_of(node.parents.begin(), node.parents.end(),
                                       [&](std::size_t q) { return q != p && reach[p][q]; });
            if (implied) continue;
            // p loses j's debits once the two are unordered
            const auto& pn = g.nodes[p];
            bool pStaysSafe = true;
            for (const auto& [k, v] : dec) {
                Amount own = get(pn.plan.declaredDecreases, k);
                if (own > 0 && get(pn.predicted, k) - v < own) {
                    pStaysSafe = false;
                    break;
                }
            }
            if (!pStaysSafe) continue;
            Contents<BalanceKey> contents;
            for (const auto& [k, s] : slack) {
                Amount inc = get(pn.plan.declaredIncreases, k);
                if (inc != 0) contents[k] = inc;
            }
            candidates.push_back(p);
            packages.push_back(std::move(contents));
        }
        if (candidates.empty()) continue;

        std::vector<std::size_t> chosen;
        if (node.parents.size() <= options.exactParentLimit) {
            chosen = multipleKnapsack(packages, slack);
        } else {
            chosen = greedyKnapsack(packages, slack);
            ++stats.greedyNodes;
        }

        for (std::size_t c : chosen) {
            std::size_t p = candidates[c];
            g.removeEdge(p, j);
            ++stats.removedEdges;
            for (std::size_t gp : std::vector<std::size_t>(g.nodes[p].parents)) {
                if (g.addEdge(gp, j, EdgeKind::Rewired)) ++stats.addedEdges;
            }
            for (std::size_t child : std::vector<std::size_t>(g.nodes[j].children)) {
                if (g.addEdge(p, child, EdgeKind::Rewired)) ++stats.addedEdges;
            }
            subtract(g.nodes[j].predicted, g.nodes[p].plan.declaredIncreases);
            subtract(g.nodes[p].predicted, g.nodes[j].plan.declaredDecreases);
        }
        if (options.verifyIncremental && !chosen.empty()) {
            DependencyGraph fresh = g;
            fresh.recomputePredicted();
            for (std::size_t i = 0; i < g.size(); ++i) {
                for (const auto& [k, v] : fresh.nodes[i].predicted) {
                    if (get(g.nodes[i].predicted, k) != v) stats.incrementalConsistent = false;
                }
            }
        }
    }
    return stats;
}

}  // namespace intent::optimizer
