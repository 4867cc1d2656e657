// SPDX-License-Identifier: Apache-2.0
#include "intent/optimizer/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace intent::optimizer {

using ledger::TransactionPlan;
using J = nlohmann::ordered_json;

std::string_view name(NodeStatus status) {
    switch (status) {
        case NodeStatus::Pending: return "PENDING";
        case NodeStatus::Ready: return "READY";
        case NodeStatus::Executed: return "EXECUTED";
        case NodeStatus::Failed: return "FAILED";
        case NodeStatus::Skipped: return "SKIPPED";
    }
    return "?";
}

std::string_view name(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::Flow: return "flow";
        case EdgeKind::Protocol: return "protocol";
        case EdgeKind::Rewired: return "rewired";
    }
    return "?";
}

namespace {

void insertSorted(std::vector<std::size_t>& v, std::size_t x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
}

void eraseSorted(std::vector<std::size_t>& v, std::size_t x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) v.erase(it);
}

bool raisesCollateral(const ledger::Action& a, const ledger::LendingBorrow& b) {
    if (auto* s = std::get_if<ledger::StakeDeposit>(&a)) return s->wallet == b.wallet && s->platform == b.platform;
    if (auto* r = std::get_if<ledger::LendingRepay>(&a)) return r->wallet == b.wallet && r->platform == b.platform;
    return false;
}

DeltaMap predictedWith(const DependencyGraph& g, const std::vector<std::vector<bool>>& reach, std::size_t j) {
    DeltaMap b;
    for (const auto& [k, v] : g.base) b[k] = v;
    for (const auto& n : g.nodes) {
        for (const auto& [k, v] : n.plan.declaredIncreases) b.emplace(k, 0);
        for (const auto& [k, v] : n.plan.declaredDecreases) b.emplace(k, 0);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i == j || reach[j][i]) continue;
        const auto& p = g.nodes[i].plan;
        if (reach[i][j]) {
            for (const auto& [k, v] : p.declaredIncreases) b[k] += v;
        }
        for (const auto& [k, v] : p.declaredDecreases) b[k] -= v;
    }
    return b;
}

}  // namespace

std::optional<std::size_t> DependencyGraph::find(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].plan.id == id) return i;
    }
    return std::nullopt;
}

bool DependencyGraph::addEdge(std::size_t from, std::size_t to, EdgeKind kind) {
    auto [it, inserted] = edges_.emplace(std::make_pair(from, to), kind);
    if (!inserted) {
        if (kind == EdgeKind::Protocol) it->second = kind;
        return false;
    }
    insertSorted(nodes[from].children, to);
    insertSorted(nodes[to].parents, from);
    return true;
}

void DependencyGraph::removeEdge(std::size_t from, std::size_t to) {
    edges_.erase({from, to});
    eraseSorted(nodes[from].children, to);
    eraseSorted(nodes[to].parents, from);
}

std::vector<std::size_t> DependencyGraph::topologicalOrder() const {
    std::vector<std::size_t> indeg(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) indeg[i] = nodes[i].parents.size();
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (indeg[i] == 0) ready.push(i);
    }
    std::vector<std::size_t> out;
    while (!ready.empty()) {
        std::size_t i = ready.top();
        ready.pop();
        out.push_back(i);
        for (std::size_t c : nodes[i].children) {
            if (--indeg[c] == 0) ready.push(c);
        }
    }
    return out;
}

std::vector<std::vector<bool>> DependencyGraph::reachability() const {
    std::size_t n = nodes.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    auto order = topologicalOrder();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        for (std::size_t c : nodes[*it].children) {
            reach[*it][c] = true;
            for (std::size_t k = 0; k < n; ++k) {
                if (reach[c][k]) reach[*it][k] = true;
            }
        }
    }
    return reach;
}

std::size_t DependencyGraph::criticalPath() const {
    std::vector<std::size_t> depth(nodes.size(), 0);
    std::size_t best = 0;
    for (std::size_t i : topologicalOrder()) {
        for (std::size_t p : nodes[i].parents) depth[i] = std::max(depth[i], depth[p] + 1);
        best = std::max(best, depth[i]);
    }
    return best;
}

DeltaMap DependencyGraph::predictedFromScratch(std::size_t j) const { return predictedWith(*this, reachability(), j); }

void DependencyGraph::recomputePredicted() {
    auto reach = reachability();
    for (std::size_t j = 0; j < nodes.size(); ++j) nodes[j].predicted = predictedWith(*this, reach, j);
}

bool DependencyGraph::safe(std::size_t j) const {
    const auto& n = nodes[j];
    for (const auto& [k, v] : n.plan.declaredDecreases) {
        auto it = n.predicted.find(k);
        Amount have = it == n.predicted.end() ? Amount(0) : it->second;
        if (have < v) return false;
    }
    return true;
}

DeltaMap baseBalances(const std::vector<TransactionPlan>& plans, const ledger::LedgerState& state) {
    DeltaMap out;
    for (const auto& p : plans) {
        for (const auto* m : {&p.declaredIncreases, &p.declaredDecreases}) {
            for (const auto& [k, v] : *m) out[k] = state.balanceOf(k.wallet, k.asset);
        }
    }
    return out;
}

DependencyGraph buildDependencyGraph(std::vector<TransactionPlan> plans, DeltaMap base, AssetFlowIndex* index) {
    std::stable_sort(plans.begin(), plans.end(),
                     [](const TransactionPlan& a, const TransactionPlan& b) { return a.intentIndex < b.intentIndex; });
    DependencyGraph g;
    g.base = std::move(base);
    AssetFlowIndex wa;
    for (std::size_t j = 0; j < plans.size(); ++j) {
        g.nodes.emplace_back();
        g.nodes.back().plan = std::move(plans[j]);
        const auto& plan = g.nodes[j].plan;
        for (const auto& [k, v] : plan.declaredDecreases) {
            if (v == 0) continue;
            auto it = wa.in.find(k);
            if (it == wa.in.end()) continue;
            for (std::size_t p : it->second) g.addEdge(p, j, EdgeKind::Flow);
        }
        if (auto* borrow = std::get_if<ledger::LendingBorrow>(&plan.action)) {
            for (std::size_t p = 0; p < j; ++p) {
                if (raisesCollateral(g.nodes[p].plan.action, *borrow)) g.addEdge(p, j, EdgeKind::Protocol);
            }
        }
        if (auto* repay = std::get_if<ledger::LendingRepay>(&plan.action)) {
            for (std::size_t p = 0; p < j; ++p) {
                auto* b = std::get_if<ledger::LendingBorrow>(&g.nodes[p].plan.action);
                if (b && b->wallet == repay->wallet && b->platform == repay->platform) {
                    g.addEdge(p, j, EdgeKind::Protocol);
                }
            }
        }
        for (const auto& [k, v] : plan.declaredIncreases) {
            if (v != 0) wa.in[k].push_back(j);
        }
        for (const auto& [k, v] : plan.declaredDecreases) {
            if (v != 0) wa.de[k].push_back(j);
        }
    }
    g.recomputePredicted();
    if (index) *index = std::move(wa);
    return g;
}

DependencyGraph buildDependencyGraph(const std::vector<ledger::SignedTransaction>& txs, DeltaMap base,
                                     AssetFlowIndex* index) {
    std::vector<TransactionPlan> plans;
    for (const auto& tx : txs) plans.push_back(tx.plan);
    auto g = buildDependencyGraph(std::move(plans), std::move(base), index);
    for (auto& n : g.nodes) {
        for (const auto& tx : txs) {
            if (tx.plan.id == n.plan.id) n.tx = tx;
        }
    }
    return g;
}

std::string toDot(const DependencyGraph& g) {
    std::ostringstream out;
    out << "digraph tdg {\n  rankdir=LR;\n  node [shape=box];\n";
    for (const auto& n : g.nodes) {
        out << "  \"" << n.plan.id << "\" [label=\"" << n.plan.id << "\\n"
            << ledger::name(ledger::kindOf(n.plan.action)) << "\"];\n";
    }
    for (const auto& [e, kind] : g.edges()) {
        out << "  \"" << g.nodes[e.first].plan.id << "\" -> \"" << g.nodes[e.second].plan.id << "\"";
        if (kind == EdgeKind::Protocol) out << " [style=dashed]";
        if (kind == EdgeKind::Rewired) out << " [color=gray40]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

J toJson(const DependencyGraph& g) {
    J nodes = J::array();
    for (const auto& n : g.nodes) {
        J parents = J::array();
        for (std::size_t p : n.parents) parents.push_back(g.nodes[p].plan.id);
        J predicted = J::object();
        for (const auto& [k, v] : n.plan.declaredDecreases) {
            auto it = n.predicted.find(k);
            predicted[toString(k)] = (it == n.predicted.end() ? Amount(0) : it->second).str();
        }
        nodes.push_back(J{{"id", n.plan.id},
                          {"kind", ledger::name(ledger::kindOf(n.plan.action))},
                          {"parents", parents},
                          {"predicted", predicted},
                          {"infeasible", n.infeasible}});
    }
    J edges = J::array();
    for (const auto& [e, kind] : g.edges()) {
        edges.push_back(J{{"from", g.nodes[e.first].plan.id}, {"to", g.nodes[e.second].plan.id}, {"kind", name(kind)}});
    }
    return J{{"nodes", nodes}, {"edges", edges}, {"criticalPath", g.criticalPath()}};
}

}  // namespace intent::optimizer
