// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <vector>

#include "intent/common/amount.hpp"

namespace intent::optimizer {

template <class Item>
using Contents = std::map<Item, Amount>;

namespace detail {

// Slot of each item type in the usage vector. A package naming a type
// with no capacity can never fit.
template <class Item>
std::vector<std::vector<std::pair<std::size_t, Amount>>> indexContents(
    const std::vector<Contents<Item>>& packages, const Contents<Item>& capacities, std::vector<bool>& usable) {
    std::map<Item, std::size_t> slot;
    for (const auto& [item, cap] : capacities) slot.emplace(item, slot.size());
    std::vector<std::vector<std::pair<std::size_t, Amount>>> out(packages.size());
    usable.assign(packages.size(), true);
    for (std::size_t i = 0; i < packages.size(); ++i) {
        for (const auto& [item, count] : packages[i]) {
            if (count == 0) continue;
            auto it = slot.find(item);
            if (it == slot.end()) {
                usable[i] = false;
                break;
            }
            out[i].emplace_back(it->second, count);
        }
    }
    return out;
}

}  // namespace detail

/// Maximum-cardinality subset of packages fitting item-wise in the
/// capacities. DP over usage vectors; returns package indices in the
/// order they were added.
template <class Item>
std::vector<std::size_t> multipleKnapsack(const std::vector<Contents<Item>>& packages,
                                          const Contents<Item>& capacities) {
    std::vector<Amount> cap;
    for (const auto& [item, c] : capacities) cap.push_back(c);
    std::vector<bool> usable;
    auto contents = detail::indexContents(packages, capacities, usable);

    std::map<std::vector<Amount>, std::size_t> dp;
    std::map<std::vector<Amount>, std::vector<std::size_t>> selected;
    std::vector<Amount> init(cap.size(), Amount(0));
    dp[init] = 0;
    selected[init] = {};

    for (std::size_t p = 0; p < packages.size(); ++p) {
        if (!usable[p]) continue;
        // values are read from this snapshot so a package is never counted twice
        std::vector<std::pair<std::vector<Amount>, std::size_t>> current(dp.begin(), dp.end());
        std::vector<std::vector<std::size_t>> lists;
        lists.reserve(current.size());
        for (const auto& entry : current) lists.push_back(selected[entry.first]);
        for (std::size_t s = 0; s < current.size(); ++s) {
            const auto& [state, packed] = current[s];
            std::vector<Amount> next = state;
            bool valid = true;
            for (const auto& [slot, count] : contents[p]) {
                next[slot] += count;
                if (next[slot] > cap[slot]) {
                    valid = false;
                    break;
                }
            }
            if (!valid) continue;
            std::size_t value = packed + 1;
            auto it = dp.find(next);
            if (it == dp.end() || value > it->second) {
                auto list = lists[s];
                dp[next] = value;
                list.push_back(p);
                selected[next] = std::move(list);
            }
        }
    }
    auto best = dp.begin();
    for (auto it = dp.begin(); it != dp.end(); ++it) {
        if (it->second > best->second) best = it;
    }
    return selected[best->first];
}

/// Cheapest-first greedy used above the exact limit.
template <class Item>
std::vector<std::size_t> greedyKnapsack(const std::vector<Contents<Item>>& packages,
                                        const Contents<Item>& capacities) {
    std::vector<Amount> cap;
    for (const auto& [item, c] : capacities) cap.push_back(c);
    std::vector<bool> usable;
    auto contents = detail::indexContents(packages, capacities, usable);
    std::vector<Amount> total(packages.size(), Amount(0));
    std::vector<std::size_t> order;
    for (std::size_t p = 0; p < packages.size(); ++p) {
        if (!usable[p]) continue;
        for (const auto& [slot, count] : contents[p]) total[p] += count;
        order.push_back(p);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return total[a] < total[b]; });
    std::vector<Amount> used(cap.size(), Amount(0));
    std::vector<std::size_t> out;
    for (std::size_t p : order) {
        bool fits = true;
        for (const auto& [slot, count] : contents[p]) {
            if (used[slot] + count > cap[slot]) {
                fits = false;
                break;
            }
        }
        if (!fits) continue;
        for (const auto& [slot, count] : contents[p]) used[slot] += count;
        out.push_back(p);
    }
    return out;
}

}  // namespace intent::optimizer
