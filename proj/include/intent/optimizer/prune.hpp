// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "intent/optimizer/graph.hpp"

namespace intent::optimizer {

struct PruneOptions {
    std::size_t exactParentLimit = 12;
    /// Compare the incremental B-hat against a full recomputation after
    /// every node (slow, for tests).
    bool verifyIncremental = false;
};

struct PruneStats {
    std::size_t removedEdges = 0;
    std::size_t addedEdges = 0;
    std::vector<std::size_t> infeasibleNodes;
    std::size_t greedyNodes = 0;
    bool incrementalConsistent = true;
};

/// Removes parent edges a node can do without, in reverse topological
/// order, then rewires so every other ordering is kept.
PruneStats pruneGraph(DependencyGraph& g, const PruneOptions& options = {});

}  // namespace intent::optimizer
