#pragma once

#include <cstdint>
#include <vector>

#include "sgcl/scene_graph.hpp"

namespace sgcl {

struct DecompositionConfig {
    int max_subgraphs = 10;    // M
    int max_attr_subset = 2;   // cap on enumerated attribute-subset size per object
    bool include_bare_objects = true;
    std::uint64_t seed = 0;
};

// Positive sub-graph set: every connected 1- or 2-object sub-graph where each
// object carries an attribute subset of size <= max_attr_subset or its full
// attribute set, deduplicated by CanonicalKey. When the pool exceeds
// max_subgraphs, selection is by priority: two-object graphs with full
// attributes on both endpoints first, then one-object full-attribute graphs,
// then the remainder by seeded uniform draw. Output order is deterministic
// for equal (G, cfg). Throws EmptyGraph when G has no objects.
std::vector<SceneGraph> decompose(const SceneGraph& G, const DecompositionConfig& cfg);

}  // namespace sgcl
