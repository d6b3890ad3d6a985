#pragma once

#include <string>

#include "sgcl/scene_graph.hpp"

namespace sgcl {

// "modifiers attributes head", space-joined, attribute order preserved.
std::string render_node(const SceneGraph& g, const ObjectNode& o);

// One object  -> "{N1}"
// One relation -> "{N1} {R} {N2}"
// Multi-relation (joined) graphs render relation-by-relation in edge-id
// order, joined by " and ". Throws EmptyGraph on a graph with no objects.
std::string render(const SceneGraph& g);

}  // namespace sgcl
