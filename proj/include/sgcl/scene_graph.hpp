#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sgcl {

struct ObjectNode {
    int id = 0;
    std::string head;
    std::vector<std::string> modifiers;  // compound-noun tokens preceding the head

    bool same_label(const ObjectNode& other) const {
        return head == other.head && modifiers == other.modifiers;
    }
};

struct AttributeNode {
    int id = 0;
    std::string value;
    int owner = 0;  // object id
};

struct RelationEdge {
    int id = 0;
    std::string predicate;  // may contain spaces ("sitting on")
    int source = 0;         // object id
    int target = 0;         // object id
};

// Typed scene graph: object nodes, attribute nodes attached to objects, and
// directed labeled relation edges between objects. Immutable by convention
// after construction; all operations below are pure functions.
struct SceneGraph {
    std::vector<ObjectNode> objects;
    std::vector<AttributeNode> attributes;
    std::vector<RelationEdge> relations;

    // Throws InvalidGraph on dangling references, self-loops, or duplicate ids.
    void validate() const;

    const ObjectNode* find_object(int id) const;

    // Attribute values owned by the given object, in list order.
    std::vector<std::string> attribute_values(int object_id) const;

    std::size_t attribute_count(int object_id) const;
};

// Deterministic serialization, invariant under permutation of the node/edge
// lists and renumbering of ids. Equal keys iff the graphs are isomorphic
// under label-preserving object matching.
using CanonicalKey = std::string;
CanonicalKey canonicalize(const SceneGraph& g);

// True iff g's objects map injectively into G's objects preserving
// head+modifiers such that every attribute and relation of g maps to one in G.
bool is_subgraph(const SceneGraph& g, const SceneGraph& G);

// Reference oracle: every connected sub-graph of G with at most max_objects
// objects (1 or 2), each included object carrying any subset of its
// attributes, two-object sub-graphs holding exactly one connecting relation.
// Deduplicated by CanonicalKey.
std::vector<SceneGraph> brute_force_subgraphs(const SceneGraph& G, int max_objects);

}  // namespace sgcl
