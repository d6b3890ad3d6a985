#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgcl/rng.hpp"
#include "sgcl/scene_graph.hpp"

namespace sgcl {

// External object / attribute / relation sets used for replacements.
struct Vocab {
    std::vector<std::string> objects;     // N
    std::vector<std::string> attributes;  // A
    std::vector<std::string> relations;   // R

    static Vocab load(const std::string& dir);  // objects.txt, attributes.txt, relations.txt
    // Collect the label sets occurring in a corpus of graphs.
    static Vocab from_corpus(const std::vector<SceneGraph>& graphs);
};

enum class NegativeCategory { Object, Relation, Attribute };
enum class NegativeTechnique { Swap, ReplaceNode, ReplaceEdge, Join };

const char* to_string(NegativeCategory c);
const char* to_string(NegativeTechnique t);
NegativeCategory category_from_string(const std::string& s);
NegativeTechnique technique_from_string(const std::string& s);

struct NegativeSpec {
    double p_obj = 0.15;       // p1, category c_obj
    double p_rel = 0.425;      // p2, category c_rel
    double p_attr = 0.425;     // p3, category c_attr
    int max_negatives_per_positive = 6;
    bool join_enabled = true;
    std::uint64_t seed = 0;

    void validate() const;  // probabilities non-negative, summing to 1
};

struct Negative {
    SceneGraph graph;
    NegativeCategory category = NegativeCategory::Object;
    NegativeTechnique technique = NegativeTechnique::Swap;
};

struct SubGraphSample {
    SceneGraph positive;
    std::vector<Negative> negatives;  // each canonically distinct from the positive
};

// Attribute replacement on a single-object graph: for each attribute, one
// variant with that attribute replaced by a draw from A minus the object's
// own attributes. Throws WrongShape unless the graph has exactly one object;
// empty output when the object has no attributes.
std::vector<Negative> f_obj(const SceneGraph& g, const Vocab& vocab, Rng& rng);

// One-relation graph perturbations: endpoint swap, endpoint replacement from
// N, predicate replacement from R, and (optionally) a join with a random
// attributed object through a fresh relation. Throws WrongShape unless the
// graph has exactly one relation.
std::vector<Negative> f_rel(const SceneGraph& g, const Vocab& vocab, Rng& rng,
                            bool join_enabled);

// Attribute perturbations on a one-relation graph: cross-owner swap of the
// endpoints' first attributes (when both ends carry one) plus per-attribute
// replacement from A. Throws WrongShape unless the graph has exactly one
// relation; empty output when the graph has no attributes.
std::vector<Negative> f_attr(const SceneGraph& g, const Vocab& vocab, Rng& rng);

// For each positive: generate candidates per applicable category, then draw
// categories i.i.d. with (p1,p2,p3) — renormalized over the categories that
// still hold candidates — until max_negatives_per_positive is reached or the
// candidates are exhausted.
std::vector<SubGraphSample> mine_negatives(const std::vector<SceneGraph>& positives,
                                           const Vocab& vocab, const NegativeSpec& spec);

}  // namespace sgcl
