#include "sgcl/decomposer.hpp"

#include <bit>
#include <unordered_set>

#include "sgcl/errors.hpp"
#include "sgcl/rng.hpp"

namespace sgcl {

namespace {

// Attribute subset masks for one object: every subset of size <= cap plus the
// full set, in ascending mask order.
std::vector<unsigned> attr_masks(std::size_t count, int cap) {
    const unsigned full = (count >= 32) ? 0u : ((1u << count) - 1u);
    std::vector<unsigned> masks;
    for (unsigned mask = 0; mask <= full; ++mask)
        if (std::popcount(mask) <= cap || mask == full) masks.push_back(mask);
    return masks;
}

struct Candidate {
    SceneGraph graph;
    bool two_object_full = false;  // relation graph, full attributes both ends
    bool one_object_full = false;
};

}  // namespace

std::vector<SceneGraph> decompose(const SceneGraph& G, const DecompositionConfig& cfg) {
    if (cfg.max_subgraphs < 1) throw InvalidGraph("max_subgraphs must be >= 1");
    if (cfg.max_attr_subset < 0) throw InvalidGraph("max_attr_subset must be >= 0");
    G.validate();
    if (G.objects.empty()) throw EmptyGraph("cannot decompose a graph with no objects");

    std::vector<Candidate> pool;
    std::unordered_set<std::string> seen;
    auto emit = [&](SceneGraph s, bool two_full, bool one_full) {
        auto key = canonicalize(s);
        if (seen.insert(key).second) pool.push_back({std::move(s), two_full, one_full});
    };

    for (const auto& o : G.objects) {
        const auto attrs = G.attribute_values(o.id);
        const unsigned full = (1u << attrs.size()) - 1u;
        for (unsigned mask : attr_masks(attrs.size(), cfg.max_attr_subset)) {
            if (!cfg.include_bare_objects && mask == 0 && !attrs.empty()) continue;
            SceneGraph s;
            s.objects.push_back({0, o.head, o.modifiers});
            int next_attr = 0;
            for (std::size_t k = 0; k < attrs.size(); ++k)
                if (mask & (1u << k)) s.attributes.push_back({next_attr++, attrs[k], 0});
            emit(std::move(s), false, mask == full);
        }
    }
    for (const auto& r : G.relations) {
        const ObjectNode& src = *G.find_object(r.source);
        const ObjectNode& tgt = *G.find_object(r.target);
        const auto src_attrs = G.attribute_values(r.source);
        const auto tgt_attrs = G.attribute_values(r.target);
        const unsigned src_full = (1u << src_attrs.size()) - 1u;
        const unsigned tgt_full = (1u << tgt_attrs.size()) - 1u;
        for (unsigned sm : attr_masks(src_attrs.size(), cfg.max_attr_subset)) {
            for (unsigned tm : attr_masks(tgt_attrs.size(), cfg.max_attr_subset)) {
                SceneGraph s;
                s.objects.push_back({0, src.head, src.modifiers});
                s.objects.push_back({1, tgt.head, tgt.modifiers});
                int next_attr = 0;
                for (std::size_t k = 0; k < src_attrs.size(); ++k)
                    if (sm & (1u << k)) s.attributes.push_back({next_attr++, src_attrs[k], 0});
                for (std::size_t k = 0; k < tgt_attrs.size(); ++k)
                    if (tm & (1u << k)) s.attributes.push_back({next_attr++, tgt_attrs[k], 1});
                s.relations.push_back({0, r.predicate, 0, 1});
                emit(std::move(s), sm == src_full && tm == tgt_full, false);
            }
        }
    }

    std::vector<SceneGraph> ordered;
    ordered.reserve(pool.size());
    for (auto& c : pool)
        if (c.two_object_full) ordered.push_back(std::move(c.graph));
    for (auto& c : pool)
        if (c.one_object_full) ordered.push_back(std::move(c.graph));
    std::vector<SceneGraph> remainder;
    for (auto& c : pool)
        if (!c.two_object_full && !c.one_object_full) remainder.push_back(std::move(c.graph));
    Rng rng(cfg.seed);
    rng.shuffle(remainder);
    for (auto& g : remainder) ordered.push_back(std::move(g));

    if (ordered.size() > static_cast<std::size_t>(cfg.max_subgraphs))
        ordered.resize(static_cast<std::size_t>(cfg.max_subgraphs));
    return ordered;
}

}  // namespace sgcl
