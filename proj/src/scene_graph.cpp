#include "sgcl/scene_graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "sgcl/errors.hpp"

namespace sgcl {

void SceneGraph::validate() const {
    std::unordered_set<int> object_ids;
    for (const auto& o : objects) {
        if (!object_ids.insert(o.id).second)
            throw InvalidGraph("duplicate object id " + std::to_string(o.id));
        if (o.head.empty()) throw InvalidGraph("object with empty head");
    }
    std::unordered_set<int> attr_ids;
    for (const auto& a : attributes) {
        if (!attr_ids.insert(a.id).second)
            throw InvalidGraph("duplicate attribute id " + std::to_string(a.id));
        if (!object_ids.count(a.owner))
            throw InvalidGraph("attribute " + std::to_string(a.id) +
                               " has dangling owner " + std::to_string(a.owner));
    }
    std::unordered_set<int> rel_ids;
    for (const auto& r : relations) {
        if (!rel_ids.insert(r.id).second)
            throw InvalidGraph("duplicate relation id " + std::to_string(r.id));
        if (!object_ids.count(r.source) || !object_ids.count(r.target))
            throw InvalidGraph("relation " + std::to_string(r.id) + " has dangling endpoint");
        if (r.source == r.target)
            throw InvalidGraph("self-loop relation " + std::to_string(r.id));
    }
}

const ObjectNode* SceneGraph::find_object(int id) const {
    for (const auto& o : objects)
        if (o.id == id) return &o;
    return nullptr;
}

std::vector<std::string> SceneGraph::attribute_values(int object_id) const {
    std::vector<std::string> values;
    for (const auto& a : attributes)
        if (a.owner == object_id) values.push_back(a.value);
    return values;
}

std::size_t SceneGraph::attribute_count(int object_id) const {
    std::size_t n = 0;
    for (const auto& a : attributes)
        if (a.owner == object_id) ++n;
    return n;
}

namespace {

std::string object_signature(const SceneGraph& g, const ObjectNode& o) {
    std::string sig = "O(";
    for (const auto& m : o.modifiers) sig += m + ' ';
    sig += '|' + o.head + '|';
    auto values = g.attribute_values(o.id);
    std::sort(values.begin(), values.end());
    for (const auto& v : values) sig += v + ',';
    sig += ')';
    return sig;
}

std::string key_for_order(const SceneGraph& g,
                          const std::vector<std::string>& signatures,
                          const std::vector<std::size_t>& order) {
    // position of each object id under this ordering
    std::map<int, std::size_t> position;
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        position[g.objects[order[pos]].id] = pos;

    std::string key;
    for (std::size_t idx : order) key += signatures[idx] + ';';
    key += "||";
    std::vector<std::string> edges;
    for (const auto& r : g.relations) {
        edges.push_back("R(" + std::to_string(position[r.source]) + ',' + r.predicate +
                        ',' + std::to_string(position[r.target]) + ')');
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& e : edges) key += e + ';';
    return key;
}

// Enumerate permutations within each group of signature-tied objects and keep
// the lexicographically smallest key. Tie groups are tiny in practice.
void min_key_over_ties(const SceneGraph& g, const std::vector<std::string>& signatures,
                       std::vector<std::vector<std::size_t>>& groups, std::size_t depth,
                       std::vector<std::size_t>& order, std::string& best) {
    if (depth == groups.size()) {
        std::string key = key_for_order(g, signatures, order);
        if (best.empty() || key < best) best = std::move(key);
        return;
    }
    auto& group = groups[depth];
    std::sort(group.begin(), group.end());
    const std::size_t offset = order.size();
    do {
        order.insert(order.end(), group.begin(), group.end());
        min_key_over_ties(g, signatures, groups, depth + 1, order, best);
        order.resize(offset);
    } while (std::next_permutation(group.begin(), group.end()));
}

}  // namespace

CanonicalKey canonicalize(const SceneGraph& g) {
    g.validate();

    std::vector<std::string> signatures;
    signatures.reserve(g.objects.size());
    for (const auto& o : g.objects) signatures.push_back(object_signature(g, o));

    std::vector<std::size_t> indices(g.objects.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    std::sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
        return signatures[a] < signatures[b];
    });

    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i == 0 || signatures[indices[i]] != signatures[indices[i - 1]])
            groups.emplace_back();
        groups.back().push_back(indices[i]);
    }

    std::string best;
    std::vector<std::size_t> order;
    order.reserve(indices.size());
    min_key_over_ties(g, signatures, groups, 0, order, best);
    return best;
}

namespace {

bool mapping_valid(const SceneGraph& g, const SceneGraph& G,
                   const std::map<int, int>& object_map) {
    for (const auto& r : g.relations) {
        bool found = false;
        for (const auto& R : G.relations) {
            if (R.predicate == r.predicate && R.source == object_map.at(r.source) &&
                R.target == object_map.at(r.target)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

bool extend_mapping(const SceneGraph& g, const SceneGraph& G, std::size_t next,
                    std::map<int, int>& object_map, std::set<int>& used) {
    if (next == g.objects.size()) return mapping_valid(g, G, object_map);
    const auto& o = g.objects[next];
    auto needed = g.attribute_values(o.id);
    std::sort(needed.begin(), needed.end());
    for (const auto& candidate : G.objects) {
        if (used.count(candidate.id) || !o.same_label(candidate)) continue;
        // attribute multiset containment
        auto available = G.attribute_values(candidate.id);
        std::sort(available.begin(), available.end());
        if (!std::includes(available.begin(), available.end(), needed.begin(), needed.end()))
            continue;
        object_map[o.id] = candidate.id;
        used.insert(candidate.id);
        if (extend_mapping(g, G, next + 1, object_map, used)) return true;
        object_map.erase(o.id);
        used.erase(candidate.id);
    }
    return false;
}

}  // namespace

bool is_subgraph(const SceneGraph& g, const SceneGraph& G) {
    std::map<int, int> object_map;
    std::set<int> used;
    return extend_mapping(g, G, 0, object_map, used);
}

namespace {

// Sub-graph of one object carrying the attribute values selected by mask.
SceneGraph single_object_subgraph(const SceneGraph& G, const ObjectNode& o,
                                  const std::vector<std::string>& attrs, unsigned mask) {
    SceneGraph s;
    s.objects.push_back({0, o.head, o.modifiers});
    int next_attr = 0;
    for (std::size_t k = 0; k < attrs.size(); ++k)
        if (mask & (1u << k)) s.attributes.push_back({next_attr++, attrs[k], 0});
    (void)G;
    return s;
}

SceneGraph two_object_subgraph(const SceneGraph& G, const RelationEdge& r,
                               const std::vector<std::string>& src_attrs, unsigned src_mask,
                               const std::vector<std::string>& tgt_attrs, unsigned tgt_mask) {
    const ObjectNode& src = *G.find_object(r.source);
    const ObjectNode& tgt = *G.find_object(r.target);
    SceneGraph s;
    s.objects.push_back({0, src.head, src.modifiers});
    s.objects.push_back({1, tgt.head, tgt.modifiers});
    int next_attr = 0;
    for (std::size_t k = 0; k < src_attrs.size(); ++k)
        if (src_mask & (1u << k)) s.attributes.push_back({next_attr++, src_attrs[k], 0});
    for (std::size_t k = 0; k < tgt_attrs.size(); ++k)
        if (tgt_mask & (1u << k)) s.attributes.push_back({next_attr++, tgt_attrs[k], 1});
    s.relations.push_back({0, r.predicate, 0, 1});
    return s;
}

}  // namespace

std::vector<SceneGraph> brute_force_subgraphs(const SceneGraph& G, int max_objects) {
    if (max_objects < 1) throw InvalidGraph("max_objects must be >= 1");
    G.validate();

    std::vector<SceneGraph> out;
    std::unordered_set<std::string> seen;
    auto emit = [&](SceneGraph s) {
        auto key = canonicalize(s);
        if (seen.insert(key).second) out.push_back(std::move(s));
    };

    for (const auto& o : G.objects) {
        auto attrs = G.attribute_values(o.id);
        for (unsigned mask = 0; mask < (1u << attrs.size()); ++mask)
            emit(single_object_subgraph(G, o, attrs, mask));
    }
    if (max_objects >= 2) {
        for (const auto& r : G.relations) {
            auto src_attrs = G.attribute_values(r.source);
            auto tgt_attrs = G.attribute_values(r.target);
            for (unsigned sm = 0; sm < (1u << src_attrs.size()); ++sm)
                for (unsigned tm = 0; tm < (1u << tgt_attrs.size()); ++tm)
                    emit(two_object_subgraph(G, r, src_attrs, sm, tgt_attrs, tm));
        }
    }
    return out;
}

}  // namespace sgcl
