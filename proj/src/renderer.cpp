#include "sgcl/renderer.hpp"

#include <algorithm>

#include "sgcl/errors.hpp"

namespace sgcl {

std::string render_node(const SceneGraph& g, const ObjectNode& o) {
    std::string out;
    for (const auto& m : o.modifiers) out += m + ' ';
    for (const auto& a : g.attribute_values(o.id)) out += a + ' ';
    out += o.head;
    return out;
}

std::string render(const SceneGraph& g) {
    if (g.objects.empty()) throw EmptyGraph("cannot render a graph with no objects");

    if (g.relations.empty()) {
        std::string out;
        for (const auto& o : g.objects) {
            if (!out.empty()) out += " and ";
            out += render_node(g, o);
        }
        return out;
    }

    auto edges = g.relations;
    std::sort(edges.begin(), edges.end(),
              [](const RelationEdge& a, const RelationEdge& b) { return a.id < b.id; });
    std::string out;
    for (const auto& e : edges) {
        if (!out.empty()) out += " and ";
        out += render_node(g, *g.find_object(e.source)) + ' ' + e.predicate + ' ' +
               render_node(g, *g.find_object(e.target));
    }
    return out;
}

}  // namespace sgcl
