#include "sgcl/json_io.hpp"

#include <fstream>

#include "sgcl/errors.hpp"

namespace sgcl {

using nlohmann::json;

json graph_to_json(const SceneGraph& g) {
    json objects = json::array();
    for (const auto& o : g.objects)
        objects.push_back({{"id", o.id}, {"head", o.head}, {"modifiers", o.modifiers}});
    json attributes = json::array();
    for (const auto& a : g.attributes)
        attributes.push_back({{"id", a.id}, {"value", a.value}, {"owner", a.owner}});
    json relations = json::array();
    for (const auto& r : g.relations)
        relations.push_back({{"id", r.id},
                             {"predicate", r.predicate},
                             {"source", r.source},
                             {"target", r.target}});
    return {{"objects", objects}, {"attributes", attributes}, {"relations", relations}};
}

std::string serialize_graph(const SceneGraph& g) { return graph_to_json(g).dump(); }

namespace {

const json& require(const json& node, const char* field, const std::string& path) {
    auto it = node.find(field);
    if (it == node.end()) throw SchemaError(path + "." + field + " missing");
    return *it;
}

int require_int(const json& node, const char* field, const std::string& path) {
    const json& v = require(node, field, path);
    if (!v.is_number_integer()) throw SchemaError(path + "." + field + " not an integer");
    return v.get<int>();
}

std::string require_string(const json& node, const char* field, const std::string& path) {
    const json& v = require(node, field, path);
    if (!v.is_string()) throw SchemaError(path + "." + field + " not a string");
    return v.get<std::string>();
}

}  // namespace

SceneGraph graph_from_json(const json& record) {
    if (!record.is_object()) throw SchemaError("record is not a JSON object");
    SceneGraph g;
    const json& objects = require(record, "objects", "");
    if (!objects.is_array()) throw SchemaError("objects not an array");
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const std::string path = "objects[" + std::to_string(i) + "]";
        const json& node = objects[i];
        ObjectNode o;
        o.id = require_int(node, "id", path);
        o.head = require_string(node, "head", path);
        const json& mods = require(node, "modifiers", path);
        if (!mods.is_array()) throw SchemaError(path + ".modifiers not an array");
        for (const auto& m : mods) {
            if (!m.is_string()) throw SchemaError(path + ".modifiers entry not a string");
            o.modifiers.push_back(m.get<std::string>());
        }
        g.objects.push_back(std::move(o));
    }
    if (auto it = record.find("attributes"); it != record.end()) {
        if (!it->is_array()) throw SchemaError("attributes not an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string path = "attributes[" + std::to_string(i) + "]";
            const json& node = (*it)[i];
            AttributeNode a;
            a.id = require_int(node, "id", path);
            a.value = require_string(node, "value", path);
            a.owner = require_int(node, "owner", path);
            if (!g.find_object(a.owner)) throw SchemaError(path + ".owner");
            g.attributes.push_back(std::move(a));
        }
    }
    if (auto it = record.find("relations"); it != record.end()) {
        if (!it->is_array()) throw SchemaError("relations not an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string path = "relations[" + std::to_string(i) + "]";
            const json& node = (*it)[i];
            RelationEdge r;
            r.id = require_int(node, "id", path);
            r.predicate = require_string(node, "predicate", path);
            r.source = require_int(node, "source", path);
            r.target = require_int(node, "target", path);
            if (!g.find_object(r.source)) throw SchemaError(path + ".source");
            if (!g.find_object(r.target)) throw SchemaError(path + ".target");
            if (r.source == r.target) throw SchemaError(path + ": self-loop");
            g.relations.push_back(std::move(r));
        }
    }
    try {
        g.validate();
    } catch (const InvalidGraph& e) {
        throw SchemaError(e.what());
    }
    return g;
}

SceneGraph load_graph_json(const std::string& line) {
    json record;
    try {
        record = json::parse(line);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    return graph_from_json(record);
}

std::vector<SceneGraph> load_graph_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    std::vector<SceneGraph> graphs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            graphs.push_back(load_graph_json(line));
        } catch (const SchemaError& e) {
            throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return graphs;
}

}  // namespace sgcl
