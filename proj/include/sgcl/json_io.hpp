#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sgcl/scene_graph.hpp"

namespace sgcl {

// JSONL graph record, one graph per line:
// {"objects":[{"id":0,"head":"cat","modifiers":[]}],
//  "attributes":[{"id":0,"value":"black","owner":0}],
//  "relations":[{"id":0,"predicate":"on","source":0,"target":1}]}

nlohmann::json graph_to_json(const SceneGraph& g);
std::string serialize_graph(const SceneGraph& g);

// Throws SchemaError naming the offending field path on malformed input;
// the resulting graph always satisfies the SceneGraph invariants.
SceneGraph graph_from_json(const nlohmann::json& record);
SceneGraph load_graph_json(const std::string& line);

// Whole-file helpers used by the CLI; line numbers are 1-based and reported
// in SchemaError messages as "line N: ...".
std::vector<SceneGraph> load_graph_jsonl(const std::string& path);

}  // namespace sgcl
