#include <doctest.h>

#include <set>

#include "sgcl/decomposer.hpp"
#include "sgcl/errors.hpp"
#include "sgcl/scene_graph.hpp"
#include "test_support.hpp"

using namespace sgcl;
using namespace sgcl::testing;

namespace {

std::set<CanonicalKey> key_set(const std::vector<SceneGraph>& graphs) {
    std::set<CanonicalKey> keys;
    for (const auto& g : graphs) keys.insert(canonicalize(g));
    return keys;
}

}  // namespace

TEST_CASE("decompose: cat-on-table fixture equals the 8-element oracle set") {
    DecompositionConfig cfg;
    cfg.max_subgraphs = 10;
    cfg.max_attr_subset = 2;
    const auto out = decompose(cat_on_table(), cfg);
    CHECK(out.size() == 8);
    CHECK(key_set(out) == key_set(brute_force_subgraphs(cat_on_table(), 2)));
    for (const auto& g : out) CHECK(is_subgraph(g, cat_on_table()));
}

TEST_CASE("decompose: M=3 priority puts the full two-object graph first") {
    DecompositionConfig cfg;
    cfg.max_subgraphs = 3;
    const auto out = decompose(cat_on_table(), cfg);
    REQUIRE(out.size() == 3);
    CHECK(canonicalize(out[0]) == canonicalize(cat_on_table()));
}

TEST_CASE("decompose: single bare object") {
    SceneGraph g;
    g.objects.push_back({0, "cat", {}});
    DecompositionConfig cfg;
    const auto out = decompose(g, cfg);
    REQUIRE(out.size() == 1);
    CHECK(canonicalize(out[0]) == canonicalize(g));
}

TEST_CASE("decompose: empty graph throws") {
    CHECK_THROWS_AS(decompose(SceneGraph{}, DecompositionConfig{}), EmptyGraph);
}

TEST_CASE("decompose: uncapped config equals brute-force oracle on random graphs") {
    Rng gen(0xDEC0);
    for (int t = 0; t < 50; ++t) {
        const SceneGraph G = random_unique_graph(gen, /*max_objects=*/4, /*max_attrs=*/2);
        DecompositionConfig cfg;
        cfg.max_subgraphs = 100000;
        cfg.max_attr_subset = 8;  // above any per-object attribute count
        cfg.seed = t;
        const auto out = decompose(G, cfg);
        CHECK(key_set(out) == key_set(brute_force_subgraphs(G, 2)));
    }
}

TEST_CASE("decompose: outputs are valid sub-graphs with <=2 objects, no duplicates") {
    Rng gen(0xDEC1);
    for (int t = 0; t < 30; ++t) {
        const SceneGraph G = random_unique_graph(gen, 4, 3);
        DecompositionConfig cfg;
        cfg.max_subgraphs = 5;
        cfg.seed = 99 + t;
        const auto out = decompose(G, cfg);
        CHECK(out.size() <= 5);
        CHECK(key_set(out).size() == out.size());
        for (const auto& g : out) {
            g.validate();
            CHECK(g.objects.size() <= 2);
            CHECK(is_subgraph(g, G));
        }
    }
}

TEST_CASE("decompose: attribute-subset cap respected alongside the full set") {
    // one object with 3 attributes, cap 1: bare + 3 singletons + full set = 5
    SceneGraph g;
    g.objects.push_back({0, "cat", {}});
    g.attributes.push_back({0, "black", 0});
    g.attributes.push_back({1, "small", 0});
    g.attributes.push_back({2, "old", 0});
    DecompositionConfig cfg;
    cfg.max_subgraphs = 100;
    cfg.max_attr_subset = 1;
    const auto out = decompose(g, cfg);
    CHECK(out.size() == 5);
    bool has_full = false;
    for (const auto& s : out)
        if (s.attributes.size() == 3) has_full = true;
    CHECK(has_full);
}

TEST_CASE("decompose: deterministic under equal config") {
    Rng gen(0xDEC2);
    const SceneGraph G = random_unique_graph(gen, 4, 2);
    DecompositionConfig cfg;
    cfg.max_subgraphs = 4;
    cfg.seed = 1234;
    const auto a = decompose(G, cfg);
    const auto b = decompose(G, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(canonicalize(a[i]) == canonicalize(b[i]));
}
