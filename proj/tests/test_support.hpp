#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sgcl/caption_parser.hpp"
#include "sgcl/contrastive.hpp"
#include "sgcl/negative_miner.hpp"
#include "sgcl/rng.hpp"
#include "sgcl/scene_graph.hpp"

namespace sgcl::testing {

inline Lexicon test_lexicon() {
    return Lexicon::from_lists(
        {"a", "an", "the"},
        {"black", "wooden", "red", "small", "big", "shiny", "old", "green"},
        {"on", "under", "behind", "near", "sitting on", "next to", "in front of"});
}

inline Vocab test_vocab() {
    Vocab v;
    v.objects = {"cat", "table", "dog", "bus", "chair", "lamp", "bird", "car"};
    v.attributes = {"black", "wooden", "red", "small", "big", "shiny", "old", "green"};
    v.relations = {"on", "under", "behind", "near", "sitting on", "next to", "in front of"};
    return v;
}

// black cat --on--> wooden table
inline SceneGraph cat_on_table() {
    SceneGraph g;
    g.objects.push_back({0, "cat", {}});
    g.objects.push_back({1, "table", {}});
    g.attributes.push_back({0, "black", 0});
    g.attributes.push_back({1, "wooden", 1});
    g.relations.push_back({0, "on", 0, 1});
    return g;
}

// Random graph with globally unique labels, so canonical keys never collide
// and combinatorial counts are exact.
inline SceneGraph random_unique_graph(Rng& rng, int max_objects = 4, int max_attrs = 2) {
    const int n_objects = 1 + static_cast<int>(rng.index(max_objects));
    SceneGraph g;
    int attr_id = 0;
    for (int i = 0; i < n_objects; ++i) {
        g.objects.push_back({i, "h" + std::to_string(i), {}});
        const int n_attrs = static_cast<int>(rng.index(max_attrs + 1));
        for (int a = 0; a < n_attrs; ++a)
            g.attributes.push_back({attr_id, "v" + std::to_string(attr_id), i}), ++attr_id;
    }
    int rel_id = 0;
    for (int i = 0; i < n_objects; ++i)
        for (int j = 0; j < n_objects; ++j)
            if (i != j && rng.index(3) == 0)
                g.relations.push_back({rel_id, "p" + std::to_string(rel_id), i, j}), ++rel_id;
    return g;
}

// Permute node/edge list order and renumber ids; label-preserving isomorphism.
inline SceneGraph shuffled_copy(const SceneGraph& g, Rng& rng) {
    std::vector<std::size_t> object_order(g.objects.size());
    for (std::size_t i = 0; i < object_order.size(); ++i) object_order[i] = i;
    rng.shuffle(object_order);

    std::vector<int> id_map(g.objects.size() * 4 + 16, -1);
    SceneGraph out;
    for (std::size_t pos = 0; pos < object_order.size(); ++pos) {
        const auto& o = g.objects[object_order[pos]];
        const int new_id = static_cast<int>(rng.index(1000000));
        // ids need only be unique; draw until fresh
        int candidate = new_id;
        bool clash = true;
        while (clash) {
            clash = false;
            for (const auto& other : out.objects)
                if (other.id == candidate) {
                    clash = true;
                    candidate = static_cast<int>(rng.index(1000000));
                }
        }
        id_map[o.id] = candidate;
        out.objects.push_back({candidate, o.head, o.modifiers});
    }
    auto attrs = g.attributes;
    rng.shuffle(attrs);
    for (std::size_t i = 0; i < attrs.size(); ++i)
        out.attributes.push_back({static_cast<int>(i * 7), attrs[i].value, id_map[attrs[i].owner]});
    auto rels = g.relations;
    rng.shuffle(rels);
    for (std::size_t i = 0; i < rels.size(); ++i)
        out.relations.push_back({static_cast<int>(i * 3), rels[i].predicate,
                                 id_map[rels[i].source], id_map[rels[i].target]});
    return out;
}

// ---- direct-summation loss oracles (no max-subtraction, independent path) ----

inline double oracle_clip(const Matrix& U, const Matrix& V, double tau) {
    const int n = static_cast<int>(U.rows());
    double i2t = 0.0, t2i = 0.0;
    for (int i = 0; i < n; ++i) {
        double den = 0.0;
        for (int j = 0; j < n; ++j) den += std::exp(tau * U.row(i).dot(V.row(j)));
        i2t += -std::log(std::exp(tau * U.row(i).dot(V.row(i))) / den);
    }
    for (int j = 0; j < n; ++j) {
        double den = 0.0;
        for (int i = 0; i < n; ++i) den += std::exp(tau * U.row(i).dot(V.row(j)));
        t2i += -std::log(std::exp(tau * U.row(j).dot(V.row(j))) / den);
    }
    return 0.5 * (i2t / n + t2i / n);
}

inline double oracle_multi_i2t(const Matrix& U, const Matrix& V,
                               const std::vector<std::vector<int>>& pos_sets, double tau) {
    double total = 0.0;
    for (int i = 0; i < U.rows(); ++i) {
        double den = 0.0;
        for (int j = 0; j < V.rows(); ++j) den += std::exp(tau * U.row(i).dot(V.row(j)));
        double inner = 0.0;
        for (int k : pos_sets[i])
            inner += -std::log(std::exp(tau * U.row(i).dot(V.row(k))) / den);
        total += inner / static_cast<double>(pos_sets[i].size());
    }
    return total;
}

inline double oracle_multi_t2i(const Matrix& U, const Matrix& V,
                               const std::vector<int>& pos_owner, int n_pos, double tau) {
    double total = 0.0;
    for (int j = 0; j < n_pos; ++j) {
        double den = 0.0;
        for (int i = 0; i < U.rows(); ++i) den += std::exp(tau * U.row(i).dot(V.row(j)));
        total += -std::log(std::exp(tau * U.row(pos_owner[j]).dot(V.row(j))) / den);
    }
    return total;
}

// Random unit-norm embedding batch plus valid index maps.
struct RandomBatch {
    Matrix U, V;
    std::vector<std::vector<int>> pos_sets;
    std::vector<int> pos_owner;
    int n_pos = 0;
    double tau = 1.0;
};

inline RandomBatch random_batch(Rng& rng, int max_n = 8, int max_extra = 8, int max_r = 12,
                                int max_d = 16) {
    RandomBatch b;
    const int n = 2 + static_cast<int>(rng.index(max_n - 1));
    const int d = 4 + static_cast<int>(rng.index(max_d - 3));
    const int m = n + static_cast<int>(rng.index(max_extra));
    const int r = static_cast<int>(rng.index(max_r));
    b.U = Matrix(n, d);
    b.V = Matrix(m + r, d);
    for (int i = 0; i < n; ++i) {
        Vector v(d);
        for (int k = 0; k < d; ++k) v(k) = rng.uniform(-1, 1);
        b.U.row(i) = normalize(v).transpose();
    }
    for (int j = 0; j < m + r; ++j) {
        Vector v(d);
        for (int k = 0; k < d; ++k) v(k) = rng.uniform(-1, 1);
        b.V.row(j) = normalize(v).transpose();
    }
    b.pos_sets.resize(n);
    b.pos_owner.resize(m);
    for (int j = 0; j < m; ++j) {
        const int owner = j < n ? j : static_cast<int>(rng.index(n));
        b.pos_owner[j] = owner;
        b.pos_sets[owner].push_back(j);
    }
    b.n_pos = m;
    b.tau = rng.uniform(0.5, 10.0);
    return b;
}

}  // namespace sgcl::testing
