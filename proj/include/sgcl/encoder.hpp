#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sgcl/contrastive.hpp"
#include "sgcl/scene_graph.hpp"

namespace sgcl {

// Desk-scale dual encoder: signed feature hashing into H buckets followed by
// a learned linear projection to d dimensions and l2 normalization.
struct EncoderParams {
    int hash_dim = 4096;   // H
    int embed_dim = 64;    // d
    Matrix w_text;         // d x H
    Matrix w_image;        // d x H
    Temperature temperature;

    static EncoderParams init(int hash_dim, int embed_dim, std::uint64_t seed);
    void save(const std::string& path) const;
    static EncoderParams load(const std::string& path);
};

// Sparse hashed feature vector: (bucket, signed weight) pairs, buckets unique.
struct SparseFeatures {
    std::vector<std::pair<int, double>> entries;
};

// Token unigrams + bigrams, signed hashing. Text must contain a token.
SparseFeatures text_features(const std::string& text, int hash_dim);

// Multiset of (object label), (attribute, owner head), (source head,
// predicate, target head) features; invariant under id renumbering.
SparseFeatures graph_features(const SceneGraph& g, int hash_dim);

struct Encoded {
    Vector embedding;      // normalized, d-dim
    Vector raw;            // pre-normalization projection
    SparseFeatures features;
};

Encoded encode_text(const std::string& text, const EncoderParams& params);   // EmptyText
Encoded encode_image(const SceneGraph& g, const EncoderParams& params);      // EmptyGraph

// d(L)/d(W) contribution for one encoded input given dL/d(normalized output);
// applies the normalization Jacobian then the sparse outer product.
void accumulate_projection_gradient(const Encoded& enc, const Vector& grad_embedding,
                                    Matrix& grad_w);

}  // namespace sgcl
