#include "sgcl/encoder.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sgcl/errors.hpp"
#include "sgcl/rng.hpp"

namespace sgcl {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

SparseFeatures hash_features(const std::vector<std::string>& features, int hash_dim) {
    std::map<int, double> buckets;
    for (const auto& f : features) {
        const std::uint64_t h = fnv1a(f);
        const int bucket = static_cast<int>(h % static_cast<std::uint64_t>(hash_dim));
        const double sign = (h >> 63) ? 1.0 : -1.0;
        buckets[bucket] += sign;
    }
    SparseFeatures out;
    out.entries.assign(buckets.begin(), buckets.end());
    return out;
}

Encoded project(SparseFeatures feats, const Matrix& w) {
    Encoded enc;
    enc.raw = Vector::Zero(w.rows());
    for (const auto& [bucket, weight] : feats.entries) enc.raw += weight * w.col(bucket);
    enc.embedding = normalize(enc.raw);
    enc.features = std::move(feats);
    return enc;
}

}  // namespace

EncoderParams EncoderParams::init(int hash_dim, int embed_dim, std::uint64_t seed) {
    if (hash_dim < 2 || embed_dim < 2)
        throw ConfigError("encoder dimensions must be >= 2");
    EncoderParams p;
    p.hash_dim = hash_dim;
    p.embed_dim = embed_dim;
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(hash_dim));
    p.w_text = Matrix(embed_dim, hash_dim);
    p.w_image = Matrix(embed_dim, hash_dim);
    for (int j = 0; j < hash_dim; ++j)
        for (int i = 0; i < embed_dim; ++i) p.w_text(i, j) = rng.uniform(-scale, scale);
    for (int j = 0; j < hash_dim; ++j)
        for (int i = 0; i < embed_dim; ++i) p.w_image(i, j) = rng.uniform(-scale, scale);
    return p;
}

void EncoderParams::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot open " + path + " for writing");
    const char magic[8] = {'S', 'G', 'C', 'L', 'E', 'N', 'C', '1'};
    out.write(magic, sizeof(magic));
    const std::int64_t dims[2] = {hash_dim, embed_dim};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    out.write(reinterpret_cast<const char*>(&temperature.log_tau), sizeof(double));
    out.write(reinterpret_cast<const char*>(w_text.data()),
              static_cast<std::streamsize>(sizeof(double) * w_text.size()));
    out.write(reinterpret_cast<const char*>(w_image.data()),
              static_cast<std::streamsize>(sizeof(double) * w_image.size()));
    if (!out) throw SchemaError("failed writing " + path);
}

EncoderParams EncoderParams::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::string(magic, 8) != "SGCLENC1")
        throw SchemaError(path + " is not an encoder params file");
    std::int64_t dims[2];
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    EncoderParams p;
    p.hash_dim = static_cast<int>(dims[0]);
    p.embed_dim = static_cast<int>(dims[1]);
    in.read(reinterpret_cast<char*>(&p.temperature.log_tau), sizeof(double));
    p.w_text = Matrix(p.embed_dim, p.hash_dim);
    p.w_image = Matrix(p.embed_dim, p.hash_dim);
    in.read(reinterpret_cast<char*>(p.w_text.data()),
            static_cast<std::streamsize>(sizeof(double) * p.w_text.size()));
    in.read(reinterpret_cast<char*>(p.w_image.data()),
            static_cast<std::streamsize>(sizeof(double) * p.w_image.size()));
    if (!in) throw SchemaError("truncated encoder params file " + path);
    return p;
}

SparseFeatures text_features(const std::string& text, int hash_dim) {
    std::vector<std::string> tokens;
    std::istringstream stream(text);
    std::string token;
    while (stream >> token) {
        std::transform(token.begin(), token.end(), token.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        tokens.push_back(token);
    }
    if (tokens.empty()) throw EmptyText("cannot encode empty text");
    std::vector<std::string> features;
    for (const auto& t : tokens) features.push_back("u:" + t);
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
        features.push_back("b:" + tokens[i] + ' ' + tokens[i + 1]);
    return hash_features(features, hash_dim);
}

SparseFeatures graph_features(const SceneGraph& g, int hash_dim) {
    if (g.objects.empty()) throw EmptyGraph("cannot encode a graph with no objects");
    std::vector<std::string> features;
    for (const auto& o : g.objects) {
        std::string label;
        for (const auto& m : o.modifiers) label += m + ' ';
        label += o.head;
        features.push_back("o:" + label);
    }
    for (const auto& a : g.attributes)
        features.push_back("a:" + a.value + '|' + g.find_object(a.owner)->head);
    for (const auto& r : g.relations)
        features.push_back("r:" + g.find_object(r.source)->head + '|' + r.predicate + '|' +
                           g.find_object(r.target)->head);
    return hash_features(features, hash_dim);
}

Encoded encode_text(const std::string& text, const EncoderParams& params) {
    return project(text_features(text, params.hash_dim), params.w_text);
}

Encoded encode_image(const SceneGraph& g, const EncoderParams& params) {
    return project(graph_features(g, params.hash_dim), params.w_image);
}

void accumulate_projection_gradient(const Encoded& enc, const Vector& grad_embedding,
                                    Matrix& grad_w) {
    // u = raw/|raw|; dL/draw = (g - u (u.g)) / |raw|
    const double norm = enc.raw.norm();
    const Vector grad_raw =
        (grad_embedding - enc.embedding * enc.embedding.dot(grad_embedding)) / norm;
    for (const auto& [bucket, weight] : enc.features.entries)
        grad_w.col(bucket) += weight * grad_raw;
}

}  // namespace sgcl
