#include "sgcl/negative_miner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_set>

#include "sgcl/errors.hpp"

namespace sgcl {

namespace {

std::vector<std::string> load_list(const std::string& path) {
    std::vector<std::string> entries;
    std::ifstream in(path);
    if (!in) throw EmptyVocab("cannot open vocab file " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        if (!line.empty()) entries.push_back(line);
    }
    return entries;
}

// Uniform draw from pool minus an exclusion set; empty optional-style result
// signalled by returning false.
bool draw_excluding(const std::vector<std::string>& pool,
                    const std::set<std::string>& excluded, Rng& rng, std::string& out) {
    std::vector<const std::string*> allowed;
    allowed.reserve(pool.size());
    for (const auto& entry : pool)
        if (!excluded.count(entry)) allowed.push_back(&entry);
    if (allowed.empty()) return false;
    out = *allowed[rng.index(allowed.size())];
    return true;
}

}  // namespace

Vocab Vocab::load(const std::string& dir) {
    Vocab v;
    v.objects = load_list(dir + "/objects.txt");
    v.attributes = load_list(dir + "/attributes.txt");
    v.relations = load_list(dir + "/relations.txt");
    return v;
}

Vocab Vocab::from_corpus(const std::vector<SceneGraph>& graphs) {
    std::set<std::string> objects, attributes, relations;
    for (const auto& g : graphs) {
        for (const auto& o : g.objects) objects.insert(o.head);
        for (const auto& a : g.attributes) attributes.insert(a.value);
        for (const auto& r : g.relations) relations.insert(r.predicate);
    }
    Vocab v;
    v.objects.assign(objects.begin(), objects.end());
    v.attributes.assign(attributes.begin(), attributes.end());
    v.relations.assign(relations.begin(), relations.end());
    return v;
}

const char* to_string(NegativeCategory c) {
    switch (c) {
        case NegativeCategory::Object: return "c_obj";
        case NegativeCategory::Relation: return "c_rel";
        case NegativeCategory::Attribute: return "c_attr";
    }
    return "?";
}

const char* to_string(NegativeTechnique t) {
    switch (t) {
        case NegativeTechnique::Swap: return "swap";
        case NegativeTechnique::ReplaceNode: return "replace_node";
        case NegativeTechnique::ReplaceEdge: return "replace_edge";
        case NegativeTechnique::Join: return "join";
    }
    return "?";
}

NegativeCategory category_from_string(const std::string& s) {
    if (s == "c_obj") return NegativeCategory::Object;
    if (s == "c_rel") return NegativeCategory::Relation;
    if (s == "c_attr") return NegativeCategory::Attribute;
    throw SchemaError("unknown negative category '" + s + "'");
}

NegativeTechnique technique_from_string(const std::string& s) {
    if (s == "swap") return NegativeTechnique::Swap;
    if (s == "replace_node") return NegativeTechnique::ReplaceNode;
    if (s == "replace_edge") return NegativeTechnique::ReplaceEdge;
    if (s == "join") return NegativeTechnique::Join;
    throw SchemaError("unknown negative technique '" + s + "'");
}

void NegativeSpec::validate() const {
    if (p_obj < 0 || p_rel < 0 || p_attr < 0)
        throw ConfigError("negative category probabilities must be non-negative");
    if (std::abs(p_obj + p_rel + p_attr - 1.0) > 1e-9)
        throw ConfigError("negative category probabilities must sum to 1");
    if (max_negatives_per_positive < 0)
        throw ConfigError("max_negatives_per_positive must be >= 0");
}

std::vector<Negative> f_obj(const SceneGraph& g, const Vocab& vocab, Rng& rng) {
    if (g.objects.size() != 1)
        throw WrongShape("f_obj requires exactly one object, got " +
                         std::to_string(g.objects.size()));
    const int owner = g.objects[0].id;
    const auto own_values = g.attribute_values(owner);
    const std::set<std::string> excluded(own_values.begin(), own_values.end());

    std::vector<Negative> out;
    for (std::size_t i = 0; i < g.attributes.size(); ++i) {
        std::string replacement;
        if (!draw_excluding(vocab.attributes, excluded, rng, replacement)) continue;
        SceneGraph copy = g;
        copy.attributes[i].value = replacement;
        out.push_back({std::move(copy), NegativeCategory::Object, NegativeTechnique::ReplaceNode});
    }
    return out;
}

std::vector<Negative> f_rel(const SceneGraph& g, const Vocab& vocab, Rng& rng,
                            bool join_enabled) {
    if (g.relations.size() != 1)
        throw WrongShape("f_rel requires exactly one relation, got " +
                         std::to_string(g.relations.size()));
    const RelationEdge& edge = g.relations[0];
    std::vector<Negative> out;

    // (a) endpoint swap: objects exchanged together with their attributes
    {
        SceneGraph copy = g;
        copy.relations[0].source = edge.target;
        copy.relations[0].target = edge.source;
        out.push_back({std::move(copy), NegativeCategory::Relation, NegativeTechnique::Swap});
    }
    // (b) endpoint replacement from the external object set
    {
        std::set<std::string> heads;
        for (const auto& o : g.objects) heads.insert(o.head);
        std::string replacement;
        if (draw_excluding(vocab.objects, heads, rng, replacement)) {
            const int victim = rng.index(2) == 0 ? edge.source : edge.target;
            SceneGraph copy = g;
            for (auto& o : copy.objects) {
                if (o.id == victim) {
                    o.head = replacement;
                    o.modifiers.clear();
                }
            }
            out.push_back(
                {std::move(copy), NegativeCategory::Relation, NegativeTechnique::ReplaceNode});
        }
    }
    // (c) predicate replacement from the external relation set
    {
        std::string replacement;
        if (draw_excluding(vocab.relations, {edge.predicate}, rng, replacement)) {
            SceneGraph copy = g;
            copy.relations[0].predicate = replacement;
            out.push_back(
                {std::move(copy), NegativeCategory::Relation, NegativeTechnique::ReplaceEdge});
        }
    }
    // (d) join with a random attributed object through a fresh relation
    if (join_enabled && !vocab.objects.empty() && !vocab.relations.empty()) {
        SceneGraph copy = g;
        int next_object = 0, next_attr = 0, next_rel = 0;
        for (const auto& o : copy.objects) next_object = std::max(next_object, o.id + 1);
        for (const auto& a : copy.attributes) next_attr = std::max(next_attr, a.id + 1);
        for (const auto& r : copy.relations) next_rel = std::max(next_rel, r.id + 1);

        ObjectNode extra{next_object, vocab.objects[rng.index(vocab.objects.size())], {}};
        copy.objects.push_back(extra);
        if (!vocab.attributes.empty() && rng.index(2) == 0)
            copy.attributes.push_back(
                {next_attr, vocab.attributes[rng.index(vocab.attributes.size())], extra.id});
        const int anchor = rng.index(2) == 0 ? edge.source : edge.target;
        copy.relations.push_back(
            {next_rel, vocab.relations[rng.index(vocab.relations.size())], anchor, extra.id});
        out.push_back({std::move(copy), NegativeCategory::Relation, NegativeTechnique::Join});
    }
    return out;
}

std::vector<Negative> f_attr(const SceneGraph& g, const Vocab& vocab, Rng& rng) {
    if (g.relations.size() != 1)
        throw WrongShape("f_attr requires exactly one relation, got " +
                         std::to_string(g.relations.size()));
    std::vector<Negative> out;
    if (g.attributes.empty()) return out;
    const RelationEdge& edge = g.relations[0];

    // (a) first attributes exchanged across owners, when both endpoints have one
    {
        std::size_t src_idx = g.attributes.size(), tgt_idx = g.attributes.size();
        for (std::size_t i = 0; i < g.attributes.size(); ++i) {
            if (g.attributes[i].owner == edge.source && src_idx == g.attributes.size())
                src_idx = i;
            if (g.attributes[i].owner == edge.target && tgt_idx == g.attributes.size())
                tgt_idx = i;
        }
        if (src_idx < g.attributes.size() && tgt_idx < g.attributes.size()) {
            SceneGraph copy = g;
            std::swap(copy.attributes[src_idx].value, copy.attributes[tgt_idx].value);
            out.push_back({std::move(copy), NegativeCategory::Attribute, NegativeTechnique::Swap});
        }
    }
    // (b) per-attribute replacement from the external attribute set
    for (std::size_t i = 0; i < g.attributes.size(); ++i) {
        const auto own_values = g.attribute_values(g.attributes[i].owner);
        const std::set<std::string> excluded(own_values.begin(), own_values.end());
        std::string replacement;
        if (!draw_excluding(vocab.attributes, excluded, rng, replacement)) continue;
        SceneGraph copy = g;
        copy.attributes[i].value = replacement;
        out.push_back(
            {std::move(copy), NegativeCategory::Attribute, NegativeTechnique::ReplaceNode});
    }
    return out;
}

std::vector<SubGraphSample> mine_negatives(const std::vector<SceneGraph>& positives,
                                           const Vocab& vocab, const NegativeSpec& spec) {
    spec.validate();
    if ((spec.p_obj > 0 || spec.p_attr > 0) && vocab.attributes.empty())
        throw EmptyVocab("attribute vocab is empty");
    if (spec.p_rel > 0 && (vocab.objects.empty() || vocab.relations.empty()))
        throw EmptyVocab("object or relation vocab is empty");

    const double probs[3] = {spec.p_obj, spec.p_rel, spec.p_attr};

    std::vector<SubGraphSample> samples;
    samples.reserve(positives.size());
    for (std::size_t idx = 0; idx < positives.size(); ++idx) {
        const SceneGraph& positive = positives[idx];
        Rng rng(mix_seed(spec.seed, idx));

        std::vector<Negative> candidates[3];
        if (positive.objects.size() == 1 && !positive.attributes.empty() && spec.p_obj > 0)
            candidates[0] = f_obj(positive, vocab, rng);
        if (positive.relations.size() == 1 && spec.p_rel > 0)
            candidates[1] = f_rel(positive, vocab, rng, spec.join_enabled);
        if (positive.relations.size() == 1 && !positive.attributes.empty() && spec.p_attr > 0)
            candidates[2] = f_attr(positive, vocab, rng);

        // a negative must be canonically distinct from the positive, and
        // negatives within a sample are deduplicated the same way
        const auto positive_key = canonicalize(positive);
        std::unordered_set<std::string> seen{positive_key};
        for (auto& list : candidates) {
            std::vector<Negative> kept;
            for (auto& cand : list)
                if (seen.insert(canonicalize(cand.graph)).second) kept.push_back(std::move(cand));
            list = std::move(kept);
        }

        SubGraphSample sample;
        sample.positive = positive;
        std::size_t cursor[3] = {0, 0, 0};
        while (static_cast<int>(sample.negatives.size()) < spec.max_negatives_per_positive) {
            std::vector<double> weights;
            std::vector<int> which;
            for (int c = 0; c < 3; ++c) {
                if (cursor[c] < candidates[c].size()) {
                    weights.push_back(probs[c]);
                    which.push_back(c);
                }
            }
            if (which.empty()) break;
            const int chosen = which[rng.categorical(weights)];
            sample.negatives.push_back(std::move(candidates[chosen][cursor[chosen]++]));
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

}  // namespace sgcl
