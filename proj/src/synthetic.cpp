#include "sgcl/synthetic.hpp"

#include <fstream>

#include "sgcl/errors.hpp"
#include "sgcl/json_io.hpp"
#include "sgcl/renderer.hpp"
#include "sgcl/rng.hpp"

namespace sgcl {

namespace {

const char* kSyllables[] = {"ba", "de", "fi", "go", "hu", "ka", "le", "mi",
                            "no", "pu", "ra", "se", "ti", "vo", "wu", "za"};

std::string pseudo_word(int index, const char* suffix) {
    std::string word = kSyllables[(index / 16) % 16];
    word += kSyllables[index % 16];
    if (index >= 256) word += kSyllables[(index / 256) % 16];
    return word + suffix;
}

SceneGraph sample_scene(const SyntheticVocab& vocab, Rng& rng) {
    const auto& objs = vocab.objects;
    const auto& attrs = vocab.attributes;
    const auto& rels = vocab.relations;
    std::size_t o1 = rng.index(objs.size());
    std::size_t o2 = rng.index(objs.size() - 1);
    if (o2 >= o1) ++o2;  // distinct objects
    std::size_t a1 = rng.index(attrs.size());
    std::size_t a2 = rng.index(attrs.size() - 1);
    if (a2 >= a1) ++a2;  // distinct attributes, so a swap always changes the text
    std::size_t r = rng.index(rels.size());

    SceneGraph g;
    g.objects.push_back({0, objs[o1], {}});
    g.objects.push_back({1, objs[o2], {}});
    g.attributes.push_back({0, attrs[a1], 0});
    g.attributes.push_back({1, attrs[a2], 1});
    g.relations.push_back({0, rels[r], 0, 1});
    return g;
}

}  // namespace

Lexicon SyntheticVocab::lexicon() const {
    return Lexicon::from_lists({"a", "an", "the"}, attributes, relations);
}

Vocab SyntheticVocab::miner_vocab() const {
    Vocab v;
    v.objects = objects;
    v.attributes = attributes;
    v.relations = relations;
    return v;
}

SyntheticVocab make_synthetic_vocab(int n_objects, int n_attributes, int n_relations) {
    SyntheticVocab v;
    for (int i = 0; i < n_objects; ++i) v.objects.push_back(pseudo_word(i, ""));
    for (int i = 0; i < n_attributes; ++i) v.attributes.push_back(pseudo_word(i, "y"));
    for (int i = 0; i < n_relations; ++i) v.relations.push_back(pseudo_word(i, "s"));
    return v;
}

std::vector<SyntheticRecord> make_corpus(const SyntheticVocab& vocab, int n_records,
                                         std::uint64_t seed) {
    Rng rng(seed);
    std::vector<SyntheticRecord> corpus;
    corpus.reserve(n_records);
    for (int i = 0; i < n_records; ++i) {
        SceneGraph g = sample_scene(vocab, rng);
        std::string caption = render(g);
        corpus.push_back({std::move(g), std::move(caption)});
    }
    return corpus;
}

std::vector<EvalPair> make_eval_pairs(const SyntheticVocab& vocab, int n_pairs,
                                      std::uint64_t seed) {
    Rng rng(seed);
    std::vector<EvalPair> pairs;
    pairs.reserve(n_pairs);
    for (int i = 0; i < n_pairs; ++i) {
        SceneGraph g = sample_scene(vocab, rng);
        SceneGraph swapped = g;
        std::swap(swapped.attributes[0].value, swapped.attributes[1].value);
        pairs.push_back({g, render(g), render(swapped)});
    }
    return pairs;
}

void save_corpus_jsonl(const std::vector<SyntheticRecord>& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot open " + path + " for writing");
    for (const auto& rec : corpus) {
        nlohmann::json j{{"image_graph", graph_to_json(rec.image_graph)},
                         {"caption", rec.caption}};
        out << j.dump() << '\n';
    }
}

std::vector<SyntheticRecord> load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    std::vector<SyntheticRecord> corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            SyntheticRecord rec;
            rec.image_graph = graph_from_json(j.at("image_graph"));
            rec.caption = j.at("caption").get<std::string>();
            corpus.push_back(std::move(rec));
        } catch (const std::exception& e) {
            throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return corpus;
}

void save_eval_pairs_jsonl(const std::vector<EvalPair>& pairs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot open " + path + " for writing");
    for (const auto& pair : pairs) {
        nlohmann::json j{{"image_graph", graph_to_json(pair.image_graph)},
                         {"correct_caption", pair.correct_caption},
                         {"perturbed_caption", pair.perturbed_caption}};
        out << j.dump() << '\n';
    }
}

std::vector<EvalPair> load_eval_pairs_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    std::vector<EvalPair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            EvalPair pair;
            pair.image_graph = graph_from_json(j.at("image_graph"));
            pair.correct_caption = j.at("correct_caption").get<std::string>();
            pair.perturbed_caption = j.at("perturbed_caption").get<std::string>();
            pairs.push_back(std::move(pair));
        } catch (const std::exception& e) {
            throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return pairs;
}

}  // namespace sgcl
