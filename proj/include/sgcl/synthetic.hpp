#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgcl/caption_parser.hpp"
#include "sgcl/negative_miner.hpp"
#include "sgcl/scene_graph.hpp"

namespace sgcl {

// Synthetic training corpus: each image is its own ground-truth scene graph,
// so a caption sub-graph is a sub-graph of the image graph by construction.

struct SyntheticRecord {
    SceneGraph image_graph;
    std::string caption;
};

// ARO-style retrieval pair: correct caption vs a caption differing by exactly
// one attribute swap.
struct EvalPair {
    SceneGraph image_graph;
    std::string correct_caption;
    std::string perturbed_caption;
};

struct SyntheticVocab {
    std::vector<std::string> objects;
    std::vector<std::string> attributes;
    std::vector<std::string> relations;

    Lexicon lexicon() const;
    Vocab miner_vocab() const;
};

SyntheticVocab make_synthetic_vocab(int n_objects, int n_attributes, int n_relations);

std::vector<SyntheticRecord> make_corpus(const SyntheticVocab& vocab, int n_records,
                                         std::uint64_t seed);

std::vector<EvalPair> make_eval_pairs(const SyntheticVocab& vocab, int n_pairs,
                                      std::uint64_t seed);

// JSONL round-trips for the CLI: records {"image_graph":..., "caption":...},
// pairs {"image_graph":..., "correct_caption":..., "perturbed_caption":...}.
void save_corpus_jsonl(const std::vector<SyntheticRecord>& corpus, const std::string& path);
std::vector<SyntheticRecord> load_corpus_jsonl(const std::string& path);
void save_eval_pairs_jsonl(const std::vector<EvalPair>& pairs, const std::string& path);
std::vector<EvalPair> load_eval_pairs_jsonl(const std::string& path);

}  // namespace sgcl
