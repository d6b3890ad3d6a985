#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "sgcl/negative_miner.hpp"

namespace sgcl {

struct BatchConfig {
    int image_batch = 256;       // n
    int max_pos_per_image = 3;
    int max_neg_per_image = 6;
    int text_batch_size = 0;     // fixed target m+r; 0 means n*(max_pos+max_neg)
    int curriculum_stage = 2;    // 1 or 2
    std::uint64_t seed = 0;

    int effective_text_batch_size() const {
        return text_batch_size > 0 ? text_batch_size
                                   : image_batch * (max_pos_per_image + max_neg_per_image);
    }
    void validate() const;  // ConfigError on stage-1 violation etc.
};

// FIFO of positive sentences from earlier batches, used to pad the negative
// section so the text batch size stays constant.
struct SentenceCache {
    std::deque<std::string> sentences;
};

struct BatchImage {
    std::string id;
    std::vector<SubGraphSample> samples;  // priority-ordered positives with negatives
};

struct TrainBatch {
    std::vector<std::string> image_ids;             // B_I, size n
    std::vector<std::string> texts;                 // B_t = [positives; negatives]
    int n_pos = 0;                                  // m
    std::vector<int> pos_owner;                     // p(j) for j < m
    std::vector<std::vector<int>> pos_sets;         // P(i), indices < m
    int deficit = 0;  // texts missing vs text_batch_size when the cache ran dry

    void check_invariants(const BatchConfig& cfg) const;  // throws on violation
};

// Per image: take up to max_pos positives (sample order = decomposer
// priority) and up to max_neg negatives, rendered and deduplicated per image
// by string; pad the negative section from the cache (oldest first) up to
// text_batch_size; append this batch's positive texts to the cache.
TrainBatch build_batch(const std::vector<BatchImage>& images, const BatchConfig& cfg,
                       SentenceCache& cache);

}  // namespace sgcl
