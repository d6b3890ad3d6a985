#include "sgcl/batch_builder.hpp"

#include <algorithm>
#include <unordered_set>

#include "sgcl/errors.hpp"
#include "sgcl/renderer.hpp"

namespace sgcl {

void BatchConfig::validate() const {
    if (image_batch < 1) throw ConfigError("image_batch must be >= 1");
    if (max_pos_per_image < 1) throw ConfigError("max_pos_per_image must be >= 1");
    if (max_neg_per_image < 0) throw ConfigError("max_neg_per_image must be >= 0");
    if (curriculum_stage != 1 && curriculum_stage != 2)
        throw ConfigError("curriculum_stage must be 1 or 2");
    if (curriculum_stage == 1 && (max_pos_per_image != 1 || max_neg_per_image > 1))
        throw ConfigError("stage 1 requires max_pos_per_image=1 and max_neg_per_image<=1");
    if (effective_text_batch_size() < image_batch)
        throw ConfigError("text_batch_size must be >= image_batch");
}

void TrainBatch::check_invariants(const BatchConfig& cfg) const {
    if (static_cast<int>(image_ids.size()) != cfg.image_batch)
        throw ConfigError("batch holds wrong image count");
    if (static_cast<int>(pos_owner.size()) != n_pos) throw ConfigError("pos_owner size != m");
    std::vector<bool> covered(n_pos, false);
    for (std::size_t i = 0; i < pos_sets.size(); ++i) {
        const auto& set = pos_sets[i];
        if (set.empty() || static_cast<int>(set.size()) > cfg.max_pos_per_image)
            throw ConfigError("pos_set size out of range for image " + std::to_string(i));
        for (int j : set) {
            if (j < 0 || j >= n_pos) throw ConfigError("positive index out of range");
            if (covered[j]) throw ConfigError("positive text owned twice");
            covered[j] = true;
            if (pos_owner[j] != static_cast<int>(i)) throw ConfigError("pos_owner mismatch");
        }
    }
    for (int j = 0; j < n_pos; ++j)
        if (!covered[j]) throw ConfigError("positive text has no owner set");
    // per-image pairwise distinct texts
    for (std::size_t i = 0; i < pos_sets.size(); ++i) {
        std::unordered_set<std::string> owned;
        for (int j : pos_sets[i])
            if (!owned.insert(texts[j]).second)
                throw ConfigError("duplicate text for image " + std::to_string(i));
    }
}

TrainBatch build_batch(const std::vector<BatchImage>& images, const BatchConfig& cfg,
                       SentenceCache& cache) {
    cfg.validate();
    if (static_cast<int>(images.size()) != cfg.image_batch)
        throw ConfigError("expected " + std::to_string(cfg.image_batch) + " images, got " +
                          std::to_string(images.size()));

    TrainBatch batch;
    std::vector<std::vector<std::string>> pos_texts(images.size());
    std::vector<std::vector<std::string>> neg_texts(images.size());

    for (std::size_t i = 0; i < images.size(); ++i) {
        batch.image_ids.push_back(images[i].id);
        std::unordered_set<std::string> used;
        for (const auto& sample : images[i].samples) {
            if (static_cast<int>(pos_texts[i].size()) >= cfg.max_pos_per_image) break;
            auto text = render(sample.positive);
            if (used.insert(text).second) pos_texts[i].push_back(std::move(text));
        }
        if (pos_texts[i].empty())
            throw EmptyPositives("image " + images[i].id + " contributes no positive sub-graph");
        for (const auto& sample : images[i].samples) {
            for (const auto& neg : sample.negatives) {
                if (static_cast<int>(neg_texts[i].size()) >= cfg.max_neg_per_image) break;
                auto text = render(neg.graph);
                if (used.insert(text).second) neg_texts[i].push_back(std::move(text));
            }
        }
    }

    for (std::size_t i = 0; i < images.size(); ++i) {
        std::vector<int> set;
        for (auto& text : pos_texts[i]) {
            set.push_back(static_cast<int>(batch.texts.size()));
            batch.pos_owner.push_back(static_cast<int>(i));
            batch.texts.push_back(std::move(text));
        }
        batch.pos_sets.push_back(std::move(set));
    }
    batch.n_pos = static_cast<int>(batch.texts.size());
    for (auto& list : neg_texts)
        for (auto& text : list) batch.texts.push_back(std::move(text));

    const int target = cfg.effective_text_batch_size();
    while (static_cast<int>(batch.texts.size()) < target && !cache.sentences.empty()) {
        batch.texts.push_back(std::move(cache.sentences.front()));
        cache.sentences.pop_front();
    }
    batch.deficit = std::max(0, target - static_cast<int>(batch.texts.size()));

    // positives feed the cache for later batches
    for (int j = 0; j < batch.n_pos; ++j) cache.sentences.push_back(batch.texts[j]);

    return batch;
}

}  // namespace sgcl
