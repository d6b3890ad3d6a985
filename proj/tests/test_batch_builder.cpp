#include <doctest.h>

#include <set>
#include <string>

#include "sgcl/batch_builder.hpp"
#include "sgcl/decomposer.hpp"
#include "sgcl/errors.hpp"
#include "sgcl/negative_miner.hpp"
#include "sgcl/renderer.hpp"
#include "test_support.hpp"

using namespace sgcl;
using namespace sgcl::testing;

namespace {

// An image payload with `n_pos` distinct positives and `n_neg` negatives each,
// all rendered strings globally unique via the tag.
BatchImage synthetic_image(const std::string& tag, int n_pos, int n_neg) {
    BatchImage img;
    img.id = tag;
    for (int p = 0; p < n_pos; ++p) {
        SubGraphSample sample;
        SceneGraph g;
        g.objects.push_back({0, tag + "pos" + std::to_string(p), {}});
        sample.positive = g;
        for (int q = 0; q < n_neg; ++q) {
            SceneGraph ng;
            ng.objects.push_back(
                {0, tag + "neg" + std::to_string(p) + "x" + std::to_string(q), {}});
            sample.negatives.push_back({ng, NegativeCategory::Object,
                                        NegativeTechnique::ReplaceNode});
        }
        img.samples.push_back(std::move(sample));
    }
    return img;
}

}  // namespace

TEST_CASE("config validation") {
    BatchConfig cfg;
    CHECK(cfg.effective_text_batch_size() == 256 * 9);
    CHECK_NOTHROW(cfg.validate());

    BatchConfig stage1 = cfg;
    stage1.curriculum_stage = 1;
    CHECK_THROWS_AS(stage1.validate(), ConfigError);  // max_pos must be 1
    stage1.max_pos_per_image = 1;
    stage1.max_neg_per_image = 1;
    CHECK_NOTHROW(stage1.validate());

    BatchConfig fixed = cfg;
    fixed.text_batch_size = 100;
    CHECK(fixed.effective_text_batch_size() == 100);
}

TEST_CASE("stage-2 batch: n=2, 3 pos / 6 neg, tbs=18 -> m=6 r=12 no padding") {
    BatchConfig cfg;
    cfg.image_batch = 2;
    cfg.max_pos_per_image = 3;
    cfg.max_neg_per_image = 6;
    cfg.text_batch_size = 18;
    SentenceCache cache;
    const TrainBatch batch =
        build_batch({synthetic_image("a", 3, 2), synthetic_image("b", 3, 2)}, cfg, cache);
    batch.check_invariants(cfg);
    CHECK(batch.n_pos == 6);
    CHECK(batch.texts.size() == 18);
    CHECK(batch.deficit == 0);
    CHECK(batch.pos_sets.size() == 2);
    CHECK(batch.pos_sets[0].size() == 3);
    CHECK(batch.pos_sets[1].size() == 3);
    for (int j = 0; j < batch.n_pos; ++j) {
        const int owner = batch.pos_owner[j];
        bool found = false;
        for (int k : batch.pos_sets[owner]) found = found || k == j;
        CHECK(found);
    }
    // positives land in the cache for the next batch
    CHECK(cache.sentences.size() == 6);
}

TEST_CASE("first batch records a deficit, warmed cache pads exactly") {
    BatchConfig cfg;
    cfg.image_batch = 2;
    cfg.max_pos_per_image = 2;
    cfg.max_neg_per_image = 2;
    cfg.text_batch_size = 10;
    SentenceCache cache;

    // each image supplies 2 pos + 2 neg -> 8 texts, target 10, cold cache
    const TrainBatch first =
        build_batch({synthetic_image("a", 2, 1), synthetic_image("b", 2, 1)}, cfg, cache);
    CHECK(first.texts.size() == 8);
    CHECK(first.deficit == 2);
    CHECK(cache.sentences.size() == 4);

    const TrainBatch second =
        build_batch({synthetic_image("c", 2, 1), synthetic_image("d", 2, 1)}, cfg, cache);
    CHECK(second.texts.size() == 10);
    CHECK(second.deficit == 0);
    // two oldest cached positives consumed, this batch's four appended
    CHECK(cache.sentences.size() == 4 - 2 + 4);
    CHECK(second.texts[8] == first.texts[0]);
    CHECK(second.texts[9] == first.texts[1]);
}

TEST_CASE("stage 1 forces one positive per image, m = n") {
    BatchConfig cfg;
    cfg.image_batch = 3;
    cfg.curriculum_stage = 1;
    cfg.max_pos_per_image = 1;
    cfg.max_neg_per_image = 1;
    cfg.text_batch_size = 6;
    SentenceCache cache;
    const TrainBatch batch = build_batch({synthetic_image("a", 3, 4), synthetic_image("b", 3, 4),
                                          synthetic_image("c", 3, 4)},
                                         cfg, cache);
    batch.check_invariants(cfg);
    CHECK(batch.n_pos == 3);
    for (const auto& p : batch.pos_sets) CHECK(p.size() == 1);
    CHECK(batch.texts.size() == 6);  // 3 pos + 3 x 1 neg
}

TEST_CASE("per-image dedup drops repeated rendered strings") {
    BatchImage img = synthetic_image("a", 1, 0);
    img.samples.push_back(img.samples[0]);  // duplicate positive
    BatchConfig cfg;
    cfg.image_batch = 1;
    cfg.max_pos_per_image = 3;
    cfg.max_neg_per_image = 6;
    cfg.text_batch_size = 1;
    SentenceCache cache;
    const TrainBatch batch = build_batch({img}, cfg, cache);
    CHECK(batch.n_pos == 1);
    CHECK(batch.texts.size() == 1);
}

TEST_CASE("image with zero positives throws") {
    BatchConfig cfg;
    cfg.image_batch = 1;
    SentenceCache cache;
    BatchImage empty;
    empty.id = "x";
    CHECK_THROWS_AS(build_batch({empty}, cfg, cache), EmptyPositives);
}

TEST_CASE("1000 random batches satisfy all invariants") {
    Rng gen(0xBA7C);
    BatchConfig cfg;
    cfg.max_pos_per_image = 3;
    cfg.max_neg_per_image = 6;
    SentenceCache cache;
    int full_batches = 0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + static_cast<int>(gen.index(4));
        cfg.image_batch = n;
        cfg.text_batch_size = n * 4;
        cfg.seed = t;
        std::vector<BatchImage> images;
        for (int i = 0; i < n; ++i)
            images.push_back(synthetic_image("t" + std::to_string(t) + "i" + std::to_string(i),
                                             1 + gen.index(5), gen.index(4)));
        const TrainBatch batch = build_batch(images, cfg, cache);
        batch.check_invariants(cfg);

        CHECK(batch.image_ids.size() == static_cast<std::size_t>(n));
        CHECK(batch.pos_sets.size() == static_cast<std::size_t>(n));
        std::set<int> all_positive_indices;
        for (int i = 0; i < n; ++i) {
            const auto& p = batch.pos_sets[i];
            CHECK(p.size() >= 1);
            CHECK(p.size() <= 3);
            std::set<std::string> texts_of_image;
            for (int k : p) {
                CHECK(k < batch.n_pos);
                CHECK(batch.pos_owner[k] == i);
                CHECK(all_positive_indices.insert(k).second);  // partition: no overlap
                CHECK(texts_of_image.insert(batch.texts[k]).second);  // per-image uniqueness
            }
        }
        CHECK(static_cast<int>(all_positive_indices.size()) == batch.n_pos);
        if (batch.deficit == 0) {
            CHECK(batch.texts.size() >= static_cast<std::size_t>(cfg.text_batch_size));
            ++full_batches;
        } else {
            CHECK(batch.texts.size() + batch.deficit ==
                  static_cast<std::size_t>(cfg.text_batch_size));
        }
    }
    // the cache warms up quickly; the vast majority of batches must be full
    CHECK(full_batches > 900);
}

TEST_CASE("positives follow sample order (decomposer priority)") {
    BatchImage img = synthetic_image("a", 5, 0);
    BatchConfig cfg;
    cfg.image_batch = 1;
    cfg.max_pos_per_image = 2;
    cfg.text_batch_size = 2;
    SentenceCache cache;
    const TrainBatch batch = build_batch({img}, cfg, cache);
    REQUIRE(batch.n_pos == 2);
    CHECK(batch.texts[0] == render(img.samples[0].positive));
    CHECK(batch.texts[1] == render(img.samples[1].positive));
}
