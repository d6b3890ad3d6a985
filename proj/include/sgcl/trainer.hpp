#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgcl/batch_builder.hpp"
#include "sgcl/decomposer.hpp"
#include "sgcl/encoder.hpp"
#include "sgcl/negative_miner.hpp"
#include "sgcl/synthetic.hpp"

namespace sgcl {

enum class Objective {
    MultiPositive,  // decomposed positives + mined hard negatives
    ClipBaseline,   // one caption per image, no hard negatives
};

struct CurriculumSchedule {
    int stage1_epochs = 0;
    int total_epochs = 20;

    void validate() const;  // 0 <= stage1 <= total
};

struct TrainerConfig {
    CurriculumSchedule schedule;
    int batch_images = 64;            // n
    double learning_rate = 0.1;       // plain SGD
    std::uint64_t seed = 7;
    Objective objective = Objective::MultiPositive;

    // stage-2 batch shape; stage 1 always runs with 1 positive / 1 negative
    int max_pos_per_image = 3;
    int max_neg_per_image = 6;
    int text_batch_size = 0;          // 0: n * (max_pos + max_neg)

    DecompositionConfig decomposition;
    NegativeSpec negatives;           // p1=0.15, p2=p3 defaults

    int hash_dim = 4096;
    int embed_dim = 64;
};

struct EpochMetrics {
    int epoch = 0;
    double loss = 0.0;
    double swap_accuracy = 0.0;
    int stage = 2;
    int max_positives_seen = 0;  // per-image maximum observed in this epoch's batches
};

struct TrainResult {
    EncoderParams params;
    std::vector<EpochMetrics> history;
};

// Loss and parameter gradients for one prepared batch; exposed so the
// end-to-end gradient can be finite-difference checked.
struct PipelineGradients {
    double loss = 0.0;
    Matrix grad_w_text;
    Matrix grad_w_image;
    double grad_log_tau = 0.0;
};

PipelineGradients batch_loss_and_gradients(const std::vector<SceneGraph>& image_graphs,
                                           const TrainBatch& batch,
                                           const EncoderParams& params, Objective objective);

// Full pipeline per record (parse -> decompose -> mine -> render -> batch),
// SGD with the normalization Jacobian applied, stage-1 batches while
// epoch < stage1_epochs. Deterministic under fixed seed.
TrainResult train(const std::vector<SyntheticRecord>& corpus,
                  const std::vector<EvalPair>& eval_pairs, const SyntheticVocab& vocab,
                  const TrainerConfig& cfg);

// Fraction of pairs with cos(image, correct) > cos(image, perturbed);
// ties count as failures.
double evaluate_swap_retrieval(const EncoderParams& params,
                               const std::vector<EvalPair>& pairs);

void write_metrics_csv(const std::vector<EpochMetrics>& history, const std::string& path);

}  // namespace sgcl
