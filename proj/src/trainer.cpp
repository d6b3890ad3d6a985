#include "sgcl/trainer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "sgcl/errors.hpp"
#include "sgcl/renderer.hpp"
#include "sgcl/rng.hpp"

namespace sgcl {

void CurriculumSchedule::validate() const {
    if (stage1_epochs < 0 || total_epochs < 0 || stage1_epochs > total_epochs)
        throw ConfigError("curriculum schedule requires 0 <= stage1_epochs <= total_epochs");
}

PipelineGradients batch_loss_and_gradients(const std::vector<SceneGraph>& image_graphs,
                                           const TrainBatch& batch,
                                           const EncoderParams& params, Objective objective) {
    const int n = static_cast<int>(image_graphs.size());
    const int t = static_cast<int>(batch.texts.size());

    std::vector<Encoded> images, texts;
    images.reserve(n);
    texts.reserve(t);
    Matrix U(n, params.embed_dim), V(t, params.embed_dim);
    for (int i = 0; i < n; ++i) {
        images.push_back(encode_image(image_graphs[i], params));
        U.row(i) = images.back().embedding.transpose();
    }
    for (int j = 0; j < t; ++j) {
        texts.push_back(encode_text(batch.texts[j], params));
        V.row(j) = texts.back().embedding.transpose();
    }

    const double tau = params.temperature.tau();
    LossResult loss;
    if (objective == Objective::ClipBaseline) {
        loss = clip_loss(U, V, tau);
    } else {
        loss = multi_positive_loss(U, V, batch.pos_sets, batch.pos_owner, batch.n_pos, tau);
    }

    PipelineGradients out;
    out.loss = loss.value;
    out.grad_log_tau = loss.grad_log_tau;
    out.grad_w_text = Matrix::Zero(params.embed_dim, params.hash_dim);
    out.grad_w_image = Matrix::Zero(params.embed_dim, params.hash_dim);
    for (int i = 0; i < n; ++i)
        accumulate_projection_gradient(images[i], loss.grad_images.row(i).transpose(),
                                       out.grad_w_image);
    for (int j = 0; j < t; ++j)
        accumulate_projection_gradient(texts[j], loss.grad_texts.row(j).transpose(),
                                       out.grad_w_text);
    return out;
}

double evaluate_swap_retrieval(const EncoderParams& params,
                               const std::vector<EvalPair>& pairs) {
    if (pairs.empty()) return 0.0;
    int correct = 0;
    for (const auto& pair : pairs) {
        const Vector img = encode_image(pair.image_graph, params).embedding;
        const double s_correct = img.dot(encode_text(pair.correct_caption, params).embedding);
        const double s_wrong = img.dot(encode_text(pair.perturbed_caption, params).embedding);
        if (s_correct > s_wrong) ++correct;  // ties count as failures
    }
    return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

namespace {

struct PreparedRecord {
    std::vector<SubGraphSample> samples;  // priority-ordered
};

std::vector<PreparedRecord> prepare_records(const std::vector<SyntheticRecord>& corpus,
                                            const SyntheticVocab& vocab,
                                            const TrainerConfig& cfg) {
    const Lexicon lex = vocab.lexicon();
    const Vocab miner_vocab = vocab.miner_vocab();
    std::vector<PreparedRecord> prepared;
    prepared.reserve(corpus.size());
    for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
        const SceneGraph text_graph = parse_caption(corpus[idx].caption, lex);
        DecompositionConfig dec = cfg.decomposition;
        dec.seed = mix_seed(cfg.seed, idx);
        const auto positives = decompose(text_graph, dec);
        NegativeSpec spec = cfg.negatives;
        spec.seed = mix_seed(cfg.seed, corpus.size() + idx);
        prepared.push_back({mine_negatives(positives, miner_vocab, spec)});
    }
    return prepared;
}

}  // namespace

TrainResult train(const std::vector<SyntheticRecord>& corpus,
                  const std::vector<EvalPair>& eval_pairs, const SyntheticVocab& vocab,
                  const TrainerConfig& cfg) {
    cfg.schedule.validate();
    if (corpus.size() < 2) throw ConfigError("corpus needs at least 2 records");

    std::vector<PreparedRecord> prepared;
    if (cfg.objective == Objective::MultiPositive)
        prepared = prepare_records(corpus, vocab, cfg);

    TrainResult result;
    result.params = EncoderParams::init(cfg.hash_dim, cfg.embed_dim, mix_seed(cfg.seed, 0xE0));
    EncoderParams& params = result.params;

    SentenceCache cache;
    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    const int n = cfg.batch_images;
    for (int epoch = 0; epoch < cfg.schedule.total_epochs; ++epoch) {
        const bool stage1 = epoch < cfg.schedule.stage1_epochs;

        BatchConfig batch_cfg;
        batch_cfg.image_batch = n;
        batch_cfg.max_pos_per_image = stage1 ? 1 : cfg.max_pos_per_image;
        batch_cfg.max_neg_per_image = stage1 ? 1 : cfg.max_neg_per_image;
        batch_cfg.text_batch_size =
            stage1 ? 2 * n
                   : (cfg.text_batch_size > 0
                          ? cfg.text_batch_size
                          : n * (cfg.max_pos_per_image + cfg.max_neg_per_image));
        batch_cfg.curriculum_stage = stage1 ? 1 : 2;
        batch_cfg.seed = mix_seed(cfg.seed, 0xB000 + epoch);

        Rng shuffle_rng(mix_seed(cfg.seed, 0xA000 + epoch));
        shuffle_rng.shuffle(order);

        double loss_sum = 0.0;
        int steps = 0;
        int max_pos_seen = 0;
        for (std::size_t start = 0; start + n <= order.size(); start += n) {
            std::vector<SceneGraph> image_graphs;
            TrainBatch batch;
            if (cfg.objective == Objective::MultiPositive) {
                std::vector<BatchImage> images;
                for (int k = 0; k < n; ++k) {
                    const std::size_t rec = order[start + k];
                    image_graphs.push_back(corpus[rec].image_graph);
                    images.push_back({std::to_string(rec), prepared[rec].samples});
                }
                batch = build_batch(images, batch_cfg, cache);
                for (const auto& set : batch.pos_sets)
                    max_pos_seen = std::max(max_pos_seen, static_cast<int>(set.size()));
            } else {
                // one caption per image, no hard negatives
                batch.n_pos = n;
                for (int k = 0; k < n; ++k) {
                    const std::size_t rec = order[start + k];
                    image_graphs.push_back(corpus[rec].image_graph);
                    batch.image_ids.push_back(std::to_string(rec));
                    batch.texts.push_back(corpus[rec].caption);
                    batch.pos_owner.push_back(k);
                    batch.pos_sets.push_back({k});
                }
                max_pos_seen = std::max(max_pos_seen, 1);
            }

            const PipelineGradients grads =
                batch_loss_and_gradients(image_graphs, batch, params, cfg.objective);
            // the multi-positive loss is a per-batch sum (no 1/n factor),
            // while the baseline loss is a mean; average the applied step
            // over the image batch so one learning rate fits both
            const double step = cfg.objective == Objective::MultiPositive
                                    ? cfg.learning_rate / n
                                    : cfg.learning_rate;
            params.w_text -= step * grads.grad_w_text;
            params.w_image -= step * grads.grad_w_image;
            if (params.temperature.trainable) {
                params.temperature.log_tau -= step * grads.grad_log_tau;
                params.temperature.clamp();
            }
            loss_sum += grads.loss;
            ++steps;
        }

        EpochMetrics metrics;
        metrics.epoch = epoch;
        metrics.loss = steps > 0 ? loss_sum / steps : 0.0;
        metrics.swap_accuracy = evaluate_swap_retrieval(params, eval_pairs);
        metrics.stage = stage1 ? 1 : 2;
        metrics.max_positives_seen = max_pos_seen;
        result.history.push_back(metrics);
    }
    return result;
}

void write_metrics_csv(const std::vector<EpochMetrics>& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot open " + path + " for writing");
    out << "epoch,loss,swap_accuracy,stage\n";
    char line[128];
    for (const auto& m : history) {
        std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%d\n", m.epoch, m.loss,
                      m.swap_accuracy, m.stage);
        out << line;
    }
}

}  // namespace sgcl
