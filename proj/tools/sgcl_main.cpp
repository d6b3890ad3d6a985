#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgcl/batch_builder.hpp"
#include "sgcl/caption_parser.hpp"
#include "sgcl/contrastive.hpp"
#include "sgcl/decomposer.hpp"
#include "sgcl/errors.hpp"
#include "sgcl/json_io.hpp"
#include "sgcl/negative_miner.hpp"
#include "sgcl/renderer.hpp"
#include "sgcl/rng.hpp"
#include "sgcl/synthetic.hpp"
#include "sgcl/trainer.hpp"

namespace {

using nlohmann::json;
using namespace sgcl;

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot open " + path + " for writing");
    return out;
}

// ---- decomposition records: {"image_id":i,"positives":[graph,...]} ----

struct PositiveRecord {
    int image_id = 0;
    std::vector<SceneGraph> positives;
};

void write_positive_records(const std::vector<PositiveRecord>& records,
                            const std::string& path) {
    auto out = open_out(path);
    for (const auto& rec : records) {
        json positives = json::array();
        for (const auto& g : rec.positives) positives.push_back(graph_to_json(g));
        out << json{{"image_id", rec.image_id}, {"positives", positives}}.dump() << '\n';
    }
}

std::vector<PositiveRecord> read_positive_records(const std::string& path) {
    std::vector<PositiveRecord> records;
    std::size_t line_no = 0;
    for (const auto& line : read_lines(path)) {
        ++line_no;
        try {
            auto j = json::parse(line);
            PositiveRecord rec;
            rec.image_id = j.at("image_id").get<int>();
            for (const auto& g : j.at("positives")) rec.positives.push_back(graph_from_json(g));
            records.push_back(std::move(rec));
        } catch (const std::exception& e) {
            throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

// ---- augmented records: {"image_id":i,"samples":[{"positive":g,"negatives":[...]}]} ----

struct AugmentedRecord {
    int image_id = 0;
    std::vector<SubGraphSample> samples;
};

void write_augmented_records(const std::vector<AugmentedRecord>& records,
                             const std::string& path) {
    auto out = open_out(path);
    for (const auto& rec : records) {
        json samples = json::array();
        for (const auto& sample : rec.samples) {
            json negatives = json::array();
            for (const auto& neg : sample.negatives)
                negatives.push_back({{"graph", graph_to_json(neg.graph)},
                                     {"category", to_string(neg.category)},
                                     {"technique", to_string(neg.technique)}});
            samples.push_back(
                {{"positive", graph_to_json(sample.positive)}, {"negatives", negatives}});
        }
        out << json{{"image_id", rec.image_id}, {"samples", samples}}.dump() << '\n';
    }
}

std::vector<AugmentedRecord> read_augmented_records(const std::string& path) {
    std::vector<AugmentedRecord> records;
    std::size_t line_no = 0;
    for (const auto& line : read_lines(path)) {
        ++line_no;
        try {
            auto j = json::parse(line);
            AugmentedRecord rec;
            rec.image_id = j.at("image_id").get<int>();
            for (const auto& s : j.at("samples")) {
                SubGraphSample sample;
                sample.positive = graph_from_json(s.at("positive"));
                for (const auto& n : s.at("negatives")) {
                    Negative neg;
                    neg.graph = graph_from_json(n.at("graph"));
                    neg.category = category_from_string(n.at("category").get<std::string>());
                    neg.technique = technique_from_string(n.at("technique").get<std::string>());
                    sample.negatives.push_back(std::move(neg));
                }
                rec.samples.push_back(std::move(sample));
            }
            records.push_back(std::move(rec));
        } catch (const std::exception& e) {
            throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

json batch_to_json(const TrainBatch& batch) {
    return {{"image_ids", batch.image_ids}, {"texts", batch.texts},
            {"n_pos", batch.n_pos},         {"pos_owner", batch.pos_owner},
            {"pos_sets", batch.pos_sets},   {"deficit", batch.deficit}};
}

// ---- stage implementations shared by single subcommands and `pipeline` ----

std::vector<SceneGraph> stage_parse(const std::string& captions_path,
                                    const std::string& lexicon_dir) {
    const Lexicon lex = Lexicon::load(lexicon_dir);
    std::vector<SceneGraph> graphs;
    std::size_t line_no = 0;
    for (const auto& line : read_lines(captions_path)) {
        ++line_no;
        try {
            graphs.push_back(parse_caption(line, lex));
        } catch (const Error& e) {
            throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return graphs;
}

std::vector<PositiveRecord> stage_decompose(const std::vector<SceneGraph>& graphs,
                                            DecompositionConfig cfg, std::uint64_t seed) {
    std::vector<PositiveRecord> records;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        cfg.seed = mix_seed(seed, i);
        records.push_back({static_cast<int>(i), decompose(graphs[i], cfg)});
    }
    return records;
}

std::vector<AugmentedRecord> stage_augment(const std::vector<PositiveRecord>& positives,
                                           const Vocab& vocab, NegativeSpec spec,
                                           std::uint64_t seed) {
    std::vector<AugmentedRecord> records;
    for (const auto& rec : positives) {
        spec.seed = mix_seed(seed, static_cast<std::uint64_t>(rec.image_id));
        records.push_back({rec.image_id, mine_negatives(rec.positives, vocab, spec)});
    }
    return records;
}

std::vector<TrainBatch> stage_batch(const std::vector<AugmentedRecord>& records,
                                    BatchConfig cfg) {
    SentenceCache cache;
    std::vector<TrainBatch> batches;
    const int requested_tbs = cfg.text_batch_size;
    for (std::size_t start = 0; start < records.size(); start += cfg.image_batch) {
        const std::size_t count =
            std::min<std::size_t>(cfg.image_batch, records.size() - start);
        BatchConfig group_cfg = cfg;
        group_cfg.image_batch = static_cast<int>(count);
        group_cfg.text_batch_size = requested_tbs;  // 0 keeps the per-group default
        std::vector<BatchImage> images;
        for (std::size_t k = 0; k < count; ++k)
            images.push_back({std::to_string(records[start + k].image_id),
                              records[start + k].samples});
        batches.push_back(build_batch(images, group_cfg, cache));
    }
    return batches;
}

SyntheticVocab vocab_from_corpus(const std::vector<SyntheticRecord>& corpus) {
    std::vector<SceneGraph> graphs;
    for (const auto& rec : corpus) graphs.push_back(rec.image_graph);
    const Vocab v = Vocab::from_corpus(graphs);
    return {v.objects, v.attributes, v.relations};
}

int run_losscheck(int batches, std::uint64_t seed) {
    Rng rng(seed);
    double worst_clip = 0.0, worst_multi = 0.0;
    for (int b = 0; b < batches; ++b) {
        const int n = 2 + static_cast<int>(rng.index(6));
        const int d = 4 + static_cast<int>(rng.index(12));
        const int m = n + static_cast<int>(rng.index(8));
        const int r = static_cast<int>(rng.index(12));
        Matrix U(n, d), V(m + r, d);
        for (int i = 0; i < n; ++i) {
            Vector v(d);
            for (int k = 0; k < d; ++k) v(k) = rng.uniform(-1, 1);
            U.row(i) = normalize(v).transpose();
        }
        for (int j = 0; j < m + r; ++j) {
            Vector v(d);
            for (int k = 0; k < d; ++k) v(k) = rng.uniform(-1, 1);
            V.row(j) = normalize(v).transpose();
        }
        std::vector<std::vector<int>> pos_sets(n);
        std::vector<int> pos_owner(m);
        for (int j = 0; j < m; ++j) {
            const int owner = j < n ? j : static_cast<int>(rng.index(n));
            pos_owner[j] = owner;
            pos_sets[owner].push_back(j);
        }
        const double log_tau = std::log(rng.uniform(0.5, 10.0));
        worst_multi = std::max(
            worst_multi,
            check_gradients(
                [&](const Matrix& A, const Matrix& B, double lt) {
                    return multi_positive_loss(A, B, pos_sets, pos_owner, m, std::exp(lt));
                },
                U, V, log_tau, 1e-5));
        Matrix Vc = V.topRows(n);
        worst_clip = std::max(
            worst_clip, check_gradients(
                            [&](const Matrix& A, const Matrix& B, double lt) {
                                return clip_loss(A, B, std::exp(lt));
                            },
                            U, Vc, log_tau, 1e-5));
    }
    std::cout << "clip max relative gradient error:  " << worst_clip << '\n';
    std::cout << "multi max relative gradient error: " << worst_multi << '\n';
    return (worst_clip <= 1e-5 && worst_multi <= 1e-5) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scene-graph contrastive data pipeline and toy trainer"};
    app.require_subcommand(1);
    app.set_config("--config");

    // parse
    std::string captions_path, lexicon_dir, out_path;
    auto* cmd_parse = app.add_subcommand("parse", "captions -> scene graphs (JSONL)");
    cmd_parse->add_option("--captions", captions_path)->required();
    cmd_parse->add_option("--lexicon-dir", lexicon_dir)->required();
    cmd_parse->add_option("--out", out_path)->required();

    // decompose
    std::string graphs_path;
    DecompositionConfig dec_cfg;
    std::uint64_t seed = 0;
    auto* cmd_dec = app.add_subcommand("decompose", "graphs -> positive sub-graph sets");
    cmd_dec->add_option("--graphs", graphs_path)->required();
    cmd_dec->add_option("--max-subgraphs", dec_cfg.max_subgraphs);
    cmd_dec->add_option("--max-attr-subset", dec_cfg.max_attr_subset);
    cmd_dec->add_option("--seed", seed);
    cmd_dec->add_option("--out", out_path)->required();

    // augment
    std::string positives_path, vocab_dir;
    NegativeSpec neg_spec;
    auto* cmd_aug = app.add_subcommand("augment", "positives -> hard negative samples");
    cmd_aug->add_option("--positives", positives_path)->required();
    cmd_aug->add_option("--vocab-dir", vocab_dir);
    cmd_aug->add_option("--p-obj", neg_spec.p_obj);
    cmd_aug->add_option("--p-rel", neg_spec.p_rel);
    cmd_aug->add_option("--p-attr", neg_spec.p_attr);
    cmd_aug->add_option("--max-neg", neg_spec.max_negatives_per_positive);
    cmd_aug->add_flag("--no-join", "disable join negatives");
    cmd_aug->add_option("--seed", seed);
    cmd_aug->add_option("--out", out_path)->required();

    // render
    auto* cmd_render = app.add_subcommand("render", "graphs -> sentences");
    cmd_render->add_option("--graphs", graphs_path)->required();
    cmd_render->add_option("--out", out_path)->required();

    // batch
    std::string corpus_path;
    BatchConfig batch_cfg;
    auto* cmd_batch = app.add_subcommand("batch", "augmented samples -> training batches");
    cmd_batch->add_option("--corpus", corpus_path)->required();
    cmd_batch->add_option("--n", batch_cfg.image_batch);
    cmd_batch->add_option("--max-pos", batch_cfg.max_pos_per_image);
    cmd_batch->add_option("--max-neg", batch_cfg.max_neg_per_image);
    cmd_batch->add_option("--text-batch-size", batch_cfg.text_batch_size);
    cmd_batch->add_option("--stage", batch_cfg.curriculum_stage);
    cmd_batch->add_option("--seed", seed);
    cmd_batch->add_option("--out", out_path)->required();

    // losscheck
    int losscheck_batches = 100;
    auto* cmd_loss = app.add_subcommand("losscheck", "finite-difference gradient suite");
    cmd_loss->add_option("--batches", losscheck_batches);
    cmd_loss->add_option("--seed", seed);

    // train-toy
    TrainerConfig train_cfg;
    std::string eval_pairs_path, metrics_path, params_out, objective_name = "multi";
    auto* cmd_train = app.add_subcommand("train-toy", "desk-scale curriculum training");
    cmd_train->add_option("--corpus", corpus_path)->required();
    cmd_train->add_option("--epochs", train_cfg.schedule.total_epochs);
    cmd_train->add_option("--stage1-epochs", train_cfg.schedule.stage1_epochs);
    cmd_train->add_option("--n", train_cfg.batch_images);
    cmd_train->add_option("--max-pos", train_cfg.max_pos_per_image);
    cmd_train->add_option("--max-neg", train_cfg.max_neg_per_image);
    cmd_train->add_option("--p-obj", train_cfg.negatives.p_obj);
    cmd_train->add_option("--p-rel", train_cfg.negatives.p_rel);
    cmd_train->add_option("--p-attr", train_cfg.negatives.p_attr);
    cmd_train->add_option("--lr", train_cfg.learning_rate);
    cmd_train->add_option("--seed", train_cfg.seed);
    cmd_train->add_option("--hash-dim", train_cfg.hash_dim);
    cmd_train->add_option("--embed-dim", train_cfg.embed_dim);
    cmd_train->add_option("--objective", objective_name)
        ->check(CLI::IsMember({"multi", "clip"}));
    cmd_train->add_option("--eval-pairs", eval_pairs_path);
    cmd_train->add_option("--metrics-out", metrics_path)->required();
    cmd_train->add_option("--params-out", params_out);

    // eval
    std::string params_path, pairs_path;
    auto* cmd_eval = app.add_subcommand("eval", "swap retrieval accuracy");
    cmd_eval->add_option("--params", params_path)->required();
    cmd_eval->add_option("--pairs", pairs_path)->required();

    // pipeline
    BatchConfig pipe_batch_cfg;
    NegativeSpec pipe_neg_spec;
    DecompositionConfig pipe_dec_cfg;
    auto* cmd_pipe = app.add_subcommand("pipeline", "parse -> decompose -> augment -> batch");
    cmd_pipe->add_option("--captions", captions_path)->required();
    cmd_pipe->add_option("--lexicon-dir", lexicon_dir)->required();
    cmd_pipe->add_option("--vocab-dir", vocab_dir);
    cmd_pipe->add_option("--max-subgraphs", pipe_dec_cfg.max_subgraphs);
    cmd_pipe->add_option("--p-obj", pipe_neg_spec.p_obj);
    cmd_pipe->add_option("--p-rel", pipe_neg_spec.p_rel);
    cmd_pipe->add_option("--p-attr", pipe_neg_spec.p_attr);
    cmd_pipe->add_option("--max-neg", pipe_neg_spec.max_negatives_per_positive);
    cmd_pipe->add_option("--n", pipe_batch_cfg.image_batch);
    cmd_pipe->add_option("--max-pos", pipe_batch_cfg.max_pos_per_image);
    cmd_pipe->add_option("--max-neg-per-image", pipe_batch_cfg.max_neg_per_image);
    cmd_pipe->add_option("--text-batch-size", pipe_batch_cfg.text_batch_size);
    cmd_pipe->add_option("--stage", pipe_batch_cfg.curriculum_stage);
    cmd_pipe->add_option("--seed", seed);
    cmd_pipe->add_option("--out", out_path)->required();

    // gen-corpus (synthetic data for train-toy / eval)
    int gen_records = 2000, gen_pairs = 1000;
    int gen_objects = 50, gen_attributes = 20, gen_relations = 10;
    std::string pairs_out;
    auto* cmd_gen = app.add_subcommand("gen-corpus", "synthetic corpus and eval pairs");
    cmd_gen->add_option("--records", gen_records);
    cmd_gen->add_option("--objects", gen_objects);
    cmd_gen->add_option("--attributes", gen_attributes);
    cmd_gen->add_option("--relations", gen_relations);
    cmd_gen->add_option("--pairs", gen_pairs);
    cmd_gen->add_option("--seed", seed);
    cmd_gen->add_option("--out", out_path)->required();
    cmd_gen->add_option("--pairs-out", pairs_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_parse->parsed()) {
            const auto graphs = stage_parse(captions_path, lexicon_dir);
            auto out = open_out(out_path);
            for (const auto& g : graphs) out << serialize_graph(g) << '\n';
        } else if (cmd_dec->parsed()) {
            write_positive_records(stage_decompose(load_graph_jsonl(graphs_path), dec_cfg, seed),
                                   out_path);
        } else if (cmd_aug->parsed()) {
            const auto positives = read_positive_records(positives_path);
            Vocab vocab;
            if (!vocab_dir.empty()) {
                vocab = Vocab::load(vocab_dir);
            } else {
                std::vector<SceneGraph> all;
                for (const auto& rec : positives)
                    all.insert(all.end(), rec.positives.begin(), rec.positives.end());
                vocab = Vocab::from_corpus(all);
            }
            neg_spec.join_enabled = cmd_aug->count("--no-join") == 0;
            write_augmented_records(stage_augment(positives, vocab, neg_spec, seed), out_path);
        } else if (cmd_render->parsed()) {
            auto out = open_out(out_path);
            for (const auto& g : load_graph_jsonl(graphs_path)) out << render(g) << '\n';
        } else if (cmd_batch->parsed()) {
            batch_cfg.seed = seed;
            auto out = open_out(out_path);
            for (const auto& b : stage_batch(read_augmented_records(corpus_path), batch_cfg))
                out << batch_to_json(b).dump() << '\n';
        } else if (cmd_loss->parsed()) {
            return run_losscheck(losscheck_batches, seed);
        } else if (cmd_train->parsed()) {
            const auto corpus = load_corpus_jsonl(corpus_path);
            std::vector<EvalPair> eval_pairs;
            if (!eval_pairs_path.empty()) eval_pairs = load_eval_pairs_jsonl(eval_pairs_path);
            train_cfg.objective =
                objective_name == "clip" ? Objective::ClipBaseline : Objective::MultiPositive;
            const auto result = train(corpus, eval_pairs, vocab_from_corpus(corpus), train_cfg);
            write_metrics_csv(result.history, metrics_path);
            if (!params_out.empty()) result.params.save(params_out);
        } else if (cmd_eval->parsed()) {
            const auto params = EncoderParams::load(params_path);
            const auto pairs = load_eval_pairs_jsonl(pairs_path);
            std::cout << evaluate_swap_retrieval(params, pairs) << '\n';
        } else if (cmd_pipe->parsed()) {
            const auto graphs = stage_parse(captions_path, lexicon_dir);
            const auto positives = stage_decompose(graphs, pipe_dec_cfg, seed);
            Vocab vocab;
            if (!vocab_dir.empty()) {
                vocab = Vocab::load(vocab_dir);
            } else {
                std::vector<SceneGraph> all;
                for (const auto& rec : positives)
                    all.insert(all.end(), rec.positives.begin(), rec.positives.end());
                vocab = Vocab::from_corpus(all);
            }
            const auto augmented = stage_augment(positives, vocab, pipe_neg_spec, seed);
            pipe_batch_cfg.seed = seed;
            auto out = open_out(out_path);
            for (const auto& b : stage_batch(augmented, pipe_batch_cfg))
                out << batch_to_json(b).dump() << '\n';
        } else if (cmd_gen->parsed()) {
            const auto vocab = make_synthetic_vocab(gen_objects, gen_attributes, gen_relations);
            save_corpus_jsonl(make_corpus(vocab, gen_records, seed), out_path);
            if (!pairs_out.empty())
                save_eval_pairs_jsonl(make_eval_pairs(vocab, gen_pairs, mix_seed(seed, 0xEE)),
                                      pairs_out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
