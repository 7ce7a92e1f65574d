// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

// disfl command-line tool. Every subcommand reads its options from flags or
// from a --manifest file (INI/TOML, one [section] per subcommand; flags win)
// and writes a run record next to its main output.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "disfl/corpus/io.hpp"
#include "disfl/corpus/labels.hpp"
#include "disfl/corpus/merge.hpp"
#include "disfl/corpus/preprocess.hpp"
#include "disfl/corpus/synth.hpp"
#include "disfl/error.hpp"
#include "disfl/metrics/latency.hpp"
#include "disfl/metrics/plot.hpp"
#include "disfl/metrics/prf.hpp"
#include "disfl/metrics/size.hpp"
#include "disfl/model/checkpoint_io.hpp"
#include "disfl/model/tagger.hpp"
#include "disfl/quantize/quantize.hpp"
#include "disfl/selftrain/self_train.hpp"
#include "disfl/selftrain/silver.hpp"
#include "disfl/tokenizer/wordpiece.hpp"
#include "disfl/training/finetune.hpp"
#include "disfl/training/pretrain.hpp"
#include "disfl/training/sweep.hpp"
#include "run_record.hpp"

namespace fs = std::filesystem;
using namespace disfl;
using cli::RunRecord;

namespace {

// Exit codes by failure class.
enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kBadInput = 4,
  kModel = 5,
  kTraining = 6,
  kProvenance = 7,
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::IoError: return kIo;
    case ErrorCode::InvalidArgument:
    case ErrorCode::VocabTooSmall:
    case ErrorCode::EmptySilverWithPositivePct: return kUsage;
    case ErrorCode::UnbalancedMarkers:
    case ErrorCode::MisplacedInterruptionPoint:
    case ErrorCode::EmptyReparandum:
    case ErrorCode::UnsortedInput:
    case ErrorCode::EmptyInputCorpus:
    case ErrorCode::MalformedRecord:
    case ErrorCode::AlignmentMismatch: return kBadInput;
    case ErrorCode::ShapeMismatch:
    case ErrorCode::IdOutOfRange:
    case ErrorCode::CorruptFile:
    case ErrorCode::MissingTensor:
    case ErrorCode::NonFiniteValues:
    case ErrorCode::AlreadyQuantized:
    case ErrorCode::NotQuantized: return kModel;
    case ErrorCode::AllPositionsIgnored:
    case ErrorCode::NonFiniteGradient: return kTraining;
    case ErrorCode::VocabMismatch:
    case ErrorCode::ProvenanceViolation: return kProvenance;
  }
  return kInternal;
}

void error_line(const std::string& command, const std::string& code, const std::string& message,
                std::optional<std::size_t> line = std::nullopt) {
  nlohmann::json j{{"error", code}, {"message", message}, {"command", command}};
  if (line) j["line"] = *line;
  std::cerr << j.dump() << "\n";
}

fs::path record_path(const std::string& explicit_path, const fs::path& primary, const std::string& command) {
  if (!explicit_path.empty()) return explicit_path;
  if (!primary.empty()) return fs::path(primary.string() + ".run.json");
  return fs::path("disfl-" + command + ".run.json");
}

bool is_tsv(const fs::path& p) { return p.extension() == ".tsv"; }

// Word sequences from a label TSV (by extension) or plain one-sentence-per-line text.
std::vector<WordSequence> read_words(const fs::path& p) {
  if (!is_tsv(p)) return read_sentences(p);
  std::vector<WordSequence> out;
  for (auto& s : read_labels_tsv(p)) out.push_back(std::move(s.words));
  return out;
}

std::vector<LabeledSequence> read_gold(const fs::path& p, LabelScheme scheme) {
  auto corpus = read_labels_tsv(p, Origin::Gold);
  for (auto& s : corpus) s = restrict_to_scheme(std::move(s), scheme);
  return corpus;
}

struct ModelShape {
  std::size_t layers = 2;
  std::size_t hidden = 32;
  std::size_t heads = 2;
  std::size_t max_positions = 128;
  std::size_t segments = 2;
  double dropout = 0.1;
  std::uint64_t init_seed = 0;
  std::string init;

  void add(CLI::App* c) {
    c->add_option("--init", init, "Start from this checkpoint instead of a fresh model");
    c->add_option("--layers", layers, "Encoder layers")->capture_default_str();
    c->add_option("--hidden", hidden, "Hidden size")->capture_default_str();
    c->add_option("--heads", heads, "Attention heads")->capture_default_str();
    c->add_option("--max-positions", max_positions, "Position table size")->capture_default_str();
    c->add_option("--segments", segments, "Segment table size (0 drops it)")->capture_default_str();
    c->add_option("--dropout", dropout, "Dropout on hidden states")->capture_default_str();
    c->add_option("--init-seed", init_seed, "Seed of the fresh model's weights")->capture_default_str();
  }

  Checkpoint make(const Vocab& v, RunRecord& rec) const {
    if (!init.empty()) {
      rec.input(init);
      return load_checkpoint(init);
    }
    ModelConfig c = ModelConfig::make(layers, hidden, heads, v.size());
    c.max_positions = max_positions;
    c.segments = segments;
    c.dropout = dropout;
    c.validate();
    Checkpoint ck = init_checkpoint(c, init_seed);
    ck.vocab_digest = v.digest();
    return ck;
  }
};

struct TrainOptions {
  TrainConfig cfg;
  std::string schedule = "linear";

  void add(CLI::App* c, bool with_epochs = true) {
    c->add_option("--lr", cfg.learning_rate, "Peak learning rate")->capture_default_str();
    c->add_option("--batch", cfg.batch_size, "Batch size")->capture_default_str();
    if (with_epochs) c->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
    c->add_option("--schedule", schedule, "linear|constant")->capture_default_str();
    c->add_option("--weight-decay", cfg.weight_decay, "Decoupled weight decay")->capture_default_str();
    c->add_option("--eval-every", cfg.eval_every, "Steps between evaluations (0: per epoch)")->capture_default_str();
    c->add_option("--seed", cfg.seed, "Run seed")->capture_default_str();
  }

  TrainConfig get() const {
    TrainConfig c = cfg;
    c.schedule = parse_schedule(schedule);
    c.validate();
    return c;
  }
};

void save_training(const TrainResult& r, const fs::path& out, const std::string& history, RunRecord& rec) {
  save_checkpoint(r.best, out);
  rec.output(out);
  if (!history.empty()) {
    write_history(history, r.history);
    rec.output(history);
  }
  rec.extra()["best_dev_f1"] = r.best_dev_f1;
  rec.extra()["best_step"] = r.best_step;
  rec.extra()["steps"] = r.steps;
  std::printf("best dev F1 %.4f at step %zu of %zu\n", r.best_dev_f1, r.best_step, r.steps);
}

void print_prf(const EvalReport& r) {
  std::printf("P=%.4f R=%.4f F1=%.4f", r.precision, r.recall, r.f1);
  if (r.no_positives) std::printf(" (no positives)");
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tiny transformer encoders for token-level disfluency detection"};
  app.require_subcommand(1);
  app.set_config("--manifest", "", "Experiment manifest; command-line flags override it");
  std::string record_override;
  app.add_option("--record", record_override, "Run record path (default: <output>.run.json)");
  app.set_version_flag("--version", DISFL_VERSION);

  std::string scheme_name = "reparandum-interregnum";
  auto add_scheme = [&](CLI::App* c) {
    c->add_option("--scheme", scheme_name, "reparandum-interregnum|reparandum-only")->capture_default_str();
  };
  std::string vocab_path;
  auto add_vocab = [&](CLI::App* c) { c->add_option("--vocab", vocab_path, "Vocabulary file")->required(); };

  // The action runs after parsing; it returns the primary output path.
  std::function<fs::path(RunRecord&)> action;
  // Effective options of the chosen subcommand in manifest syntax; unset
  // (empty) values are left out so the text can be fed back to --manifest.
  auto manifest = [&](const std::string& command) {
    std::istringstream all(app.config_to_str(true, false));
    std::string line, out;
    while (std::getline(all, line)) {
      if (line.rfind(command + ".", 0) == 0 && line.find("=\"\"") == std::string::npos) out += line + "\n";
    }
    return out;
  };

  // prepare
  auto* prepare = app.add_subcommand("prepare", "Bracket annotations or turn transcripts to token-label TSV");
  std::string prep_in, prep_out, prep_sentences;
  bool prep_turns = false, keep_commas = false;
  MergeOptions merge;
  prepare->add_option("--input", prep_in, "Annotation file, or turn TSV with --turns")->required();
  prepare->add_option("--out", prep_out, "Token-label TSV")->required();
  prepare->add_option("--sentences-out", prep_sentences, "Also write the cleaned words, one sentence per line");
  prepare->add_flag("--turns", prep_turns, "Input is conversation<TAB>speaker<TAB>start<TAB>text");
  prepare->add_option("--max-gap", merge.max_gap, "Turn merge gap in seconds")->capture_default_str();
  prepare->add_option("--max-len", merge.max_len, "Words per merged utterance")->capture_default_str();
  prepare->add_flag("--keep-commas", keep_commas, "Do not strip commas");
  add_scheme(prepare);
  prepare->callback([&] {
    action = [&](RunRecord& rec) {
      const LabelScheme scheme = parse_scheme(scheme_name);
      std::vector<AnnotatedSentence> raw;
      if (prep_turns) {
        for (const auto& [conv, turns] : read_turns_tsv(prep_in)) {
          for (const auto& u : merge_utterances(turns, merge)) {
            std::string text;
            for (const auto& w : u.words) text += (text.empty() ? "" : " ") + w;
            AnnotatedSentence s = parse_annotation(text);
            s.doc_id = conv;
            s.speaker = u.speaker;
            s.timestamp = u.start;
            raw.push_back(std::move(s));
          }
        }
      } else {
        raw = read_annotations(prep_in);
      }
      rec.input(prep_in);
      PreprocessOptions popt;
      popt.remove_commas = !keep_commas;
      std::vector<LabeledSequence> out;
      std::vector<WordSequence> words;
      for (const auto& s : raw) {
        auto l = to_labels(preprocess(s, popt), scheme, Origin::Gold);
        if (l.words.empty()) continue;
        words.push_back(l.words);
        out.push_back(std::move(l));
      }
      write_labels_tsv(prep_out, out);
      rec.output(prep_out);
      if (!prep_sentences.empty()) {
        write_sentences(prep_sentences, words);
        rec.output(prep_sentences);
      }
      const CorpusStats st = stats(out);
      std::printf("sentences\tdocs\twords\tdisfluent_sentences\tdisfluent_spans\n%zu\t%zu\t%zu\t%zu\t%zu\n",
                  st.sentences, st.docs, st.words, st.disfluent_sentences, st.disfluent_spans);
      rec.extra() = {{"sentences", st.sentences},
                     {"docs", st.docs},
                     {"words", st.words},
                     {"disfluent_sentences", st.disfluent_sentences},
                     {"disfluent_spans", st.disfluent_spans}};
      return fs::path(prep_out);
    };
  });

  // synth
  auto* synth = app.add_subcommand("synth", "Generate fluent text and simulated disfluencies");
  std::size_t synth_docs = 100, synth_per_doc = 10;
  std::string synth_out, synth_docs_out;
  SynthParams sp;
  synth->add_option("--docs", synth_docs, "Documents")->capture_default_str();
  synth->add_option("--sentences-per-doc", synth_per_doc, "Sentences per document")->capture_default_str();
  synth->add_option("--p-disfluent", sp.p_disfluent, "Probability a sentence gets disfluencies")
      ->capture_default_str();
  synth->add_option("--max-reparandum", sp.max_reparandum_len, "Longest reparandum")->capture_default_str();
  synth->add_option("--p-extra-edit", sp.p_extra_edit, "Probability of each further edit")->capture_default_str();
  std::vector<double> type_weights(sp.type_weights.begin(), sp.type_weights.end());
  synth->add_option("--type-weights", type_weights, "repetition restart interregnum filled-pause")
      ->expected(4)
      ->capture_default_str();
  synth->add_option("--seed", sp.seed, "Seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Bracket annotation file")->required();
  synth->add_option("--documents-out", synth_docs_out, "Also write the disfluent text as documents");
  synth->callback([&] {
    action = [&](RunRecord& rec) {
      rec.seed(sp.seed);
      std::copy(type_weights.begin(), type_weights.end(), sp.type_weights.begin());
      const auto docs = generate_fluent_documents(synth_docs, synth_per_doc, sp.seed);
      std::vector<WordSequence> flat;
      for (const auto& d : docs) flat.insert(flat.end(), d.begin(), d.end());
      auto sentences = generate_synthetic(flat, sp);
      std::vector<Document> out_docs;
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        sentences[i].doc_id = "synth-" + std::to_string(i / synth_per_doc);
        if (i % synth_per_doc == 0) out_docs.emplace_back();
        const auto words = preprocess(sentences[i]).words;
        if (!words.empty()) out_docs.back().push_back(words);
      }
      write_annotations(synth_out, sentences);
      rec.output(synth_out);
      if (!synth_docs_out.empty()) {
        write_documents(synth_docs_out, out_docs);
        rec.output(synth_docs_out);
      }
      std::printf("%zu sentences in %zu documents\n", sentences.size(), out_docs.size());
      return fs::path(synth_out);
    };
  });

  // vocab
  auto* vocab = app.add_subcommand("vocab", "Train a WordPiece vocabulary");
  std::vector<std::string> vocab_inputs;
  std::string vocab_out;
  std::size_t vocab_size = 5000, min_freq = 1;
  vocab->add_option("--input", vocab_inputs, "Label TSV (.tsv) or one-sentence-per-line text files")->required();
  vocab->add_option("--size", vocab_size, "Target vocabulary size")->capture_default_str();
  vocab->add_option("--min-frequency", min_freq, "Minimum pair count for a merge")->capture_default_str();
  vocab->add_option("--out", vocab_out, "Vocabulary file")->required();
  vocab->callback([&] {
    action = [&](RunRecord& rec) {
      std::vector<WordSequence> corpus;
      for (const auto& p : vocab_inputs) {
        auto w = read_words(p);
        corpus.insert(corpus.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
        rec.input(p);
      }
      const Vocab v = train_wordpiece(corpus, vocab_size, min_freq);
      v.save(vocab_out);
      rec.output(vocab_out);
      rec.extra()["size"] = v.size();
      rec.extra()["digest"] = v.digest();
      std::printf("%zu tokens, digest %s\n", v.size(), v.digest().c_str());
      return fs::path(vocab_out);
    };
  });

  // pretrain
  auto* pre = app.add_subcommand("pretrain", "Masked-LM plus next-sentence pretraining");
  ModelShape pre_shape;
  TrainOptions pre_train;
  PretrainOptions pre_opt;
  std::size_t pre_steps = 1000;
  std::string pre_docs, pre_out, pre_history, pre_snapshots, probe_train, probe_dev;
  std::size_t probe_epochs = 3;
  pre_shape.add(pre);
  pre_train.add(pre, false);
  add_vocab(pre);
  add_scheme(pre);
  pre->add_option("--docs", pre_docs, "Documents file (blank line between documents)")->required();
  pre->add_option("--steps", pre_steps, "Optimizer steps")->capture_default_str();
  pre->add_option("--mask-prob", pre_opt.mask_prob, "Token selection probability")->capture_default_str();
  pre->add_option("--max-length", pre_opt.max_length, "Pair length in tokens")->capture_default_str();
  pre->add_option("--out", pre_out, "Final checkpoint")->required();
  pre->add_option("--history", pre_history, "Loss history (JSON lines)");
  pre->add_option("--snapshot-dir", pre_snapshots, "Write every eval_every-step snapshot here");
  pre->add_option("--probe-train", probe_train, "Gold TSV; --out becomes the snapshot whose fine-tuned probe scores best");
  pre->add_option("--probe-dev", probe_dev, "Dev TSV for the probe")->needs(pre->get_option("--probe-train"));
  pre->get_option("--probe-train")->needs(pre->get_option("--probe-dev"));
  pre->add_option("--probe-epochs", probe_epochs, "Probe fine-tuning epochs")->capture_default_str();
  pre->callback([&] {
    action = [&](RunRecord& rec) {
      const Vocab v = Vocab::load(vocab_path);
      rec.input(vocab_path);
      const auto docs = read_documents(pre_docs);
      rec.input(pre_docs);
      TrainConfig cfg = pre_train.get();
      rec.seed(cfg.seed);
      pre_opt.batch_size = cfg.batch_size;
      const Checkpoint init = pre_shape.make(v, rec);
      const PretrainResult r = pretrain(init, v, docs, pre_steps, cfg, pre_opt);
      if (!pre_snapshots.empty()) {
        fs::create_directories(pre_snapshots);
        for (const auto& [step, ck] : r.checkpoints) {
          const fs::path p = fs::path(pre_snapshots) / ("step-" + std::to_string(step) + ".dfl");
          save_checkpoint(ck, p);
          rec.output(p);
        }
      }
      std::size_t chosen = r.checkpoints.size() - 1;
      if (!probe_train.empty()) {
        const auto gold = read_gold(probe_train, parse_scheme(scheme_name));
        const auto dev = read_gold(probe_dev, parse_scheme(scheme_name));
        rec.input(probe_train);
        rec.input(probe_dev);
        TrainConfig probe = cfg;
        probe.epochs = probe_epochs;
        probe.eval_every = 0;
        const ProbeResult pr = probe_snapshots(r.checkpoints, v, gold, dev, probe);
        chosen = pr.best;
        rec.extra()["probe_dev_f1"] = pr.dev_f1;
        rec.extra()["selected_step"] = r.checkpoints[chosen].first;
        std::printf("probe selected step %zu (dev F1 %.4f)\n", r.checkpoints[chosen].first, pr.dev_f1[chosen]);
      }
      save_checkpoint(r.checkpoints[chosen].second, pre_out);
      rec.output(pre_out);
      if (!pre_history.empty()) {
        write_history(pre_history, r.history);
        rec.output(pre_history);
      }
      rec.extra()["degenerate_pairs"] = r.degenerate;
      if (r.degenerate) std::fprintf(stderr, "warning: only one next-sentence class could be built\n");
      std::printf("%zu steps, %zu snapshots\n", pre_steps, r.checkpoints.size());
      return fs::path(pre_out);
    };
  });

  // finetune
  auto* ft = app.add_subcommand("finetune", "Fine-tune a tagger on gold data");
  ModelShape ft_shape;
  TrainOptions ft_train;
  std::string ft_train_path, ft_dev, ft_out, ft_history;
  ft_shape.add(ft);
  ft_train.add(ft);
  add_vocab(ft);
  add_scheme(ft);
  ft->add_option("--train", ft_train_path, "Gold label TSV")->required();
  ft->add_option("--dev", ft_dev, "Dev label TSV for checkpoint selection");
  ft->add_option("--out", ft_out, "Best checkpoint")->required();
  ft->add_option("--history", ft_history, "Training history (JSON lines)");
  ft->callback([&] {
    action = [&](RunRecord& rec) {
      const LabelScheme scheme = parse_scheme(scheme_name);
      const Vocab v = Vocab::load(vocab_path);
      rec.input(vocab_path);
      const auto train = read_gold(ft_train_path, scheme);
      rec.input(ft_train_path);
      std::vector<LabeledSequence> dev;
      if (!ft_dev.empty()) {
        dev = read_gold(ft_dev, scheme);
        rec.input(ft_dev);
      }
      const TrainConfig cfg = ft_train.get();
      rec.seed(cfg.seed);
      const TrainResult r = finetune(ft_shape.make(v, rec), v, train, dev, cfg);
      save_training(r, ft_out, ft_history, rec);
      return fs::path(ft_out);
    };
  });

  // label
  auto* label = app.add_subcommand("label", "Label unlabeled sentences with a teacher (silver data)");
  std::string teacher_path, label_in, label_out;
  label->add_option("--teacher", teacher_path, "Teacher checkpoint")->required();
  add_vocab(label);
  label->add_option("--input", label_in, "Sentences (text, or .tsv whose labels are ignored)")->required();
  label->add_option("--out", label_out, "Silver label TSV (metadata in <out>.meta.json)")->required();
  label->callback([&] {
    action = [&](RunRecord& rec) {
      const Vocab v = Vocab::load(vocab_path);
      rec.input(vocab_path);
      const Checkpoint teacher = load_checkpoint(teacher_path);
      rec.input(teacher_path);
      const auto words = read_words(label_in);
      rec.input(label_in);
      SilverCorpus silver = label_silver(teacher, v, words);
      silver.parameters = nlohmann::json{{"input", label_in}, {"vocab", v.digest()}}.dump();
      save_silver(silver, label_out);
      rec.output(label_out);
      rec.output(silver_meta_path(label_out));
      rec.extra()["mean_confidence"] = silver.mean_confidence;
      std::printf("%zu sentences labeled, mean confidence %.4f\n", silver.sequences.size(), silver.mean_confidence);
      return fs::path(label_out);
    };
  });

  // selftrain
  auto* st = app.add_subcommand("selftrain", "Fine-tune on gold mixed with silver batches");
  ModelShape st_shape;
  TrainOptions st_train;
  std::string st_gold, st_silver, st_dev, st_out, st_history;
  double silver_pct = 0.7;
  st_shape.add(st);
  st_train.add(st);
  add_vocab(st);
  add_scheme(st);
  st->add_option("--train", st_gold, "Gold label TSV")->required();
  st->add_option("--silver", st_silver, "Silver label TSV from `label`")->required();
  st->add_option("--silver-pct", silver_pct, "Silver share of every batch")->capture_default_str();
  st->add_option("--dev", st_dev, "Dev label TSV (gold)");
  st->add_option("--out", st_out, "Best checkpoint")->required();
  st->add_option("--history", st_history, "Training history (JSON lines)");
  st->callback([&] {
    action = [&](RunRecord& rec) {
      const LabelScheme scheme = parse_scheme(scheme_name);
      const Vocab v = Vocab::load(vocab_path);
      rec.input(vocab_path);
      const auto gold = read_gold(st_gold, scheme);
      rec.input(st_gold);
      SilverCorpus silver = load_silver(st_silver);
      for (auto& s : silver.sequences) s = restrict_to_scheme(std::move(s), scheme);
      rec.input(st_silver);
      std::vector<LabeledSequence> dev;
      if (!st_dev.empty()) {
        dev = read_gold(st_dev, scheme);
        rec.input(st_dev);
      }
      const TrainConfig cfg = st_train.get();
      rec.seed(cfg.seed);
      const TrainResult r = self_train(st_shape.make(v, rec), v, gold, silver, dev, cfg, MixPolicy{silver_pct});
      save_training(r, st_out, st_history, rec);
      return fs::path(st_out);
    };
  });

  // quantize
  auto* qz = app.add_subcommand("quantize", "Per-row int8 post-training quantization");
  std::string qz_in, qz_out;
  qz->add_option("--in", qz_in, "Float checkpoint")->required();
  qz->add_option("--out", qz_out, "Quantized checkpoint")->required();
  qz->callback([&] {
    action = [&](RunRecord& rec) {
      const Checkpoint f = load_checkpoint(qz_in);
      rec.input(qz_in);
      save_checkpoint(quantize_checkpoint(f), qz_out);
      rec.output(qz_out);
      const double a = file_size_mib(qz_in), b = file_size_mib(qz_out);
      rec.extra()["float_mib"] = a;
      rec.extra()["quantized_mib"] = b;
      std::printf("%.3f MiB -> %.3f MiB (ratio %.3f)\n", a, b, b / a);
      return fs::path(qz_out);
    };
  });

  // eval
  auto* ev = app.add_subcommand("eval", "Token-level precision, recall and F1");
  std::string ev_gold, ev_pred, ev_model, ev_report, ev_pred_out;
  ev->add_option("--gold", ev_gold, "Gold label TSV")->required();
  ev->add_option("--pred", ev_pred, "Predicted label TSV");
  ev->add_option("--model", ev_model, "Checkpoint to predict with (needs --vocab)");
  ev->add_option("--vocab", vocab_path, "Vocabulary file");
  ev->add_option("--pred-out", ev_pred_out, "Write the model's predictions as TSV");
  ev->add_option("--report", ev_report, "EvalReport JSON");
  add_scheme(ev);
  ev->callback([&] {
    if (ev_pred.empty() == ev_model.empty()) throw CLI::ValidationError("eval", "give exactly one of --pred, --model");
    if (!ev_model.empty() && vocab_path.empty()) throw CLI::ValidationError("eval", "--model needs --vocab");
    action = [&](RunRecord& rec) {
      const LabelScheme scheme = parse_scheme(scheme_name);
      const auto gold = read_gold(ev_gold, scheme);
      rec.input(ev_gold);
      std::vector<LabeledSequence> pred;
      EvalReport r;
      if (!ev_pred.empty()) {
        pred = read_gold(ev_pred, scheme);
        rec.input(ev_pred);
      } else {
        const Vocab v = Vocab::load(vocab_path);
        rec.input(vocab_path);
        const Checkpoint ck = load_checkpoint(ev_model);
        rec.input(ev_model);
        pred = predict_labels(Model(ck), v, gold);
        for (auto& s : pred) s = restrict_to_scheme(std::move(s), scheme);
        if (!ev_pred_out.empty()) {
          write_labels_tsv(ev_pred_out, pred);
          rec.output(ev_pred_out);
        }
      }
      r = token_prf(pred, gold);
      if (!ev_model.empty()) {
        const Checkpoint ck = load_checkpoint(ev_model);
        r.size_mib = file_size_mib(ev_model);
        r.config = describe(ck.config) + (ck.precision == Precision::Int8Quantized ? "/int8" : "");
      }
      print_prf(r);
      rec.extra() = nlohmann::json::parse(r.to_json());
      if (!ev_report.empty()) {
        std::ofstream(ev_report) << r.to_json() << "\n";
        rec.output(ev_report);
      }
      return fs::path(ev_report);
    };
  });

  // bench
  auto* bench = app.add_subcommand("bench", "Median batch inference latency");
  std::string bench_model, bench_in, bench_out;
  std::size_t bench_batch = 8;
  LatencyOptions lat;
  std::uint64_t bench_seed = 0;
  bench->add_option("--model", bench_model, "Checkpoint")->required();
  add_vocab(bench);
  bench->add_option("--input", bench_in, "Sentences; defaults to generated text");
  bench->add_option("--batch", bench_batch, "Sentences per batch")->capture_default_str();
  bench->add_option("--repeats", lat.repeats, "Timed runs (>= 11)")->capture_default_str();
  bench->add_option("--warmup", lat.warmup, "Discarded runs (>= 3)")->capture_default_str();
  bench->add_option("--seed", bench_seed, "Seed of the generated sentences")->capture_default_str();
  bench->add_option("--out", bench_out, "LatencyReport JSON");
  bench->callback([&] {
    action = [&](RunRecord& rec) {
      const Vocab v = Vocab::load(vocab_path);
      rec.input(vocab_path);
      const Checkpoint ck = load_checkpoint(bench_model);
      rec.input(bench_model);
      std::vector<WordSequence> sentences;
      if (!bench_in.empty()) {
        sentences = read_words(bench_in);
        rec.input(bench_in);
      } else {
        sentences = generate_fluent(bench_batch, bench_seed);
      }
      if (sentences.size() < bench_batch) {
        throw Error(ErrorCode::InvalidArgument, "need at least " + std::to_string(bench_batch) + " sentences");
      }
      sentences.resize(bench_batch);
      rec.seed(bench_seed);
      const LatencyReport r = bench_latency(Model(ck), v, sentences, lat);
      std::printf("median %.3f ms over %zu runs (batch %zu, length %zu, %zu thread)\n", r.median_ms, r.runs_ms.size(),
                  r.batch, r.length, r.threads);
      rec.extra() = nlohmann::json::parse(r.to_json());
      if (!bench_out.empty()) {
        std::ofstream(bench_out) << r.to_json() << "\n";
        rec.output(bench_out);
      }
      return fs::path(bench_out);
    };
  });

  // sweep
  auto* sw = app.add_subcommand("sweep", "Seeded random search over training hyperparameters");
  ModelShape sw_shape;
  TrainOptions sw_train;
  SweepSpace space;
  std::size_t trials = 8;
  std::uint64_t sweep_seed = 0;
  std::string sw_gold, sw_silver, sw_dev, sw_out;
  sw_shape.add(sw);
  sw_train.add(sw);
  add_vocab(sw);
  add_scheme(sw);
  sw->add_option("--train", sw_gold, "Gold label TSV")->required();
  sw->add_option("--silver", sw_silver, "Silver label TSV (enables --pct-grid)");
  sw->add_option("--dev", sw_dev, "Dev label TSV")->required();
  sw->add_option("--lr-grid", space.learning_rate, "Learning rates");
  sw->add_option("--batch-grid", space.batch_size, "Batch sizes");
  sw->add_option("--epochs-grid", space.epochs, "Epoch counts");
  sw->add_option("--pct-grid", space.silver_pct, "Silver percentages");
  sw->add_option("--trials", trials, "Grid points to evaluate")->capture_default_str();
  sw->add_option("--sweep-seed", sweep_seed, "Seed of the search order")->capture_default_str();
  sw->add_option("--out", sw_out, "Trials and winner (JSON)")->required();
  sw->callback([&] {
    action = [&](RunRecord& rec) {
      const LabelScheme scheme = parse_scheme(scheme_name);
      const Vocab v = Vocab::load(vocab_path);
      rec.input(vocab_path);
      const auto gold = read_gold(sw_gold, scheme);
      rec.input(sw_gold);
      const auto dev = read_gold(sw_dev, scheme);
      rec.input(sw_dev);
      SilverCorpus silver;
      if (!sw_silver.empty()) {
        silver = load_silver(sw_silver);
        for (auto& s : silver.sequences) s = restrict_to_scheme(std::move(s), scheme);
        rec.input(sw_silver);
      }
      const Checkpoint init = sw_shape.make(v, rec);
      rec.seed(sweep_seed);
      const SweepResult r = sweep(space, trials, sweep_seed, sw_train.get(), [&](const TrainConfig& c, double pct) {
        return pct > 0.0 ? self_train(init, v, gold, silver, dev, c, MixPolicy{pct}).best_dev_f1
                         : finetune(init, v, gold, dev, c).best_dev_f1;
      });
      nlohmann::json j;
      for (const auto& t : r.trials) {
        j["trials"].push_back({{"config", nlohmann::json::parse(t.config.to_json())},
                               {"silver_pct", t.silver_pct},
                               {"dev_f1", t.dev_f1}});
      }
      j["best"] = r.best;
      std::ofstream(sw_out) << j.dump(2) << "\n";
      rec.output(sw_out);
      rec.extra()["best_dev_f1"] = r.winner().dev_f1;
      std::printf("%zu trials, best dev F1 %.4f (lr %g, batch %zu, epochs %zu, silver %.2f)\n", r.trials.size(),
                  r.winner().dev_f1, r.winner().config.learning_rate, r.winner().config.batch_size,
                  r.winner().config.epochs, r.winner().silver_pct);
      return fs::path(sw_out);
    };
  });

  // plot
  auto* plot = app.add_subcommand("plot", "SVG charts from eval reports or training histories");
  std::vector<std::string> plot_reports, plot_histories;
  std::string plot_out;
  plot->add_option("--reports", plot_reports, "EvalReport JSON files: size (MiB) vs F1");
  plot->add_option("--histories", plot_histories, "History files: silver percentage vs best dev F1");
  plot->add_option("--out", plot_out, "SVG file")->required();
  plot->callback([&] {
    if (plot_reports.empty() == plot_histories.empty()) {
      throw CLI::ValidationError("plot", "give exactly one of --reports, --histories");
    }
    action = [&](RunRecord& rec) {
      PlotSpec spec;
      if (!plot_reports.empty()) {
        std::vector<EvalReport> reports;
        for (const auto& p : plot_reports) {
          std::ifstream in(p);
          if (!in) throw Error(ErrorCode::IoError, "cannot read " + p);
          std::stringstream ss;
          ss << in.rdbuf();
          reports.push_back(report_from_json(ss.str()));
          rec.input(p);
        }
        spec = size_vs_f1(reports);
      } else {
        std::vector<History> runs;
        for (const auto& p : plot_histories) {
          runs.push_back(read_history(p));
          rec.input(p);
        }
        spec = silver_pct_vs_f1(runs);
      }
      std::ofstream out(plot_out);
      out << render_svg(spec);
      if (!out) throw Error(ErrorCode::IoError, "cannot write " + plot_out);
      out.close();
      rec.output(plot_out);
      return fs::path(plot_out);
    };
  });

  std::string command = "disfl";
  try {
    app.parse(argc, argv);
    command = app.get_subcommands().front()->get_name();
    RunRecord rec(command, manifest(command));
    const fs::path primary = action(rec);
    rec.write(record_path(record_override, primary, command));
    return kOk;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (!app.get_subcommands().empty()) command = app.get_subcommands().front()->get_name();
    error_line(command, "UsageError", e.what());
    return kUsage;
  } catch (const Error& e) {
    error_line(command, std::string(to_string(e.code())), e.what(), e.line());
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    error_line(command, "MalformedRecord", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    error_line(command, "Internal", e.what());
    return kInternal;
  }
}
