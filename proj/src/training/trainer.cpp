// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/training/trainer.hpp"

#include <algorithm>
#include <numeric>

#include "disfl/error.hpp"
#include "disfl/model/tagger.hpp"
#include "disfl/training/loss.hpp"
#include "json.hpp"
#include "model/encoder.hpp"

namespace disfl {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning_rate must be > 0");
  if (batch_size < 1) throw Error(ErrorCode::InvalidArgument, "batch_size must be >= 1");
  if (weight_decay < 0.0) throw Error(ErrorCode::InvalidArgument, "weight_decay must be >= 0");
}

AdamConfig TrainConfig::adam() const {
  AdamConfig a;
  a.weight_decay = weight_decay;
  return a;
}

std::string TrainConfig::to_json() const {
  return nlohmann::json{{"learning_rate", learning_rate}, {"batch_size", batch_size},
                        {"epochs", epochs},               {"schedule", std::string(to_string(schedule))},
                        {"weight_decay", weight_decay},   {"seed", seed},
                        {"eval_every", eval_every}}
      .dump();
}

TrainConfig TrainConfig::from_json(const std::string& text) {
  TrainConfig c;
  try {
    const auto j = nlohmann::json::parse(text);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    c.schedule = parse_schedule(j.value("schedule", std::string(to_string(c.schedule))));
    c.weight_decay = j.value("weight_decay", c.weight_decay);
    c.seed = j.value("seed", c.seed);
    c.eval_every = j.value("eval_every", c.eval_every);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("train config: ") + e.what());
  }
  c.validate();
  return c;
}

CyclicSampler::CyclicSampler(std::size_t n, std::uint64_t seed) : n_(n), rng_(seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cannot sample from an empty set");
}

void CyclicSampler::refill() {
  order_.resize(n_);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  rng_.shuffle(std::span<std::size_t>(order_));
  pos_ = 0;
  ++passes_;
}

std::size_t CyclicSampler::next() {
  if (pos_ == order_.size()) refill();
  return order_[pos_++];
}

std::uint64_t stream_seed(std::uint64_t seed, Stream s) { return Rng::derive(seed, static_cast<std::uint64_t>(s)); }

std::vector<EncodedSequence> encode_corpus(std::span<const LabeledSequence> corpus, const Vocab& vocab,
                                           std::size_t max_positions) {
  std::vector<EncodedSequence> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.push_back(encode_unpadded(s, vocab, max_positions));
  return out;
}

EvalReport evaluate(const Model& model, const Vocab& vocab, std::span<const LabeledSequence> gold) {
  const auto pred = predict_labels(model, vocab, gold, 64);
  return token_prf(pred, gold);
}

void require_no_silver(std::span<const LabeledSequence> eval_set, const std::string& what) {
  for (std::size_t i = 0; i < eval_set.size(); ++i) {
    if (eval_set[i].origin == Origin::Silver) {
      throw Error(ErrorCode::ProvenanceViolation,
                  what + " sequence " + std::to_string(i) + " is silver data; evaluation sets must be gold");
    }
  }
}

TrainResult train_tagger(const Checkpoint& init, const Vocab& vocab, const TrainPlan& plan,
                         std::span<const LabeledSequence> dev, const TrainConfig& config) {
  config.validate();
  require_no_silver(dev, "dev");
  if (!init.vocab_digest.empty() && init.vocab_digest != vocab.digest()) {
    throw Error(ErrorCode::VocabMismatch, "initial checkpoint was built for vocabulary " + init.vocab_digest);
  }
  if (init.config.vocab != vocab.size()) {
    throw Error(ErrorCode::VocabMismatch, "model vocab size " + std::to_string(init.config.vocab) +
                                              " != vocabulary size " + std::to_string(vocab.size()));
  }

  TrainResult result;
  result.best = init;
  result.best.vocab_digest = vocab.digest();
  const std::size_t total = config.epochs * plan.steps_per_epoch;
  if (total == 0) return result;
  if (plan.pool.empty()) throw Error(ErrorCode::EmptyInputCorpus, "training set is empty");

  Model model(result.best);
  const ParamLayout& layout = model.layout();
  std::vector<std::uint8_t> decay(layout.total(), 0);
  for (const auto& slot : layout.slots()) {
    if (slot.decays()) std::fill_n(decay.begin() + static_cast<std::ptrdiff_t>(slot.offset), slot.size, 1);
  }
  AdamState state(layout.total());
  const AdamConfig adam = config.adam();
  Rng dropout(stream_seed(config.seed, Stream::Dropout));
  detail::Buffer<float> grad(layout.total());
  detail::Buffer<float> logits;
  std::vector<const EncodedSequence*> members;
  const std::size_t eval_every = config.eval_every > 0 ? config.eval_every : plan.steps_per_epoch;

  bool have_best = false;
  double loss_sum = 0.0;
  std::size_t loss_n = 0;
  for (std::size_t step = 0; step < total; ++step) {
    members.clear();
    for (std::size_t i : plan.next_batch()) members.push_back(&plan.pool[i]);
    const Batch batch = make_batch(std::span<const EncodedSequence* const>(members));

    detail::Encoder<float> enc(model.config(), layout, model.params().data());
    enc.run(batch, &dropout);
    enc.classify(logits);
    const auto loss = token_ce_loss<float>(logits, model.config().num_tags, batch.tags);
    std::fill(grad.begin(), grad.end(), 0.0f);
    enc.backward(loss.grad.data(), nullptr, nullptr, grad.data());
    const double lr = scheduled_lr(config.learning_rate, config.schedule, step, total);
    adam_step(model.mutable_params(), grad, state, lr, adam, decay);
    loss_sum += loss.loss;
    ++loss_n;

    const std::size_t done = step + 1;
    if (done % eval_every != 0 && done != total) continue;
    const double epoch = static_cast<double>(done) / static_cast<double>(plan.steps_per_epoch);
    HistoryRecord train_rec;
    train_rec.step = done;
    train_rec.split = "train";
    train_rec.loss = loss_sum / static_cast<double>(loss_n);
    train_rec.epoch = epoch;
    train_rec.lr = lr;
    train_rec.silver_pct = plan.silver_pct;
    result.history.push_back(train_rec);
    loss_sum = 0.0;
    loss_n = 0;
    if (dev.empty()) continue;

    const EvalReport report = evaluate(model, vocab, dev);
    HistoryRecord dev_rec = train_rec;
    dev_rec.split = "dev";
    dev_rec.loss = 0.0;
    dev_rec.precision = report.precision;
    dev_rec.recall = report.recall;
    dev_rec.f1 = report.f1;
    result.history.push_back(dev_rec);
    if (!have_best || report.f1 > result.best_dev_f1) {
      have_best = true;
      result.best_dev_f1 = report.f1;
      result.best_step = done;
      result.best = model.to_checkpoint();
      result.best.vocab_digest = vocab.digest();
    }
  }
  result.steps = total;
  if (dev.empty()) {
    result.best = model.to_checkpoint();
    result.best.vocab_digest = vocab.digest();
    result.best_step = total;
  }
  return result;
}

}  // namespace disfl
