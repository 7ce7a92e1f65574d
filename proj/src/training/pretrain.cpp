// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/training/pretrain.hpp"

#include <algorithm>

#include "disfl/error.hpp"
#include "disfl/training/finetune.hpp"
#include "disfl/tokenizer/wordpiece.hpp"
#include "disfl/training/loss.hpp"
#include "model/encoder.hpp"

namespace disfl {

namespace {

constexpr double kMaskTokenShare = 0.8;
constexpr double kRandomTokenShare = 0.1;

}  // namespace

PretrainBatcher::PretrainBatcher(std::span<const Document> docs, const Vocab& vocab, const PretrainOptions& options,
                                 std::uint64_t seed)
    : vocab_(vocab),
      options_(options),
      pairs_(stream_seed(seed, Stream::Pairs)),
      masking_(stream_seed(seed, Stream::Masking)) {
  if (options.max_length < 3) throw Error(ErrorCode::InvalidArgument, "pretraining max_length must be >= 3");
  if (options.batch_size < 1) throw Error(ErrorCode::InvalidArgument, "pretraining batch_size must be >= 1");
  if (options.mask_prob < 0.0 || options.mask_prob > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "mask_prob must be in [0, 1]");
  }
  for (const auto& doc : docs) {
    if (doc.empty()) continue;
    const std::size_t first = sentences_.size();
    for (const auto& sentence : doc) {
      std::vector<TokenId> ids;
      for (const auto& w : sentence) {
        const auto pieces = tokenize(w, vocab);
        ids.insert(ids.end(), pieces.begin(), pieces.end());
      }
      doc_of_.push_back(doc_ranges_.size());
      sentences_.push_back(std::move(ids));
    }
    for (std::size_t i = first; i + 1 < sentences_.size(); ++i) with_next_.push_back(i);
    doc_ranges_.emplace_back(first, sentences_.size());
  }
  if (sentences_.empty()) throw Error(ErrorCode::EmptyInputCorpus, "pretraining needs at least one sentence");
  can_next_ = !with_next_.empty();
  can_random_ = doc_ranges_.size() >= 2;
  degenerate_ = !(can_next_ && can_random_);
}

PretrainBatch PretrainBatcher::next() {
  struct Pair {
    std::vector<TokenId> ids, segs;
    NspLabel label;
  };
  std::vector<Pair> pairs(options_.batch_size);
  std::size_t longest = 0;
  for (auto& p : pairs) {
    bool is_next;
    if (can_next_ && can_random_) is_next = pairs_.bernoulli(0.5);
    else is_next = !can_random_;
    std::size_t a, b;
    if (is_next && can_next_) {
      a = with_next_[pairs_.index(with_next_.size())];
      b = a + 1;
    } else if (is_next) {
      // Nothing to pair with: the sentence is paired with itself.
      a = b = pairs_.index(sentences_.size());
    } else {
      a = pairs_.index(sentences_.size());
      std::size_t d = pairs_.index(doc_ranges_.size() - 1);
      if (d >= doc_of_[a]) ++d;
      const auto [lo, hi] = doc_ranges_[d];
      b = lo + pairs_.index(hi - lo);
    }
    p.label = is_next ? NspLabel::IsNext : NspLabel::NotNext;
    std::vector<TokenId> A = sentences_[a], B = sentences_[b];
    while (A.size() + B.size() + 3 > options_.max_length) {
      if (A.size() >= B.size()) A.pop_back();
      else B.pop_back();
    }
    p.ids.push_back(Vocab::kCls);
    p.ids.insert(p.ids.end(), A.begin(), A.end());
    p.ids.push_back(Vocab::kSep);
    p.segs.assign(p.ids.size(), 0);
    p.ids.insert(p.ids.end(), B.begin(), B.end());
    p.ids.push_back(Vocab::kSep);
    p.segs.resize(p.ids.size(), 1);
    longest = std::max(longest, p.ids.size());
  }

  PretrainBatch out;
  Batch& batch = out.batch;
  batch.batch = pairs.size();
  batch.length = longest;
  const std::size_t n = batch.positions();
  batch.ids.assign(n, Vocab::kPad);
  batch.segments.assign(n, 0);
  batch.mask.assign(n, 0);
  batch.tags.assign(n, kIgnoreTag);
  batch.word_index.assign(n, kNoWord);
  const std::size_t vocab = vocab_.size();
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto& p = pairs[r];
    out.nsp_labels.push_back(static_cast<std::int32_t>(p.label));
    for (std::size_t t = 0; t < p.ids.size(); ++t) {
      const std::size_t flat = r * longest + t;
      batch.ids[flat] = p.ids[t];
      batch.segments[flat] = p.segs[t];
      batch.mask[flat] = 1;
      if (vocab_.is_special(p.ids[t]) || !masking_.bernoulli(options_.mask_prob)) continue;
      out.masked_positions.push_back(flat);
      out.mlm_targets.push_back(p.ids[t]);
      const double u = masking_.uniform();
      if (u < kMaskTokenShare) {
        batch.ids[flat] = Vocab::kMask;
      } else if (u < kMaskTokenShare + kRandomTokenShare && vocab > Vocab::kNumSpecials) {
        batch.ids[flat] = static_cast<TokenId>(Vocab::kNumSpecials + masking_.index(vocab - Vocab::kNumSpecials));
      }
    }
  }
  return out;
}

namespace {

struct StepLoss {
  double mlm = 0.0;
  double nsp = 0.0;
};

StepLoss losses(detail::Encoder<float>& enc, const PretrainBatch& pb, std::size_t vocab,
                LossResult<float>* mlm_out, LossResult<float>* nsp_out) {
  detail::Buffer<float> mlm_logits, nsp_logits;
  enc.mlm(pb.masked_positions, mlm_logits);
  enc.nsp(nsp_logits);
  StepLoss s;
  if (!pb.masked_positions.empty()) {
    auto mlm = token_ce_loss<float>(mlm_logits, vocab, pb.mlm_targets);
    s.mlm = mlm.loss;
    if (mlm_out != nullptr) *mlm_out = std::move(mlm);
  }
  auto nsp = token_ce_loss<float>(nsp_logits, 2, pb.nsp_labels);
  s.nsp = nsp.loss;
  if (nsp_out != nullptr) *nsp_out = std::move(nsp);
  return s;
}

}  // namespace

PretrainResult pretrain(const Checkpoint& init, const Vocab& vocab, std::span<const Document> docs, std::size_t steps,
                        const TrainConfig& config, const PretrainOptions& options) {
  config.validate();
  if (config.eval_every > steps) throw Error(ErrorCode::InvalidArgument, "pretraining steps must be >= eval_every");
  if (init.config.vocab != vocab.size()) throw Error(ErrorCode::VocabMismatch, "model and vocabulary sizes differ");
  if (!init.vocab_digest.empty() && init.vocab_digest != vocab.digest()) {
    throw Error(ErrorCode::VocabMismatch, "initial checkpoint was built for vocabulary " + init.vocab_digest);
  }
  PretrainOptions opts = options;
  opts.max_length = std::min(opts.max_length, init.config.max_positions);
  PretrainBatcher batcher(docs, vocab, opts, config.seed);
  PretrainResult result;
  result.degenerate = batcher.degenerate();

  Model model(init);
  const ParamLayout& layout = model.layout();
  std::vector<std::uint8_t> decay(layout.total(), 0);
  for (const auto& slot : layout.slots()) {
    if (slot.decays()) std::fill_n(decay.begin() + static_cast<std::ptrdiff_t>(slot.offset), slot.size, 1);
  }
  AdamState state(layout.total());
  Rng dropout(stream_seed(config.seed, Stream::Dropout));
  detail::Buffer<float> grad(layout.total());
  const std::size_t snapshot = config.eval_every > 0 ? config.eval_every : steps;
  const std::size_t log_every = options.log_every > 0 ? options.log_every : snapshot;
  double mlm_sum = 0.0, nsp_sum = 0.0;
  std::size_t logged = 0;
  for (std::size_t step = 0; step < steps; ++step) {
    PretrainBatch pb = batcher.next();
    if (model.config().segments < 2) std::fill(pb.batch.segments.begin(), pb.batch.segments.end(), 0);
    detail::Encoder<float> enc(model.config(), layout, model.params().data());
    enc.run(pb.batch, &dropout);
    LossResult<float> mlm, nsp;
    const StepLoss s = losses(enc, pb, vocab.size(), &mlm, &nsp);
    std::fill(grad.begin(), grad.end(), 0.0f);
    enc.backward(nullptr, pb.masked_positions.empty() ? nullptr : mlm.grad.data(), nsp.grad.data(), grad.data());
    const double lr = scheduled_lr(config.learning_rate, config.schedule, step, steps);
    adam_step(model.mutable_params(), grad, state, lr, config.adam(), decay);
    mlm_sum += s.mlm;
    nsp_sum += s.nsp;
    ++logged;

    const std::size_t done = step + 1;
    if (done % log_every == 0 || done == steps) {
      HistoryRecord rec;
      rec.step = done;
      rec.lr = lr;
      rec.split = "mlm";
      rec.loss = mlm_sum / static_cast<double>(logged);
      result.history.push_back(rec);
      rec.split = "nsp";
      rec.loss = nsp_sum / static_cast<double>(logged);
      result.history.push_back(rec);
      mlm_sum = nsp_sum = 0.0;
      logged = 0;
    }
    if (done % snapshot == 0) {
      Checkpoint c = model.to_checkpoint();
      c.vocab_digest = vocab.digest();
      result.checkpoints.emplace_back(done, std::move(c));
    }
  }
  return result;
}

std::pair<double, double> pretrain_loss(const Model& model, const Vocab& vocab, std::span<const Document> docs,
                                        const PretrainOptions& options, std::size_t batches, std::uint64_t seed) {
  PretrainOptions opts = options;
  opts.max_length = std::min(opts.max_length, model.config().max_positions);
  PretrainBatcher batcher(docs, vocab, opts, seed);
  double mlm = 0.0, nsp = 0.0;
  for (std::size_t i = 0; i < batches; ++i) {
    PretrainBatch pb = batcher.next();
    if (model.config().segments < 2) std::fill(pb.batch.segments.begin(), pb.batch.segments.end(), 0);
    detail::Encoder<float> enc(model.config(), model.layout(), model.params().data());
    enc.run(pb.batch, nullptr);
    const StepLoss s = losses(enc, pb, vocab.size(), nullptr, nullptr);
    mlm += s.mlm;
    nsp += s.nsp;
  }
  const double n = static_cast<double>(std::max<std::size_t>(batches, 1));
  return {mlm / n, nsp / n};
}

ProbeResult probe_snapshots(std::span<const std::pair<std::size_t, Checkpoint>> snapshots, const Vocab& vocab,
                            std::span<const LabeledSequence> gold, std::span<const LabeledSequence> dev,
                            const TrainConfig& probe) {
  if (snapshots.empty()) throw Error(ErrorCode::InvalidArgument, "no snapshots to probe");
  if (dev.empty()) throw Error(ErrorCode::EmptyInputCorpus, "snapshot probing needs a dev set");
  ProbeResult r;
  for (const auto& [step, ck] : snapshots) {
    r.dev_f1.push_back(finetune(ck, vocab, gold, dev, probe).best_dev_f1);
    if (r.dev_f1.back() > r.dev_f1[r.best]) r.best = r.dev_f1.size() - 1;
  }
  return r;
}

}  // namespace disfl
