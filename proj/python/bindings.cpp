// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "disfl/corpus/annotation.hpp"
#include "disfl/corpus/io.hpp"
#include "disfl/corpus/labels.hpp"
#include "disfl/corpus/preprocess.hpp"
#include "disfl/corpus/synth.hpp"
#include "disfl/error.hpp"
#include "disfl/metrics/prf.hpp"
#include "disfl/metrics/size.hpp"
#include "disfl/model/checkpoint_io.hpp"
#include "disfl/model/tagger.hpp"
#include "disfl/quantize/quantize.hpp"
#include "disfl/tokenizer/wordpiece.hpp"
#include "disfl/training/finetune.hpp"

namespace py = pybind11;
using namespace disfl;

namespace {

std::vector<std::string> tag_names(const std::vector<Tag>& tags) {
  std::vector<std::string> out;
  for (Tag t : tags) out.emplace_back(to_string(t));
  return out;
}

std::vector<Tag> parse_tags(const std::vector<std::string>& names) {
  std::vector<Tag> out;
  for (const auto& n : names) {
    const auto t = parse_tag(n);
    if (!t) throw Error(ErrorCode::InvalidArgument, "unknown tag '" + n + "'");
    out.push_back(*t);
  }
  return out;
}

LabeledSequence make_sequence(std::vector<std::string> words, const std::vector<std::string>& tags) {
  LabeledSequence s;
  s.words = std::move(words);
  s.tags = parse_tags(tags);
  if (s.tags.size() != s.words.size()) throw Error(ErrorCode::AlignmentMismatch, "words and tags differ in length");
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tiny transformer encoders for token-level disfluency detection";

  // Held for the lifetime of the interpreter.
  static py::handle error_type = py::exception<Error>(m, "Error").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(py::str(e.what()));
      inst.attr("code") = std::string(to_string(e.code()));
      inst.attr("line") = e.line() ? py::cast(*e.line()) : py::none();
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  py::enum_<Tag>(m, "Tag").value("O", Tag::O).value("RM", Tag::RM).value("IM", Tag::IM);

  py::class_<LabeledSequence>(m, "LabeledSequence")
      .def(py::init(&make_sequence), py::arg("words"), py::arg("tags"))
      .def_readonly("words", &LabeledSequence::words)
      .def_property_readonly("tags", [](const LabeledSequence& s) { return tag_names(s.tags); })
      .def_readonly("doc_id", &LabeledSequence::doc_id)
      .def("__repr__", [](const LabeledSequence& s) {
        return "<LabeledSequence " + std::to_string(s.words.size()) + " words>";
      });

  py::class_<AnnotatedSentence>(m, "AnnotatedSentence")
      .def_readonly("words", &AnnotatedSentence::words)
      .def_property_readonly("disfluent", &AnnotatedSentence::disfluent)
      .def("__str__", &serialize_annotation)
      .def("labels",
           [](const AnnotatedSentence& s, const std::string& scheme, bool clean) {
             return to_labels(clean ? preprocess(s) : s, parse_scheme(scheme));
           },
           py::arg("scheme") = "reparandum-interregnum", py::arg("preprocess") = true,
           "Per-word tags, after comma and filled-pause removal by default");

  m.def("parse_annotation", &parse_annotation, py::arg("text"), "Parse bracket notation");
  m.def("serialize_annotation", &serialize_annotation, py::arg("sentence"));
  m.def("preprocess", [](const AnnotatedSentence& s) { return preprocess(s); }, py::arg("sentence"));

  m.def(
      "synthesize",
      [](std::size_t docs, std::size_t per_doc, double p_disfluent, std::uint64_t seed) {
        std::vector<WordSequence> flat;
        for (const auto& d : generate_fluent_documents(docs, per_doc, seed)) flat.insert(flat.end(), d.begin(), d.end());
        SynthParams p;
        p.p_disfluent = p_disfluent;
        p.seed = seed;
        return generate_synthetic(flat, p);
      },
      py::arg("docs"), py::arg("sentences_per_doc") = 10, py::arg("p_disfluent") = 0.5, py::arg("seed") = 0,
      "Synthetic annotated sentences");

  m.def("read_labels_tsv", [](const std::filesystem::path& p) { return read_labels_tsv(p); }, py::arg("path"));
  m.def("write_labels_tsv", py::overload_cast<const std::filesystem::path&, const std::vector<LabeledSequence>&>(
                                &write_labels_tsv),
        py::arg("path"), py::arg("corpus"));

  py::class_<Vocab>(m, "Vocab")
      .def_static("load", &Vocab::load, py::arg("path"))
      .def("save", &Vocab::save, py::arg("path"))
      .def("__len__", &Vocab::size)
      .def_property_readonly("digest", &Vocab::digest)
      .def_property_readonly("tokens", &Vocab::tokens)
      .def("tokenize", [](const Vocab& v, const std::string& word) { return tokenize(word, v); }, py::arg("word"))
      .def("detokenize", [](const Vocab& v, const std::vector<TokenId>& ids) { return detokenize(ids, v); },
           py::arg("ids"));

  m.def(
      "train_wordpiece",
      [](const std::vector<std::vector<std::string>>& corpus, std::size_t size, std::size_t min_frequency) {
        return train_wordpiece(corpus, size, min_frequency);
      },
      py::arg("corpus"), py::arg("vocab_size"), py::arg("min_frequency") = 1);

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init([](std::size_t layers, std::size_t hidden, std::size_t heads, std::size_t vocab,
                       std::size_t max_positions) {
             ModelConfig c = ModelConfig::make(layers, hidden, heads, vocab);
             c.max_positions = max_positions;
             c.validate();
             return c;
           }),
           py::arg("layers"), py::arg("hidden"), py::arg("heads"), py::arg("vocab"), py::arg("max_positions") = 512)
      .def_readwrite("segments", &ModelConfig::segments)
      .def_readonly("layers", &ModelConfig::layers)
      .def_readonly("hidden", &ModelConfig::hidden)
      .def_readonly("vocab", &ModelConfig::vocab)
      .def("count_params", [](const ModelConfig& c) { return count_params(c); })
      .def(
          "size_mib",
          [](const ModelConfig& c, bool quantized) {
            return bytes_to_mib(serialized_size(c, quantized ? Precision::Int8Quantized : Precision::Float32));
          },
          py::arg("quantized") = false)
      .def("__repr__", [](const ModelConfig& c) { return "<ModelConfig " + describe(c) + ">"; });

  py::class_<Checkpoint>(m, "Checkpoint")
      .def_static("load", &load_checkpoint, py::arg("path"))
      .def_static(
          "init",
          [](const ModelConfig& c, const Vocab& v, std::uint64_t seed) {
            Checkpoint ck = init_checkpoint(c, seed);
            ck.vocab_digest = v.digest();
            return ck;
          },
          py::arg("config"), py::arg("vocab"), py::arg("seed") = 0)
      .def("save", [](const Checkpoint& c, const std::filesystem::path& p) { save_checkpoint(c, p); }, py::arg("path"))
      .def_readonly("config", &Checkpoint::config)
      .def_property_readonly("quantized", [](const Checkpoint& c) { return c.precision == Precision::Int8Quantized; })
      .def_property_readonly("digest", &checkpoint_digest)
      .def_property_readonly("size_mib", &model_size_mib)
      .def("quantize", &quantize_checkpoint)
      .def(
          "tag",
          [](const Checkpoint& c, const Vocab& v, const std::vector<std::vector<std::string>>& sentences) {
            std::vector<std::vector<std::string>> out;
            for (const auto& t : tag_sentences(Model(c), v, sentences)) out.push_back(tag_names(t.tags));
            return out;
          },
          py::arg("vocab"), py::arg("sentences"), "Per-word tag names for each sentence");

  m.def(
      "finetune",
      [](const Checkpoint& init, const Vocab& v, const std::vector<LabeledSequence>& train,
         const std::vector<LabeledSequence>& dev, double lr, std::size_t batch, std::size_t epochs,
         std::uint64_t seed) {
        TrainConfig cfg;
        cfg.learning_rate = lr;
        cfg.batch_size = batch;
        cfg.epochs = epochs;
        cfg.seed = seed;
        py::gil_scoped_release release;
        const TrainResult r = finetune(init, v, train, dev, cfg);
        return std::make_pair(r.best, r.best_dev_f1);
      },
      py::arg("init"), py::arg("vocab"), py::arg("train"), py::arg("dev"), py::arg("lr") = 2e-3,
      py::arg("batch_size") = 32, py::arg("epochs") = 10, py::arg("seed") = 0,
      "Returns (best checkpoint, best dev F1)");

  m.def(
      "token_prf",
      [](const std::vector<std::vector<std::string>>& pred, const std::vector<std::vector<std::string>>& gold) {
        std::vector<std::vector<Tag>> p, g;
        for (const auto& s : pred) p.push_back(parse_tags(s));
        for (const auto& s : gold) g.push_back(parse_tags(s));
        const EvalReport r = token_prf(p, g);
        py::dict d;
        d["precision"] = r.precision;
        d["recall"] = r.recall;
        d["f1"] = r.f1;
        d["tp"] = r.tp;
        d["fp"] = r.fp;
        d["fn"] = r.fn;
        d["no_positives"] = r.no_positives;
        return d;
      },
      py::arg("pred"), py::arg("gold"), "Token-level P/R/F1 over tag-name sequences");
}
