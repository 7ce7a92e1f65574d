// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>

#include "disfl/error.hpp"
#include "disfl/metrics/latency.hpp"
#include "disfl/metrics/plot.hpp"
#include "disfl/metrics/prf.hpp"
#include "disfl/metrics/size.hpp"
#include "disfl/model/checkpoint.hpp"
#include "disfl/model/checkpoint_io.hpp"
#include "disfl/rng.hpp"
#include "doctest.h"

using namespace disfl;

namespace {

constexpr Tag O = Tag::O, RM = Tag::RM, IM = Tag::IM;
using Tags = std::vector<std::vector<Tag>>;

Tags random_tags(Rng& rng, std::size_t n, std::size_t len) {
  Tags out(n);
  for (auto& s : out) {
    for (std::size_t i = 0; i < len; ++i) s.push_back(static_cast<Tag>(rng.bernoulli(0.6) ? 0 : 1 + rng.index(2)));
  }
  return out;
}

}  // namespace

TEST_CASE("token prf on the hand-counted example") {
  const Tags gold = {{RM, RM, O, O}}, pred = {{RM, O, O, RM}};
  const auto r = token_prf(pred, gold);
  CHECK(r.tp == 1);
  CHECK(r.fp == 1);
  CHECK(r.fn == 1);
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 0.5);
  CHECK(r.f1 == 0.5);
}

TEST_CASE("perfect predictions and the no-positives case") {
  const Tags gold = {{RM, IM, O}, {O, O}};
  const auto r = token_prf(gold, gold);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);
  CHECK_FALSE(r.no_positives);

  const Tags none = {{O, O}, {O}};
  const auto z = token_prf(none, none);
  CHECK(z.no_positives);
  CHECK(z.precision == 0.0);
  CHECK(z.recall == 0.0);
  CHECK(z.f1 == 0.0);
}

TEST_CASE("misaligned inputs are rejected") {
  const Tags a = {{O, O}}, b = {{O}}, c = {{O, O}, {O}};
  for (const Tags* other : {&b, &c}) {
    try {
      token_prf(a, *other);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AlignmentMismatch);
    }
  }
}

TEST_CASE("swapping prediction and gold swaps P and R") {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto g = random_tags(rng, 3, 5), p = random_tags(rng, 3, 5);
    const auto a = token_prf(p, g), b = token_prf(g, p);
    CHECK(a.precision == b.recall);
    CHECK(a.recall == b.precision);
    CHECK(a.f1 == doctest::Approx(b.f1).epsilon(1e-15));
  }
}

TEST_CASE("extra correct O changes nothing and an extra FP lowers precision") {
  Tags gold = {{RM, O, IM, O}}, pred = {{RM, RM, O, O}};
  const auto base = token_prf(pred, gold);
  gold[0].push_back(O);
  pred[0].push_back(O);
  const auto same = token_prf(pred, gold);
  CHECK(same.precision == base.precision);
  CHECK(same.recall == base.recall);
  CHECK(same.f1 == base.f1);
  gold[0].push_back(O);
  pred[0].push_back(RM);
  CHECK(token_prf(pred, gold).precision < base.precision);
}

TEST_CASE("labeled-sequence overload agrees with the tag overload") {
  std::vector<LabeledSequence> g(1), p(1);
  g[0].words = p[0].words = {"a", "b", "c"};
  g[0].tags = {RM, O, IM};
  p[0].tags = {RM, IM, O};
  const auto a = token_prf(p, g);
  const auto b = token_prf(Tags{p[0].tags}, Tags{g[0].tags});
  CHECK(a.f1 == b.f1);
  p[0].words.push_back("d");
  p[0].tags.push_back(O);
  CHECK_THROWS_AS(token_prf(p, g), Error);
}

TEST_CASE("report json round-trip") {
  EvalReport r = token_prf(Tags{{RM, O}}, Tags{{RM, RM}});
  r.size_mib = 3.3;
  r.latency_ms = 12.5;
  r.config = "12x128/v5000";
  const auto back = report_from_json(r.to_json());
  CHECK(back.f1 == r.f1);
  CHECK(back.tp == r.tp);
  CHECK(back.size_mib == 3.3);
  CHECK(back.config == r.config);
}

TEST_CASE("model size in MiB") {
  CHECK(bytes_to_mib(1024 * 1024) == 1.0);
  // Heads and the header sit on top of the encoder parameter bytes.
  const ModelConfig base = ModelConfig::make(12, 768, 12, 30522);
  CHECK(bytes_to_mib(count_params(base) * 4) == doctest::Approx(415.4).epsilon(0.001));
  const double base_mib = bytes_to_mib(serialized_size(base, Precision::Float32));
  CHECK(base_mib > 415.4);
  CHECK(base_mib < 415.4 * 1.02);
  const ModelConfig small = ModelConfig::make(6, 96, 2, 5000);
  CHECK(bytes_to_mib(count_params(small) * 4) == doctest::Approx(4.58).epsilon(0.001));
  const double small_mib = bytes_to_mib(serialized_size(small, Precision::Float32));
  CHECK(small_mib > 4.58);
  CHECK(small_mib < 4.58 * 1.02);

  ModelConfig c = ModelConfig::make(1, 16, 2, 40);
  c.max_positions = 16;
  const Checkpoint ck = init_checkpoint(c, 0);
  const auto path = std::filesystem::temp_directory_path() / "disfl_size.dfl";
  save_checkpoint(ck, path);
  CHECK(file_size_mib(path) == model_size_mib(ck));
  CHECK(file_size_mib(path) == bytes_to_mib(std::filesystem::file_size(path)));
  std::filesystem::remove(path);
}

TEST_CASE("median") {
  CHECK(median({5, 1, 3}) == 3);
  CHECK(median({9, 1, 7, 3, 5}) == 5);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  CHECK_THROWS_AS(median({}), Error);
}

TEST_CASE("latency protocol") {
  ModelConfig c = ModelConfig::make(4, 128, 2, 60);
  c.max_positions = 32;
  const Model m(init_checkpoint(c, 0));
  Batch b;
  b.batch = 8;
  b.length = 24;
  Rng rng(1);
  for (std::size_t i = 0; i < b.positions(); ++i) {
    b.ids.push_back(i % b.length == 0 ? 2 : static_cast<TokenId>(5 + rng.index(55)));
    b.segments.push_back(0);
    b.mask.push_back(1);
  }
  const auto r = bench_latency(m, b);
  CHECK(r.runs_ms.size() == 11);
  CHECK(r.batch == 8);
  CHECK(r.threads == 1);
  CHECK_FALSE(r.host.empty());
  CHECK(r.median_ms == median(r.runs_ms));
  CHECK_THROWS_AS(bench_latency(m, b, LatencyOptions{10, 3}), Error);
  CHECK_THROWS_AS(bench_latency(m, b, LatencyOptions{11, 2}), Error);

  const double again = bench_latency(m, b).median_ms;
  CHECK(std::abs(again - r.median_ms) / r.median_ms < 0.2);
}

TEST_CASE("svg plots") {
  std::vector<EvalReport> reports(3);
  const double sizes[] = {416, 11.8, 4.6};
  const double f1s[] = {0.90, 0.89, 0.87};
  for (int i = 0; i < 3; ++i) {
    reports[i].size_mib = sizes[i];
    reports[i].f1 = f1s[i];
    reports[i].config = "m" + std::to_string(i);
  }
  const PlotSpec spec = size_vs_f1(reports);
  CHECK(spec.log_x);
  REQUIRE(spec.series.size() == 1);
  CHECK(spec.series[0].points.size() == 3);
  const std::string svg = render_svg(spec);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("m1") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);

  std::vector<History> runs(2);
  runs[0] = {{10, "dev", 0, 0, 0, 0.6, 1, 0, 0.0}, {20, "dev", 0, 0, 0, 0.7, 2, 0, 0.0}};
  runs[1] = {{10, "dev", 0, 0, 0, 0.8, 1, 0, 0.7}};
  const PlotSpec pct = silver_pct_vs_f1(runs);
  REQUIRE(pct.series[0].points.size() == 2);
  CHECK(pct.series[0].points[0] == std::pair<double, double>{0.0, 0.7});
  CHECK(pct.series[0].points[1] == std::pair<double, double>{70.0, 0.8});
  CHECK(render_svg(pct).find("polyline") != std::string::npos);
}
