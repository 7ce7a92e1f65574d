// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/model/config.hpp"

#include "json.hpp"

#include "disfl/error.hpp"
#include "model/config_json.hpp"

namespace disfl {

ModelConfig ModelConfig::make(std::size_t layers, std::size_t hidden, std::size_t heads, std::size_t vocab) {
  ModelConfig c;
  c.layers = layers;
  c.hidden = hidden;
  c.heads = heads;
  c.intermediate = 4 * hidden;
  c.vocab = vocab;
  return c;
}

void ModelConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, std::string("model config: ") + what);
  };
  need(layers >= 1 && hidden >= 1 && heads >= 1 && intermediate >= 1, "counts must be >= 1");
  need(vocab >= 5, "vocab must hold the special tokens");
  need(max_positions >= 2, "max_positions must be >= 2");
  need(num_tags >= 1, "num_tags must be >= 1");
  need(hidden % heads == 0, "hidden must be divisible by heads");
  need(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
}

std::uint64_t count_params(const ModelConfig& c) {
  const std::uint64_t H = c.hidden, I = c.intermediate;
  const std::uint64_t embed = c.vocab * H + c.max_positions * H + c.segments * H + 2 * H;
  const std::uint64_t attention = 4 * (H * H + H) + 2 * H;
  const std::uint64_t ffn = (H * I + I) + (I * H + H) + 2 * H;
  return embed + c.layers * (attention + ffn);
}

nlohmann::json config_to_json_value(const ModelConfig& c) {
  return {{"layers", c.layers},       {"hidden", c.hidden},
          {"heads", c.heads},         {"intermediate", c.intermediate},
          {"vocab", c.vocab},         {"max_positions", c.max_positions},
          {"segments", c.segments},   {"num_tags", c.num_tags},
          {"dropout", c.dropout}};
}

ModelConfig config_from_json_value(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.layers = j.at("layers").get<std::size_t>();
    c.hidden = j.at("hidden").get<std::size_t>();
    c.heads = j.at("heads").get<std::size_t>();
    c.intermediate = j.value("intermediate", 4 * c.hidden);
    c.vocab = j.at("vocab").get<std::size_t>();
    c.max_positions = j.value("max_positions", c.max_positions);
    c.segments = j.value("segments", c.segments);
    c.num_tags = j.value("num_tags", c.num_tags);
    c.dropout = j.value("dropout", c.dropout);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("model config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string to_json(const ModelConfig& config) { return config_to_json_value(config).dump(); }

ModelConfig config_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("model config: ") + e.what());
  }
  return config_from_json_value(j);
}

std::string describe(const ModelConfig& c) {
  return std::to_string(c.layers) + "x" + std::to_string(c.hidden) + "/v" + std::to_string(c.vocab);
}

}  // namespace disfl
