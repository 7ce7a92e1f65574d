// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "disfl/model/config.hpp"
#include "json.hpp"

namespace disfl {

nlohmann::json config_to_json_value(const ModelConfig& config);
ModelConfig config_from_json_value(const nlohmann::json& j);

}  // namespace disfl
