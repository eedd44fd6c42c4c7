// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "friedrichs/hardy.hpp"
#include "friedrichs/model.hpp"
#include "friedrichs/resonances.hpp"

namespace friedrichs {

struct ProjectParams {
  Complex w{0.0, -2.0};  // pole of the test function k/(l - w)
  Vector k;
  Complex z{0.0, 1.0};  // evaluation point in C_+
};

struct RunParams {
  SearchRegion search;
  GridParams grid;
  double tol = 1e-9;
  std::optional<ProjectParams> project;
  bool have_search = false;
};

struct LoadedConfig {
  ModelSpec spec;
  RunParams params;
  std::string config_hash;  // FNV-1a of the raw config bytes
  ValidationReport validation;
  std::vector<std::string> warnings;
};

/// Parse the model file (JSON; complex numbers as [re, im] pairs), apply the
/// epsilon scaling and run the validator. Missing `epsilon` defaults to 1.0
/// with a warning. Throws ParseError on malformed input.
LoadedConfig loadConfig(const std::string& path);

LoadedConfig parseConfigText(const std::string& text);

std::string fnv1aHex(const std::string& bytes);

}  // namespace friedrichs
