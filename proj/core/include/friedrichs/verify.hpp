// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "friedrichs/config.hpp"
#include "friedrichs/model.hpp"
#include "friedrichs/resonances.hpp"

namespace friedrichs {

struct CheckResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;     // what was measured (usually a max error)
  double threshold = 0.0;  // what it was compared against
  std::string detail;
};

struct VerifyOptions {
  SearchRegion region;
  bool have_region = false;  // otherwise a default around spec.a is used
  GridParams grid;
  bool include_hardy = true;
  bool include_oracle = true;
};

/// The model-generic invariant suite behind the CLI `verify` command: jump
/// and reflection identities, oracle agreement, Eq (4), unitarity, Laurent
/// structure, Hardy pairings and the decay semigroup, each as a pass/fail
/// check with its measured metric.
std::vector<CheckResult> verifyModel(const ModelSpec& spec, const VerifyOptions& opts);

SearchRegion defaultSearchRegion(const ModelSpec& spec);

}  // namespace friedrichs
