// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "friedrichs/model.hpp"

// The two models used throughout the suite: the scalar half-line model with
// form factor (z + i)^-2 at a = 1, and a coupled 2x2 model with order-2
// poles at +-i and a = [1, 3]. Identical to models/*.json.
inline friedrichs::ModelSpec scalarModel(double eps) {
  using namespace friedrichs;
  Matrix c(1, 1);
  c(0, 0) = 1.0;
  RationalMatrixFunction M(1, 1, {{Complex{0.0, -1.0}, 2, c}});
  RealVector a(1);
  a << 1.0;
  return ModelSpec::make(a, M, eps);
}

inline friedrichs::ModelSpec twoChannelModel(double eps) {
  using namespace friedrichs;
  Matrix c1(2, 2), c2(2, 2);
  c1 << 0.0, 1.0, 0.0, 0.5;
  c2 << 0.0, 0.0, 0.8, 0.0;
  RationalMatrixFunction M(2, 2, {{Complex{0.0, 1.0}, 2, c1},
                                  {Complex{0.0, -1.0}, 2, c2}});
  RealVector a(2);
  a << 1.0, 3.0;
  return ModelSpec::make(a, M, eps);
}
