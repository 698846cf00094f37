// Copyright 2026 The groupsense Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "groupsense/camera.hpp"

namespace groupsense {

struct SymEigen3 {
  Vec3 values;   // descending
  Mat3 vectors;  // column i pairs with values(i); orthonormal, det = +1
};

/// Eigen-decomposition of a symmetric 3x3 matrix.
///
/// Eigenvalues come from the trigonometric solution of the characteristic
/// cubic. Eigenvectors are recovered from cross products of the rows of
/// C - lambda I, starting with the best-separated eigenvalue. When the
/// relative gap between any two eigenvalues falls below
/// kSym3JacobiGap the cyclic Jacobi method is used instead.
///
/// Throws Error(kContractViolation) if |C - C^T| exceeds 1e-9 (scaled by
/// max(1, |C|max)) or C has non-finite entries.
SymEigen3 eigendecompose_sym3(const Mat3& c);

/// Cyclic Jacobi rotations; exposed for testing the fallback path.
SymEigen3 eigendecompose_sym3_jacobi(const Mat3& c);

inline constexpr double kSym3JacobiGap = 1e-6;

}  // namespace groupsense
