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

#include "groupsense/sym3_eigen.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "groupsense/error.hpp"

namespace groupsense {

namespace {

void check_symmetric(const Mat3& c) {
  if (!c.allFinite()) {
    throw Error(ErrorKind::kContractViolation, "matrix has non-finite entries");
  }
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error(ErrorKind::kContractViolation, "matrix is not symmetric");
  }
}

// Unit eigenvector for a well-separated eigenvalue: the largest cross
// product of two rows of (A - lambda I) spans its null space.
Vec3 separated_eigenvector(const Mat3& a, double lambda) {
  const Mat3 m = a - lambda * Mat3::Identity();
  const Vec3 r0 = m.row(0).transpose();
  const Vec3 r1 = m.row(1).transpose();
  const Vec3 r2 = m.row(2).transpose();
  const std::array<Vec3, 3> candidates = {r0.cross(r1), r0.cross(r2), r1.cross(r2)};
  std::size_t best = 0;
  double best_norm = candidates[0].squaredNorm();
  for (std::size_t i = 1; i < 3; ++i) {
    const double n = candidates[i].squaredNorm();
    if (n > best_norm) {
      best = i;
      best_norm = n;
    }
  }
  if (best_norm == 0.0) return Vec3::UnitX();
  return candidates[best] / std::sqrt(best_norm);
}

// Orthonormal pair (u, v) completing w to a right-handed basis.
void complement_basis(const Vec3& w, Vec3& u, Vec3& v) {
  if (std::abs(w.x()) > std::abs(w.y())) {
    const double inv = 1.0 / std::sqrt(w.x() * w.x() + w.z() * w.z());
    u = Vec3(-w.z() * inv, 0.0, w.x() * inv);
  } else {
    const double inv = 1.0 / std::sqrt(w.y() * w.y() + w.z() * w.z());
    u = Vec3(0.0, w.z() * inv, -w.y() * inv);
  }
  v = w.cross(u);
}

// Eigenvector for lambda restricted to the plane orthogonal to `known`.
Vec3 eigenvector_in_complement(const Mat3& a, const Vec3& known, double lambda) {
  Vec3 u, v;
  complement_basis(known, u, v);
  const Vec3 au = a * u;
  const Vec3 av = a * v;
  double m00 = u.dot(au) - lambda;
  double m01 = u.dot(av);
  double m11 = v.dot(av) - lambda;
  const double abs00 = std::abs(m00);
  const double abs01 = std::abs(m01);
  const double abs11 = std::abs(m11);
  if (abs00 >= abs11) {
    if (std::max(abs00, abs01) == 0.0) return u;
    if (abs00 >= abs01) {
      m01 /= m00;
      m00 = 1.0 / std::sqrt(1.0 + m01 * m01);
      m01 *= m00;
    } else {
      m00 /= m01;
      m01 = 1.0 / std::sqrt(1.0 + m00 * m00);
      m00 *= m01;
    }
    return (m01 * u - m00 * v).normalized();
  }
  if (std::max(abs11, abs01) == 0.0) return u;
  if (abs11 >= abs01) {
    m01 /= m11;
    m11 = 1.0 / std::sqrt(1.0 + m01 * m01);
    m01 *= m11;
  } else {
    m11 /= m01;
    m01 = 1.0 / std::sqrt(1.0 + m11 * m11);
    m11 *= m01;
  }
  return (m11 * u - m01 * v).normalized();
}

SymEigen3 sorted(Vec3 values, Mat3 vectors) {
  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return values(i) > values(j); });
  SymEigen3 out;
  for (int k = 0; k < 3; ++k) {
    out.values(k) = values(order[k]);
    out.vectors.col(k) = vectors.col(order[k]);
  }
  if (out.vectors.determinant() < 0.0) out.vectors.col(2) = -out.vectors.col(2);
  return out;
}

SymEigen3 jacobi(const Mat3& c) {
  Mat3 a = c;
  Mat3 v = Mat3::Identity();
  const double norm = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (off <= (1e-17 * norm) * (1e-17 * norm)) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for (int k = 0; k < 3; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = cs * akp - sn * akq;
          a(k, q) = sn * akp + cs * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = cs * apk - sn * aqk;
          a(q, k) = sn * apk + cs * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = cs * vkp - sn * vkq;
          v(k, q) = sn * vkp + cs * vkq;
        }
      }
    }
  }
  return sorted(a.diagonal(), v);
}

}  // namespace

SymEigen3 eigendecompose_sym3_jacobi(const Mat3& c) {
  check_symmetric(c);
  return jacobi(0.5 * (c + c.transpose()));
}

SymEigen3 eigendecompose_sym3(const Mat3& c_in) {
  check_symmetric(c_in);
  const Mat3 c = 0.5 * (c_in + c_in.transpose());
  const double scale = c.cwiseAbs().maxCoeff();
  if (scale == 0.0) return {Vec3::Zero(), Mat3::Identity()};

  const Mat3 a = c / scale;
  const double q = a.trace() / 3.0;
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double d0 = a(0, 0) - q;
  const double d1 = a(1, 1) - q;
  const double d2 = a(2, 2) - q;
  const double p = std::sqrt((d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1) / 6.0);
  if (p == 0.0) {
    return {Vec3::Constant(q * scale), Mat3::Identity()};
  }
  const Mat3 b = (a - q * Mat3::Identity()) / p;
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double l1 = q + 2.0 * p * std::cos(phi);
  const double l3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double l2 = 3.0 * q - l1 - l3;

  const double spread = std::max({std::abs(l1), std::abs(l2), std::abs(l3)});
  const double gap12 = l1 - l2;
  const double gap23 = l2 - l3;
  if (std::min(gap12, gap23) < kSym3JacobiGap * spread) {
    SymEigen3 out = jacobi(a);
    out.values *= scale;
    return out;
  }

  Vec3 v1, v2, v3;
  if (gap12 >= gap23) {
    v1 = separated_eigenvector(a, l1);
    v2 = eigenvector_in_complement(a, v1, l2);
    v3 = v1.cross(v2);
  } else {
    v3 = separated_eigenvector(a, l3);
    v2 = eigenvector_in_complement(a, v3, l2);
    v1 = v2.cross(v3);
  }
  SymEigen3 out;
  out.values = Vec3(l1, l2, l3) * scale;
  out.vectors.col(0) = v1;
  out.vectors.col(1) = v2;
  out.vectors.col(2) = v3;
  return out;
}

}  // namespace groupsense
