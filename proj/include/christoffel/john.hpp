#pragma once

#include "christoffel/measure.hpp"

namespace christoffel {

template <typename S>
struct Ellipsoid {
  VecX<S> center;
  MatX<S> shape;  // {x : (x-c)' shape (x-c) <= 1}
};

// Minimum-volume enclosing ellipsoid of a point cloud (Khachiyan's multiplicative
// update on the lifted moment matrix).
template <typename S>
Ellipsoid<S> min_enclosing_ellipsoid(const std::vector<VecX<S>>& pts, S eps = S(1e-7), int max_iter = 5000) {
  const int d = int(pts.front().size());
  const int n = int(pts.size());
  MatX<S> Q(d + 1, n);
  for (int j = 0; j < n; ++j) {
    Q.col(j).head(d) = pts[j];
    Q(d, j) = 1;
  }
  VecX<S> w = VecX<S>::Constant(n, S(1) / n);
  for (int it = 0; it < max_iter; ++it) {
    MatX<S> M = Q * w.asDiagonal() * Q.transpose();
    MatX<S> Minv = M.inverse();
    int jmax = 0;
    S gmax = -1;
    for (int j = 0; j < n; ++j) {
      const S g = Q.col(j).dot(Minv * Q.col(j));
      if (g > gmax) { gmax = g; jmax = j; }
    }
    if (gmax <= (d + 1) * (1 + eps)) break;
    const S step = (gmax - (d + 1)) / ((d + 1) * (gmax - 1));
    w *= (1 - step);
    w[jmax] += step;
  }
  Ellipsoid<S> e;
  e.center = VecX<S>::Zero(d);
  for (int j = 0; j < n; ++j) e.center += w[j] * pts[j];
  MatX<S> P = MatX<S>::Zero(d, d);
  for (int j = 0; j < n; ++j) P += w[j] * pts[j] * pts[j].transpose();
  P -= e.center * e.center.transpose();
  e.shape = P.inverse() / S(d);
  return e;
}

// Affine T with B^d subset T(D) subset d B^d, built from the enclosing
// ellipsoid of dense boundary samples (slightly inflated to absorb sampling).
template <typename S>
AffineMap<S> john_map(const ConvexBody<S>& body, int samples = 2048) {
  const int d = body.dim;
  if (d < 2) return affine_identity<S>(1);
  auto pts = sample_boundary(body, samples);
  Ellipsoid<S> e = min_enclosing_ellipsoid<S>(pts);
  e.shape /= S(1) + S(1e-4);  // inflate the ellipsoid
  Eigen::SelfAdjointEigenSolver<MatX<S>> es(e.shape);
  if (es.info() != Eigen::Success) raise(errc::numerical_failure, "john_map: eigensolver failed");
  MatX<S> root = es.eigenvectors() * es.eigenvalues().cwiseMax(S(0)).cwiseSqrt().asDiagonal() *
                 es.eigenvectors().transpose();
  MatX<S> A = S(d) * root;
  return make_affine<S>(A, VecX<S>(-A * e.center));
}

}  // namespace christoffel
