#pragma once

#include "christoffel/core.hpp"

namespace christoffel {

// y = A x + b with cached inverse; det must be nonzero for maps used in constructions.
template <typename S>
struct AffineMap {
  MatX<S> A;
  VecX<S> b;
  S det = S(0);
  MatX<S> A_inv;

  int dim() const { return int(A.rows()); }

  VecX<S> apply(const VecX<S>& x) const { return A * x + b; }
  VecX<S> apply_inv(const VecX<S>& y) const { return A_inv * (y - b); }
  VecX<S> apply_linear(const VecX<S>& v) const { return A * v; }
};

template <typename S>
AffineMap<S> make_affine(const MatX<S>& A, const VecX<S>& b) {
  AffineMap<S> m;
  m.A = A;
  m.b = b;
  m.det = A.determinant();
  if (m.det == S(0)) raise(errc::parameter_out_of_range, "affine map is singular");
  m.A_inv = A.inverse();
  return m;
}

template <typename S>
AffineMap<S> affine_identity(int dim) {
  return make_affine<S>(MatX<S>::Identity(dim, dim), VecX<S>::Zero(dim));
}

template <typename S>
AffineMap<S> affine_scale(int dim, S s) {
  return make_affine<S>(MatX<S>::Identity(dim, dim) * s, VecX<S>::Zero(dim));
}

// first applies g, then f
template <typename S>
AffineMap<S> compose(const AffineMap<S>& f, const AffineMap<S>& g) {
  return make_affine<S>(MatX<S>(f.A * g.A), VecX<S>(f.A * g.b + f.b));
}

template <typename S>
AffineMap<S> inverse(const AffineMap<S>& f) {
  return make_affine<S>(MatX<S>(f.A_inv), VecX<S>(-(f.A_inv * f.b)));
}

}  // namespace christoffel
