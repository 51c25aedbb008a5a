#pragma once

#include "christoffel/legendre.hpp"

#include <array>

namespace christoffel {

struct MultiIndex {
  std::array<int, 3> e{0, 0, 0};
  int dim = 0;
  int total() const {
    int s = 0;
    for (int k = 0; k < dim; ++k) s += e[k];
    return s;
  }
};

// Graded lexicographic enumeration of all |alpha| <= n in d variables.
inline std::vector<MultiIndex> index_set(int dim, int n) {
  std::vector<MultiIndex> out;
  auto push = [&](int a, int b, int c) {
    MultiIndex m;
    m.dim = dim;
    m.e = {a, b, c};
    out.push_back(m);
  };
  for (int deg = 0; deg <= n; ++deg) {
    if (dim == 1) push(deg, 0, 0);
    else if (dim == 2)
      for (int a = deg; a >= 0; --a) push(a, deg - a, 0);
    else
      for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b) push(a, b, deg - a - b);
  }
  return out;
}

inline std::int64_t basis_size(int dim, int n) {
  std::int64_t r = 1;
  for (int k = 1; k <= dim; ++k) r = r * (n + k) / k;
  return r;
}

inline int max_total_degree(int dim) {
  switch (dim) {
    case 1: return 60;
    case 2: return 32;
    case 3: return 14;
    default: raise(errc::unsupported, "dimension must be 1, 2 or 3");
  }
}

// Tensor Legendre polynomials on the reference box, restricted to total degree <= n.
template <typename S>
struct BasisSpec {
  int dim = 0;
  int degree = 0;
  VecX<S> center;     // box center per axis
  VecX<S> halfwidth;  // box half width per axis
  std::vector<MultiIndex> indices;

  int size() const { return int(indices.size()); }
  VecX<S> to_box(const VecX<S>& x) const {
    return (x - center).cwiseQuotient(halfwidth);
  }
};

template <typename S>
BasisSpec<S> make_basis_spec(int dim, int n, const VecX<S>& lo, const VecX<S>& hi) {
  if (n < 0) raise(errc::parameter_out_of_range, "degree < 0");
  if (n > max_total_degree(dim))
    raise(errc::degree_too_large, "total degree " + std::to_string(n) + " exceeds cap for d=" + std::to_string(dim));
  BasisSpec<S> spec;
  spec.dim = dim;
  spec.degree = n;
  spec.center = (lo + hi) / 2;
  spec.halfwidth = (hi - lo) / 2;
  for (int k = 0; k < dim; ++k)
    if (!(spec.halfwidth[k] > S(0)))
      raise(errc::parameter_out_of_range, "degenerate reference box");
  spec.indices = index_set(dim, n);
  return spec;
}

// Values of all basis elements at x, in graded-lex order.
template <typename S>
VecX<S> basis_eval(const BasisSpec<S>& spec, const VecX<S>& x) {
  const int n = spec.degree;
  VecX<S> u = spec.to_box(x);
  std::array<std::vector<S>, 3> leg;
  for (int k = 0; k < spec.dim; ++k) {
    leg[k].resize(n + 1);
    legendre_values(u[k], n, leg[k].data());
  }
  VecX<S> out(spec.size());
  for (int i = 0; i < spec.size(); ++i) {
    S v = S(1);
    for (int k = 0; k < spec.dim; ++k) v *= leg[k][spec.indices[i].e[k]];
    out[i] = v;
  }
  return out;
}

}  // namespace christoffel
