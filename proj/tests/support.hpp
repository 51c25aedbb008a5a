#pragma once

#include "christoffel/geometry.hpp"

#include <random>

namespace christoffel {

struct test_rng {
  std::mt19937_64 eng;
  explicit test_rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(eng);
  }
  int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
};

inline VecX<double> random_dir(test_rng& rng, int dim) {
  VecX<double> u(dim);
  std::normal_distribution<double> g;
  for (int k = 0; k < dim; ++k) u[k] = g(rng.eng);
  return u.normalized();
}

// random strictly convex ccw polygon around the origin
inline ConvexBody<double> random_polygon(test_rng& rng, int target_verts) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<double> angles(target_verts + 4);
    for (auto& a : angles) a = rng.uniform(0, 2 * pi_v<double>);
    std::sort(angles.begin(), angles.end());
    std::vector<Vec2<double>> pts;
    for (double a : angles) {
      const double r = rng.uniform(0.5, 1.3);
      pts.push_back(Vec2<double>(r * std::cos(a), r * std::sin(a)));
    }
    auto hull = convex_hull(pts, 1e-7);
    if (int(hull.size()) < 4) continue;
    try {
      return make_polygon<double>(std::move(hull));
    } catch (const Error&) {
      continue;
    }
  }
  raise(errc::numerical_failure, "random_polygon: generation failed");
}

// rejection-sampled interior point; shrink < 1 keeps it away from the boundary
inline VecX<double> random_member(test_rng& rng, const ConvexBody<double>& body, double shrink = 1.0) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    VecX<double> p(body.dim);
    for (int k = 0; k < body.dim; ++k) p[k] = rng.uniform(body.box_lo[k], body.box_hi[k]);
    if (shrink < 1.0) p = body.witness + shrink * (p - body.witness);
    if (contains(body, p, -1e-9)) return p;
  }
  raise(errc::numerical_failure, "random_member: rejection sampling failed");
}

inline MatX<double> random_invertible(test_rng& rng, int dim, double smin, double smax) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    MatX<double> A(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) A(i, j) = rng.uniform(-1, 1);
    Eigen::JacobiSVD<MatX<double>> svd(A);
    const double lo = svd.singularValues().minCoeff();
    const double hi = svd.singularValues().maxCoeff();
    if (lo > smin && hi < smax) return A;
    A = A * (smax / (2 * hi));
    Eigen::JacobiSVD<MatX<double>> svd2(A);
    if (svd2.singularValues().minCoeff() > smin) return A;
  }
  raise(errc::numerical_failure, "random_invertible: generation failed");
}


// monomial evaluated by long-double squaring so the oracle comparison tests
// the quadrature path rather than std::pow roundoff
inline double exact_monomial(double x, double y, int a, int b) {
  auto ipow = [](long double v, int e) {
    long double r = 1.0L;
    while (e) {
      if (e & 1) r *= v;
      v *= v;
      e >>= 1;
    }
    return r;
  };
  return double(ipow(x, a) * ipow(y, b));
}

// independent oracle: half chord length along +/-v by bisection on membership
inline double chord_half_length_bisect(const ConvexBody<double>& body, const VecX<double>& x,
                                       const VecX<double>& v) {
  double lo = 0, hi = 8;
  while (contains(body, VecX<double>(x + hi * v))) hi *= 2;
  for (int it = 0; it < 80; ++it) {
    const double mid = (lo + hi) / 2;
    if (contains(body, VecX<double>(x + mid * v))) lo = mid;
    else hi = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace christoffel

using christoffel::test_rng;
using christoffel::random_dir;
using christoffel::random_polygon;
using christoffel::random_member;
using christoffel::random_invertible;
using christoffel::chord_half_length_bisect;
using christoffel::exact_monomial;
