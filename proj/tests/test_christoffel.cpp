#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "christoffel/christoffel.hpp"

#include "support.hpp"

using namespace christoffel;
using V = VecX<double>;

namespace {
V vec1(double x) { V v(1); v << x; return v; }
V vec2(double x, double y) { return V(Vec2<double>(x, y)); }

// independent path: minimum of c'Gc subject to c'p = 1 through a pivoted LU solve
double lambda_extremal_lu(const MatX<double>& G, const V& p) {
  Eigen::FullPivLU<MatX<double>> lu(G);
  const V c = lu.solve(p);
  return 1.0 / p.dot(c);
}
}  // namespace

TEST_CASE("basis eval basics") {
  auto seg = make_segment<double>();
  auto spec1 = body_basis_spec(seg, 2);
  V at0 = basis_eval(spec1, vec1(0.0));
  CHECK(at0[0] == 1.0);
  CHECK(at0[1] == 0.0);
  CHECK(at0[2] == doctest::Approx(-0.5));

  auto square = make_square<double>();
  auto spec2 = body_basis_spec(square, 1);
  V at = basis_eval(spec2, vec2(0, 0));
  CHECK(at.size() == 3);
  CHECK(at[0] == 1.0);
  CHECK(at[1] == 0.0);
  CHECK(at[2] == 0.0);
  CHECK(basis_size(2, 1) == 3);
  CHECK(basis_size(3, 14) == 680);
}

TEST_CASE("christoffel_1d closed forms") {
  CHECK(christoffel_1d<double>(0, 0.37) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(christoffel_1d<double>(2, 0.0) == doctest::Approx(8.0 / 9).epsilon(1e-15));
  for (int n : {1, 5, 17, 40}) {
    CHECK(christoffel_1d<double>(n, 1.0) == doctest::Approx(2.0 / ((n + 1.0) * (n + 1.0))).epsilon(1e-13));
  }
}

TEST_CASE("gram path matches 1d closed form") {
  auto seg = make_segment<double>();
  Evaluator<double> ev(seg);
  for (int n : {1, 4, 10, 25, 40}) {
    for (int j = 0; j < 11; ++j) {
      const double x = std::cos(pi_v<double> * (j + 0.5) / 11);
      const double got = ev.eval(n, vec1(x)).lambda;
      const double expect = christoffel_1d<double>(n, x);
      CHECK(got == doctest::Approx(expect).epsilon(1e-11));
    }
  }
}

TEST_CASE("disc closed forms at degree one") {
  auto disc = make_disc<double>();
  Evaluator<double> ev(disc);
  CHECK(ev.eval(1, vec2(0, 0)).lambda == doctest::Approx(pi_v<double>).epsilon(1e-12));
  for (double t : {0.2, 0.5, 0.9}) {
    CHECK(ev.eval(1, vec2(t, 0)).lambda ==
          doctest::Approx(pi_v<double> / (1 + 4 * t * t)).epsilon(1e-12));
  }
}

TEST_CASE("scaling and affine invariance") {
  auto disc = make_disc<double>();
  auto scaled = make_affine_image<double>(affine_scale<double>(2, 2.0), ptr(make_disc<double>()));
  for (int n : {1, 3, 6}) {
    const double a = christoffel_eval(disc, n, vec2(0, 0)).lambda;
    const double b = christoffel_eval(scaled, n, vec2(0, 0)).lambda;
    CHECK(b == doctest::Approx(4 * a).epsilon(1e-10));
  }
  test_rng rng(51);
  for (int trial = 0; trial < 12; ++trial) {
    auto base = random_polygon(rng, 6);
    MatX<double> A = random_invertible(rng, 2, 0.35, 2.8);
    V off = vec2(rng.uniform(-1, 1), rng.uniform(-1, 1));
    auto map = make_affine<double>(A, off);
    auto image = make_affine_image<double>(map, ptr(base));
    const int n = rng.uniform_int(2, 10);
    V x = random_member(rng, base, 0.9);
    const double lhs = christoffel_eval(image, n, map.apply(x)).lambda;
    const double rhs = christoffel_eval(base, n, x).lambda * std::abs(map.det);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("extremal definition cross-check via independent dense solve") {
  test_rng rng(52);
  for (int trial = 0; trial < 8; ++trial) {
    auto body = random_polygon(rng, 5 + trial % 4);
    const int n = rng.uniform_int(1, 4);
    auto factor = make_gram_factor(body, n);
    auto G = gram_matrix(body, n);
    for (int rep = 0; rep < 4; ++rep) {
      V x = random_member(rng, body, 0.95);
      const double lam = christoffel_eval(body, factor, x).lambda;
      const double ref = lambda_extremal_lu(G, basis_eval(factor.spec, x));
      CHECK(lam == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("inclusion monotonicity on nested polygons") {
  test_rng rng(53);
  for (int trial = 0; trial < 6; ++trial) {
    auto outer = random_polygon(rng, 7);
    // inner: shrink toward the witness
    const auto& ov = std::get<Polygon2D<double>>(outer.shape).verts;
    std::vector<Vec2<double>> iv;
    const double s = rng.uniform(0.5, 0.9);
    for (const auto& v : ov) iv.push_back(Vec2<double>(outer.witness) + s * (v - Vec2<double>(outer.witness)));
    auto inner = make_polygon<double>(std::move(iv));
    const int n = rng.uniform_int(2, 12);
    Evaluator<double> ei(inner), eo(outer);
    for (int rep = 0; rep < 5; ++rep) {
      V x = random_member(rng, inner, 0.9);
      CHECK(ei.eval(n, x).lambda <= eo.eval(n, x).lambda + 1e-10);
    }
  }
}

TEST_CASE("degree monotonicity") {
  auto lp = make_lpball<double>(1.5);
  Evaluator<double> ev(lp);
  V x = vec2(0.55, 0.1);
  double prev = ev.eval(2, x).lambda;
  for (int n = 3; n <= 12; ++n) {
    const double cur = ev.eval(n, x).lambda;
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("near-monotone along rays toward the boundary") {
  std::vector<ConvexBody<double>> bodies;
  bodies.push_back(make_disc<double>());
  bodies.push_back(make_square<double>());
  bodies.push_back(make_lpball<double>(1.5));
  for (const auto& body : bodies) {
    Evaluator<double> ev(body);
    for (int n : {8, 16}) {
      for (double mu : {0.5, 0.9, 0.99}) {
        for (const auto& xv : {vec2(0.7, 0.0), vec2(0.4, 0.35), vec2(0.0, 0.9)}) {
          if (!contains(body, xv)) continue;
          const double lhs = ev.eval(n, xv).lambda;
          const double rhs = std::pow(mu, -2.0) * ev.eval(n, V(mu * xv)).lambda;
          CHECK(lhs <= rhs + 1e-10);
        }
      }
    }
  }
}

TEST_CASE("kernel identities") {
  auto disc = make_disc<double>();
  Evaluator<double> ev(disc);
  const int n = 7;
  auto factor = ev.factor(n);
  test_rng rng(54);
  for (int rep = 0; rep < 10; ++rep) {
    V x = random_member(rng, disc, 0.95);
    V y = random_member(rng, disc, 0.95);
    const double kxx = kernel_eval(*factor, x, x);
    const double lam = ev.eval(n, x).lambda;
    CHECK(kxx * lam == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(kernel_eval(*factor, x, y) == doctest::Approx(kernel_eval(*factor, y, x)).epsilon(1e-12));
  }
  // K reproduces constants: int_D K(x, .) dy = 1
  V x = vec2(0.3, -0.2);
  std::function<double(const V&)> kx = [&](const V& y) { return kernel_eval(*factor, x, y); };
  const double repro = body_integral_fn(disc, kx, n).value;
  CHECK(repro == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("exterior points are flagged but defined") {
  auto disc = make_disc<double>();
  auto v = christoffel_eval(disc, 4, vec2(1.3, 0.2));
  CHECK(v.exterior);
  CHECK(v.lambda > 0);
  auto inside = christoffel_eval(disc, 4, vec2(0.2, 0.2));
  CHECK_FALSE(inside.exterior);
}

TEST_CASE("degree caps raise") {
  auto disc = make_disc<double>();
  CHECK_THROWS_AS((void)gram_matrix(disc, 33), Error);
  auto hb = make_halfball3<double>();
  CHECK_THROWS_AS((void)gram_matrix(hb, 15), Error);
}

TEST_CASE("affine images of solids route through the base body") {
  MatX<double> A(3, 3);
  A << 1.5, 0, 0, 0.2, 1.1, 0, 0, 0, 0.9;
  V off(3);
  off << 0.3, -0.2, 0.5;
  auto map = make_affine<double>(A, off);
  auto hb = make_halfball3<double>();
  auto image = make_affine_image<double>(map, ptr(make_halfball3<double>()));
  V x(3);
  x << 0.2, 0.1, 0.3;
  const double base = christoffel_eval(hb, 6, x).lambda;
  const double routed = christoffel_eval(image, 6, V(map.apply(x))).lambda;
  CHECK(routed == doctest::Approx(base * std::abs(map.det)).epsilon(1e-11));
}

TEST_CASE("half ball evaluator sanity") {
  auto hb = make_halfball3<double>();
  Evaluator<double> ev(hb);
  const double mu = 0.2;
  auto v = ev.eval(6, V(Vec3<double>(1 - mu, 0, mu / 4)));
  CHECK(v.lambda > 0);
  CHECK(v.lambda < 2 * pi_v<double> / 3);  // bounded by the volume
  CHECK_FALSE(v.exterior);
  // degree monotone here as well
  CHECK(ev.eval(8, V(Vec3<double>(1 - mu, 0, mu / 4))).lambda <= v.lambda + 1e-12);
}

TEST_CASE("half factor reproduces the gram matrix") {
  // R'R against the independently assembled moment-table Gram; this crosses
  // the interior fan rule with the boundary reduction
  test_rng rng(55);
  std::vector<ConvexBody<double>> bodies;
  bodies.push_back(make_disc<double>());
  bodies.push_back(random_polygon(rng, 6));
  bodies.push_back(make_lpball<double>(1.6));
  bodies.push_back(make_halfball3<double>());
  for (const auto& body : bodies) {
    const int n = body.dim == 3 ? 5 : 8;
    auto f = make_gram_factor(body, n);
    auto G = gram_matrix(body, n);
    MatX<double> D = f.scale.asDiagonal();
    MatX<double> recon = D.inverse() * (f.R.transpose() * f.R) * D.inverse();
    const double rel = (recon - G).norm() / G.norm();
    CHECK(rel < 1e-12);
  }
}

TEST_CASE("condition estimates are reported") {
  auto lp = make_lpball<double>(1.2);
  auto factor = make_gram_factor(lp, 12);
  CHECK(factor.cond_estimate > 1.0);
  CHECK(factor.cond_estimate < 1e12);
}
