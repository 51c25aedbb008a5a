#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "christoffel/quadrature.hpp"

#include "support.hpp"

using namespace christoffel;
using V = VecX<double>;

namespace {

MultiIndex mi2(int a, int b) {
  MultiIndex m;
  m.dim = 2;
  m.e = {a, b, 0};
  return m;
}

// independent oracle: unit-disc monomial moment by polar quadrature
double disc_moment_polar(int a, int b) {
  const auto& rule = gauss_legendre(64);
  double ang = 0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double th = pi_v<double> * (rule.x[i] + 1);  // [0, 2pi]
    ang += pi_v<double> * rule.w[i] * std::pow(std::cos(th), a) * std::pow(std::sin(th), b);
  }
  return ang / (a + b + 2);  // int_0^1 r^{a+b+1} dr
}

std::vector<Vec2<double>> square01() {
  return {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
}

}  // namespace

TEST_CASE("bigint and rational arithmetic") {
  test_rng rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    const long long a = rng.uniform_int(-1000000, 1000000);
    const long long b = rng.uniform_int(-1000000, 1000000);
    const long long c = rng.uniform_int(1, 99999);
    CHECK(BigInt::cmp(BigInt(a) + BigInt(b), BigInt(a + b)) == 0);
    CHECK(BigInt::cmp(BigInt(a) * BigInt(b), BigInt(a * b)) == 0);
    CHECK(BigInt::cmp(BigInt(a) / BigInt(c), BigInt(a / c)) == 0);
    CHECK(BigInt::cmp(BigInt(a) % BigInt(c), BigInt(a % c)) == 0);
  }
  // big powers survive round trips through division
  BigInt big = BigInt(1);
  for (int i = 0; i < 40; ++i) big = big * BigInt(1000003);
  BigInt q, r;
  BigInt::divrem(big * BigInt(777) + BigInt(5), big, q, r);
  CHECK(BigInt::cmp(q, BigInt(777)) == 0);
  CHECK(BigInt::cmp(r, BigInt(5)) == 0);
  CHECK(Rational::from_double(0.375).to_double() == 0.375);
  Rational sum;
  for (int k = 1; k <= 30; ++k) sum += Rational(1) / Rational(k);
  CHECK(sum.to_double() == doctest::Approx(3.9949871309203906).epsilon(1e-15));
}

TEST_CASE("polygon moments, exact values") {
  CHECK(polygon_moment(square01(), 2, 1).to_double() == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK((polygon_moment(square01(), 2, 1) == Rational(1) / Rational(6)));
  std::vector<Vec2<double>> tri{{0, 0}, {1, 0}, {0, 1}};
  CHECK((polygon_moment(tri, 1, 0) == Rational(1) / Rational(6)));
  std::vector<Vec2<double>> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  CHECK((polygon_moment(sq, 2, 0) == Rational(4) / Rational(3)));
  CHECK(polygon_moment(sq, 3, 5).is_zero());
}

TEST_CASE("ball moments against polar oracle") {
  CHECK(ball_moment(2, mi2(0, 0)) == doctest::Approx(pi_v<double>).epsilon(1e-14));
  CHECK(ball_moment(2, mi2(2, 0)) == doctest::Approx(disc_moment_polar(2, 0)).epsilon(1e-13));
  CHECK(ball_moment(2, mi2(2, 0)) == doctest::Approx(pi_v<double> / 4).epsilon(1e-14));
  CHECK(ball_moment(2, mi2(2, 2)) == doctest::Approx(disc_moment_polar(2, 2)).epsilon(1e-13));
  CHECK(ball_moment(2, mi2(2, 2)) == doctest::Approx(pi_v<double> / 24).epsilon(1e-14));
  CHECK(ball_moment(2, mi2(1, 2)) == 0.0);
  // scaling law: moments of sB^d are s^{d+|a|} times moments of B^d
  auto scaled = make_ball<double>(V(Vec2<double>(0, 0)), 1.7);
  auto spec = body_basis_spec(scaled, 4);
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 0}, {2, 0}, {2, 2}, {4, 0}}) {
    auto f = [&](const V& p) { return std::pow(p[0], a) * std::pow(p[1], b); };
    const double got = body_integral_fn(scaled, f, a + b).value;
    const double expect = std::pow(1.7, 2 + a + b) * ball_moment(2, mi2(a, b));
    CHECK(got == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("arc quadrature matches exact rational moments on random polygons") {
  test_rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    auto body = random_polygon(rng, 4 + trial % 6);
    const auto& verts = std::get<Polygon2D<double>>(body.shape).verts;
    const int a = rng.uniform_int(0, 10), b = rng.uniform_int(0, 10);
    auto f = [&](const V& p) { return exact_monomial(p[0], p[1], a, b); };
    const double arc = body_integral_fn(body, f, a + b).value;
    const double exact = polygon_moment(verts, a, b).to_double();
    CHECK(arc == doctest::Approx(exact).epsilon(1e-11));
  }
}

TEST_CASE("body integrals route by variant") {
  auto disc = make_disc<double>();
  auto one = [](const V&) { return 1.0; };
  CHECK(body_integral_fn(disc, one, 0).value == doctest::Approx(pi_v<double>).epsilon(1e-13));

  auto hb = make_halfball3<double>();
  auto r_hb = body_integral_fn(hb, one, 0);
  CHECK(r_hb.method == IntegralMethod::revolution);
  CHECK(r_hb.value == doctest::Approx(2 * pi_v<double> / 3).epsilon(1e-12));

  auto ball3 = make_ball<double>(V(Vec3<double>(0.2, -0.1, 0.3)), 0.8);
  CHECK(body_integral_fn(ball3, one, 0).value ==
        doctest::Approx(4.0 / 3 * pi_v<double> * std::pow(0.8, 3)).epsilon(1e-12));

  // second moments of the half ball about its own box
  auto fz = [](const V& p) { return p[2] * p[2]; };
  CHECK(body_integral_fn(hb, fz, 2).value == doctest::Approx(2 * pi_v<double> / 15).epsilon(1e-11));
  auto fx = [](const V& p) { return p[0] * p[0]; };
  CHECK(body_integral_fn(hb, fx, 2).value == doctest::Approx(2 * pi_v<double> / 15).epsilon(1e-11));
}

TEST_CASE("monte carlo hull volume against dense polygonal oracle") {
  auto a = ptr(make_disc<double>());
  auto b = ptr(make_affine_image<double>(
      make_affine<double>((MatX<double>(2, 2) << 0.7, 0.0, 0.0, 0.7).finished(),
                          V(Vec2<double>(0.9, 0.4))),
      ptr(make_disc<double>())));
  auto hull = make_hull<double>({a, b});
  std::vector<Vec2<double>> pts;
  for (const auto& p : sample_chain(a->chain, 100000)) pts.push_back(p);
  for (const auto& p : sample_chain(b->chain, 100000)) pts.push_back(p);
  auto poly = convex_hull(pts);
  double oracle = 0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    oracle += poly[i].x() * poly[(i + 1) % poly.size()].y() - poly[i].y() * poly[(i + 1) % poly.size()].x();
  oracle /= 2;
  auto one = [](const V&) { return 1.0; };
  auto mc = monte_carlo_integral(hull, one);
  CHECK(std::abs(mc.value - oracle) <= mc.abs_error_bound);
  // the explicit chain agrees too
  CHECK(chain_area(hull.chain) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("monte carlo stays inside its own three sigma bound") {
  test_rng rng(31);
  int hits = 0;
  const int trials = 60;
  for (int trial = 0; trial < trials; ++trial) {
    auto body = random_polygon(rng, 6);
    const auto& verts = std::get<Polygon2D<double>>(body.shape).verts;
    const double exact = polygon_moment(verts, 1, 1).to_double();
    auto f = [](const V& p) { return p[0] * p[1]; };
    McOptions opt;
    opt.samples = 40000;
    opt.seed = 1000 + trial;
    opt.enforce_tolerance = false;
    auto mc = monte_carlo_integral(body, f, opt);
    if (std::abs(mc.value - exact) <= mc.abs_error_bound) ++hits;
  }
  CHECK(hits >= trials - 1);
}

TEST_CASE("gram matrix closed forms") {
  auto disc = make_disc<double>();
  auto G = gram_matrix(disc, 1);
  CHECK(G(0, 0) == doctest::Approx(pi_v<double>).epsilon(1e-13));
  CHECK(G(1, 1) == doctest::Approx(ball_moment(2, mi2(2, 0))).epsilon(1e-13));
  CHECK(G(2, 2) == doctest::Approx(ball_moment(2, mi2(0, 2))).epsilon(1e-13));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(G(i, j)) < 1e-14);

  auto square = make_square<double>();
  auto Gs = gram_matrix(square, 1);
  CHECK(Gs(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(Gs(1, 1) == doctest::Approx(4.0 / 3).epsilon(1e-14));
  CHECK(Gs(2, 2) == doctest::Approx(4.0 / 3).epsilon(1e-14));

  // assembled symmetric exactly
  test_rng rng(12);
  auto body = random_polygon(rng, 7);
  auto Gr = gram_matrix(body, 8);
  CHECK((Gr - Gr.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gram against exact rational moments at high degree") {
  // polygon path: boundary Gauss is exact on straight edges, cross-check a few
  // entries against the rational moment expansion at moderate degree
  test_rng rng(21);
  auto body = random_polygon(rng, 5);
  const int n = 9;
  auto spec = body_basis_spec(body, n);
  auto G = gram_matrix(body, n);
  for (int rep = 0; rep < 12; ++rep) {
    const int i = rng.uniform_int(0, spec.size() - 1);
    const int j = rng.uniform_int(0, spec.size() - 1);
    V ci = V::Zero(spec.size()), cj = V::Zero(spec.size());
    ci[i] = 1;
    // integral of b_i b_j via the exact path on the product expansion:
    // compare with quadrature of the pointwise product instead
    auto f = [&](const V& p) {
      auto vals = basis_eval(spec, p);
      return vals[i] * vals[j];
    };
    const double viaq = body_integral_fn(body, f, 2 * n).value;
    CHECK(G(i, j) == doctest::Approx(viaq).epsilon(1e-11));
  }
}

TEST_CASE("affine change of variables for body integrals") {
  test_rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    auto base = random_polygon(rng, 6);
    MatX<double> A = random_invertible(rng, 2, 0.4, 2.5);
    V b(2);
    b << rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5);
    auto map = make_affine<double>(A, b);
    auto image = make_affine_image<double>(map, ptr(base));
    const int a1 = rng.uniform_int(0, 5), b1 = rng.uniform_int(0, 4);
    auto f = [&](const V& p) { return std::pow(p[0], a1) * std::pow(p[1], b1); };
    auto f_pulled = [&](const V& p) { return f(map.apply(p)); };
    const double lhs = body_integral_fn(image, f, a1 + b1).value;
    const double rhs = std::abs(map.det) * body_integral_fn(base, f_pulled, a1 + b1).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("lp ball integrals reach quadrature targets") {
  // area of the l_alpha unit ball: 4 Gamma(1+1/a)^2 / Gamma(1+2/a)
  for (double alpha : {1.0, 1.2, 1.5, 2.0, 3.0, 4.5}) {
    auto lp = make_lpball<double>(alpha);
    auto one = [](const V&) { return 1.0; };
    const double exact = 4 * std::pow(std::tgamma(1 + 1 / alpha), 2) / std::tgamma(1 + 2 / alpha);
    CHECK(body_integral_fn(lp, one, 0).value == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("coefficient-based integrals route by body") {
  test_rng rng(77);
  // polygon: exact rational path against the arc path
  auto poly = random_polygon(rng, 6);
  auto spec_p = body_basis_spec(poly, 5);
  V coeffs = V::Zero(spec_p.size());
  for (int i = 0; i < spec_p.size(); ++i) coeffs[i] = rng.uniform(-1, 1);
  auto exact = body_integral(poly, spec_p, coeffs);
  CHECK(exact.method == IntegralMethod::exact_rational);
  std::function<double(const V&)> f = [&](const V& p) { return basis_eval(spec_p, p).dot(coeffs); };
  const double arc = body_integral_fn(poly, f, 10).value;
  CHECK(exact.value == doctest::Approx(arc).epsilon(1e-12));

  // disc: arc path; constant coefficient integrates to the area
  auto disc = make_disc<double>();
  auto spec_d = body_basis_spec(disc, 3);
  V ones = V::Zero(spec_d.size());
  ones[0] = 1.0;
  auto r = body_integral(disc, spec_d, ones);
  CHECK(r.method == IntegralMethod::arc_quadrature);
  CHECK(r.value == doctest::Approx(pi_v<double>).epsilon(1e-13));

  // half ball: revolution path
  auto hb = make_halfball3<double>();
  auto spec_h = body_basis_spec(hb, 2);
  V ch = V::Zero(spec_h.size());
  ch[0] = 2.0;
  auto rh = body_integral(hb, spec_h, ch);
  CHECK(rh.method == IntegralMethod::revolution);
  CHECK(rh.value == doctest::Approx(4 * pi_v<double> / 3).epsilon(1e-12));
}

TEST_CASE("legendre moment table on the half ball") {
  // T(0,0,0) is the volume; odd entries in x vanish by symmetry
  auto hb = make_halfball3<double>();
  auto spec = body_basis_spec(hb, 4);
  auto T = legendre_moment_table_3d(hb, spec, 8);
  auto at = [&](int k, int l, int m) { return T[(std::size_t(k) * 9 + l) * 9 + m]; };
  CHECK(at(0, 0, 0) == doctest::Approx(2 * pi_v<double> / 3).epsilon(1e-12));
  CHECK(std::abs(at(1, 0, 0)) < 1e-13);
  CHECK(std::abs(at(0, 1, 0)) < 1e-13);
  CHECK(std::abs(at(3, 2, 1)) < 1e-13);
}
