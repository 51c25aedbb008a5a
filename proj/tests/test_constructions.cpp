#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "christoffel/constructions.hpp"

#include "support.hpp"

using namespace christoffel;
using V = VecX<double>;

namespace {
V vec2(double x, double y) { return V(Vec2<double>(x, y)); }
V vec3(double x, double y, double z) { return V(Vec3<double>(x, y, z)); }
}  // namespace

TEST_CASE("halfspace box map slack identity") {
  V w = vec2(1, 0);
  auto map = halfspace_box_map<double>(1.0, 2, 0.4, 0.1, w);
  CHECK(1 - map.y[0] == doctest::Approx(2 * 1.0 * 0.1 / (1.0 * 2)).epsilon(1e-13));
  CHECK(map.y[1] == doctest::Approx(0.0));
  // generic parameters keep the identity
  V w3 = vec3(0.6, std::sqrt(1 - 0.36 - 0.09), 0.3);
  auto map3 = halfspace_box_map<double>(1.7, 3, -0.2, 0.07, w3);
  CHECK(1 - map3.y[0] == doctest::Approx(2 * 0.6 * 0.07 / (1.7 * 3)).epsilon(1e-12));
  CHECK(map3.slack[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)halfspace_box_map<double>(1.0, 2, 0.0, 0.1, V(vec2(-0.1, 1))), Error);
}

TEST_CASE("supporting normal satisfies the nu constraint") {
  // w_1 >= 1/(nu+1) in the frame aligned with u
  auto disc = make_disc<double>();
  test_rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    V x = random_member(rng, disc, 0.9);
    V u = random_dir(rng, 2);
    auto m = measure(disc, x, std::make_optional(u));
    const V exit = V(x + m.delta * m.u);
    const V w = supporting_normal(disc, exit, m.u);
    CHECK(w.dot(m.u) >= 1.0 / (m.nu + 1) - 1e-6);
  }
}

TEST_CASE("halfspace map contains the body") {
  auto disc = make_disc<double>();
  auto map = halfspace_box_map_for(disc, vec2(0.5, 0.0), vec2(1, 0));
  CHECK(map.containment_violation <= 1e-9);
  CHECK(map.slack[0] > 0);

  auto hb = make_halfball3<double>();
  const double mu = 0.15;
  V u = vec3(4 / std::sqrt(17.0), 0, -1 / std::sqrt(17.0));
  auto map3 = halfspace_box_map_for(hb, vec3(1 - mu, 0, mu / 4), u);
  CHECK(map3.containment_violation <= 1e-9);
}

TEST_CASE("parallelogram construction on the disc") {
  auto disc = make_disc<double>();
  for (double a : {0.9, 0.97}) {
    V x = vec2(0.0, a);
    auto map = parallelogram_2d(disc, x, vec2(0, 1));
    CHECK(map.containment_violation <= 1e-9);
    const double delta = 1 - a;
    const double l = std::sqrt(1 - a * a);
    // sin phi of the chord lines and the determinant bound are recorded
    const double sin_expected = delta * 2 * l / (l * l + delta * delta);
    CHECK(map.sin_phi == doctest::Approx(sin_expected).epsilon(1e-6));
    CHECK(map.sin_phi >= 0.4 * (delta / l + delta / l));
    CHECK(map.det_abs <= 40.0 / map.sin_phi);
    CHECK(map.slack[0] <= 8 * l * map.sin_phi);
    CHECK(map.slack[1] <= 8 * l * map.sin_phi);
  }
  // wide chords route to the half-space map
  CHECK_THROWS_AS((void)parallelogram_2d(disc, vec2(0.0, 0.0), vec2(0, 1)), Error);
}

TEST_CASE("max area triangle") {
  std::vector<Vec2<double>> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(triangle_area(max_area_triangle(square)) == doctest::Approx(0.5).epsilon(1e-15));
  std::vector<Vec2<double>> tri{{0, 0}, {2, 0}, {0, 3}};
  CHECK(triangle_area(max_area_triangle(tri)) == doctest::Approx(3.0).epsilon(1e-15));
  std::vector<Vec2<double>> hex;
  for (int k = 0; k < 6; ++k)
    hex.push_back(Vec2<double>(std::cos(pi_v<double> * k / 3), std::sin(pi_v<double> * k / 3)));
  CHECK(triangle_area(max_area_triangle(hex)) == doctest::Approx(3 * std::sqrt(3.0) / 4).epsilon(1e-13));
}

TEST_CASE("simplex homothety inclusion") {
  // 2(S - z') + z' inside (d+1)(S - z) + z for sampled z' in S
  test_rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<Vec2<double>, 3> tri;
    for (auto& v : tri) v = Vec2<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (triangle_area(tri) < 0.05) continue;
    const Vec2<double> z = (tri[0] + tri[1] + tri[2]) / 3;
    std::array<Vec2<double>, 3> big;
    for (int i = 0; i < 3; ++i) big[i] = z + 4.0 * (tri[i] - z);
    auto inside = [&](const Vec2<double>& p, const std::array<Vec2<double>, 3>& t) {
      for (int i = 0; i < 3; ++i) {
        const Vec2<double> e = t[(i + 1) % 3] - t[i];
        const Vec2<double> r = p - t[i];
        const double orient = (t[1] - t[0]).x() * (t[2] - t[0]).y() - (t[1] - t[0]).y() * (t[2] - t[0]).x();
        if ((e.x() * r.y() - e.y() * r.x()) * orient < -1e-12) return false;
      }
      return true;
    };
    for (int rep = 0; rep < 30; ++rep) {
      double b0 = rng.uniform(0, 1), b1 = rng.uniform(0, 1 - b0);
      const Vec2<double> zp = tri[0] * b0 + tri[1] * b1 + tri[2] * (1 - b0 - b1);
      for (const auto& vert : tri) {
        const Vec2<double> doubled = zp + 2.0 * (vert - zp);
        CHECK(inside(doubled, big));
      }
    }
  }
}

TEST_CASE("corner map on the half ball") {
  auto hb = make_halfball3<double>();
  const double mu = 0.12;
  V x = vec3(1 - mu, 0, mu / 4);
  V u = vec3(4 / std::sqrt(17.0), 0, -1 / std::sqrt(17.0));
  auto map = corner_map_3d(hb, x, u);
  CHECK(map.containment_violation <= 1e-9);
  const double delta = std::sqrt(17.0) / 4 * mu;
  // |det T| <= c delta^{1-d} Vol_2(section)
  const double vol = section_volume(hb, x, u);
  CHECK(map.det_abs <= 600 * vol / (delta * delta));
  for (int i = 0; i < 3; ++i) CHECK(map.slack[i] <= delta / 0.25 + 1e-9);
}

TEST_CASE("univariate endpoint needle has the kernel norm") {
  // integral over [-1,1] of q_m(t; 1)^2 equals lambda_m([-1,1], 1)
  const int m = 3;
  const double kyy = legendre_kernel_1d<double>(m, 1.0, 1.0);
  double norm = 0;  // sum over k of c_k^2 * 2/(2k+1)
  for (int k = 0; k <= m; ++k) {
    const double ck = (2 * k + 1) / 2.0 / kyy;  // P_k(1) = 1
    norm += ck * ck * 2.0 / (2 * k + 1);
  }
  CHECK(norm == doctest::Approx(christoffel_1d<double>(m, 1.0)).epsilon(1e-14));
  CHECK(norm == doctest::Approx(1.0 / 8).epsilon(1e-14));
}

TEST_CASE("certificate chain inequality") {
  struct Case {
    ConvexBody<double> body;
    V x;
    int n;
  };
  std::vector<Case> cases;
  cases.push_back({make_disc<double>(), vec2(0.6, 0.0), 12});
  cases.push_back({make_square<double>(), vec2(0.3, -0.5), 10});
  cases.push_back({make_lpball<double>(1.5), vec2(0.55, 0.3), 14});
  cases.push_back({make_halfball3<double>(), vec3(1 - 0.2, 0, 0.05), 9});
  for (auto& c : cases) {
    auto cert = certify(c.body, c.x, c.n);
    Evaluator<double> ev(c.body);
    const double lam = ev.eval(c.n, c.x).lambda;
    CHECK(cert.value_at_x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lam <= cert.l2sq.value * (1 + 1e-9));
    CHECK(cert.l2sq.value <= cert.product_bound * (1 + 1e-9));
  }
}

TEST_CASE("bound rhs formulas") {
  Measurement<double> m;
  m.delta = 0.25;
  m.l1 = m.l2 = 0.5;
  CHECK(bound_rhs(m, 10, 2) == doctest::Approx(0.01 * 0.5).epsilon(1e-14));
  // l1 l2 >= delta falls back to sqrt(delta)
  m.l1 = m.l2 = 0.9;
  CHECK(bound_rhs(m, 10, 2) == doctest::Approx(0.01 * std::sqrt(0.25)).epsilon(1e-14));
  m.delta = 1e-4;
  CHECK_THROWS_AS((void)bound_rhs(m, 10, 2), Error);
  // lp ball scaling: the bound at (1-delta, 0) scales like delta^{1/alpha}
  for (double alpha : {1.25, 1.75}) {
    auto lp = make_lpball<double>(alpha);
    const double d1 = 0.02, d2 = 0.16;
    auto m1 = measure(lp, vec2(1 - d1, 0), std::make_optional(vec2(1, 0)));
    auto m2 = measure(lp, vec2(1 - d2, 0), std::make_optional(vec2(1, 0)));
    const double slope = std::log(bound_rhs(m2, 20, 2) / bound_rhs(m1, 20, 2)) / std::log(d2 / d1);
    CHECK(slope == doctest::Approx(1 / alpha).epsilon(0.08));
  }
}

TEST_CASE("chord intercept formula") {
  // symmetric case: m1 = m2 = sqrt(delta (4 - delta))
  auto [m1, m2] = detail::chord_intercepts(0.0, 0.04);
  CHECK(m1 == doctest::Approx(std::sqrt(0.04 * 3.96)).epsilon(1e-14));
  CHECK(m1 == doctest::Approx(0.3979949748).epsilon(1e-9));
  CHECK(m2 == doctest::Approx(m1).epsilon(1e-14));
  // the chordal product is the power of the point over 1 + alpha^2
  for (double alpha : {0.3, 0.8}) {
    auto [a1, a2] = detail::chord_intercepts(alpha, 0.05);
    CHECK(a1 * a2 == doctest::Approx(0.05 * 3.95 / (1 + alpha * alpha)).epsilon(1e-12));
  }
}

TEST_CASE("sharpness body 2d") {
  struct P { double delta, l1, l2; };
  for (const auto& p : {P{0.004, 0.05, 0.05}, P{0.006, 0.07, 0.09}, P{0.008, 0.095, 0.085}}) {
    auto sb = sharpness_body_2d<double>(p.delta, p.l1, p.l2);
    auto m = measure(sb.body, sb.x, std::make_optional(vec2(1, 0)));
    CHECK(m.delta == doctest::Approx(p.delta).epsilon(1e-6));
    CHECK(m.l1 == doctest::Approx(p.l1).epsilon(1e-6));
    CHECK(m.l2 == doctest::Approx(p.l2).epsilon(1e-6));
  }
  CHECK_THROWS_AS((void)sharpness_body_2d<double>(0.02, 0.05, 0.05), Error);
}

TEST_CASE("sharpness body nd") {
  // d=2, delta=0.1, v=0.5 sits in the squeezed case with mu ~ 0.4
  {
    const double delta = 0.1, v = 0.5;
    const double mu = (v / 2) / std::sqrt(delta * (4 - delta));
    CHECK(mu == doctest::Approx(0.40032).epsilon(1e-4));
    auto sb = sharpness_body_nd<double>(delta, v, 2);
    auto [dist, u] = boundary_distance(sb.body, sb.x);
    CHECK(dist == doctest::Approx(delta).epsilon(1e-7));
  }
  // d=3 both branches
  for (double v : {0.05, 0.9}) {
    const double delta = 0.05;
    auto sb = sharpness_body_nd<double>(delta, v, 3);
    auto [dist, u] = boundary_distance(sb.body, sb.x);
    CHECK(dist == doctest::Approx(delta).epsilon(1e-6));
    const double rho = exit_distance(sb.body, sb.x, vec3(0, 0, 1));
    CHECK(pi_v<double> * rho * rho == doctest::Approx(v).epsilon(1e-6));
  }
  CHECK_THROWS_AS((void)sharpness_body_nd<double>(0.05, 5.0, 3), Error);
}

TEST_CASE("sharpness bodies carry the expected lambda scale") {
  // built body's lambda stays above a fixed multiple of the bound over a small grid
  std::vector<double> ratios;
  for (double delta : {0.005, 0.0065}) {
    for (auto [l1, l2] : std::vector<std::pair<double, double>>{{0.07, 0.07}, {0.068, 0.09}}) {
      auto sb = sharpness_body_2d<double>(delta, l1, l2);
      Evaluator<double> ev(sb.body);
      for (int n : {12, 18}) {
        if (delta * n * n < 0.5) continue;
        auto m = measure(sb.body, sb.x, std::make_optional(vec2(1, 0)));
        const double rhs = bound_rhs(m, n, 2, 0.5);
        ratios.push_back(ev.eval(n, sb.x).lambda / rhs);
      }
    }
  }
  REQUIRE(!ratios.empty());
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  CHECK(lo > 0);
  CHECK(hi / lo <= 10.0);
}
