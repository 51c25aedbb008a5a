#pragma once

#include "christoffel/christoffel.hpp"

namespace christoffel {

// Affine T with D inside T([-1,1]^d) and the cube preimage of the target point.
template <typename S>
struct BoxMap {
  AffineMap<S> T;
  VecX<S> y;        // T^{-1}(x)
  VecX<S> slack;    // 1 - |y_i|
  S det_abs = 0;
  S sin_phi = 0;    // planar construction only
  S containment_violation = 0;
};

namespace detail {

// T from strip constraints c_lo_i <= <z, n_i> <= c_hi_i: the cube coordinate i
// is the affine functional mapping the strip onto [-1,1].
template <typename S>
BoxMap<S> box_map_from_strips(const std::vector<VecX<S>>& normals, const std::vector<S>& c_lo,
                              const std::vector<S>& c_hi, const VecX<S>& x) {
  const int d = int(normals.size());
  MatX<S> Minv(d, d);
  VecX<S> off(d);
  for (int i = 0; i < d; ++i) {
    const S width = c_hi[i] - c_lo[i];
    if (!(width > S(0))) raise(errc::degenerate_angle, "empty strip in box map");
    Minv.row(i) = (2 / width) * normals[i].transpose();
    off[i] = -(c_hi[i] + c_lo[i]) / width;
  }
  AffineMap<S> inv = make_affine<S>(Minv, off);
  BoxMap<S> map;
  map.T = inverse(inv);
  map.y = inv.apply(x);
  map.slack.resize(d);
  for (int i = 0; i < d; ++i) map.slack[i] = 1 - std::abs(map.y[i]);
  map.det_abs = std::abs(map.T.det);
  return map;
}

}  // namespace detail

// max violation of T^{-1}(boundary samples) against the unit cube
template <typename S>
S containment_violation(const ConvexBody<S>& body, const AffineMap<S>& T, int samples = 4096) {
  S worst = 0;
  for (const auto& p : sample_boundary(body, samples)) {
    const VecX<S> z = T.apply_inv(p);
    worst = std::max(worst, z.template lpNorm<Eigen::Infinity>() - S(1));
  }
  return worst;
}

template <typename S>
void require_containment(const ConvexBody<S>& body, BoxMap<S>& map, S tol = S(1e-9)) {
  map.containment_violation = containment_violation(body, map.T);
  if (map.containment_violation > tol)
    raise(errc::containment_failed,
          "body escapes the parallelotope by " + std::to_string(double(map.containment_violation)));
}

// Cube map built from one supporting half-space: the body is assumed inside
// R B^d (frame origin at the ball center, u = e_1, x = (a, 0, ..)), with a
// supporting hyperplane at (a + delta) e_1 of unit normal w, w_1 > 0. The
// remaining cube facets are axis slabs at +-R. Slack comes out exactly as
// 1 - y_1 = 2 w_1 delta / (R d).
template <typename S>
BoxMap<S> halfspace_box_map(S R, int d, S a, S delta, const VecX<S>& w) {
  if (d < 2) raise(errc::parameter_out_of_range, "halfspace_box_map needs d >= 2");
  if (!(w[0] > S(0))) raise(errc::invalid_normal, "supporting normal must satisfy w_1 > 0");
  if (!(delta > S(0))) raise(errc::parameter_out_of_range, "delta must be positive");
  const S B = R * d / w[0] - (a + delta);
  MatX<S> M = MatX<S>::Zero(d, d);
  VecX<S> x0 = VecX<S>::Zero(d);
  M(0, 0) = (a + delta + B) / 2;
  for (int j = 1; j < d; ++j) M(0, j) = -(R / w[0]) * w[j];
  x0[0] = (a + delta - B) / 2;
  for (int j = 1; j < d; ++j) M(j, j) = R;
  BoxMap<S> map;
  map.T = make_affine<S>(M, x0);
  VecX<S> x = VecX<S>::Zero(d);
  x[0] = a;
  map.y = map.T.apply_inv(x);
  map.slack.resize(d);
  for (int i = 0; i < d; ++i) map.slack[i] = 1 - std::abs(map.y[i]);
  map.det_abs = std::abs(map.T.det);
  return map;
}

namespace detail {

template <typename S>
struct Line2 {
  Vec2<S> point, dir;
};

template <typename S>
Vec2<S> line_intersection(const Line2<S>& p, const Line2<S>& q) {
  const S den = p.dir.x() * q.dir.y() - p.dir.y() * q.dir.x();
  if (std::abs(den) < S(1e-15)) raise(errc::degenerate_angle, "parallel lines in construction");
  const Vec2<S> rhs = q.point - p.point;
  const S t = (rhs.x() * q.dir.y() - rhs.y() * q.dir.x()) / den;
  return p.point + t * p.dir;
}

}  // namespace detail

// Planar construction: lines q_i through the chord ends and the exit point,
// r_i through the inscribed-ball tangencies, their intersections P_i, strips
// between the shifted lines s_i and the opposite supporting lines t_i.
template <typename S>
BoxMap<S> parallelogram_2d(const ConvexBody<S>& body, const VecX<S>& x, const VecX<S>& u_in,
                           S r = S(-1), S sigma = S(0)) {
  if (body.dim != 2) raise(errc::unsupported, "parallelogram_2d requires a planar body");
  const Vec2<S> u = Vec2<S>(u_in).normalized();
  const Vec2<S> v = rot90(u);
  const S delta = exit_distance(body, x, VecX<S>(u));
  (void)sigma;
  S t0;
  if (r <= S(0)) {
    auto [rr, tt] = ray_ball_radius(body, x, VecX<S>(u));
    r = rr;
    t0 = tt;
  } else {
    // deepest admissible center for the supplied radius
    auto [rbest, tbest] = ray_ball_radius(body, x, VecX<S>(u));
    if (rbest < r - S(1e-9))
      raise(errc::parameter_out_of_range, "no ball of the requested radius fits on the backward ray");
    t0 = tbest;
  }
  const S l1 = exit_distance(body, x, VecX<S>(Vec2<S>(-v)));
  const S l2 = exit_distance(body, x, VecX<S>(v));
  if (!(l1 < r && l2 < r))
    raise(errc::parameter_out_of_range, "chords reach past the inscribed ball; use the half-space map");

  const Vec2<S> o = Vec2<S>(x) + t0 * u;  // inscribed ball center
  const Vec2<S> apex = Vec2<S>(x) + delta * u;
  const Vec2<S> L1 = Vec2<S>(x) - l1 * v;
  const Vec2<S> L2 = Vec2<S>(x) + l2 * v;
  const Vec2<S> R1 = o - r * v;
  const Vec2<S> R2 = o + r * v;

  detail::Line2<S> q1{L1, apex - L1}, q2{L2, apex - L2};
  detail::Line2<S> r1{R1, L1 - R1}, r2{R2, L2 - R2};
  const Vec2<S> P1 = detail::line_intersection(r1, q2);
  const Vec2<S> P2 = detail::line_intersection(r2, q1);
  detail::Line2<S> s1{P1, q1.dir}, s2{P2, q2.dir};

  const S crossq = q1.dir.x() * q2.dir.y() - q1.dir.y() * q2.dir.x();
  BoxMap<S> map;
  const S sin_phi = std::abs(crossq) / (q1.dir.norm() * q2.dir.norm());
  if (sin_phi < S(1e-12)) raise(errc::degenerate_angle, "chord lines are nearly parallel");

  std::vector<VecX<S>> normals(2);
  std::vector<S> c_lo(2), c_hi(2);
  for (int i = 0; i < 2; ++i) {
    const detail::Line2<S>& si = i == 0 ? s1 : s2;
    Vec2<S> n = rot90(Vec2<S>(si.dir.normalized()));
    S c = n.dot(si.point);
    if (c < n.dot(o)) { n = -n; c = -c; }  // outward: ball center on the inner side
    normals[i] = VecX<S>(n);
    c_hi[i] = c;
    c_lo[i] = -support(body, VecX<S>(Vec2<S>(-n)));
  }
  map = detail::box_map_from_strips<S>(normals, c_lo, c_hi, x);
  map.sin_phi = sin_phi;
  require_containment(body, map);
  return map;
}

// Largest-area triangle with vertices among the polygon vertices (optimal for
// convex input); brute force over vertex triples.
template <typename S>
std::array<Vec2<S>, 3> max_area_triangle(const std::vector<Vec2<S>>& poly) {
  const int n = int(poly.size());
  if (n < 3) raise(errc::parameter_out_of_range, "max_area_triangle needs >= 3 vertices");
  S best = -1;
  std::array<Vec2<S>, 3> arg{poly[0], poly[1 % n], poly[2 % n]};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec2<S> e = poly[j] - poly[i];
      for (int k = j + 1; k < n; ++k) {
        const Vec2<S> f = poly[k] - poly[i];
        const S area2 = std::abs(e.x() * f.y() - e.y() * f.x());
        if (area2 > best) {
          best = area2;
          arg = {poly[i], poly[j], poly[k]};
        }
      }
    }
  return arg;
}

template <typename S>
S triangle_area(const std::array<Vec2<S>, 3>& t) {
  const Vec2<S> e = t[1] - t[0], f = t[2] - t[0];
  return std::abs(e.x() * f.y() - e.y() * f.x()) / 2;
}

// Spatial corner construction: the section through x normal to u is polygonized,
// its maximal triangle S grown by the centroid homotheties into S1 and S2, and
// the cube facets come from the corner over S2 with apex x + 2 delta u plus the
// opposite supporting planes.
template <typename S>
BoxMap<S> corner_map_3d(const ConvexBody<S>& body, const VecX<S>& x, const VecX<S>& u_in,
                        int section_rays = 512) {
  if (body.dim != 3) raise(errc::unsupported, "corner_map_3d requires d = 3");
  const Vec3<S> u = Vec3<S>(u_in).normalized();
  const S delta = exit_distance(body, x, VecX<S>(u));
  auto section = polygonize_section(body, x, VecX<S>(u), section_rays);
  auto tri = max_area_triangle(section);
  if (triangle_area(tri) < S(1e-14)) raise(errc::section_degenerate, "section triangle has no area");

  const Vec2<S> z = (tri[0] + tri[1] + tri[2]) / 3;
  std::array<Vec2<S>, 3> s1, s2;
  for (int i = 0; i < 3; ++i) s1[i] = z - S(2) * (tri[i] - z);       // homothety -(d-1)
  for (int i = 0; i < 3; ++i) s2[i] = z + S(4) * (s1[i] - z);       // homothety d+1
  // maximality of the triangle forces section subset S1 (homothety area x4)
  {
    auto inside_tri = [](const Vec2<S>& p, const std::array<Vec2<S>, 3>& t, S tol) {
      const S orient = (t[1] - t[0]).x() * (t[2] - t[0]).y() - (t[1] - t[0]).y() * (t[2] - t[0]).x();
      for (int i = 0; i < 3; ++i) {
        const Vec2<S> e = t[(i + 1) % 3] - t[i];
        const Vec2<S> r = p - t[i];
        if ((e.x() * r.y() - e.y() * r.x()) * (orient > S(0) ? S(1) : S(-1)) < -tol) return false;
      }
      return true;
    };
    for (const auto& p : section)
      if (!inside_tri(p, s1, S(1e-7)))
        raise(errc::section_degenerate, "section escapes the grown triangle");
  }

  auto [e1, e2] = orthonormal_complement(u);
  auto embed = [&](const Vec2<S>& p) { return Vec3<S>(Vec3<S>(x) + p.x() * e1 + p.y() * e2); };
  const Vec3<S> apex = Vec3<S>(x) + 2 * delta * u;

  std::vector<VecX<S>> normals(3);
  std::vector<S> c_lo(3), c_hi(3);
  for (int i = 0; i < 3; ++i) {
    // facet plane through the apex and edge (i, i+1) of S2 shifted to level delta
    const Vec3<S> pa = embed(s2[i]) + delta * u;
    const Vec3<S> pb = embed(s2[(i + 1) % 3]) + delta * u;
    Vec3<S> n = (pa - apex).cross(pb - apex);
    const S nn = n.norm();
    if (nn < S(1e-14)) raise(errc::section_degenerate, "corner facet is degenerate");
    n /= nn;
    S c = n.dot(apex);
    if (n.dot(Vec3<S>(x)) > c) { n = -n; c = -c; }
    normals[i] = VecX<S>(n);
    c_hi[i] = c;
    c_lo[i] = -support(body, VecX<S>(Vec3<S>(-n)));
  }
  BoxMap<S> map = detail::box_map_from_strips<S>(normals, c_lo, c_hi, x);
  require_containment(body, map);
  return map;
}

// Chooses the frame and supporting data for the half-space map from body
// geometry: enclosing radius about a center on the ray, supporting normal at
// the exit point, then conjugates the canonical map into world coordinates.
template <typename S>
BoxMap<S> halfspace_box_map_for(const ConvexBody<S>& body, const VecX<S>& x, const VecX<S>& u_in) {
  const int d = body.dim;
  const VecX<S> u = u_in.normalized();
  const S delta = exit_distance(body, x, u);
  const VecX<S> exit = x + delta * u;
  const VecX<S> w_world = supporting_normal(body, exit, u);
  // frame origin: box center projected onto the ray through x along u
  const VecX<S> bc = (body.box_lo + body.box_hi) / 2;
  const S tproj = (bc - x).dot(u);
  const VecX<S> origin = x + tproj * u;
  S R = 0;
  for (const auto& p : sample_boundary(body, 2048)) R = std::max(R, (p - origin).norm());
  R *= 1 + S(1e-12);
  // orthonormal frame with first column u
  MatX<S> Q(d, d);
  Q.col(0) = u;
  if (d == 2) {
    Q.col(1) = VecX<S>(rot90(Vec2<S>(u)));
  } else {
    auto [e1, e2] = orthonormal_complement(Vec3<S>(u));
    Q.col(1) = VecX<S>(e1);
    Q.col(2) = VecX<S>(e2);
  }
  const S a = (x - origin).dot(u);
  VecX<S> w_frame = Q.transpose() * w_world;
  if (w_frame[0] <= S(0)) raise(errc::invalid_normal, "supporting normal points away from u");
  BoxMap<S> canonical = halfspace_box_map<S>(R, d, a, delta, w_frame);
  BoxMap<S> map;
  map.T = compose(make_affine<S>(Q, origin), canonical.T);
  map.y = canonical.y;
  map.slack = canonical.slack;
  map.det_abs = std::abs(map.T.det);
  require_containment(body, map);
  return map;
}

// ---- needle certificates ---------------------------------------------------------

// Explicit polynomial with P(x) = 1 and verified squared L2 norm over the body:
// a product of univariate kernel needles pulled back through the cube map.
template <typename S>
struct Certificate {
  BoxMap<S> map;
  int n = 0;
  int per_axis_degree = 0;
  std::vector<VecX<S>> needle_coeffs;  // Legendre coefficients per axis
  S value_at_x = 1;
  IntegralResult<S> l2sq;
  S product_bound = 0;  // |det T| * prod lambda_m([-1,1], y_i)
};

template <typename S>
Certificate<S> needle_certificate(const ConvexBody<S>& body, int n, const BoxMap<S>& map,
                                  const VecX<S>& x) {
  const int d = body.dim;
  if (n < d) raise(errc::parameter_out_of_range, "needle needs n >= d");
  const int m = n / d;
  Certificate<S> cert;
  cert.map = map;
  cert.n = n;
  cert.per_axis_degree = m;
  cert.product_bound = map.det_abs;
  for (int i = 0; i < d; ++i) {
    const S yi = map.y[i];
    const S kyy = legendre_kernel_1d<S>(m, yi, yi);
    VecX<S> coeffs(m + 1);
    std::vector<S> py(m + 1);
    legendre_values(yi, m, py.data());
    for (int k = 0; k <= m; ++k) coeffs[k] = (S(2 * k + 1) / 2) * py[k] / kyy;
    cert.needle_coeffs.push_back(coeffs);
    cert.product_bound *= christoffel_1d<S>(m, yi);
  }
  auto poly = [&](const VecX<S>& p) -> S {
    const VecX<S> z = map.T.apply_inv(p);
    S val = 1;
    std::vector<S> pz(m + 1);
    for (int i = 0; i < d; ++i) {
      legendre_values(z[i], m, pz.data());
      S q = 0;
      for (int k = 0; k <= m; ++k) q += cert.needle_coeffs[i][k] * pz[k];
      val *= q;
    }
    return val;
  };
  cert.value_at_x = poly(x);
  if (std::abs(cert.value_at_x - 1) > S(1e-9))
    raise(errc::numerical_failure, "needle does not normalize at x");
  std::function<S(const VecX<S>&)> sq = [&](const VecX<S>& p) {
    const S v = poly(p);
    return v * v;
  };
  cert.l2sq = body_integral_fn(body, sq, 2 * d * m);
  return cert;
}

// Route to the better of the planar line construction and the half-space map.
template <typename S>
Certificate<S> certify(const ConvexBody<S>& body, const VecX<S>& x, int n,
                       const std::optional<VecX<S>>& u_opt = std::nullopt, S r_user = S(-1)) {
  Measurement<S> meas = measure(body, x, u_opt);
  std::optional<Certificate<S>> best;
  auto consider = [&](const BoxMap<S>& map) {
    Certificate<S> c = needle_certificate(body, n, map, x);
    if (!best || c.l2sq.value < best->l2sq.value) best = std::move(c);
  };
  if (body.dim == 2) {
    try {
      consider(parallelogram_2d(body, x, meas.u, r_user));
    } catch (const Error&) {
      // routed to the half-space map below
    }
  } else if (body.dim == 3) {
    // corner construction requires the supporting-plane property of u
    const VecX<S> exit = meas.x + meas.delta * meas.u;
    if (support(body, meas.u) - meas.u.dot(exit) < S(1e-7)) {
      try {
        consider(corner_map_3d(body, x, meas.u));
      } catch (const Error&) {
      }
    }
  }
  consider(halfspace_box_map_for(body, x, meas.u));
  return *best;
}

// ---- theorem right-hand sides ------------------------------------------------------

// d = 2: n^{-2} sqrt(min(l1 l2, delta)); d = 3: n^{-3} min(sqrt(delta),
// delta^{-1/2} section_volume). Constants are deliberately omitted.
template <typename S>
S bound_rhs(const Measurement<S>& meas, int n, int d, S sigma = S(1)) {
  if (meas.delta * n * n < sigma)
    raise(errc::sigma_violated, "delta below sigma n^-2");
  if (d == 2)
    return std::sqrt(std::min(meas.l1 * meas.l2, meas.delta)) / (S(n) * n);
  if (d == 3)
    return std::min(std::sqrt(meas.delta), meas.section_volume / std::sqrt(meas.delta)) /
           (S(n) * n * n);
  raise(errc::unsupported, "bound_rhs requires d in {2,3}");
}

// ---- sharpness builders --------------------------------------------------------------

template <typename S>
struct SharpnessBody {
  ConvexBody<S> body;
  VecX<S> x;
};

namespace detail {

// y-intercepts of the chord x = -alpha y + 2 - delta with the radius-2 circle
template <typename S>
std::pair<S, S> chord_intercepts(S alpha, S delta) {
  const S disc = std::sqrt(4 * alpha * alpha + 4 * delta - delta * delta);
  const S m1 = (disc - alpha * (2 - delta)) / (1 + alpha * alpha);
  const S m2 = (disc + alpha * (2 - delta)) / (1 + alpha * alpha);
  return {m1, m2};
}

// Body with chords exactly (lo at -y, hi at +y) and exit distance delta at
// x = (2 - delta, 0); requires lo * hi <= delta. The shear sign selects which
// side carries the longer chord.
template <typename S>
SharpnessBody<S> sharpness_2d_core(S delta, S lo, S hi) {
  const S target = std::max(lo, hi) / std::min(lo, hi);
  S alpha = 0;
  if (target > 1) {
    auto ratio = [&](S a) {
      auto [m1, m2] = chord_intercepts(a, delta);
      return m2 / m1 - target;
    };
    const S f0 = ratio(S(0)), f1 = ratio(S(1));
    if (f0 > S(0) || f1 < S(0)) raise(errc::parameter_out_of_range, "chord ratio out of reach");
    alpha = brent_root<S>(ratio, S(0), S(1), f0, f1, S(1e-13));
  }
  auto [m1, m2] = chord_intercepts(alpha, delta);
  // with shear +alpha the short intercept m1 sits at -y; flip the shear when
  // the longer target chord belongs below
  const S mlo = hi >= lo ? m1 : m2;
  const S mhi = hi >= lo ? m2 : m1;
  if (hi < lo) alpha = -alpha;
  const S mu = (lo / mlo + hi / mhi) / 2;
  MatX<S> A(2, 2);
  A << 1, alpha, 0, mu;
  auto sheared = make_affine_image<S>(make_affine<S>(A, VecX<S>::Zero(2)),
                                      ptr(make_ball<S>(VecX<S>::Zero(2), S(2))));
  SharpnessBody<S> out;
  out.body = make_hull<S>({ptr(make_disc<S>()), ptr(std::move(sheared))});
  out.x = VecX<S>(Vec2<S>(2 - delta, 0));
  return out;
}

}  // namespace detail

// Planar body attaining the two-measurement bound at x = (2 - delta, 0):
// shear-scaled disc of radius 2, hulled with the unit disc, plus an extra
// hull point when l1 l2 > delta.
template <typename S>
SharpnessBody<S> sharpness_body_2d(S delta, S l1, S l2) {
  if (!(10 * delta < l1 && 10 * delta < l2 && l1 < S(0.1) && l2 < S(0.1)))
    raise(errc::parameter_out_of_range, "need 10 delta < l_i < 1/10");
  SharpnessBody<S> out;
  if (l1 * l2 <= delta) {
    out = detail::sharpness_2d_core(delta, l1, l2);
  } else {
    const S small = std::min(l1, l2), big = std::max(l1, l2);
    std::vector<VecX<S>> extra;
    if (delta >= small * small) {
      // boundary-case bar keeping the short chord; the long side (where the
      // shear tilts) is stretched to its target with one hull point
      if (l1 <= l2) {
        out = detail::sharpness_2d_core(delta, small, delta / small);
        extra.push_back(VecX<S>(Vec2<S>(2 - delta, big)));
      } else {
        out = detail::sharpness_2d_core(delta, delta / small, small);
        extra.push_back(VecX<S>(Vec2<S>(2 - delta, -big)));
      }
    } else {
      // sheared bars tilt away from the extension here and would clip the
      // exit point; use a symmetric bar and stretch both chords
      const S t = S(0.95) * std::sqrt(delta);
      out = detail::sharpness_2d_core(delta, t, t);
      extra.push_back(VecX<S>(Vec2<S>(2 - delta, -l1)));
      extra.push_back(VecX<S>(Vec2<S>(2 - delta, l2)));
    }
    const auto& hull = std::get<HullOf<S>>(out.body.shape);
    std::vector<BodyPtr<S>> parts = hull.parts;
    std::vector<VecX<S>> points = hull.points;
    for (auto& p : extra) points.push_back(std::move(p));
    out.body = make_hull<S>(std::move(parts), std::move(points));
  }
  // round-trip the three measurements and the sandwich B^2 in D in 4B^2
  auto m = measure(out.body, out.x, std::make_optional(VecX<S>(Vec2<S>(1, 0))));
  const S err = std::max({std::abs(m.delta - delta), std::abs(m.l1 - l1), std::abs(m.l2 - l2)});
  if (err > S(1e-6)) raise(errc::round_trip_failed, "sharpness 2d measurements off by " + std::to_string(double(err)));
  for (int k = 0; k < 64; ++k) {
    const S th = 2 * pi_v<S> * k / 64;
    const S h = support(out.body, VecX<S>(Vec2<S>(std::cos(th), std::sin(th))));
    if (h < 1 - S(1e-9) || h > 4 + S(1e-9))
      raise(errc::round_trip_failed, "sharpness 2d body escapes the B^2..4B^2 sandwich");
  }
  return out;
}

// Rotational body attaining the section-volume bound at x = (2 - delta, 0, .., 0).
template <typename S>
SharpnessBody<S> sharpness_body_nd(S delta, S v, int d, S beta1 = S(-1), S beta2 = S(-1)) {
  if (d != 2 && d != 3) raise(errc::unsupported, "sharpness_body_nd supports d in {2,3}");
  if (!(delta > S(0) && delta < S(0.5))) raise(errc::parameter_out_of_range, "delta must be in (0, 1/2)");
  const S ball_vol = d == 3 ? pi_v<S> : S(2);  // Vol_{d-1}(B^{d-1})
  // default admissible window: mu in (0.2, 5)
  if (beta1 <= S(0)) beta1 = ball_vol * std::pow(S(0.2) * 2, S(d - 1));
  if (beta2 <= S(0)) beta2 = ball_vol;
  if (!(v > beta1 * std::pow(delta, S(d - 1)) && v < beta2))
    raise(errc::parameter_out_of_range, "v outside the admissible window");
  const S chord = std::sqrt(delta * (4 - delta));
  const S mu = std::pow(v / ball_vol, S(1) / (d - 1)) / chord;
  SharpnessBody<S> out;
  out.x = VecX<S>::Zero(d);
  out.x[0] = 2 - delta;
  if (mu <= S(1)) {
    MatX<S> A = MatX<S>::Identity(2, 2);
    A(1, 1) = mu;
    auto squeezed2 = ptr(make_affine_image<S>(make_affine<S>(A, VecX<S>::Zero(2)),
                                              ptr(make_ball<S>(VecX<S>::Zero(2), S(2)))));
    auto profile = make_hull<S>({ptr(make_disc<S>()), squeezed2});
    if (d == 2) out.body = std::move(profile);
    else out.body = make_revolution<S>(ptr(std::move(profile)), 0);
  } else {
    const S ring = mu * chord;
    std::vector<VecX<S>> pts{VecX<S>(Vec2<S>(2 - delta, ring)), VecX<S>(Vec2<S>(2 - delta, -ring))};
    auto profile = make_hull<S>({ptr(make_ball<S>(VecX<S>::Zero(2), S(2)))}, pts);
    if (d == 2) out.body = std::move(profile);
    else out.body = make_revolution<S>(ptr(std::move(profile)), 0);
  }
  // round-trip delta (boundary distance) and the section volume; sandwich in 3B^d
  auto [dist, ustar] = boundary_distance(out.body, out.x);
  if (std::abs(dist - delta) > S(1e-6))
    raise(errc::round_trip_failed, "sharpness nd distance off by " + std::to_string(double(dist - delta)));
  VecX<S> e1 = VecX<S>::Zero(d);
  e1[0] = 1;
  const S rho = exit_distance(out.body, out.x, VecX<S>(d == 2 ? VecX<S>(Vec2<S>(0, 1)) : VecX<S>(Vec3<S>(0, 1, 0))));
  const S v_check = d == 2 ? 2 * rho : pi_v<S> * rho * rho;
  if (std::abs(v_check - v) > S(1e-6) * std::max(S(1), v))
    raise(errc::round_trip_failed, "sharpness nd section volume off by " + std::to_string(double(v_check - v)));
  for (int k = 0; k < 128; ++k) {
    VecX<S> dir = d == 2 ? VecX<S>(Vec2<S>(std::cos(S(k)), std::sin(S(k))))
                         : VecX<S>(detail::fibonacci_sphere<S>(128)[k]);
    const S h = support(out.body, dir);
    if (h < 1 - S(1e-9) || h > 3 + S(1e-9))
      raise(errc::round_trip_failed, "sharpness nd body escapes the B^d..3B^d sandwich");
  }
  return out;
}

}  // namespace christoffel
