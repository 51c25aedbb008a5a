#pragma once

#include "christoffel/hull2d.hpp"

namespace christoffel {

// Geometry bundle at (D, x): exit distance along u, boundary distance, their
// ratio nu, the orthogonal chord lengths (2D) and the section volume.
template <typename S>
struct Measurement {
  VecX<S> x;
  VecX<S> u;
  S delta = 0;
  S dist_boundary = 0;
  S nu = 1;
  VecX<S> v_dir;
  S l1 = 0, l2 = 0;
  S section_volume = 0;
};

template <typename S>
Vec2<S> rot90(const Vec2<S>& u) {
  return Vec2<S>(-u.y(), u.x());
}

// orthonormal completion of a unit 3-vector
template <typename S>
std::pair<Vec3<S>, Vec3<S>> orthonormal_complement(const Vec3<S>& u) {
  Vec3<S> a = std::abs(u.x()) < S(0.9) ? Vec3<S>::UnitX() : Vec3<S>::UnitY();
  Vec3<S> e1 = (a - a.dot(u) * u).normalized();
  Vec3<S> e2 = u.cross(e1);
  return {e1, e2};
}

// delta = max{t : x + t u in D}; bisection on membership, bracketed by the
// support bound. x must be interior.
template <typename S>
S exit_distance(const ConvexBody<S>& body, const VecX<S>& x, const VecX<S>& u) {
  if (!contains(body, x)) raise(errc::x_on_boundary, "exit_distance: x outside the body");
  S hi = support(body, u) - u.dot(x);
  if (hi < S(1e-13)) raise(errc::x_on_boundary, "exit_distance: x on the boundary");
  S lo = S(0);
  if (contains(body, VecX<S>(x + hi * u))) return hi;
  for (int it = 0; it < 100 && (hi - lo) > S(1e-13) * std::max(S(1), hi); ++it) {
    const S mid = (lo + hi) / 2;
    if (contains(body, VecX<S>(x + mid * u), S(0))) lo = mid;
    else hi = mid;
  }
  return (lo + hi) / 2;
}

// (dist(x, dD), minimizing unit direction): min over unit u of h(u) - <u,x>,
// angular grid plus local refinement.
template <typename S>
std::pair<S, VecX<S>> boundary_distance(const ConvexBody<S>& body, const VecX<S>& x) {
  auto gap = [&](const VecX<S>& u) { return support(body, u) - u.dot(x); };
  if (body.dim == 1) {
    const S lo = x[0] - body.box_lo[0], hi = body.box_hi[0] - x[0];
    VecX<S> u(1);
    u << (lo < hi ? S(-1) : S(1));
    const S d = std::min(lo, hi);
    if (d < S(1e-13)) raise(errc::x_on_boundary, "boundary_distance: x on the boundary");
    return {d, u};
  }
  if (body.dim == 2) {
    const int grid = 4096;
    S best = std::numeric_limits<S>::infinity();
    int karg = 0;
    for (int k = 0; k < grid; ++k) {
      const S th = 2 * pi_v<S> * k / grid;
      const S v = gap(VecX<S>(Vec2<S>(std::cos(th), std::sin(th))));
      if (v < best) { best = v; karg = k; }
    }
    auto f = [&](S th) { return gap(VecX<S>(Vec2<S>(std::cos(th), std::sin(th)))); };
    const S th0 = 2 * pi_v<S> * (karg - 1) / grid, th1 = 2 * pi_v<S> * (karg + 1) / grid;
    auto [tha, va] = golden_min<S>(f, th0, th1, S(1e-12));
    if (va < S(1e-13)) raise(errc::x_on_boundary, "boundary_distance: x on the boundary");
    return {va, VecX<S>(Vec2<S>(std::cos(tha), std::sin(tha)))};
  }
  // 3D: Fibonacci grid + pattern refinement
  S best = std::numeric_limits<S>::infinity();
  Vec3<S> arg = Vec3<S>::UnitX();
  for (const auto& d : detail::fibonacci_sphere<S>(8192)) {
    const S v = gap(VecX<S>(d));
    if (v < best) { best = v; arg = d; }
  }
  S step = S(0.02);
  while (step > S(1e-11)) {
    bool improved = false;
    for (int axis = 0; axis < 3 && !improved; ++axis)
      for (int sgn = -1; sgn <= 1 && !improved; sgn += 2) {
        Vec3<S> cand = (arg + step * sgn * Vec3<S>::Unit(axis)).normalized();
        const S v = gap(VecX<S>(cand));
        if (v < best) { best = v; arg = cand; improved = true; }
      }
    if (!improved) step /= 2;
  }
  if (best < S(1e-13)) raise(errc::x_on_boundary, "boundary_distance: x on the boundary");
  return {best, VecX<S>(arg)};
}

// l_i = max{t : x + (-1)^i t v in D}, v = rot90(u)
template <typename S>
std::pair<S, S> chord_lengths(const ConvexBody<S>& body, const VecX<S>& x, const VecX<S>& u) {
  if (body.dim != 2) raise(errc::unsupported, "chord_lengths requires a planar body");
  const Vec2<S> v = rot90(Vec2<S>(u));
  const S l1 = exit_distance(body, x, VecX<S>(Vec2<S>(-v)));
  const S l2 = exit_distance(body, x, VecX<S>(v));
  return {l1, l2};
}

// vertices of the planar section {y in D : (x-y) perp u} about x, as 2D
// coordinates in an orthonormal in-plane frame
template <typename S>
std::vector<Vec2<S>> polygonize_section(const ConvexBody<S>& body, const VecX<S>& x, const VecX<S>& u,
                                        int rays = 512) {
  auto [e1, e2] = orthonormal_complement(Vec3<S>(u));
  std::vector<Vec2<S>> verts(rays);
  for (int k = 0; k < rays; ++k) {
    const S phi = 2 * pi_v<S> * k / rays;
    const Vec3<S> dir = std::cos(phi) * e1 + std::sin(phi) * e2;
    const S t = exit_distance(body, x, VecX<S>(dir));
    verts[k] = t * Vec2<S>(std::cos(phi), std::sin(phi));
  }
  return verts;
}

template <typename S>
S shoelace_area(const std::vector<Vec2<S>>& poly) {
  S acc = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    acc += a.x() * b.y() - a.y() * b.x();
  }
  return acc / 2;
}

// (d-1)-volume of the hyperplane section through x orthogonal to u
template <typename S>
S section_volume(const ConvexBody<S>& body, const VecX<S>& x, const VecX<S>& u) {
  if (body.dim == 2) {
    auto [l1, l2] = chord_lengths(body, x, u);
    return l1 + l2;
  }
  if (body.dim == 3) return shoelace_area(polygonize_section(body, x, u));
  raise(errc::unsupported, "section_volume requires d in {2,3}");
}

template <typename S>
Measurement<S> measure(const ConvexBody<S>& body, const VecX<S>& x,
                       const std::optional<VecX<S>>& u_opt = std::nullopt) {
  Measurement<S> m;
  m.x = x;
  auto [dist, ustar] = boundary_distance(body, x);
  m.dist_boundary = dist;
  m.u = u_opt ? VecX<S>(u_opt->normalized()) : ustar;
  m.delta = u_opt ? exit_distance(body, x, m.u) : dist;
  m.nu = m.delta / m.dist_boundary;
  if (body.dim == 2) {
    m.v_dir = VecX<S>(rot90(Vec2<S>(m.u)));
    auto [l1, l2] = chord_lengths(body, x, m.u);
    m.l1 = l1;
    m.l2 = l2;
    m.section_volume = l1 + l2;
  } else if (body.dim == 3) {
    m.v_dir = VecX<S>::Zero(3);
    m.section_volume = section_volume(body, x, m.u);
  }
  return m;
}

// sup of dist(y, dD) over y on the backward ray {x + t u : t < 0} inside D;
// the construction constant depends on this radius, not on the exact center.
// Returned with the maximizing offset t0 <= 0.
template <typename S>
std::pair<S, S> ray_ball_radius(const ConvexBody<S>& body, const VecX<S>& x, const VecX<S>& u) {
  const S back = exit_distance(body, x, VecX<S>(-u));
  auto dist_at = [&](S t) {
    return boundary_distance(body, VecX<S>(x + t * u)).first;
  };
  const int grid = 65;
  S best = -1, targ = 0;
  for (int k = 1; k < grid; ++k) {
    const S t = -back * k / grid;
    const S d = dist_at(t);
    if (d > best) { best = d; targ = t; }
  }
  const S h = back / grid;
  auto [tref, dref] = golden_min<S>([&](S t) { return -dist_at(t); },
                                    std::max(-back + h / 8, targ - h), std::min(S(0), targ + h), S(1e-10));
  if (-dref > best) { best = -dref; targ = tref; }
  return {best, targ};
}

// Outward unit normal of a supporting hyperplane at a boundary point:
// minimizes h(w) - <w, p> over unit w near the hint direction.
template <typename S>
VecX<S> supporting_normal(const ConvexBody<S>& body, const VecX<S>& p, const VecX<S>& hint) {
  auto gap = [&](const VecX<S>& w) { return support(body, w) - w.dot(p); };
  if (body.dim == 2) {
    const S th_hint = std::atan2(hint[1], hint[0]);
    auto f = [&](S th) { return gap(VecX<S>(Vec2<S>(std::cos(th), std::sin(th)))); };
    S best = f(th_hint);
    S arg = th_hint;
    const int grid = 512;
    for (int k = 0; k < grid; ++k) {
      const S th = th_hint - pi_v<S> / 2 + pi_v<S> * k / grid;
      const S v = f(th);
      if (v < best) { best = v; arg = th; }
    }
    auto [tha, va] = golden_min<S>(f, arg - pi_v<S> / grid, arg + pi_v<S> / grid, S(1e-13));
    if (va < best) arg = tha;
    return VecX<S>(Vec2<S>(std::cos(arg), std::sin(arg)));
  }
  S best = std::numeric_limits<S>::infinity();
  Vec3<S> arg = Vec3<S>(hint).normalized();
  for (const auto& d : detail::fibonacci_sphere<S>(4096)) {
    if (Vec3<S>(d).dot(Vec3<S>(hint)) < S(-0.2)) continue;
    const S v = gap(VecX<S>(d));
    if (v < best) { best = v; arg = d; }
  }
  S step = S(0.05);
  while (step > S(1e-11)) {
    bool improved = false;
    for (int axis = 0; axis < 3 && !improved; ++axis)
      for (int sgn = -1; sgn <= 1 && !improved; sgn += 2) {
        Vec3<S> cand = (arg + step * sgn * Vec3<S>::Unit(axis)).normalized();
        const S v = gap(VecX<S>(cand));
        if (v < best) { best = v; arg = cand; improved = true; }
      }
    if (!improved) step /= 2;
  }
  return VecX<S>(arg);
}

}  // namespace christoffel
