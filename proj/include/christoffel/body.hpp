#pragma once

#include "christoffel/curve.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <variant>

namespace christoffel {

template <typename S> struct ConvexBody;
template <typename S> using BodyPtr = std::shared_ptr<const ConvexBody<S>>;

template <typename S> struct Polygon2D { std::vector<Vec2<S>> verts; };
template <typename S> struct Ball { VecX<S> center; S radius; };
template <typename S> struct LpBall { S alpha; int dim; S scale; };
struct HalfBall3Tag {};
template <typename S> struct Revolution {
  int axis = 0;                       // rotation axis = coordinate axis index
  Vec2<S> perp_offset = Vec2<S>::Zero();
  BodyPtr<S> profile;                 // 2D body in (t, rho), symmetric in rho
};
template <typename S> struct AffineImageOf { AffineMap<S> map; BodyPtr<S> base; };
template <typename S> struct HullOf {
  std::vector<BodyPtr<S>> parts;
  std::vector<VecX<S>> points;
};

template <typename S>
struct ConvexBody {
  int dim = 0;
  std::variant<Polygon2D<S>, Ball<S>, LpBall<S>, HalfBall3Tag, Revolution<S>, AffineImageOf<S>, HullOf<S>> shape;
  VecX<S> witness;
  VecX<S> box_lo, box_hi;
  Chain<S> chain;                 // explicit ccw boundary, 2D bodies only
  std::vector<S> chain_angles;    // unwrapped piece start angles about the witness
  std::string desc;
};

// ---- support function ------------------------------------------------------

template <typename S>
S support(const ConvexBody<S>& body, const VecX<S>& u);

namespace detail {

template <typename S>
S lp_dual_norm(const VecX<S>& u, S alpha) {
  if (alpha <= S(1)) return u.template lpNorm<Eigen::Infinity>();
  const S q = alpha / (alpha - 1);
  S acc = 0;
  for (int k = 0; k < u.size(); ++k) acc += std::pow(std::abs(u[k]), q);
  return std::pow(acc, S(1) / q);
}

template <typename S>
Vec2<S> perp_components(const Revolution<S>& r, const VecX<S>& u) {
  Vec2<S> up;
  int j = 0;
  for (int k = 0; k < 3; ++k)
    if (k != r.axis) up[j++] = u[k];
  return up;
}

}  // namespace detail

template <typename S>
S support(const ConvexBody<S>& body, const VecX<S>& u) {
  return std::visit(
      [&](const auto& shape) -> S {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Polygon2D<S>>) {
          S best = -std::numeric_limits<S>::infinity();
          for (const auto& v : shape.verts) best = std::max(best, v.dot(Vec2<S>(u)));
          return best;
        } else if constexpr (std::is_same_v<T, Ball<S>>) {
          return shape.center.dot(u) + shape.radius * u.norm();
        } else if constexpr (std::is_same_v<T, LpBall<S>>) {
          return shape.scale * detail::lp_dual_norm(u, shape.alpha);
        } else if constexpr (std::is_same_v<T, HalfBall3Tag>) {
          if (u[2] >= S(0)) return u.norm();
          return u.template head<2>().norm();
        } else if constexpr (std::is_same_v<T, Revolution<S>>) {
          Vec2<S> up = detail::perp_components(shape, u);
          VecX<S> pu(2);
          pu << u[shape.axis], up.norm();
          return support(*shape.profile, pu) + shape.perp_offset.dot(up);
        } else if constexpr (std::is_same_v<T, AffineImageOf<S>>) {
          return support(*shape.base, VecX<S>(shape.map.A.transpose() * u)) + shape.map.b.dot(u);
        } else {
          S best = -std::numeric_limits<S>::infinity();
          for (const auto& part : shape.parts) best = std::max(best, support(*part, u));
          for (const auto& p : shape.points) best = std::max(best, S(p.dot(u)));
          return best;
        }
      },
      body.shape);
}

// A maximizer of <., u> over the body (an extreme point when u is generic).
template <typename S>
VecX<S> support_point(const ConvexBody<S>& body, const VecX<S>& u) {
  return std::visit(
      [&](const auto& shape) -> VecX<S> {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Polygon2D<S>>) {
          S best = -std::numeric_limits<S>::infinity();
          Vec2<S> arg = shape.verts[0];
          for (const auto& v : shape.verts) {
            const S val = v.dot(Vec2<S>(u));
            if (val > best) { best = val; arg = v; }
          }
          return arg;
        } else if constexpr (std::is_same_v<T, Ball<S>>) {
          return shape.center + shape.radius * u.normalized();
        } else if constexpr (std::is_same_v<T, LpBall<S>>) {
          const int d = shape.dim;
          VecX<S> x = VecX<S>::Zero(d);
          if (shape.alpha <= S(1)) {
            int kbest = 0;
            for (int k = 1; k < d; ++k)
              if (std::abs(u[k]) > std::abs(u[kbest])) kbest = k;
            x[kbest] = shape.scale * (u[kbest] < 0 ? S(-1) : S(1));
            return x;
          }
          const S beta = S(1) / (shape.alpha - 1);
          S z = 0;
          for (int k = 0; k < d; ++k) z += std::pow(std::abs(u[k]), shape.alpha * beta);
          const S norm = std::pow(z, S(1) / shape.alpha);
          for (int k = 0; k < d; ++k)
            x[k] = shape.scale * (u[k] < 0 ? S(-1) : S(1)) * std::pow(std::abs(u[k]), beta) / norm;
          return x;
        } else if constexpr (std::is_same_v<T, HalfBall3Tag>) {
          if (u[2] >= S(0)) return u.normalized();
          const S pn = u.template head<2>().norm();
          VecX<S> x = VecX<S>::Zero(3);
          if (pn > S(0)) x.template head<2>() = u.template head<2>() / pn;
          return x;
        } else if constexpr (std::is_same_v<T, Revolution<S>>) {
          Vec2<S> up = detail::perp_components(shape, u);
          const S pn = up.norm();
          VecX<S> pu(2);
          pu << u[shape.axis], pn;
          VecX<S> sp = support_point(*shape.profile, pu);
          Vec2<S> dir = pn > S(0) ? Vec2<S>(up / pn) : Vec2<S>(1, 0);
          VecX<S> x = VecX<S>::Zero(3);
          x[shape.axis] = sp[0];
          Vec2<S> perp = shape.perp_offset + sp[1] * dir;
          int j = 0;
          for (int k = 0; k < 3; ++k)
            if (k != shape.axis) x[k] = perp[j++];
          return x;
        } else if constexpr (std::is_same_v<T, AffineImageOf<S>>) {
          return shape.map.A * support_point(*shape.base, VecX<S>(shape.map.A.transpose() * u)) + shape.map.b;
        } else {
          S best = -std::numeric_limits<S>::infinity();
          VecX<S> arg;
          for (const auto& part : shape.parts) {
            const S val = support(*part, u);
            if (val > best) { best = val; arg = support_point(*part, u); }
          }
          for (const auto& p : shape.points) {
            const S val = p.dot(u);
            if (val > best) { best = val; arg = p; }
          }
          return arg;
        }
      },
      body.shape);
}

// ---- membership -------------------------------------------------------------

namespace detail {

// radius of the chain boundary from the witness along dir (unit)
template <typename S>
S chain_radius(const ConvexBody<S>& body, const Vec2<S>& dir) {
  const Vec2<S> w = body.witness;
  const S theta = std::atan2(dir.y(), dir.x());
  const auto& angles = body.chain_angles;
  S t = theta;
  while (t < angles.front()) t += 2 * pi_v<S>;
  while (t >= angles.back()) t -= 2 * pi_v<S>;
  if (t < angles.front()) t += 2 * pi_v<S>;
  const auto it = std::upper_bound(angles.begin(), angles.end(), t);
  std::size_t idx = std::size_t(std::max<std::ptrdiff_t>(0, it - angles.begin() - 1));
  idx = std::min(idx, body.chain.size() - 1);
  auto cross_f = [&](const CurvePiece<S>& piece, S s) {
    Vec2<S> r = piece.eval(s) - w;
    return r.x() * dir.y() - r.y() * dir.x();
  };
  for (int probe = 0; probe < int(body.chain.size()); ++probe) {
    const std::size_t j = (idx + probe) % body.chain.size();
    const auto& piece = body.chain[j];
    const S f0 = cross_f(piece, S(0)), f1 = cross_f(piece, S(1));
    const S r0 = (piece.eval(S(0)) - w).dot(dir);
    const S r1 = (piece.eval(S(1)) - w).dot(dir);
    // rays through a chain vertex leave no strict sign change in either piece
    if (std::abs(f0) <= S(1e-11) * std::max(S(1), std::abs(r0)) && r0 > S(0)) return r0;
    if (std::abs(f1) <= S(1e-11) * std::max(S(1), std::abs(r1)) && r1 > S(0)) return r1;
    if (f0 * f1 < S(0)) {
      const S s = brent_root<S>([&](S t2) { return cross_f(piece, t2); }, S(0), S(1), f0, f1, S(1e-15));
      const S r = (piece.eval(s) - w).dot(dir);
      if (r > S(0)) return r;
    }
  }
#ifdef CHRISTOFFEL_DEBUG_CHAIN
  std::fprintf(stderr, "chain_radius fail: w=(%.17g,%.17g) dir=(%.17g,%.17g) theta=%.17g pieces=%zu\n",
               double(w.x()), double(w.y()), double(dir.x()), double(dir.y()), double(theta),
               body.chain.size());
  for (std::size_t j = 0; j < body.chain.size(); ++j)
    std::fprintf(stderr, "  piece %zu f0=%.3e f1=%.3e ang=%.6f\n", j, double(cross_f(body.chain[j], S(0))),
                 double(cross_f(body.chain[j], S(1))), double(body.chain_angles[j]));
#endif
  raise(errc::numerical_failure, "chain_radius: no boundary crossing found");
}

template <typename S>
S sphere_separation_min(const ConvexBody<S>& body, const VecX<S>& p);

}  // namespace detail

template <typename S>
bool contains(const ConvexBody<S>& body, const VecX<S>& p, S tol = S(1e-12)) {
  return std::visit(
      [&](const auto& shape) -> bool {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Polygon2D<S>>) {
          const auto& v = shape.verts;
          for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec2<S> e = v[(i + 1) % v.size()] - v[i];
            const Vec2<S> r = Vec2<S>(p) - v[i];
            if (e.x() * r.y() - e.y() * r.x() < -tol * e.norm()) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Ball<S>>) {
          return (p - shape.center).norm() <= shape.radius + tol;
        } else if constexpr (std::is_same_v<T, LpBall<S>>) {
          S acc = 0;
          for (int k = 0; k < shape.dim; ++k)
            acc += std::pow(std::abs(p[k]) / shape.scale, shape.alpha);
          return acc <= S(1) + tol;
        } else if constexpr (std::is_same_v<T, HalfBall3Tag>) {
          return p.norm() <= S(1) + tol && p[2] >= -tol;
        } else if constexpr (std::is_same_v<T, Revolution<S>>) {
          Vec2<S> pp = detail::perp_components(shape, p);
          VecX<S> q(2);
          q << p[shape.axis], (pp - shape.perp_offset).norm();
          return contains(*shape.profile, q, tol);
        } else if constexpr (std::is_same_v<T, AffineImageOf<S>>) {
          return contains(*shape.base, shape.map.apply_inv(p), tol);
        } else {
          if (body.dim == 2) {
            const Vec2<S> d = Vec2<S>(p) - Vec2<S>(body.witness);
            const S r = d.norm();
            if (r <= tol) return true;
            return r <= detail::chain_radius(body, Vec2<S>(d / r)) + tol;
          }
          return detail::sphere_separation_min(body, p) >= -tol;
        }
      },
      body.shape);
}

namespace detail {

template <typename S>
std::vector<Vec3<S>> fibonacci_sphere(int count) {
  std::vector<Vec3<S>> dirs(count);
  const S ga = pi_v<S> * (3 - std::sqrt(S(5)));
  for (int k = 0; k < count; ++k) {
    const S z = 1 - 2 * (k + S(0.5)) / count;
    const S r = std::sqrt(std::max(S(0), 1 - z * z));
    const S phi = ga * k;
    dirs[k] = Vec3<S>(r * std::cos(phi), r * std::sin(phi), z);
  }
  return dirs;
}

// min over unit directions of h(u) - <u,p>; negative iff p outside (3D fallback)
template <typename S>
S sphere_separation_min(const ConvexBody<S>& body, const VecX<S>& p) {
  S best = std::numeric_limits<S>::infinity();
  Vec3<S> arg = Vec3<S>::UnitX();
  for (const auto& d : fibonacci_sphere<S>(1024)) {
    VecX<S> u = d;
    const S v = support(body, u) - u.dot(p);
    if (v < best) { best = v; arg = d; }
  }
  // local pattern refinement
  S step = S(0.1);
  while (step > S(1e-9)) {
    bool improved = false;
    for (int axis = 0; axis < 3 && !improved; ++axis)
      for (int sgn = -1; sgn <= 1 && !improved; sgn += 2) {
        Vec3<S> cand = arg + step * sgn * Vec3<S>::Unit(axis);
        cand.normalize();
        VecX<S> u = cand;
        const S v = support(body, u) - u.dot(p);
        if (v < best - S(1e-18)) { best = v; arg = cand; improved = true; }
      }
    if (!improved) step /= 2;
  }
  return best;
}

template <typename S>
void build_chain_angles(ConvexBody<S>& body) {
  if (body.dim != 2 || body.chain.empty()) return;
  body.chain_angles.clear();
  const Vec2<S> w = body.witness;
  S prev = 0;
  for (std::size_t i = 0; i < body.chain.size(); ++i) {
    const Vec2<S> r = body.chain[i].eval(S(0)) - w;
    S ang = std::atan2(r.y(), r.x());
    if (i == 0) {
      prev = ang;
    } else {
      while (ang <= prev) ang += 2 * pi_v<S>;
      // guard against numerically tiny pieces
      if (ang - prev > 2 * pi_v<S>) ang -= 2 * pi_v<S>;
      prev = ang;
    }
    body.chain_angles.push_back(prev);
  }
  body.chain_angles.push_back(body.chain_angles.front() + 2 * pi_v<S>);
}

template <typename S>
void finish_body(ConvexBody<S>& body) {
  body.box_lo.resize(body.dim);
  body.box_hi.resize(body.dim);
  for (int k = 0; k < body.dim; ++k) {
    VecX<S> e = VecX<S>::Zero(body.dim);
    e[k] = 1;
    body.box_hi[k] = support(body, e);
    e[k] = -1;
    body.box_lo[k] = -support(body, e);
  }
  build_chain_angles(body);
}

}  // namespace detail

// ---- factories ---------------------------------------------------------------

template <typename S>
ConvexBody<S> make_polygon(std::vector<Vec2<S>> verts) {
  if (verts.size() < 3) raise(errc::parameter_out_of_range, "polygon needs >= 3 vertices");
  S area2 = 0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto& a = verts[i];
    const auto& b = verts[(i + 1) % verts.size()];
    area2 += a.x() * b.y() - a.y() * b.x();
  }
  if (area2 <= S(0)) raise(errc::parameter_out_of_range, "polygon must be counter-clockwise");
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Vec2<S> e1 = verts[(i + 1) % verts.size()] - verts[i];
    const Vec2<S> e2 = verts[(i + 2) % verts.size()] - verts[(i + 1) % verts.size()];
    const S cr = e1.x() * e2.y() - e1.y() * e2.x();
    if (cr <= S(1e-14) * e1.norm() * e2.norm())
      raise(errc::parameter_out_of_range, "polygon vertices must be in strictly convex position");
  }
  ConvexBody<S> body;
  body.dim = 2;
  Vec2<S> mean = Vec2<S>::Zero();
  for (const auto& v : verts) mean += v;
  body.witness = Vec2<S>(mean / S(verts.size()));
  body.chain = polygon_chain(verts);
  body.desc = "polygon[" + std::to_string(verts.size()) + "]";
  body.shape = Polygon2D<S>{std::move(verts)};
  detail::finish_body(body);
  return body;
}

template <typename S>
ConvexBody<S> make_ball(const VecX<S>& center, S radius) {
  if (!(radius > S(0))) raise(errc::parameter_out_of_range, "ball radius must be positive");
  ConvexBody<S> body;
  body.dim = int(center.size());
  if (body.dim < 1 || body.dim > 3) raise(errc::unsupported, "ball dimension must be 1..3");
  body.witness = center;
  if (body.dim == 2) body.chain = circle_chain(Vec2<S>(center), radius);
  body.desc = "ball(r=" + std::to_string(double(radius)) + ",d=" + std::to_string(body.dim) + ")";
  body.shape = Ball<S>{center, radius};
  detail::finish_body(body);
  return body;
}

template <typename S>
ConvexBody<S> make_disc(S radius = S(1)) {
  return make_ball<S>(Vec2<S>::Zero(), radius);
}

template <typename S>
ConvexBody<S> make_square(S half = S(1)) {
  return make_polygon<S>({{-half, -half}, {half, -half}, {half, half}, {-half, half}});
}

template <typename S>
ConvexBody<S> make_segment(S lo = S(-1), S hi = S(1)) {
  VecX<S> c(1);
  c << (lo + hi) / 2;
  return make_ball<S>(c, (hi - lo) / 2);
}

template <typename S>
ConvexBody<S> make_lpball(S alpha, int dim = 2, S scale = S(1)) {
  if (!(alpha >= S(1))) raise(errc::parameter_out_of_range, "lp exponent must be >= 1");
  if (!(scale > S(0))) raise(errc::parameter_out_of_range, "lp scale must be positive");
  ConvexBody<S> body;
  body.dim = dim;
  body.witness = VecX<S>::Zero(dim);
  if (dim == 2) body.chain = lp_chain(alpha, scale);
  body.desc = "lpball(a=" + std::to_string(double(alpha)) + ",d=" + std::to_string(dim) + ")";
  body.shape = LpBall<S>{alpha, dim, scale};
  detail::finish_body(body);
  return body;
}

template <typename S>
ConvexBody<S> make_halfball3() {
  ConvexBody<S> body;
  body.dim = 3;
  body.witness = Vec3<S>(0, 0, S(0.25));
  body.desc = "halfball3";
  body.shape = HalfBall3Tag{};
  detail::finish_body(body);
  return body;
}

template <typename S>
ConvexBody<S> make_revolution(BodyPtr<S> profile, int axis = 0, Vec2<S> perp_offset = Vec2<S>::Zero()) {
  if (profile->dim != 2) raise(errc::parameter_out_of_range, "revolution profile must be planar");
  // profile must be symmetric in the radial coordinate
  for (const S phi : {S(0.3), S(1.1), S(2.4)}) {
    VecX<S> up(2), dn(2);
    up << std::cos(phi), std::sin(phi);
    dn << std::cos(phi), -std::sin(phi);
    if (std::abs(support(*profile, up) - support(*profile, dn)) > S(1e-9))
      raise(errc::parameter_out_of_range, "revolution profile must be symmetric about the axis");
  }
  ConvexBody<S> body;
  body.dim = 3;
  VecX<S> w = VecX<S>::Zero(3);
  w[axis] = profile->witness[0];
  int j = 0;
  for (int k = 0; k < 3; ++k)
    if (k != axis) w[k] = perp_offset[j++];
  body.witness = w;
  body.desc = "revolution(" + profile->desc + ")";
  body.shape = Revolution<S>{axis, perp_offset, std::move(profile)};
  detail::finish_body(body);
  return body;
}

template <typename S>
ConvexBody<S> make_affine_image(const AffineMap<S>& map, BodyPtr<S> base) {
  ConvexBody<S> body;
  body.dim = base->dim;
  body.witness = map.apply(base->witness);
  if (body.dim == 2) body.chain = transform_chain(base->chain, Mat2<S>(map.A), Vec2<S>(map.b));
  body.desc = "affine(" + base->desc + ")";
  body.shape = AffineImageOf<S>{map, std::move(base)};
  detail::finish_body(body);
  return body;
}

template <typename S>
BodyPtr<S> ptr(ConvexBody<S> body) {
  return std::make_shared<const ConvexBody<S>>(std::move(body));
}

// make_hull lives in hull2d.hpp (2D boundary construction) / hull3d fallback.

// Boundary samples: chain-based in 2D, support points of a direction fan in 3D.
template <typename S>
std::vector<VecX<S>> sample_boundary(const ConvexBody<S>& body, int count) {
  std::vector<VecX<S>> out;
  if (body.dim == 2 && !body.chain.empty()) {
    for (const auto& p : sample_chain(body.chain, count)) out.push_back(VecX<S>(p));
    return out;
  }
  if (body.dim == 1) {
    out.push_back(body.box_lo);
    out.push_back(body.box_hi);
    return out;
  }
  for (const auto& d : detail::fibonacci_sphere<S>(count)) out.push_back(support_point(body, VecX<S>(d)));
  return out;
}

// ---- serialization -----------------------------------------------------------

template <typename S>
nlohmann::json body_to_json(const ConvexBody<S>& body) {
  using nlohmann::json;
  return std::visit(
      [&](const auto& shape) -> json {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Polygon2D<S>>) {
          json verts = json::array();
          for (const auto& v : shape.verts) verts.push_back({double(v.x()), double(v.y())});
          return {{"type", "polygon"}, {"vertices", verts}};
        } else if constexpr (std::is_same_v<T, Ball<S>>) {
          json c = json::array();
          for (int k = 0; k < shape.center.size(); ++k) c.push_back(double(shape.center[k]));
          return {{"type", "ball"}, {"center", c}, {"radius", double(shape.radius)}};
        } else if constexpr (std::is_same_v<T, LpBall<S>>) {
          return {{"type", "lpball"}, {"alpha", double(shape.alpha)}, {"dim", shape.dim}, {"scale", double(shape.scale)}};
        } else if constexpr (std::is_same_v<T, HalfBall3Tag>) {
          return {{"type", "halfball3"}};
        } else if constexpr (std::is_same_v<T, Revolution<S>>) {
          return {{"type", "revolution"},
                  {"axis", shape.axis},
                  {"perp_offset", {double(shape.perp_offset.x()), double(shape.perp_offset.y())}},
                  {"profile", body_to_json(*shape.profile)}};
        } else if constexpr (std::is_same_v<T, AffineImageOf<S>>) {
          json rows = json::array();
          for (int i = 0; i < shape.map.A.rows(); ++i) {
            json row = json::array();
            for (int j = 0; j < shape.map.A.cols(); ++j) row.push_back(double(shape.map.A(i, j)));
            rows.push_back(row);
          }
          json off = json::array();
          for (int i = 0; i < shape.map.b.size(); ++i) off.push_back(double(shape.map.b[i]));
          return {{"type", "affine"}, {"matrix", rows}, {"offset", off}, {"base", body_to_json(*shape.base)}};
        } else {
          json parts = json::array();
          for (const auto& part : shape.parts) parts.push_back(body_to_json(*part));
          json pts = json::array();
          for (const auto& p : shape.points) {
            json pj = json::array();
            for (int i = 0; i < p.size(); ++i) pj.push_back(double(p[i]));
            pts.push_back(pj);
          }
          return {{"type", "hull"}, {"parts", parts}, {"points", pts}};
        }
      },
      body.shape);
}

template <typename S>
ConvexBody<S> body_from_json(const nlohmann::json& j);

}  // namespace christoffel
