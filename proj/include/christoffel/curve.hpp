#pragma once

#include "christoffel/affine.hpp"
#include "christoffel/legendre.hpp"

namespace christoffel {

// One smooth counter-clockwise piece of a convex boundary. Pieces are canonical
// curves (segment, circular arc, l_alpha arc in power or radial parametrization)
// with an optional affine transform applied on top and a parameter sub-range.
template <typename S>
struct CurvePiece {
  enum class Kind { segment, circle_arc, lp_power_arc, lp_radial_arc };
  Kind kind = Kind::segment;

  // segment endpoints (world coords, transform not applied)
  Vec2<S> a = Vec2<S>::Zero(), b = Vec2<S>::Zero();
  // circle_arc: canonical circle center/radius; lp arcs: scale in `radius`, exponent in `alpha`
  Vec2<S> center = Vec2<S>::Zero();
  S radius = S(1);
  S alpha = S(2);
  // canonical parameter range (angle for arcs)
  S t0 = S(0), t1 = S(1);
  // transform applied after canonical evaluation (not used for segments)
  bool transformed = false;
  Mat2<S> T = Mat2<S>::Identity();
  Vec2<S> shift = Vec2<S>::Zero();

  S param(S s) const { return t0 + s * (t1 - t0); }

  Vec2<S> eval_canonical(S t) const {
    switch (kind) {
      case Kind::segment:
        return a + t * (b - a);
      case Kind::circle_arc:
        return center + radius * Vec2<S>(std::cos(t), std::sin(t));
      case Kind::lp_power_arc: {
        const S p = 2 / alpha;
        const S c = std::cos(t), s = std::sin(t);
        auto f = [&](S w) { return w == S(0) ? S(0) : S(w < 0 ? -1 : 1) * std::pow(std::abs(w), p); };
        return radius * Vec2<S>(f(c), f(s));
      }
      case Kind::lp_radial_arc: {
        const S c = std::cos(t), s = std::sin(t);
        const S r = radius * std::pow(std::pow(std::abs(c), alpha) + std::pow(std::abs(s), alpha), S(-1) / alpha);
        return Vec2<S>(r * c, r * s);
      }
    }
    return Vec2<S>::Zero();
  }

  Vec2<S> deriv_canonical(S t) const {
    switch (kind) {
      case Kind::segment:
        return b - a;
      case Kind::circle_arc:
        return radius * Vec2<S>(-std::sin(t), std::cos(t));
      case Kind::lp_power_arc: {
        const S p = 2 / alpha;
        const S c = std::cos(t), s = std::sin(t);
        auto g = [&](S w) { return std::pow(std::abs(w), p - 1); };  // p >= 1 here
        return radius * p * Vec2<S>(-g(c) * s, g(s) * c);
      }
      case Kind::lp_radial_arc: {
        const S c = std::cos(t), s = std::sin(t);
        const S ca = std::pow(std::abs(c), alpha), sa = std::pow(std::abs(s), alpha);
        const S base = ca + sa;
        const S r = radius * std::pow(base, S(-1) / alpha);
        // d base/dt = alpha*(-|c|^{a-1} sgn(c) s ... ) compact form:
        const S dbase = alpha * (-std::pow(std::abs(c), alpha - 1) * (c < 0 ? S(-1) : S(1)) * s +
                                 std::pow(std::abs(s), alpha - 1) * (s < 0 ? S(-1) : S(1)) * c);
        const S dr = radius * (S(-1) / alpha) * std::pow(base, S(-1) / alpha - 1) * dbase;
        return Vec2<S>(dr * c - r * s, dr * s + r * c);
      }
    }
    return Vec2<S>::Zero();
  }

  Vec2<S> eval(S s) const {
    Vec2<S> p = eval_canonical(param(s));
    return transformed ? Vec2<S>(T * p + shift) : p;
  }
  // d/ds
  Vec2<S> deriv(S s) const {
    Vec2<S> d = deriv_canonical(param(s)) * (t1 - t0);
    return transformed ? Vec2<S>(T * d) : d;
  }

  // outward normal angle for a ccw-oriented boundary
  S normal_angle(S s) const {
    Vec2<S> d = deriv(s);
    return std::atan2(-d.x(), d.y());
  }

  // true if the canonical endpoint sits on a coordinate axis (lp arcs lose
  // analyticity there; quadrature grades the mesh toward such endpoints)
  bool singular_start() const {
    if (kind != Kind::lp_power_arc && kind != Kind::lp_radial_arc) return false;
    return near_axis(t0);
  }
  bool singular_end() const {
    if (kind != Kind::lp_power_arc && kind != Kind::lp_radial_arc) return false;
    return near_axis(t1);
  }

  CurvePiece sub(S s_lo, S s_hi) const {
    CurvePiece p = *this;
    p.t0 = param(s_lo);
    p.t1 = param(s_hi);
    if (kind == Kind::segment) {
      p.a = eval(s_lo);
      p.b = eval(s_hi);
      p.t0 = S(0);
      p.t1 = S(1);
    }
    return p;
  }

  CurvePiece reversed() const {
    CurvePiece p = *this;
    if (kind == Kind::segment) {
      std::swap(p.a, p.b);
    } else {
      std::swap(p.t0, p.t1);
    }
    return p;
  }

  CurvePiece with_transform(const Mat2<S>& M, const Vec2<S>& off) const {
    CurvePiece p = *this;
    if (kind == Kind::segment) {
      p.a = M * a + off;
      p.b = M * b + off;
      return p;
    }
    if (p.transformed) {
      p.shift = M * p.shift + off;
      p.T = M * p.T;
    } else {
      p.transformed = true;
      p.T = M;
      p.shift = off;
    }
    return p;
  }

 private:
  static bool near_axis(S t) {
    const S q = t / (pi_v<S> / 2);
    return std::abs(q - std::round(q)) < S(1e-9);
  }
};

template <typename S>
using Chain = std::vector<CurvePiece<S>>;

template <typename S>
CurvePiece<S> make_segment(const Vec2<S>& a, const Vec2<S>& b) {
  CurvePiece<S> p;
  p.kind = CurvePiece<S>::Kind::segment;
  p.a = a;
  p.b = b;
  return p;
}

template <typename S>
CurvePiece<S> make_circle_arc(const Vec2<S>& center, S radius, S phi0, S phi1) {
  CurvePiece<S> p;
  p.kind = CurvePiece<S>::Kind::circle_arc;
  p.center = center;
  p.radius = radius;
  p.t0 = phi0;
  p.t1 = phi1;
  return p;
}

template <typename S>
Chain<S> circle_chain(const Vec2<S>& center, S radius, int pieces = 8) {
  Chain<S> c;
  for (int k = 0; k < pieces; ++k)
    c.push_back(make_circle_arc(center, radius, 2 * pi_v<S> * k / pieces, 2 * pi_v<S> * (k + 1) / pieces));
  return c;
}

template <typename S>
Chain<S> lp_chain(S alpha, S scale) {
  Chain<S> c;
  typename CurvePiece<S>::Kind kind = alpha <= S(2) ? CurvePiece<S>::Kind::lp_power_arc
                                                    : CurvePiece<S>::Kind::lp_radial_arc;
  for (int q = 0; q < 4; ++q) {
    CurvePiece<S> p;
    p.kind = kind;
    p.alpha = alpha;
    p.radius = scale;
    p.t0 = pi_v<S> / 2 * q;
    p.t1 = pi_v<S> / 2 * (q + 1);
    c.push_back(p);
  }
  return c;
}

template <typename S>
Chain<S> polygon_chain(const std::vector<Vec2<S>>& verts) {
  Chain<S> c;
  for (std::size_t i = 0; i < verts.size(); ++i)
    c.push_back(make_segment(verts[i], verts[(i + 1) % verts.size()]));
  return c;
}

template <typename S>
Chain<S> transform_chain(const Chain<S>& chain, const Mat2<S>& M, const Vec2<S>& off) {
  Chain<S> out;
  out.reserve(chain.size());
  for (const auto& p : chain) out.push_back(p.with_transform(M, off));
  if (M.determinant() < S(0)) {
    std::reverse(out.begin(), out.end());
    for (auto& p : out) p = p.reversed();
  }
  return out;
}

// Boundary quadrature node: position and weighted tangent (gamma'(s) * w_s).
template <typename S>
struct BoundaryNode {
  Vec2<S> p;
  Vec2<S> dp;
};

namespace detail {

template <typename S>
void piece_nodes(const CurvePiece<S>& piece, S s_lo, S s_hi, int m, std::vector<BoundaryNode<S>>& out) {
  const auto& rule = gauss_legendre_t<S>(m);
  for (int i = 0; i < m; ++i) {
    const S s = s_lo + (S(rule.x[i]) + 1) / 2 * (s_hi - s_lo);
    const S w = S(rule.w[i]) / 2 * (s_hi - s_lo);
    out.push_back({piece.eval(s), piece.deriv(s) * w});
  }
}

// geometric grading toward an endpoint with an algebraic singularity
template <typename S>
void graded_nodes(const CurvePiece<S>& piece, S s_lo, S s_hi, bool toward_hi, int levels, int m,
                  std::vector<BoundaryNode<S>>& out) {
  S len = s_hi - s_lo;
  S near = toward_hi ? s_hi : s_lo;
  S far = toward_hi ? s_lo : s_hi;
  S prev = far;
  for (int l = 1; l <= levels; ++l) {
    const S frac = std::pow(S(0.5), S(l));
    const S cur = (l == levels) ? near : near - (toward_hi ? S(1) : S(-1)) * frac * len;
    if (toward_hi) piece_nodes(piece, prev, cur, m, out);
    else piece_nodes(piece, cur, prev, m, out);
    prev = cur;
  }
}

}  // namespace detail

// Quadrature stream along a chain. degree_hint is the total polynomial degree
// the consumer needs integrated: straight segments become exact, smooth arcs
// spectral, lp arcs geometrically graded toward the axis points.
template <typename S>
std::vector<BoundaryNode<S>> boundary_stream(const Chain<S>& chain, int degree_hint) {
  std::vector<BoundaryNode<S>> out;
  const int m_seg = std::max(6, (degree_hint + 16) / 2);
  for (const auto& piece : chain) {
    switch (piece.kind) {
      case CurvePiece<S>::Kind::segment:
        detail::piece_nodes(piece, S(0), S(1), m_seg, out);
        break;
      case CurvePiece<S>::Kind::circle_arc: {
        const S span = std::abs(piece.t1 - piece.t0);
        const int splits = std::max(1, int(std::ceil(span / (pi_v<S> / 8))));
        for (int k = 0; k < splits; ++k)
          detail::piece_nodes(piece, S(k) / splits, S(k + 1) / splits, m_seg, out);
        break;
      }
      case CurvePiece<S>::Kind::lp_power_arc:
      case CurvePiece<S>::Kind::lp_radial_arc: {
        const bool s0 = piece.singular_start(), s1 = piece.singular_end();
        const int levels = 24, m = 14;
        if (s0 && s1) {
          detail::graded_nodes(piece, S(0), S(0.5), false, levels, m, out);
          detail::graded_nodes(piece, S(0.5), S(1), true, levels, m, out);
        } else if (s0) {
          detail::graded_nodes(piece, S(0), S(1), false, levels, m, out);
        } else if (s1) {
          detail::graded_nodes(piece, S(0), S(1), true, levels, m, out);
        } else {
          detail::piece_nodes(piece, S(0), S(1), std::max(m_seg, 24), out);
        }
        break;
      }
    }
  }
  return out;
}

// Uniform-ish boundary samples (for containment checks and hull seeding).
template <typename S>
std::vector<Vec2<S>> sample_chain(const Chain<S>& chain, int total) {
  std::vector<Vec2<S>> pts;
  if (chain.empty()) return pts;
  const int per = std::max(2, total / int(chain.size()));
  for (const auto& piece : chain)
    for (int i = 0; i < per; ++i) pts.push_back(piece.eval(S(i) / per));
  return pts;
}

// Signed area enclosed by a ccw chain (Green's theorem sanity value).
template <typename S>
S chain_area(const Chain<S>& chain) {
  S acc = 0;
  for (const auto& node : boundary_stream(chain, 2)) acc += node.p.x() * node.dp.y();
  return acc;
}

}  // namespace christoffel
