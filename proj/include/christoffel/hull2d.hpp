#pragma once

#include "christoffel/body.hpp"

namespace christoffel {

template <typename S>
struct TaggedPoint {
  Vec2<S> p;
  int tag;
};

// Andrew monotone chain; returns ccw hull, tags preserved.
template <typename S>
std::vector<TaggedPoint<S>> convex_hull_tagged(std::vector<TaggedPoint<S>> pts, S eps = S(1e-12)) {
  std::sort(pts.begin(), pts.end(), [](const TaggedPoint<S>& a, const TaggedPoint<S>& b) {
    return a.p.x() < b.p.x() || (a.p.x() == b.p.x() && a.p.y() < b.p.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](const TaggedPoint<S>& a, const TaggedPoint<S>& b) {
                          return (a.p - b.p).norm() < eps;
                        }),
            pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;
  auto cross = [](const Vec2<S>& o, const Vec2<S>& a, const Vec2<S>& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<TaggedPoint<S>> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 2].p, h[k - 1].p, pts[i].p) <= eps) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2].p, h[k - 1].p, pts[i].p) <= eps) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

template <typename S>
std::vector<Vec2<S>> convex_hull(const std::vector<Vec2<S>>& pts, S eps = S(1e-12)) {
  std::vector<TaggedPoint<S>> tp;
  tp.reserve(pts.size());
  for (const auto& p : pts) tp.push_back({p, 0});
  auto h = convex_hull_tagged(tp, eps);
  std::vector<Vec2<S>> out;
  out.reserve(h.size());
  for (const auto& q : h) out.push_back(q.p);
  return out;
}

// Phase-1 simplex feasibility: is x a convex combination of the generators?
// Returns the residual infeasibility (0 when x lies in the hull of generators).
template <typename S>
S convex_combination_residual(const std::vector<VecX<S>>& gens, const VecX<S>& x) {
  const int d = int(x.size());
  const int m = d + 1;
  const int n = int(gens.size());
  // tableau over columns [lambda | artificial], rows: coords + sum-to-one
  MatX<S> A(m, n + m);
  VecX<S> rhs(m);
  for (int i = 0; i < d; ++i) rhs[i] = x[i];
  rhs[d] = 1;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < d; ++i) A(i, j) = gens[j][i];
    A(d, j) = 1;
  }
  A.block(0, n, m, m).setIdentity();
  // flip rows so rhs >= 0
  for (int i = 0; i < m; ++i)
    if (rhs[i] < 0) { rhs[i] = -rhs[i]; A.row(i) = -A.row(i); }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  VecX<S> cost = VecX<S>::Zero(n + m);
  cost.tail(m).setOnes();
  for (int iter = 0; iter < 20000; ++iter) {
    // reduced costs: c_j - c_B' B^{-1} A_j ; tableau kept in solved form
    VecX<S> y = VecX<S>::Zero(m);
    for (int i = 0; i < m; ++i) y[i] = cost[basis[i]];
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      const S rc = cost[j] - y.dot(A.col(j));
      if (rc < S(-1e-11)) { enter = j; break; }  // Bland's rule
    }
    if (enter < 0) break;
    int leave = -1;
    S best = std::numeric_limits<S>::infinity();
    for (int i = 0; i < m; ++i) {
      if (A(i, enter) > S(1e-12)) {
        const S ratio = rhs[i] / A(i, enter);
        if (ratio < best - S(1e-15) || (ratio < best + S(1e-15) && (leave < 0 || basis[i] < basis[leave]))) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) break;  // unbounded, cannot happen in phase 1
    const S piv = A(leave, enter);
    A.row(leave) /= piv;
    rhs[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const S f = A(i, enter);
      if (f != S(0)) {
        A.row(i) -= f * A.row(leave);
        rhs[i] -= f * rhs[leave];
      }
    }
    basis[leave] = enter;
  }
  S infeas = 0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n) infeas += rhs[i];
  return infeas;
}

namespace detail {

template <typename S>
struct NormalSpan {
  S lo, hi;  // unwrapped normal angles at piece start / end
};

template <typename S>
std::vector<NormalSpan<S>> unwrap_normals(const Chain<S>& chain) {
  std::vector<NormalSpan<S>> spans(chain.size());
  S prev = chain[0].normal_angle(S(0));
  for (std::size_t i = 0; i < chain.size(); ++i) {
    S lo = chain[i].normal_angle(S(0));
    while (lo < prev - S(1e-9)) lo += 2 * pi_v<S>;
    S hi = chain[i].normal_angle(S(1) - S(1e-12));
    while (hi < lo - S(1e-9)) hi += 2 * pi_v<S>;
    spans[i] = {lo, hi};
    prev = hi;
  }
  return spans;
}

// (piece index, s) whose outward normal angle equals theta; vertex junctions
// between pieces resolve to the start of the next piece.
template <typename S>
std::pair<std::size_t, S> locate_by_normal(const Chain<S>& chain, const std::vector<NormalSpan<S>>& spans, S theta) {
  const S base = spans.front().lo;
  S t = theta;
  while (t < base - S(1e-9)) t += 2 * pi_v<S>;
  while (t >= base + 2 * pi_v<S> - S(1e-9)) t -= 2 * pi_v<S>;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (t <= spans[i].lo + S(1e-9)) return {i, S(0)};
    if (t <= spans[i].hi) {
      if (spans[i].hi - spans[i].lo < S(1e-12)) return {i, S(0)};
      auto f = [&](S s) {
        S a = chain[i].normal_angle(s);
        while (a < spans[i].lo - S(1e-9)) a += 2 * pi_v<S>;
        return a - t;
      };
      const S f0 = f(S(0)), f1 = f(S(1));
      if (f0 >= S(0)) return {i, S(0)};
      if (f1 <= S(0)) return {i, S(1)};
      return {i, brent_root<S>(f, S(0), S(1), f0, f1, S(1e-14))};
    }
  }
  return {0, S(0)};  // wrapped: start of chain
}

// ccw sub-chain between normal angles theta_in -> theta_out
template <typename S>
Chain<S> extract_arc(const Chain<S>& chain, S theta_in, S theta_out) {
  auto spans = unwrap_normals(chain);
  auto [i0, s0] = locate_by_normal(chain, spans, theta_in);
  auto [i1, s1] = locate_by_normal(chain, spans, theta_out);
  Chain<S> out;
  auto push = [&](const CurvePiece<S>& piece, S a, S b) {
    if (b - a > S(1e-12)) out.push_back(piece.sub(a, b));
  };
  if (i0 == i1 && s0 <= s1) {
    const S dn = ang_diff(theta_out, theta_in);
    if (dn >= S(-1e-9) || s1 > s0) {
      push(chain[i0], s0, s1);
      return out;
    }
  }
  push(chain[i0], s0, S(1));
  for (std::size_t i = (i0 + 1) % chain.size(); i != i1; i = (i + 1) % chain.size())
    push(chain[i], S(0), S(1));
  push(chain[i1], S(0), s1);
  return out;
}

}  // namespace detail

// Explicit ccw boundary of the convex hull of parts and isolated points:
// arcs of part boundaries joined by refined bitangent segments.
template <typename S>
Chain<S> build_hull_chain(const std::vector<BodyPtr<S>>& parts, const std::vector<VecX<S>>& points,
                          int samples_per_part = 1024) {
  struct Element {
    const ConvexBody<S>* body = nullptr;  // null for isolated points
    Vec2<S> point = Vec2<S>::Zero();
    S h(const Vec2<S>& n) const { return body ? support(*body, VecX<S>(n)) : point.dot(n); }
    Vec2<S> sp(const Vec2<S>& n) const {
      return body ? Vec2<S>(support_point(*body, VecX<S>(n))) : point;
    }
  };
  std::vector<Element> elems;
  for (const auto& part : parts) elems.push_back({part.get(), Vec2<S>::Zero()});
  for (const auto& p : points) elems.push_back({nullptr, Vec2<S>(p)});

  // drop elements whose support is dominated by another part everywhere;
  // nearly-tangent contained parts otherwise confuse the run detection
  if (elems.size() > 1) {
    std::vector<bool> dead(elems.size(), false);
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = 0; j < elems.size() && !dead[i]; ++j) {
        if (i == j || dead[j] || !elems[j].body) continue;
        bool dominated = true;
        for (int k = 0; k < 256 && dominated; ++k) {
          const S th = 2 * pi_v<S> * k / 256;
          const Vec2<S> u(std::cos(th), std::sin(th));
          if (elems[i].h(u) > elems[j].h(u) - S(1e-11)) dominated = false;
        }
        if (dominated) dead[i] = true;
      }
    }
    std::vector<Element> kept;
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (!dead[i]) kept.push_back(elems[i]);
    if (!kept.empty()) elems = std::move(kept);
  }

  std::vector<TaggedPoint<S>> samples;
  for (int e = 0; e < int(elems.size()); ++e) {
    if (elems[e].body) {
      for (const auto& p : sample_chain(elems[e].body->chain, samples_per_part))
        samples.push_back({p, e});
    } else {
      samples.push_back({elems[e].point, e});
    }
  }
  auto hull = convex_hull_tagged(samples, S(1e-13));
  if (hull.size() < 2) raise(errc::parameter_out_of_range, "hull is degenerate");

  // maximal circular runs of equal tag
  struct Run { int tag; std::size_t first, last; };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (runs.empty() || runs.back().tag != hull[i].tag) runs.push_back({hull[i].tag, i, i});
    else runs.back().last = i;
  }
  if (runs.size() > 1 && runs.front().tag == runs.back().tag) {
    runs.front().first = runs.back().first;  // wrapped run
    runs.pop_back();
  }

  if (runs.size() == 1) {
    const auto& el = elems[runs[0].tag];
    if (!el.body) raise(errc::parameter_out_of_range, "hull of a single point");
    return el.body->chain;
  }

  // refine transition normals between consecutive runs
  const std::size_t R = runs.size();
  std::vector<S> trans(R);  // trans[i]: normal angle between runs[i] and runs[i+1]
  for (std::size_t i = 0; i < R; ++i) {
    const Run& ra = runs[i];
    const Run& rb = runs[(i + 1) % R];
    const Vec2<S> pa = hull[ra.last].p;
    const Vec2<S> pb = hull[rb.first].p;
    const Vec2<S> edge = pb - pa;
    S theta = std::atan2(-edge.x(), edge.y());
    auto f = [&](S th) {
      const Vec2<S> n(std::cos(th), std::sin(th));
      return elems[ra.tag].h(n) - elems[rb.tag].h(n);
    };
    S w = S(0.01);
    bool found = false;
    for (; w < S(1.5); w *= 2) {
      const S flo = f(theta - w), fhi = f(theta + w);
      if (flo >= S(0) && fhi <= S(0)) {
        trans[i] = brent_root<S>(f, theta - w, theta + w, flo, fhi, S(1e-14));
        found = true;
        break;
      }
    }
    if (!found) trans[i] = theta;  // touching parts: the sampled direction is already tangent
  }

  Chain<S> out;
  for (std::size_t i = 0; i < R; ++i) {
    const S th_in = trans[(i + R - 1) % R];
    const S th_out = trans[i];
    const auto& el = elems[runs[i].tag];
    Vec2<S> end = el.sp(Vec2<S>(std::cos(th_out), std::sin(th_out)));
    if (el.body) {
      Chain<S> arc = detail::extract_arc(el.body->chain, th_in, th_out);
      for (auto& piece : arc) out.push_back(piece);
      if (!arc.empty()) end = arc.back().eval(S(1));
    }
    const auto& nel = elems[runs[(i + 1) % R].tag];
    const Vec2<S> next_start = nel.sp(Vec2<S>(std::cos(th_out), std::sin(th_out)));
    if ((next_start - end).norm() > S(1e-11)) out.push_back(make_segment(end, next_start));
  }
  if (out.empty()) raise(errc::parameter_out_of_range, "hull chain construction failed");
  return out;
}

template <typename S>
ConvexBody<S> make_hull(std::vector<BodyPtr<S>> parts, std::vector<VecX<S>> points = {}) {
  if (parts.empty() && points.size() < 3)
    raise(errc::parameter_out_of_range, "hull needs at least one body part or three points");
  const int dim = parts.empty() ? int(points.front().size()) : parts.front()->dim;
  for (const auto& part : parts)
    if (part->dim != dim) raise(errc::parameter_out_of_range, "hull parts must share a dimension");
  for (const auto& p : points)
    if (int(p.size()) != dim) raise(errc::parameter_out_of_range, "hull point dimension mismatch");

  ConvexBody<S> body;
  body.dim = dim;
  VecX<S> mean = VecX<S>::Zero(dim);
  for (const auto& part : parts) mean += part->witness;
  for (const auto& p : points) mean += p;
  body.witness = mean / S(parts.size() + points.size());
  if (dim == 2) body.chain = build_hull_chain<S>(parts, points);
  body.desc = "hull[" + std::to_string(parts.size()) + "+" + std::to_string(points.size()) + "pt]";
  body.shape = HullOf<S>{std::move(parts), std::move(points)};
  detail::finish_body(body);
  return body;
}

template <typename S>
ConvexBody<S> body_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "polygon") {
    std::vector<Vec2<S>> verts;
    for (const auto& v : j.at("vertices")) verts.push_back(Vec2<S>(S(v[0].get<double>()), S(v[1].get<double>())));
    return make_polygon<S>(std::move(verts));
  }
  if (type == "ball") {
    const auto& c = j.at("center");
    VecX<S> center(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) center[k] = S(c[k].get<double>());
    return make_ball<S>(center, S(j.at("radius").get<double>()));
  }
  if (type == "lpball")
    return make_lpball<S>(S(j.at("alpha").get<double>()), j.value("dim", 2), S(j.value("scale", 1.0)));
  if (type == "halfball3") return make_halfball3<S>();
  if (type == "revolution") {
    Vec2<S> off = Vec2<S>::Zero();
    if (j.contains("perp_offset"))
      off = Vec2<S>(S(j["perp_offset"][0].get<double>()), S(j["perp_offset"][1].get<double>()));
    return make_revolution<S>(ptr(body_from_json<S>(j.at("profile"))), j.value("axis", 0), off);
  }
  if (type == "affine") {
    const auto& rows = j.at("matrix");
    const int d = int(rows.size());
    MatX<S> A(d, d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) A(i, k) = S(rows[i][k].get<double>());
    VecX<S> b(d);
    for (int i = 0; i < d; ++i) b[i] = S(j.at("offset")[i].get<double>());
    return make_affine_image<S>(make_affine<S>(A, b), ptr(body_from_json<S>(j.at("base"))));
  }
  if (type == "hull") {
    std::vector<BodyPtr<S>> parts;
    for (const auto& part : j.value("parts", nlohmann::json::array()))
      parts.push_back(ptr(body_from_json<S>(part)));
    std::vector<VecX<S>> points;
    for (const auto& p : j.value("points", nlohmann::json::array())) {
      VecX<S> v(p.size());
      for (std::size_t k = 0; k < p.size(); ++k) v[k] = S(p[k].get<double>());
      points.push_back(v);
    }
    return make_hull<S>(std::move(parts), std::move(points));
  }
  raise(errc::parameter_out_of_range, "unknown body type: " + type);
}

}  // namespace christoffel
