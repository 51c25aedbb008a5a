#pragma once

#include "christoffel/basis.hpp"
#include "christoffel/bigint.hpp"
#include "christoffel/geometry.hpp"

namespace christoffel {

// ---- exact rational polygon moments -------------------------------------------

// int_P x^a y^b over a ccw polygon, by the Green's-theorem edge reduction
// (contour integral of x^{a+1} y^b / (a+1) dy), each edge in closed form.
inline Rational polygon_moment(const std::vector<Vec2<double>>& verts, int a, int b) {
  if (a < 0 || b < 0) raise(errc::parameter_out_of_range, "polygon_moment: negative exponent");
  if (a + b > 64) raise(errc::degree_too_large, "polygon_moment: |alpha| > 64");
  Rational total;
  const int n = int(verts.size());
  for (int e = 0; e < n; ++e) {
    const Rational x0 = Rational::from_double(verts[e].x());
    const Rational y0 = Rational::from_double(verts[e].y());
    const Rational x1 = Rational::from_double(verts[(e + 1) % n].x());
    const Rational y1 = Rational::from_double(verts[(e + 1) % n].y());
    const Rational dx = x1 - x0, dy = y1 - y0;
    if (dy.is_zero()) continue;
    // powers of the four edge quantities
    std::vector<Rational> px0(a + 2), pdx(a + 2), py0(b + 1), pdy(b + 1);
    px0[0] = pdx[0] = py0[0] = pdy[0] = Rational(1);
    for (int i = 1; i <= a + 1; ++i) { px0[i] = px0[i - 1] * x0; pdx[i] = pdx[i - 1] * dx; }
    for (int j = 1; j <= b; ++j) { py0[j] = py0[j - 1] * y0; pdy[j] = pdy[j - 1] * dy; }
    Rational edge;
    for (int i = 0; i <= a + 1; ++i) {
      const Rational ci = Rational(BigInt::from_u64(binom_u64(a + 1, i)), BigInt(1)) * px0[a + 1 - i] * pdx[i];
      if (ci.is_zero()) continue;
      for (int j = 0; j <= b; ++j) {
        const Rational cj = Rational(BigInt::from_u64(binom_u64(b, j)), BigInt(1)) * py0[b - j] * pdy[j];
        if (cj.is_zero()) continue;
        edge += ci * cj / Rational(i + j + 1);
      }
    }
    total += edge * dy / Rational(a + 1);
  }
  return total;
}

inline Rational polygon_moment(const std::vector<Vec2<double>>& verts, const MultiIndex& alpha) {
  return polygon_moment(verts, alpha.e[0], alpha.e[1]);
}

// ---- closed-form unit-ball moments ---------------------------------------------

// int_{B^d} x^alpha dx: zero when any exponent is odd, otherwise a ratio of
// half-integer Gamma factors.
inline double ball_moment(int dim, const MultiIndex& alpha) {
  if (dim < 1 || dim > 3) raise(errc::unsupported, "ball_moment: dim must be 1..3");
  int total = 0;
  for (int k = 0; k < dim; ++k) {
    if (alpha.e[k] % 2 == 1) return 0.0;
    total += alpha.e[k];
  }
  double num = 2.0, sum_b = 0.0;
  for (int k = 0; k < dim; ++k) {
    num *= std::tgamma((alpha.e[k] + 1) / 2.0);
    sum_b += (alpha.e[k] + 1) / 2.0;
  }
  return num / std::tgamma(sum_b) / (total + dim);
}

// ---- Legendre moment tables ----------------------------------------------------

// L(k,l) = int_D P_k(u) P_l(v) dx dy over box coordinates (u,v); assembled from
// the boundary stream with the one-variable antiderivative identity, so entries
// stay O(vol) with no cancellation at high degree.
template <typename S>
MatX<S> legendre_moment_table_2d(const ConvexBody<S>& body, const BasisSpec<S>& spec, int K) {
  if (body.chain.empty()) raise(errc::unsupported, "no boundary chain for 2D integration");
  MatX<S> L = MatX<S>::Zero(K + 1, K + 1);
  const S cx = spec.center[0], cy = spec.center[1];
  const S hx = spec.halfwidth[0], hy = spec.halfwidth[1];
  std::vector<S> P(K + 2), Q(K + 1), Pv(K + 1);
  for (const auto& node : boundary_stream(body.chain, K + 2)) {
    const S u = (node.p.x() - cx) / hx;
    const S v = (node.p.y() - cy) / hy;
    const S wy = node.dp.y();  // dy weight (physical)
    if (wy == S(0)) continue;
    legendre_values(u, K + 1, P.data());
    legendre_antiderivatives(P.data(), u, K, Q.data());
    legendre_values(v, K, Pv.data());
    for (int k = 0; k <= K; ++k) {
      const S qk = Q[k] * wy * hx;
      if (qk == S(0)) continue;
      for (int l = 0; l + k <= K; ++l) L(k, l) += qk * Pv[l];
    }
  }
  return L;
}

// Volume quadrature nodes for bodies of revolution: outer nodes along the upper
// profile boundary, an inner radial Gauss rule realizing the Green antiderivative,
// and an exact trigonometric rule in the rotation angle.
template <typename S>
struct VolumeNode {
  VecX<S> p;
  S w;
};

namespace detail {

template <typename S>
struct RevolutionView {
  int axis = 0;
  Vec2<S> perp_offset = Vec2<S>::Zero();
  Chain<S> upper_profile;  // from the right axis point to the left, ccw of the region
};

// split chain pieces at rho = 0 crossings and keep the rho >= 0 part
template <typename S>
Chain<S> upper_half_chain(const Chain<S>& chain) {
  Chain<S> out;
  for (const auto& piece : chain) {
    std::vector<S> cuts{S(0)};
    const int probes = 16;
    S prev_s = 0, prev_y = piece.eval(S(0)).y();
    for (int i = 1; i <= probes; ++i) {
      const S s = S(i) / probes;
      const S y = piece.eval(s).y();
      if ((prev_y < 0) != (y < 0)) {
        cuts.push_back(brent_root<S>([&](S t) { return piece.eval(t).y(); }, prev_s, s, prev_y, y, S(1e-15)));
      }
      prev_s = s;
      prev_y = y;
    }
    cuts.push_back(S(1));
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      if (cuts[c + 1] - cuts[c] < S(1e-13)) continue;
      const S mid = (cuts[c] + cuts[c + 1]) / 2;
      if (piece.eval(mid).y() >= S(-1e-12)) out.push_back(piece.sub(cuts[c], cuts[c + 1]));
    }
  }
  return out;
}

template <typename S>
std::optional<RevolutionView<S>> revolution_view(const ConvexBody<S>& body) {
  if (body.dim != 3) return std::nullopt;
  if (std::holds_alternative<Ball<S>>(body.shape)) {
    const auto& ball = std::get<Ball<S>>(body.shape);
    RevolutionView<S> view;
    view.axis = 0;
    view.perp_offset = Vec2<S>(ball.center[1], ball.center[2]);
    view.upper_profile.push_back(make_circle_arc(Vec2<S>(ball.center[0], 0), ball.radius, S(0), pi_v<S>));
    return view;
  }
  if (std::holds_alternative<HalfBall3Tag>(body.shape)) {
    RevolutionView<S> view;
    view.axis = 2;
    view.upper_profile.push_back(make_circle_arc(Vec2<S>(Vec2<S>::Zero()), S(1), S(0), pi_v<S> / 2));
    view.upper_profile.push_back(make_segment(Vec2<S>(0, 1), Vec2<S>(0, 0)));
    return view;
  }
  if (std::holds_alternative<LpBall<S>>(body.shape)) {
    const auto& lp = std::get<LpBall<S>>(body.shape);
    // solid of revolution only for alpha = 2 (a ball); other exponents are not
    if (lp.alpha == S(2)) {
      RevolutionView<S> view;
      view.axis = 0;
      view.upper_profile.push_back(make_circle_arc(Vec2<S>(Vec2<S>::Zero()), lp.scale, S(0), pi_v<S>));
      return view;
    }
    return std::nullopt;
  }
  if (std::holds_alternative<Revolution<S>>(body.shape)) {
    const auto& rev = std::get<Revolution<S>>(body.shape);
    RevolutionView<S> view;
    view.axis = rev.axis;
    view.perp_offset = rev.perp_offset;
    view.upper_profile = upper_half_chain(rev.profile->chain);
    return view;
  }
  return std::nullopt;
}

}  // namespace detail

namespace detail {

template <typename S2, typename S>
RevolutionView<S2> cast_view(const RevolutionView<S>& view) {
  RevolutionView<S2> out;
  out.axis = view.axis;
  out.perp_offset = view.perp_offset.template cast<S2>();
  for (const auto& piece : view.upper_profile) {
    CurvePiece<S2> q;
    q.kind = static_cast<typename CurvePiece<S2>::Kind>(int(piece.kind));
    q.a = piece.a.template cast<S2>();
    q.b = piece.b.template cast<S2>();
    q.center = piece.center.template cast<S2>();
    q.radius = S2(piece.radius);
    q.alpha = S2(piece.alpha);
    q.t0 = S2(piece.t0);
    q.t1 = S2(piece.t1);
    q.transformed = piece.transformed;
    q.T = piece.T.template cast<S2>();
    q.shift = piece.shift.template cast<S2>();
    out.upper_profile.push_back(q);
  }
  return out;
}

}  // namespace detail

template <typename S>
std::vector<VolumeNode<S>> revolution_volume_rule_from_view(const detail::RevolutionView<S>& view,
                                                            int degree_hint) {
  const int n_theta = std::max(8, 2 * degree_hint + 4);
  const int m_inner = degree_hint / 2 + 2;
  const auto& inner = gauss_legendre_t<S>(m_inner);
  std::vector<VolumeNode<S>> nodes;
  int i1 = -1, i2 = -1;
  for (int k = 0, j = 0; k < 3; ++k)
    if (k != view.axis) (j++ == 0 ? i1 : i2) = k;
  for (const auto& bn : boundary_stream(view.upper_profile, degree_hint + 2)) {
    const S t = bn.p.x(), rho = bn.p.y();
    const S wt = -bn.dp.x();  // minus dt along the right-to-left upper boundary
    if (rho <= S(0) || wt == S(0)) continue;
    for (int i = 0; i < m_inner; ++i) {
      const S s = (S(inner.x[i]) + 1) / 2 * rho;
      const S ws = S(inner.w[i]) / 2 * rho;
      for (int q = 0; q < n_theta; ++q) {
        const S th = 2 * pi_v<S> * q / n_theta;
        VecX<S> p = VecX<S>::Zero(3);
        p[view.axis] = t;
        p[i1] = view.perp_offset[0] + s * std::cos(th);
        p[i2] = view.perp_offset[1] + s * std::sin(th);
        nodes.push_back({p, wt * ws * s * (2 * pi_v<S> / n_theta)});
      }
    }
  }
  return nodes;
}

// degree_hint: total degree of integrands the rule must handle
template <typename S>
std::vector<VolumeNode<S>> revolution_volume_rule(const ConvexBody<S>& body, int degree_hint) {
  auto view = detail::revolution_view(body);
  if (!view) raise(errc::unsupported, "body is not a supported solid of revolution");
  return revolution_volume_rule_from_view(*view, degree_hint);
}

// T3(k,l,m) = int_D P_k(u) P_l(v) P_m(w) dx dy dz over box coordinates.
template <typename S>
std::vector<S> legendre_moment_table_3d_from_nodes(const std::vector<VolumeNode<S>>& nodes,
                                                   const VecX<S>& center, const VecX<S>& halfwidth,
                                                   int K) {
  std::vector<S> T(std::size_t(K + 1) * (K + 1) * (K + 1), S(0));
  std::vector<S> Pu(K + 1), Pv(K + 1), Pw(K + 1);
  for (const auto& node : nodes) {
    VecX<S> u = (node.p - center).cwiseQuotient(halfwidth);
    legendre_values(u[0], K, Pu.data());
    legendre_values(u[1], K, Pv.data());
    legendre_values(u[2], K, Pw.data());
    for (int k = 0; k <= K; ++k) {
      const S a = node.w * Pu[k];
      for (int l = 0; l + k <= K; ++l) {
        const S b = a * Pv[l];
        S* row = T.data() + (std::size_t(k) * (K + 1) + l) * (K + 1);
        const int mmax = K - k - l;
        for (int m = 0; m <= mmax; ++m) row[m] += b * Pw[m];
      }
    }
  }
  return T;
}

template <typename S>
std::vector<S> legendre_moment_table_3d(const ConvexBody<S>& body, const BasisSpec<S>& spec, int K) {
  return legendre_moment_table_3d_from_nodes(revolution_volume_rule(body, K), spec.center,
                                             spec.halfwidth, K);
}

// Positive interior rule for chain-backed planar bodies: a fan of radial Gauss
// lines from the witness over the boundary quadrature stream. Exact on polygons,
// spectral/graded on arcs, and all weights are nonnegative (convexity makes the
// fan Jacobian one-signed).
template <typename S>
struct AreaNode {
  Vec2<S> p;
  S w;
};

template <typename S>
std::vector<AreaNode<S>> interior_rule_2d(const ConvexBody<S>& body, int degree) {
  if (body.chain.empty()) raise(errc::unsupported, "no boundary chain for 2D interior rule");
  const Vec2<S> w0 = body.witness;
  const int m_t = degree / 2 + 2;
  const auto& radial = gauss_legendre_t<S>(m_t);
  std::vector<AreaNode<S>> nodes;
  for (const auto& bn : boundary_stream(body.chain, degree)) {
    const Vec2<S> r = bn.p - w0;
    const S jac = r.x() * bn.dp.y() - r.y() * bn.dp.x();
    if (jac <= S(0)) continue;
    for (int i = 0; i < m_t; ++i) {
      const S t = (S(radial.x[i]) + 1) / 2;
      const S wt = S(radial.w[i]) / 2;
      nodes.push_back({Vec2<S>(w0 + t * r), wt * t * jac});
    }
  }
  return nodes;
}

// ---- Gram assembly ---------------------------------------------------------------

template <typename S>
BasisSpec<S> body_basis_spec(const ConvexBody<S>& body, int n) {
  return make_basis_spec<S>(body.dim, n, body.box_lo, body.box_hi);
}

// G[i][j] = int_D b_i b_j for the tensor-Legendre conditioning basis, assembled
// from the Legendre moment tables through the product linearization.
template <typename S>
MatX<S> gram_matrix_raw(const ConvexBody<S>& body, int n) {
  const BasisSpec<S> spec = body_basis_spec(body, n);
  const int N = spec.size();
  const int K = 2 * n;
  MatX<S> G(N, N);
  const LinearizationTable<S> lin(n);
  if (body.dim == 1) {
    // Gauss on the segment is exact; assemble directly
    const auto& rule = gauss_legendre_t<S>(n + 2);
    MatX<S> L1 = MatX<S>::Zero(K + 1, 1);
    const S h = spec.halfwidth[0];
    std::vector<S> P(K + 1);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      legendre_values(rule.x[i], K, P.data());
      for (int k = 0; k <= K; ++k) L1(k, 0) += rule.w[i] * h * P[k];
    }
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        const auto& cf = lin(spec.indices[i].e[0], spec.indices[j].e[0]);
        const int deg = spec.indices[i].e[0] + spec.indices[j].e[0];
        S acc = 0;
        for (std::size_t r = 0; r < cf.size(); ++r) acc += cf[r] * L1(deg - 2 * int(r), 0);
        G(i, j) = G(j, i) = acc;
      }
    return G;
  }
  if (body.dim == 2) {
    const MatX<S> L = legendre_moment_table_2d(body, spec, K);
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        const auto& mi = spec.indices[i];
        const auto& mj = spec.indices[j];
        const auto& cx = lin(mi.e[0], mj.e[0]);
        const auto& cy = lin(mi.e[1], mj.e[1]);
        const int dx = mi.e[0] + mj.e[0], dy = mi.e[1] + mj.e[1];
        S acc = 0;
        for (std::size_t r = 0; r < cx.size(); ++r) {
          S inner = 0;
          for (std::size_t s = 0; s < cy.size(); ++s) inner += cy[s] * L(dx - 2 * int(r), dy - 2 * int(s));
          acc += cx[r] * inner;
        }
        G(i, j) = G(j, i) = acc;
      }
    return G;
  }
  const std::vector<S> T = legendre_moment_table_3d(body, spec, K);
  auto at = [&](int k, int l, int m) -> S {
    return T[(std::size_t(k) * (K + 1) + l) * (K + 1) + m];
  };
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      const auto& mi = spec.indices[i];
      const auto& mj = spec.indices[j];
      const auto& cx = lin(mi.e[0], mj.e[0]);
      const auto& cy = lin(mi.e[1], mj.e[1]);
      const auto& cz = lin(mi.e[2], mj.e[2]);
      const int dx = mi.e[0] + mj.e[0], dy = mi.e[1] + mj.e[1], dz = mi.e[2] + mj.e[2];
      S acc = 0;
      for (std::size_t r = 0; r < cx.size(); ++r)
        for (std::size_t s = 0; s < cy.size(); ++s) {
          S inner = 0;
          for (std::size_t t = 0; t < cz.size(); ++t) inner += cz[t] * at(dx - 2 * int(r), dy - 2 * int(s), dz - 2 * int(t));
          acc += cx[r] * cy[s] * inner;
        }
      G(i, j) = G(j, i) = acc;
    }
  return G;
}

// Raw assembly plus the positive-definiteness contract: a failed Cholesky
// signals quadrature or conditioning failure.
template <typename S>
MatX<S> gram_matrix(const ConvexBody<S>& body, int n) {
  MatX<S> G = gram_matrix_raw(body, n);
  VecX<S> scale(G.rows());
  for (int i = 0; i < G.rows(); ++i) {
    if (!(G(i, i) > S(0))) raise(errc::not_positive_definite, "gram diagonal not positive");
    scale[i] = S(1) / std::sqrt(G(i, i));
  }
  Eigen::LLT<MatX<S>> llt(MatX<S>(scale.asDiagonal() * G * scale.asDiagonal()));
  if (llt.info() != Eigen::Success)
    raise(errc::not_positive_definite,
          "gram Cholesky failed for " + body.desc + " at n=" + std::to_string(n));
  return G;
}

// ---- general body integrals --------------------------------------------------------

enum class IntegralMethod { exact_rational, arc_quadrature, revolution, monte_carlo };

template <typename S>
struct IntegralResult {
  S value = 0;
  S abs_error_bound = 0;
  IntegralMethod method = IntegralMethod::arc_quadrature;
};

struct McOptions {
  std::int64_t samples = 2'000'000;
  std::uint64_t seed = default_seed;
  double rel_tolerance = 1e-2;  // 3-sigma bound above this (relative) raises
  bool enforce_tolerance = true;
};

// Stratified Monte Carlo over the bounding box with a 3-sigma CLT bound.
template <typename S, typename F>
IntegralResult<S> monte_carlo_integral(const ConvexBody<S>& body, F&& f, const McOptions& opt = {}) {
  const int d = body.dim;
  const int strata_per_axis = d == 3 ? 16 : 64;
  std::int64_t n_strata = 1;
  for (int k = 0; k < d; ++k) n_strata *= strata_per_axis;
  const std::int64_t per = std::max<std::int64_t>(1, (opt.samples + n_strata - 1) / n_strata);
  VecX<S> widths = body.box_hi - body.box_lo;
  const S box_vol = widths.prod();
  long double total_mean = 0, total_var = 0;
  std::int64_t total_n = 0;
  std::uint64_t st = opt.seed;
  for (std::int64_t cell = 0; cell < n_strata; ++cell) {
    std::mt19937_64 eng(splitmix64(st));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    VecX<S> lo(d);
    std::int64_t c = cell;
    for (int k = 0; k < d; ++k) {
      lo[k] = body.box_lo[k] + widths[k] * S(c % strata_per_axis) / strata_per_axis;
      c /= strata_per_axis;
    }
    long double acc = 0, acc2 = 0;
    for (std::int64_t i = 0; i < per; ++i) {
      VecX<S> p(d);
      for (int k = 0; k < d; ++k) p[k] = lo[k] + widths[k] / strata_per_axis * S(unif(eng));
      long double v = 0;
      if (contains(body, p)) v = (long double)(f(p));
      acc += v;
      acc2 += v * v;
    }
    const long double mean = acc / per;
    const long double var = std::max(0.0L, acc2 / per - mean * mean);
    total_mean += mean / n_strata;
    total_var += var / n_strata / n_strata / per;
    total_n += per;
  }
  IntegralResult<S> res;
  res.method = IntegralMethod::monte_carlo;
  res.value = S(total_mean * (long double)box_vol);
  res.abs_error_bound = S(3.0L * std::sqrt(total_var) * (long double)box_vol);
  if (opt.enforce_tolerance && std::abs(res.value) > S(0) &&
      res.abs_error_bound > S(opt.rel_tolerance) * std::abs(res.value))
    raise(errc::mc_variance_too_high, "monte carlo 3-sigma bound above relative tolerance");
  return res;
}

// Integral of a black-box polynomial of known total degree. 2D bodies use the
// boundary reduction with an inner antiderivative Gauss rule (exact on polygons,
// spectral on arcs); supported 3D bodies use the revolution rule; anything else
// falls back to Monte Carlo.
template <typename S>
IntegralResult<S> body_integral_fn(const ConvexBody<S>& body, const std::function<S(const VecX<S>&)>& f,
                                   int degree_hint, const McOptions& mc = {}) {
  IntegralResult<S> res;
  if (body.dim == 1) {
    const auto& rule = gauss_legendre_t<S>(degree_hint / 2 + 2);
    const S c = (body.box_lo[0] + body.box_hi[0]) / 2, h = (body.box_hi[0] - body.box_lo[0]) / 2;
    S acc = 0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      VecX<S> p(1);
      p << c + h * S(rule.x[i]);
      acc += S(rule.w[i]) * h * f(p);
    }
    res.value = acc;
    res.abs_error_bound = std::abs(acc) * S(1e-14);
    res.method = IntegralMethod::arc_quadrature;
    return res;
  }
  if (body.dim == 2 && !body.chain.empty()) {
    const S x0 = body.box_lo[0];
    const int m_in = degree_hint / 2 + 2;
    const auto& inner = gauss_legendre_t<S>(m_in);
    long double acc = 0;  // extended accumulation; cancellation across the
                          // contour otherwise dominates small moments
    for (const auto& node : boundary_stream(body.chain, degree_hint + 2)) {
      if (node.dp.y() == S(0)) continue;
      // F(x,y) = int_{x0}^{x} f(s,y) ds
      const S span = node.p.x() - x0;
      long double anti = 0;
      for (int i = 0; i < m_in; ++i) {
        VecX<S> p(2);
        p << x0 + (S(inner.x[i]) + 1) / 2 * span, node.p.y();
        anti += (long double)(inner.w[i]) / 2 * (long double)(span) * (long double)(f(p));
      }
      acc += anti * (long double)(node.dp.y());
    }
    res.value = S(acc);
    res.abs_error_bound = std::abs(res.value) * S(1e-12);
    res.method = IntegralMethod::arc_quadrature;
    return res;
  }
  if (body.dim == 3 && detail::revolution_view(body)) {
    S acc = 0;
    for (const auto& node : revolution_volume_rule(body, degree_hint)) acc += node.w * f(node.p);
    res.value = acc;
    res.abs_error_bound = std::abs(acc) * S(1e-12);
    res.method = IntegralMethod::revolution;
    return res;
  }
  if (std::holds_alternative<AffineImageOf<S>>(body.shape)) {
    const auto& img = std::get<AffineImageOf<S>>(body.shape);
    std::function<S(const VecX<S>&)> pulled = [&](const VecX<S>& p) { return f(img.map.apply(p)); };
    IntegralResult<S> base = body_integral_fn(*img.base, pulled, degree_hint, mc);
    base.value *= std::abs(img.map.det);
    base.abs_error_bound *= std::abs(img.map.det);
    return base;
  }
  return monte_carlo_integral(body, f, mc);
}

template <typename S, typename F,
          typename = std::enable_if_t<!std::is_same_v<std::decay_t<F>, std::function<S(const VecX<S>&)>>>>
IntegralResult<S> body_integral_fn(const ConvexBody<S>& body, F&& f, int degree_hint,
                                   const McOptions& mc = {}) {
  return body_integral_fn(body, std::function<S(const VecX<S>&)>(std::forward<F>(f)), degree_hint, mc);
}

// Integral of a polynomial given by conditioning-basis coefficients. Polygons of
// moderate degree go through the exact rational moment path.
template <typename S>
IntegralResult<S> body_integral(const ConvexBody<S>& body, const BasisSpec<S>& spec,
                                const VecX<S>& coeffs, const McOptions& mc = {}) {
  if (spec.size() != int(coeffs.size()))
    raise(errc::parameter_out_of_range, "body_integral: coefficient size mismatch");
  int degree = 0;
  for (int i = 0; i < spec.size(); ++i)
    if (coeffs[i] != S(0)) degree = std::max(degree, spec.indices[i].total());
  if (body.dim == 2 && std::holds_alternative<Polygon2D<S>>(body.shape) && degree <= 20) {
    // expand tensor-Legendre basis into monomials of the box variable, then
    // sum exact rational moments of the box-mapped polygon
    const auto& poly = std::get<Polygon2D<S>>(body.shape);
    std::vector<Vec2<double>> mapped;
    for (const auto& v : poly.verts)
      mapped.push_back(Vec2<double>(double((v.x() - spec.center[0]) / spec.halfwidth[0]),
                                    double((v.y() - spec.center[1]) / spec.halfwidth[1])));
    // monomial coefficients of sum_i c_i P_{a_i}(u) P_{b_i}(v)
    MatX<double> mono = MatX<double>::Zero(degree + 1, degree + 1);
    const int kmax = degree;
    MatX<double> legc = MatX<double>::Zero(kmax + 1, kmax + 1);  // legc(k,j): coeff of t^j in P_k
    legc(0, 0) = 1;
    if (kmax >= 1) legc(1, 1) = 1;
    for (int k = 1; k < kmax; ++k)
      for (int j = 0; j <= k + 1; ++j) {
        double v = 0;
        if (j >= 1) v += (2 * k + 1) * legc(k, j - 1);
        v -= k * (j <= k - 1 ? legc(k - 1, j) : 0);
        legc(k + 1, j) = v / (k + 1);
      }
    for (int i = 0; i < spec.size(); ++i) {
      if (coeffs[i] == S(0)) continue;
      const int a = spec.indices[i].e[0], b = spec.indices[i].e[1];
      for (int ja = 0; ja <= a; ++ja)
        for (int jb = 0; jb <= b; ++jb)
          mono(ja, jb) += double(coeffs[i]) * legc(a, ja) * legc(b, jb);
    }
    Rational total;
    for (int ja = 0; ja <= degree; ++ja)
      for (int jb = 0; jb + ja <= degree; ++jb)
        if (mono(ja, jb) != 0.0)
          total += Rational::from_double(mono(ja, jb)) * polygon_moment(mapped, ja, jb);
    IntegralResult<S> res;
    res.value = S(total.to_long_double()) * spec.halfwidth[0] * spec.halfwidth[1];
    res.abs_error_bound = 0;  // moments are exact; conversion error is one rounding
    res.method = IntegralMethod::exact_rational;
    return res;
  }
  std::function<S(const VecX<S>&)> f = [&](const VecX<S>& p) { return S(basis_eval(spec, p).dot(coeffs)); };
  return body_integral_fn(body, f, degree, mc);
}

}  // namespace christoffel
