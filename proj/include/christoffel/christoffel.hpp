#pragma once

#include "christoffel/quadrature.hpp"

#include <map>
#include <mutex>
#include <optional>

namespace christoffel {

// Upper-triangular half factor R of the column-scaled Gram: G_scaled = R' R.
// Planar bodies get R from a blocked QR of the weighted Vandermonde of a
// positive interior rule (condition sqrt(cond G), which is what keeps the
// degree caps reachable in double precision); the segment and the solids of
// revolution get R from a Cholesky of the assembled Gram, run in long double
// for d = 3.
template <typename S>
struct GramFactor {
  BasisSpec<S> spec;
  VecX<S> scale;  // column scaling applied to basis values
  MatX<S> R;
  S cond_estimate = 0;

  // z with ||z||^2 = p' G^{-1} p for p = basis values at x
  VecX<S> half_solve(const VecX<S>& p) const {
    return R.transpose().template triangularView<Eigen::Lower>().solve(
        VecX<S>(scale.cwiseProduct(p)));
  }
};

template <typename S>
struct ChristoffelValue {
  S lambda = 0;
  int n = 0;
  VecX<S> x;
  S cond_estimate = 0;
  bool exterior = false;
  IntegralMethod method = IntegralMethod::arc_quadrature;
};

template <typename S>
bool gram_supported(const ConvexBody<S>& body) {
  if (body.dim == 1) return true;
  if (body.dim == 2) return !body.chain.empty();
  return bool(detail::revolution_view(body));
}

namespace detail {

template <typename S, typename W>
GramFactor<S> factor_from_gram(const BasisSpec<S>& spec, const MatX<W>& gram,
                               const std::string& what) {
  const int N = spec.size();
  VecX<W> scale(N);
  for (int i = 0; i < N; ++i) {
    if (!(gram(i, i) > W(0)))
      raise(errc::not_positive_definite, "gram diagonal not positive in " + what);
    scale[i] = W(1) / std::sqrt(gram(i, i));
  }
  Eigen::LLT<MatX<W>> llt(MatX<W>(scale.asDiagonal() * gram * scale.asDiagonal()));
  if (llt.info() != Eigen::Success)
    raise(errc::not_positive_definite, "gram Cholesky failed for " + what);
  GramFactor<S> f;
  f.spec = spec;
  f.scale = scale.template cast<S>();
  f.R = MatX<W>(llt.matrixU()).template cast<S>();
  f.cond_estimate = S(1) / S(llt.rcond());
  return f;
}

// blocked Householder QR over the weighted Vandermonde rows of a positive rule
template <typename S>
GramFactor<S> factor_from_rule_2d(const ConvexBody<S>& body, const BasisSpec<S>& spec) {
  const int n = spec.degree;
  const int N = spec.size();
  auto rule = interior_rule_2d(body, 2 * n + 1);
  if (int(rule.size()) < N) raise(errc::numerical_failure, "interior rule has too few nodes");
  std::array<std::vector<S>, 2> leg{std::vector<S>(n + 1), std::vector<S>(n + 1)};
  auto fill_row = [&](const AreaNode<S>& node, S* row, const VecX<S>& colscale) {
    const S sw = std::sqrt(node.w);
    const S u = (node.p.x() - spec.center[0]) / spec.halfwidth[0];
    const S v = (node.p.y() - spec.center[1]) / spec.halfwidth[1];
    legendre_values(u, n, leg[0].data());
    legendre_values(v, n, leg[1].data());
    for (int i = 0; i < N; ++i)
      row[i] = sw * leg[0][spec.indices[i].e[0]] * leg[1][spec.indices[i].e[1]] * colscale[i];
  };
  // first pass: column equilibration
  VecX<S> ones = VecX<S>::Ones(N);
  VecX<S> sumsq = VecX<S>::Zero(N);
  std::vector<S> row(N);
  for (const auto& node : rule) {
    fill_row(node, row.data(), ones);
    for (int i = 0; i < N; ++i) sumsq[i] += row[i] * row[i];
  }
  VecX<S> colscale(N);
  for (int i = 0; i < N; ++i) {
    if (!(sumsq[i] > S(0))) raise(errc::not_positive_definite, "rank-deficient design for " + body.desc);
    colscale[i] = S(1) / std::sqrt(sumsq[i]);
  }
  // second pass: incremental QR over row blocks
  const int block = std::max(2 * N, 2048);
  MatX<S> stacked(N + block, N);
  stacked.setZero();
  int filled = 0;  // rows of R currently valid (0 until the first block)
  std::size_t next = 0;
  while (next < rule.size()) {
    const int rows = int(std::min<std::size_t>(block, rule.size() - next));
    for (int r = 0; r < rows; ++r) {
      fill_row(rule[next + r], row.data(), colscale);
      stacked.row(filled + r) = Eigen::Map<const VecX<S>>(row.data(), N);
    }
    Eigen::HouseholderQR<MatX<S>> qr(stacked.topRows(filled + rows));
    MatX<S> Rnew = qr.matrixQR()
                       .topRows(std::min(filled + rows, N))
                       .template triangularView<Eigen::Upper>();
    stacked.setZero();
    stacked.topLeftCorner(Rnew.rows(), N) = Rnew;
    filled = int(Rnew.rows());
    next += rows;
  }
  GramFactor<S> f;
  f.spec = spec;
  f.scale = colscale;
  f.R = stacked.topRows(N);
  S dmax = 0, dmin = std::numeric_limits<S>::infinity();
  for (int i = 0; i < N; ++i) {
    const S d = std::abs(f.R(i, i));
    dmax = std::max(dmax, d);
    dmin = std::min(dmin, d);
  }
  if (!(dmin > S(0))) raise(errc::not_positive_definite, "rank-deficient design for " + body.desc);
  f.cond_estimate = (dmax / dmin) * (dmax / dmin);
  return f;
}

}  // namespace detail

template <typename S>
GramFactor<S> make_gram_factor(const ConvexBody<S>& body, int n) {
  const BasisSpec<S> spec = body_basis_spec(body, n);
  if (body.dim == 2) return detail::factor_from_rule_2d(body, spec);
  if (body.dim == 1)
    return detail::factor_from_gram<S, S>(spec, gram_matrix_raw(body, n), body.desc);
  // d = 3: assemble and factor in long double
  auto view = detail::revolution_view(body);
  if (!view) raise(errc::unsupported, "no integration path for " + body.desc);
  const auto view_ld = detail::cast_view<long double>(*view);
  const int K = 2 * n;
  const auto nodes = revolution_volume_rule_from_view(view_ld, K);
  const auto table = legendre_moment_table_3d_from_nodes<long double>(
      nodes, spec.center.template cast<long double>(), spec.halfwidth.template cast<long double>(), K);
  const int N = spec.size();
  MatX<long double> G(N, N);
  const LinearizationTable<long double> lin(n);
  auto at = [&](int k, int l, int m) -> long double {
    return table[(std::size_t(k) * (K + 1) + l) * (K + 1) + m];
  };
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      const auto& mi = spec.indices[i];
      const auto& mj = spec.indices[j];
      const auto& cx = lin(mi.e[0], mj.e[0]);
      const auto& cy = lin(mi.e[1], mj.e[1]);
      const auto& cz = lin(mi.e[2], mj.e[2]);
      const int dx = mi.e[0] + mj.e[0], dy = mi.e[1] + mj.e[1], dz = mi.e[2] + mj.e[2];
      long double acc = 0;
      for (std::size_t r = 0; r < cx.size(); ++r)
        for (std::size_t s = 0; s < cy.size(); ++s) {
          long double inner = 0;
          for (std::size_t t = 0; t < cz.size(); ++t)
            inner += cz[t] * at(dx - 2 * int(r), dy - 2 * int(s), dz - 2 * int(t));
          acc += cx[r] * cy[s] * inner;
        }
      G(i, j) = G(j, i) = acc;
    }
  return detail::factor_from_gram<S, long double>(spec, G, body.desc + " at n=" + std::to_string(n));
}

constexpr double condition_warn_threshold = 1e12;

template <typename S>
ChristoffelValue<S> christoffel_eval(const ConvexBody<S>& body, const GramFactor<S>& factor,
                                     const VecX<S>& x) {
  ChristoffelValue<S> out;
  out.n = factor.spec.degree;
  out.x = x;
  out.cond_estimate = factor.cond_estimate;
  out.exterior = !contains(body, x, S(1e-12));
  const VecX<S> p = basis_eval(factor.spec, x);
  const VecX<S> z = factor.half_solve(p);
  out.lambda = S(1) / z.squaredNorm();
  out.method = body.dim == 3 ? IntegralMethod::revolution : IntegralMethod::arc_quadrature;
  return out;
}

// K_n(x, y) = p(x)' G^{-1} p(y)
template <typename S>
S kernel_eval(const GramFactor<S>& factor, const VecX<S>& x, const VecX<S>& y) {
  const VecX<S> zx = factor.half_solve(basis_eval(factor.spec, x));
  const VecX<S> zy = factor.half_solve(basis_eval(factor.spec, y));
  return zx.dot(zy);
}

// One factorization per (body, n), shared across evaluations. Planar bodies
// that fill their bounding box poorly (thin or rotated) are evaluated on their
// John normalization and mapped back through the exact affine rule; otherwise
// the tensor-Legendre box basis loses conditioning long before the degree caps.
template <typename S>
class Evaluator {
 public:
  explicit Evaluator(ConvexBody<S> body) : body_(std::move(body)) {
    if (body_.dim == 2 && gram_supported(body_)) {
      const S fill_raw = box_fill(body_);
      if (fill_raw < S(0.5)) {
        AffineMap<S> J = john_map(body_);
        ConvexBody<S> normalized = make_affine_image(J, std::make_shared<const ConvexBody<S>>(body_));
        if (box_fill(normalized) > fill_raw * S(1.05)) {
          norm_map_ = J;
          eval_body_ = std::make_shared<const ConvexBody<S>>(std::move(normalized));
          return;
        }
      }
    }
    eval_body_ = std::make_shared<const ConvexBody<S>>(body_);
  }

  const ConvexBody<S>& body() const { return body_; }
  bool normalized() const { return bool(norm_map_); }

  std::shared_ptr<const GramFactor<S>> factor(int n) const {
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = cache_.find(n);
      if (it != cache_.end()) return it->second;
    }
    auto f = std::make_shared<const GramFactor<S>>(make_gram_factor(*eval_body_, n));
    std::lock_guard<std::mutex> lk(mu_);
    return cache_.emplace(n, std::move(f)).first->second;
  }

  ChristoffelValue<S> eval(int n, const VecX<S>& x) const {
    if (!gram_supported(*eval_body_)) {
      if (std::holds_alternative<AffineImageOf<S>>(body_.shape)) {
        const auto& img = std::get<AffineImageOf<S>>(body_.shape);
        Evaluator<S> base(*img.base);
        auto v = base.eval(n, img.map.apply_inv(x));
        v.lambda *= std::abs(img.map.det);
        v.x = x;
        return v;
      }
      raise(errc::unsupported, "no integration path for " + body_.desc);
    }
    if (norm_map_) {
      auto v = christoffel_eval(*eval_body_, *factor(n), VecX<S>(norm_map_->apply(x)));
      v.lambda /= std::abs(norm_map_->det);
      v.x = x;
      v.exterior = !contains(body_, x, S(1e-12));
      return v;
    }
    return christoffel_eval(body_, *factor(n), x);
  }

  S kernel(int n, const VecX<S>& x, const VecX<S>& y) const {
    if (norm_map_)
      return kernel_eval(*factor(n), VecX<S>(norm_map_->apply(x)), VecX<S>(norm_map_->apply(y))) *
             std::abs(norm_map_->det);
    return kernel_eval(*factor(n), x, y);
  }

 private:
  static S box_fill(const ConvexBody<S>& body) {
    const S box = (body.box_hi - body.box_lo).prod();
    return box > S(0) ? chain_area(body.chain) / box : S(0);
  }

  ConvexBody<S> body_;
  std::shared_ptr<const ConvexBody<S>> eval_body_;
  std::optional<AffineMap<S>> norm_map_;
  mutable std::mutex mu_;
  mutable std::map<int, std::shared_ptr<const GramFactor<S>>> cache_;
};

template <typename S>
ChristoffelValue<S> christoffel_eval(const ConvexBody<S>& body, int n, const VecX<S>& x) {
  return Evaluator<S>(body).eval(n, x);
}

}  // namespace christoffel
