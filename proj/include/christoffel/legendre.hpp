#pragma once

#include "christoffel/core.hpp"

#include <map>
#include <mutex>

namespace christoffel {

// P_0..P_kmax at x by the three-term recurrence.
template <typename S>
inline void legendre_values(S x, int kmax, S* out) {
  out[0] = S(1);
  if (kmax == 0) return;
  out[1] = x;
  for (int k = 1; k < kmax; ++k)
    out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / S(k + 1);
}

template <typename S>
inline VecX<S> legendre_values(S x, int kmax) {
  VecX<S> v(kmax + 1);
  legendre_values(x, kmax, v.data());
  return v;
}

// Q_k(x) = int_{-1}^{x} P_k; Q_0 = x+1, Q_k = (P_{k+1}-P_{k-1})/(2k+1).
// 'p' must hold P_0..P_{kmax+1}.
template <typename S>
inline void legendre_antiderivatives(const S* p, S x, int kmax, S* out) {
  out[0] = x + S(1);
  for (int k = 1; k <= kmax; ++k) out[k] = (p[k + 1] - p[k - 1]) / S(2 * k + 1);
}

// Reproducing kernel of P_m on [-1,1] with the uniform weight.
template <typename S>
inline S legendre_kernel_1d(int m, S s, S t) {
  std::vector<S> ps(m + 1), pt(m + 1);
  legendre_values(s, m, ps.data());
  legendre_values(t, m, pt.data());
  S acc = 0;
  for (int k = 0; k <= m; ++k) acc += (S(2 * k + 1) / 2) * ps[k] * pt[k];
  return acc;
}

// lambda_n([-1,1], x) with w = 1, closed form through the Legendre kernel diagonal.
template <typename S>
inline S christoffel_1d(int n, S x) {
  if (n < 0) raise(errc::parameter_out_of_range, "christoffel_1d: n < 0");
  if (n > 60) raise(errc::degree_too_large, "christoffel_1d: n > 60");
  return S(1) / legendre_kernel_1d<S>(n, x, x);
}

// Product linearization P_m P_n = sum_r lin[r] P_{m+n-2r}, r = 0..min(m,n).
// Coefficients are positive and sum to 1.
template <typename S>
inline std::vector<S> legendre_linearization(int m, int n) {
  const int rmax = std::min(m, n);
  std::vector<S> a(m + n + 1);
  a[0] = S(1);
  for (int j = 1; j <= m + n; ++j) a[j] = a[j - 1] * S(2 * j - 1) / S(2 * j);
  std::vector<S> c(rmax + 1);
  for (int r = 0; r <= rmax; ++r) {
    const int k = m + n - 2 * r;
    c[r] = a[r] * a[m - r] * a[n - r] / a[m + n - r]
         * S(2 * k + 1) / S(2 * (m + n - r) + 1);
  }
  return c;
}

template <typename S>
struct LinearizationTable {
  int max_degree = -1;
  std::vector<std::vector<S>> coef;  // indexed m*(max+1)+n

  explicit LinearizationTable(int max_deg) : max_degree(max_deg) {
    coef.resize(std::size_t(max_deg + 1) * (max_deg + 1));
    for (int m = 0; m <= max_deg; ++m)
      for (int n = 0; n <= max_deg; ++n)
        coef[std::size_t(m) * (max_deg + 1) + n] = legendre_linearization<S>(m, n);
  }
  const std::vector<S>& operator()(int m, int n) const {
    return coef[std::size_t(m) * (max_degree + 1) + n];
  }
};

template <typename S>
struct GaussRuleT {
  std::vector<S> x, w;  // on [-1,1]
};

// Gauss-Legendre nodes by Newton iteration in the working precision; cached
// per scalar type and node count.
template <typename S>
const GaussRuleT<S>& gauss_legendre_t(int m) {
  static std::map<int, GaussRuleT<S>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  GaussRuleT<S> r;
  r.x.resize(m);
  r.w.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    S x = std::cos(pi_v<S> * (i + S(0.75)) / (m + S(0.5)));
    S dp = 0;
    for (int it2 = 0; it2 < 100; ++it2) {
      S p0 = 1, p1 = x;
      for (int k = 1; k < m; ++k) {
        S p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1; p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1);
      S dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 8 * std::numeric_limits<S>::epsilon()) break;
    }
    r.x[i] = -x;
    r.x[m - 1 - i] = x;
    const S w = 2 / ((1 - x * x) * dp * dp);
    r.w[i] = w;
    r.w[m - 1 - i] = w;
  }
  return cache.emplace(m, std::move(r)).first->second;
}

using GaussRule = GaussRuleT<double>;

inline const GaussRule& gauss_legendre(int m) { return gauss_legendre_t<double>(m); }

}  // namespace christoffel
