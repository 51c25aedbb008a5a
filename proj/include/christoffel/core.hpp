#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace christoffel {

template <typename S> using Vec2 = Eigen::Matrix<S, 2, 1>;
template <typename S> using Vec3 = Eigen::Matrix<S, 3, 1>;
template <typename S> using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S> using Mat2 = Eigen::Matrix<S, 2, 2>;
template <typename S> using Mat3 = Eigen::Matrix<S, 3, 3>;
template <typename S> using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

enum class errc {
  x_on_boundary,
  degree_too_large,
  not_positive_definite,
  mc_variance_too_high,
  invalid_normal,
  degenerate_angle,
  containment_failed,
  section_degenerate,
  parameter_out_of_range,
  round_trip_failed,
  sigma_violated,
  unknown_experiment,
  io_error,
  unsupported,
  numerical_failure,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::x_on_boundary: return "XOnBoundary";
    case errc::degree_too_large: return "DegreeTooLarge";
    case errc::not_positive_definite: return "NotPositiveDefinite";
    case errc::mc_variance_too_high: return "MCVarianceTooHigh";
    case errc::invalid_normal: return "InvalidNormal";
    case errc::degenerate_angle: return "DegenerateAngle";
    case errc::containment_failed: return "ContainmentFailed";
    case errc::section_degenerate: return "SectionDegenerate";
    case errc::parameter_out_of_range: return "ParameterOutOfRange";
    case errc::round_trip_failed: return "RoundTripFailed";
    case errc::sigma_violated: return "SigmaViolated";
    case errc::unknown_experiment: return "UnknownExperiment";
    case errc::io_error: return "IOError";
    case errc::unsupported: return "Unsupported";
    case errc::numerical_failure: return "NumericalFailure";
  }
  return "Error";
}

struct Error : std::runtime_error {
  errc code;
  Error(errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code(c) {}
};

[[noreturn]] inline void raise(errc c, const std::string& what) { throw Error(c, what); }

template <typename S> constexpr S pi_v = S(3.14159265358979323846264338327950288L);

template <typename S> inline S wrap_angle(S a) {
  const S tau = 2 * pi_v<S>;
  a = std::fmod(a, tau);
  if (a <= -pi_v<S>) a += tau;
  if (a > pi_v<S>) a -= tau;
  return a;
}

// signed difference a-b wrapped into (-pi, pi]
template <typename S> inline S ang_diff(S a, S b) { return wrap_angle<S>(a - b); }

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

inline std::uint64_t binom_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * std::uint64_t(n - k + i) / std::uint64_t(i);
  return r;
}

// Brent root finder; requires f(a)*f(b) <= 0.
template <typename S, typename F>
S brent_root(F&& f, S a, S b, S fa, S fb, S xtol, int maxit = 200) {
  if (fa == S(0)) return a;
  if (fb == S(0)) return b;
  if (fa * fb > S(0)) raise(errc::numerical_failure, "brent_root: no sign change");
  S c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < maxit; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const S tol1 = 2 * std::numeric_limits<S>::epsilon() * std::abs(b) + xtol / 2;
    const S xm = (c - b) / 2;
    if (std::abs(xm) <= tol1 || fb == S(0)) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      S p, q, r, s = fb / fa;
      if (a == c) {
        p = 2 * xm * s;
        q = 1 - s;
      } else {
        q = fa / fc; r = fb / fc;
        p = s * (2 * xm * q * (q - r) - (b - a) * (r - 1));
        q = (q - 1) * (r - 1) * (s - 1);
      }
      if (p > S(0)) q = -q;
      p = std::abs(p);
      if (2 * p < std::min(3 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d; d = p / q;
      } else {
        d = xm; e = d;
      }
    } else {
      d = xm; e = d;
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > S(0) ? tol1 : -tol1);
    fb = f(b);
    if ((fb > S(0)) == (fc > S(0))) { c = a; fc = fa; d = b - a; e = d; }
  }
  return b;
}

// Golden-section minimizer on [a,b]; returns (xmin, fmin).
template <typename S, typename F>
std::pair<S, S> golden_min(F&& f, S a, S b, S xtol, int maxit = 200) {
  const S gr = (std::sqrt(S(5)) - 1) / 2;
  S c = b - gr * (b - a), d = a + gr * (b - a);
  S fc = f(c), fd = f(d);
  for (int it = 0; it < maxit && (b - a) > xtol; ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t default_seed = 0x5EED;

// Deterministic per-index dispatch: results must not depend on worker count.
template <typename F>
void parallel_for(std::size_t count, int workers, F&& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const int nw = std::min<std::size_t>(workers, count);
  pool.reserve(nw);
  for (int w = 0; w < nw; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
}

}  // namespace christoffel
