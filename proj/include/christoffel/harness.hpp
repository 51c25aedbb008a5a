#pragma once

#include "christoffel/constructions.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace christoffel {

struct ExperimentReport {
  std::string name;
  std::map<std::string, std::string> params;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> row_labels;  // body/point provenance per record
  std::map<std::string, double> summary;
  double runtime_seconds = 0;
  // plotting hints for the svg emitter
  std::string plot_x, plot_y, slice_by;
  bool log_log = false;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return int(i);
    raise(errc::parameter_out_of_range, "no column " + name);
  }
};

struct OlsFit {
  double slope = 0, intercept = 0, stderr_slope = 0;
};

inline OlsFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) raise(errc::parameter_out_of_range, "ols needs two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mx += xs[i]; my += ys[i]; }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  OlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ys[i] - fit.intercept - fit.slope * xs[i];
      ss += r * r;
    }
    fit.stderr_slope = std::sqrt(ss / double(n - 2) / sxx);
  }
  return fit;
}

inline std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / std::max(1, count - 1));
  return out;
}

struct ExperimentOptions {
  std::map<std::string, std::string> params;
  std::uint64_t seed = default_seed;
  int workers = 1;

  double get(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : std::stod(it->second);
  }
  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
};

namespace detail {

template <typename S>
std::string point_label(const VecX<S>& x) {
  std::ostringstream os;
  os << std::setprecision(12) << "(";
  for (int i = 0; i < x.size(); ++i) os << (i ? "," : "") << double(x[i]);
  os << ")";
  return os.str();
}

inline void spread_summary(ExperimentReport& rep, const std::string& col) {
  const int c = rep.column(col);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& row : rep.rows) {
    lo = std::min(lo, row[c]);
    hi = std::max(hi, row[c]);
  }
  rep.summary[col + "_min"] = lo;
  rep.summary[col + "_max"] = hi;
  rep.summary[col + "_spread"] = hi / lo;
}

}  // namespace detail

// ---- experiment registry -----------------------------------------------------------

template <typename S>
using ExperimentFn = ExperimentReport (*)(const ExperimentOptions&);

template <typename S>
ExperimentReport experiment_interval_oracle(const ExperimentOptions& opt) {
  ExperimentReport rep;
  rep.name = "interval-oracle";
  rep.columns = {"n", "x", "lambda_gram", "lambda_closed", "rel_err"};
  const int nmax = int(opt.get("nmax", 40));
  const int points = int(opt.get("points", 11));
  auto seg = make_segment<S>();
  Evaluator<S> ev(seg);
  double worst = 0;
  for (int n = 1; n <= nmax; n += (n < 8 ? 1 : 3)) {
    for (int j = 0; j < points; ++j) {
      const S x = std::cos(pi_v<S> * (j + S(0.5)) / points);
      VecX<S> xv(1);
      xv << x;
      const double got = double(ev.eval(n, xv).lambda);
      const double ref = double(christoffel_1d<S>(n, x));
      const double rel = std::abs(got - ref) / ref;
      worst = std::max(worst, rel);
      rep.rows.push_back({double(n), double(x), got, ref, rel});
      rep.row_labels.push_back("segment[-1,1] " + detail::point_label(xv));
    }
  }
  rep.summary["max_rel_err"] = worst;
  return rep;
}

template <typename S>
ExperimentReport experiment_disc_center(const ExperimentOptions& opt) {
  ExperimentReport rep;
  rep.name = "disc-center";
  rep.columns = {"n", "N", "lambda", "scaled", "rel_dev"};
  auto disc = make_disc<S>();
  Evaluator<S> ev(disc);
  VecX<S> origin = VecX<S>::Zero(2);
  const double target = 2 * pi_v<double>;
  std::vector<double> devs;
  const int nmax = int(opt.get("nmax", 32));
  for (int n = 4; n <= nmax; n += 4) {
    const double lam = double(ev.eval(n, origin).lambda);
    const double scaled = lam * double(basis_size(2, n));
    const double dev = std::abs(scaled - target) / target;
    devs.push_back(dev);
    rep.rows.push_back({double(n), double(basis_size(2, n)), lam, scaled, dev});
    rep.row_labels.push_back("disc (0,0)");
  }
  bool monotone = true;
  for (std::size_t i = 1; i < devs.size(); ++i)
    if (devs[i] > devs[i - 1] * (1 + 1e-9)) monotone = false;
  rep.summary["monotone_decreasing"] = monotone ? 1.0 : 0.0;
  rep.summary["final_rel_dev"] = devs.back();
  rep.plot_x = "n";
  rep.plot_y = "rel_dev";
  rep.log_log = true;
  return rep;
}

template <typename S>
ExperimentReport experiment_disc_edge(const ExperimentOptions& opt) {
  ExperimentReport rep;
  rep.name = "disc-edge";
  rep.columns = {"n", "delta", "lambda", "ratio"};
  auto disc = make_disc<S>();
  Evaluator<S> ev(disc);
  (void)opt;
  for (int n : {8, 12, 16, 20, 24}) {
    for (double delta : {0.05, 0.1, 0.2, 0.4}) {
      VecX<S> x(2);
      x << S(1 - delta), S(0);
      const double lam = double(ev.eval(n, x).lambda);
      const double ratio = lam * n * n / std::sqrt(delta);
      rep.rows.push_back({double(n), delta, lam, ratio});
      rep.row_labels.push_back("disc " + detail::point_label(x));
    }
  }
  detail::spread_summary(rep, "ratio");
  rep.plot_x = "delta";
  rep.plot_y = "ratio";
  rep.slice_by = "n";
  rep.log_log = true;
  return rep;
}

template <typename S>
ExperimentReport experiment_lp_exponent(const ExperimentOptions& opt) {
  ExperimentReport rep;
  rep.name = "lp-exponent";
  rep.columns = {"alpha", "n", "delta", "lambda", "log_delta", "log_lambda"};
  const int n = int(opt.get("n", 20));
  std::vector<double> alphas{1.2, 1.5, 2.0};
  if (opt.params.count("alpha")) alphas = {opt.get("alpha", 1.5)};
  const auto deltas = logspace(opt.get("delta_min", 0.02), opt.get("delta_max", 0.3), int(opt.get("points", 8)));
  for (double alpha : alphas) {
    auto lp = make_lpball<S>(S(alpha));
    Evaluator<S> ev(lp);
    std::vector<double> lx, ly;
    for (double delta : deltas) {
      VecX<S> x(2);
      x << S(1 - delta), S(0);
      const double lam = double(ev.eval(n, x).lambda);
      lx.push_back(std::log(delta));
      ly.push_back(std::log(lam));
      rep.rows.push_back({alpha, double(n), delta, lam, std::log(delta), std::log(lam)});
      rep.row_labels.push_back("lpball(a=" + std::to_string(alpha) + ") " + detail::point_label(x));
    }
    const OlsFit fit = ols(lx, ly);
    std::ostringstream key;
    key << "slope_alpha_" << std::setprecision(3) << alpha;
    rep.summary[key.str()] = fit.slope;
    rep.summary[key.str() + "_stderr"] = fit.stderr_slope;
    rep.summary[key.str() + "_target"] = 1.0 / alpha;
  }
  rep.plot_x = "delta";
  rep.plot_y = "lambda";
  rep.slice_by = "alpha";
  rep.log_log = true;
  return rep;
}

template <typename S>
ExperimentReport experiment_lp_diagonal(const ExperimentOptions& opt) {
  ExperimentReport rep;
  rep.name = "lp-diagonal";
  rep.columns = {"n", "delta", "lambda", "ratio"};
  const double alpha = opt.get("alpha", 1.5);
  auto lp = make_lpball<S>(S(alpha));
  Evaluator<S> ev(lp);
  const S c = std::pow(S(2), S(-1) / S(alpha));
  for (int n : {8, 12, 16, 20, 24}) {
    for (double delta : {0.05, 0.1, 0.2, 0.4}) {
      VecX<S> x(2);
      x << S(1 - delta) * c, S(1 - delta) * c;
      const double lam = double(ev.eval(n, x).lambda);
      const double ratio = lam * n * n / std::sqrt(delta);
      rep.rows.push_back({double(n), delta, lam, ratio});
      rep.row_labels.push_back("lpball(a=" + std::to_string(alpha) + ") " + detail::point_label(x));
    }
  }
  detail::spread_summary(rep, "ratio");
  rep.plot_x = "delta";
  rep.plot_y = "ratio";
  rep.slice_by = "n";
  rep.log_log = true;
  return rep;
}

template <typename S>
ExperimentReport experiment_halfball_rim(const ExperimentOptions& opt) {
  ExperimentReport rep;
  rep.name = "halfball-rim-step";
  rep.columns = {"n", "mu", "lambda", "ratio"};
  auto hb = make_halfball3<S>();
  Evaluator<S> ev(hb);
  (void)opt;
  for (int n : {6, 8, 10, 12, 14}) {
    for (double mu : {0.05, 0.1, 0.2}) {
      VecX<S> x(3);
      x << S(1 - mu), S(0), S(mu / 4);
      const double lam = double(ev.eval(n, x).lambda);
      const double ratio = lam * n * n * n / mu;
      rep.rows.push_back({double(n), mu, lam, ratio});
      rep.row_labels.push_back("halfball3 " + detail::point_label(x));
    }
  }
  detail::spread_summary(rep, "ratio");
  rep.plot_x = "mu";
  rep.plot_y = "ratio";
  rep.slice_by = "n";
  rep.log_log = true;
  return rep;
}

template <typename S>
ExperimentReport experiment_boundary_step(const ExperimentOptions& opt) {
  ExperimentReport rep;
  rep.name = "boundary-step";
  rep.columns = {"body_id", "n", "mu", "ratio"};
  (void)opt;
  const double cd = std::pow(2.0, -3.0 - 2.0 / 2);  // c(d) = 2^{-3-d/2}, d = 2
  std::vector<ConvexBody<S>> bodies;
  bodies.push_back(make_disc<S>());
  bodies.push_back(make_square<S>());
  int body_id = 0;
  for (const auto& body : bodies) {
    Evaluator<S> ev(body);
    std::vector<VecX<S>> xs;
    {
      VecX<S> a(2); a << S(0.5), S(0); xs.push_back(a);
      VecX<S> b(2); b << S(0.9), S(0); xs.push_back(b);
      VecX<S> c(2); c << S(0.65), S(0.65); xs.push_back(c);
      VecX<S> d(2); d << S(0.99), S(0); xs.push_back(d);
    }
    for (int n : {8, 16, 24}) {
      const double mu = 1 - cd / (double(n) * n);
      for (const auto& x : xs) {
        if (!contains(body, x)) continue;
        const double num = double(ev.eval(n, VecX<S>(S(mu) * x)).lambda);
        const double den = double(ev.eval(n, x).lambda);
        rep.rows.push_back({double(body_id), double(n), mu, num / den});
        rep.row_labels.push_back(body.desc + " " + detail::point_label(x));
      }
    }
    ++body_id;
  }
  detail::spread_summary(rep, "ratio");
  return rep;
}

template <typename S>
struct Sharp2dGrid {
  double delta, l1, l2;
  int n;
};

inline std::vector<Sharp2dGrid<double>> sharpness_2d_grid() {
  std::vector<Sharp2dGrid<double>> grid;
  const std::vector<std::pair<double, double>> chords{{0.07, 0.07}, {0.065, 0.09}, {0.095, 0.095}};
  for (int n : {10, 16, 22}) {
    for (double delta : {0.004, 0.006}) {
      if (delta * n * n < 0.35) continue;
      for (auto [l1, l2] : chords) {
        if (!(10 * delta < l1 && 10 * delta < l2)) continue;
        grid.push_back({delta, l1, l2, n});
      }
    }
  }
  return grid;
}

template <typename S>
ExperimentReport experiment_sharpness_2d(const ExperimentOptions& opt) {
  ExperimentReport rep;
  rep.name = "sharpness-2d";
  rep.columns = {"delta", "l1", "l2", "n", "lambda", "rhs", "ratio", "roundtrip_err"};
  auto grid = sharpness_2d_grid();
  // one builder + evaluator per distinct body, shared across the degree grid
  std::map<std::string, std::shared_ptr<Evaluator<S>>> evals;
  for (const auto& g : grid) {
    std::ostringstream key;
    key << g.delta << ":" << g.l1 << ":" << g.l2;
    if (!evals.count(key.str())) {
      auto sb = sharpness_body_2d<S>(S(g.delta), S(g.l1), S(g.l2));
      evals.emplace(key.str(), std::make_shared<Evaluator<S>>(sb.body));
    }
  }
  rep.rows.resize(grid.size());
  rep.row_labels.resize(grid.size());
  parallel_for(grid.size(), opt.workers, [&](std::size_t i) {
    const auto& g = grid[i];
    std::ostringstream key;
    key << g.delta << ":" << g.l1 << ":" << g.l2;
    auto& ev = *evals.at(key.str());
    VecX<S> x(2);
    x << S(2 - g.delta), S(0);
    VecX<S> e1(2);
    e1 << S(1), S(0);
    auto meas = measure(ev.body(), x, std::make_optional(e1));
    const double rt = std::max({std::abs(double(meas.delta) - g.delta),
                                std::abs(double(meas.l1) - g.l1),
                                std::abs(double(meas.l2) - g.l2)});
    const double lam = double(ev.eval(g.n, x).lambda);
    const double rhs = double(bound_rhs(meas, g.n, 2, S(0.3)));
    rep.rows[i] = {g.delta, g.l1, g.l2, double(g.n), lam, rhs, lam / rhs, rt};
    rep.row_labels[i] = ev.body().desc + " " + detail::point_label(x);
  });
  detail::spread_summary(rep, "ratio");
  double worst_rt = 0;
  for (const auto& row : rep.rows) worst_rt = std::max(worst_rt, row[7]);
  rep.summary["max_roundtrip_err"] = worst_rt;
  return rep;
}

template <typename S>
ExperimentReport experiment_sharpness_3d(const ExperimentOptions& opt) {
  ExperimentReport rep;
  rep.name = "sharpness-3d";
  rep.columns = {"delta", "v", "n", "mu", "lambda", "rhs", "ratio"};
  (void)opt;
  struct Pair { double delta, mu_target; };
  std::vector<Pair> pairs{{0.02, 0.45}, {0.02, 0.9}, {0.02, 2.0},
                          {0.05, 0.45}, {0.05, 0.9}, {0.05, 2.0}};
  for (const auto& pr : pairs) {
    const double chord = std::sqrt(pr.delta * (4 - pr.delta));
    const double v = pi_v<double> * std::pow(pr.mu_target * chord, 2.0);
    auto sb = sharpness_body_nd<S>(S(pr.delta), S(v), 3);
    Evaluator<S> ev(sb.body);
    for (int n : {8, 12}) {
      const double lam = double(ev.eval(n, sb.x).lambda);
      const double rhs = std::min(std::sqrt(pr.delta), v / std::sqrt(pr.delta)) / (double(n) * n * n);
      rep.rows.push_back({pr.delta, v, double(n), pr.mu_target, lam, rhs, lam / rhs});
      rep.row_labels.push_back(sb.body.desc + " " + detail::point_label(sb.x));
    }
  }
  detail::spread_summary(rep, "ratio");
  return rep;
}

template <typename S>
ExperimentReport experiment_certify(const ExperimentOptions& opt) {
  ExperimentReport rep;
  rep.name = "certify-vs-truth";
  rep.columns = {"dim", "n", "lambda", "cert", "prod_bound", "cert_over_lambda",
                 "bound_over_cert", "ratio2d"};
  struct Case {
    ConvexBody<S> body;
    VecX<S> x;
    int n;
  };
  std::vector<Case> cases;
  auto add2 = [&](ConvexBody<S> b, double x0, double x1, int n) {
    VecX<S> x(2);
    x << S(x0), S(x1);
    cases.push_back({std::move(b), x, n});
  };
  auto add3 = [&](ConvexBody<S> b, double x0, double x1, double x2, int n) {
    VecX<S> x(3);
    x << S(x0), S(x1), S(x2);
    cases.push_back({std::move(b), x, n});
  };
  for (int n : {12, 20}) {
    add2(make_disc<S>(), 0.5, 0.0, n);
    add2(make_disc<S>(), 0.9, 0.0, n);
    add2(make_disc<S>(), 0.0, 0.7, n);
    add2(make_square<S>(), 0.9, 0.2, n);
    add2(make_square<S>(), 0.5, 0.5, n);
    add2(make_lpball<S>(S(1.5)), 0.8, 0.0, n);
    add2(make_lpball<S>(S(1.5)), 0.4, 0.4, n);
  }
  add2(make_disc<S>(), 0.95, 0.0, 16);
  add2(make_square<S>(), -0.4, 0.85, 16);
  add2(make_lpball<S>(S(1.2)), 0.7, 0.0, 12);
  add2(make_lpball<S>(S(1.8)), 0.6, 0.3, 14);
  add3(make_halfball3<S>(), 1 - 0.15, 0.0, 0.15 / 4, 12);
  for (int n : {10, 16, 22}) {
    auto sb = sharpness_body_2d<S>(S(0.006), S(0.07), S(0.09));
    add2(std::move(sb.body), 2 - 0.006, 0.0, n);
  }
  for (int n : {10, 14}) {
    for (double mu : {0.1, 0.2}) add3(make_halfball3<S>(), 1 - mu, 0.0, mu / 4, n);
  }
  for (int n : {8, 12}) {
    auto sb = sharpness_body_nd<S>(S(0.05), S(0.5), 3);
    add3(std::move(sb.body), 2 - 0.05, 0.0, 0.0, n);
    auto sc = sharpness_body_nd<S>(S(0.04), S(0.05), 3);
    add3(std::move(sc.body), 2 - 0.04, 0.0, 0.0, n);
  }
  rep.rows.resize(cases.size());
  rep.row_labels.resize(cases.size());
  parallel_for(cases.size(), opt.workers, [&](std::size_t i) {
    auto& c = cases[i];
    Evaluator<S> ev(c.body);
    const double lam = double(ev.eval(c.n, c.x).lambda);
    auto cert = certify(c.body, c.x, c.n);
    double ratio2d = 0;
    if (c.body.dim == 2) {
      auto meas = measure(c.body, c.x);
      const double key = std::min(double(meas.l1 * meas.l2), double(meas.delta));
      ratio2d = double(cert.l2sq.value) * c.n * c.n / std::sqrt(key);
    }
    rep.rows[i] = {double(c.body.dim), double(c.n), lam, double(cert.l2sq.value),
                   double(cert.product_bound), double(cert.l2sq.value) / lam,
                   double(cert.product_bound) / double(cert.l2sq.value), ratio2d};
    rep.row_labels[i] = c.body.desc + " " + detail::point_label(c.x);
  });
  double worst_gap1 = std::numeric_limits<double>::infinity(), worst_gap2 = worst_gap1;
  double r2lo = worst_gap1, r2hi = 0;
  for (const auto& row : rep.rows) {
    worst_gap1 = std::min(worst_gap1, row[5]);
    worst_gap2 = std::min(worst_gap2, row[6]);
    if (row[0] == 2.0) {
      r2lo = std::min(r2lo, row[7]);
      r2hi = std::max(r2hi, row[7]);
    }
  }
  rep.summary["min_cert_over_lambda"] = worst_gap1;
  rep.summary["min_bound_over_cert"] = worst_gap2;
  rep.summary["ratio2d_spread"] = r2hi / r2lo;
  return rep;
}

template <typename S>
ExperimentReport experiment_conjecture_lp(const ExperimentOptions& opt) {
  ExperimentReport rep;
  rep.name = "conjecture-lp";
  rep.columns = {"alpha", "n", "r_frac", "angle", "lambda", "l1l2", "ratio"};
  const int n = int(opt.get("n", 16));
  for (double alpha : {1.2, 1.5, 1.8}) {
    auto lp = make_lpball<S>(S(alpha));
    Evaluator<S> ev(lp);
    for (double rf : {0.3, 0.6, 0.85, 0.95}) {
      for (double ang : {0.17, 0.44, 0.70}) {
        VecX<S> bdry(2);
        // boundary point of the gauge at this angle
        const S r = std::pow(std::pow(std::abs(std::cos(ang)), alpha) +
                                 std::pow(std::abs(std::sin(ang)), alpha),
                             S(-1) / S(alpha));
        bdry << r * S(std::cos(ang)), r * S(std::sin(ang));
        VecX<S> x = VecX<S>(S(rf) * bdry);
        auto meas = measure(lp, x);
        const double lam = double(ev.eval(n, x).lambda);
        const double l1l2 = double(meas.l1 * meas.l2);
        rep.rows.push_back({alpha, double(n), rf, ang, lam, l1l2, lam * n * n / std::sqrt(l1l2)});
        rep.row_labels.push_back(lp.desc + " " + detail::point_label(x));
      }
    }
  }
  detail::spread_summary(rep, "ratio");
  return rep;
}

template <typename S>
ExperimentReport run_experiment(const std::string& name, const ExperimentOptions& opt = {}) {
  static const std::map<std::string, ExperimentFn<S>> registry{
      {"interval-oracle", &experiment_interval_oracle<S>},
      {"disc-center", &experiment_disc_center<S>},
      {"disc-edge", &experiment_disc_edge<S>},
      {"lp-exponent", &experiment_lp_exponent<S>},
      {"lp-diagonal", &experiment_lp_diagonal<S>},
      {"halfball-rim-step", &experiment_halfball_rim<S>},
      {"boundary-step", &experiment_boundary_step<S>},
      {"sharpness-2d", &experiment_sharpness_2d<S>},
      {"sharpness-3d", &experiment_sharpness_3d<S>},
      {"certify-vs-truth", &experiment_certify<S>},
      {"conjecture-lp", &experiment_conjecture_lp<S>},
  };
  auto it = registry.find(name);
  if (it == registry.end()) raise(errc::unknown_experiment, name);
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep = it->second(opt);
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& [k, v] : opt.params) rep.params[k] = v;
  rep.params["seed"] = std::to_string(opt.seed);
  return rep;
}

inline std::vector<std::string> experiment_names() {
  return {"interval-oracle", "disc-center", "disc-edge", "lp-exponent", "lp-diagonal",
          "halfball-rim-step", "boundary-step", "sharpness-2d", "sharpness-3d",
          "certify-vs-truth", "conjecture-lp"};
}

// ---- body presets ------------------------------------------------------------------

// disc | square | ball3 | lpball:<alpha> | halfball3 | sharp2d:<d>,<l1>,<l2> | sharpnd:<d>,<v>,<dim>
template <typename S>
ConvexBody<S> body_preset(const std::string& name) {
  auto split_args = [](const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
  };
  if (name == "disc") return make_disc<S>();
  if (name == "square") return make_square<S>();
  if (name == "ball3") return make_ball<S>(VecX<S>::Zero(3), S(1));
  if (name == "halfball3") return make_halfball3<S>();
  if (name.rfind("lpball:", 0) == 0)
    return make_lpball<S>(S(std::stod(name.substr(7))));
  if (name.rfind("sharp2d:", 0) == 0) {
    auto a = split_args(name.substr(8));
    if (a.size() != 3) raise(errc::parameter_out_of_range, "sharp2d:<delta>,<l1>,<l2>");
    return sharpness_body_2d<S>(S(a[0]), S(a[1]), S(a[2])).body;
  }
  if (name.rfind("sharpnd:", 0) == 0) {
    auto a = split_args(name.substr(8));
    if (a.size() != 3) raise(errc::parameter_out_of_range, "sharpnd:<delta>,<v>,<d>");
    return sharpness_body_nd<S>(S(a[0]), S(a[1]), int(a[2])).body;
  }
  raise(errc::parameter_out_of_range, "unknown body preset: " + name);
}

// ---- emit -----------------------------------------------------------------------

inline nlohmann::json report_to_json(const ExperimentReport& rep) {
  nlohmann::json j;
  j["name"] = rep.name;
  j["params"] = rep.params;
  j["columns"] = rep.columns;
  j["rows"] = rep.rows;
  j["row_labels"] = rep.row_labels;
  j["summary"] = rep.summary;
  j["runtime_seconds"] = rep.runtime_seconds;
  j["plot"] = {{"x", rep.plot_x}, {"y", rep.plot_y}, {"slice_by", rep.slice_by}, {"log_log", rep.log_log}};
  return j;
}

inline ExperimentReport report_from_json(const nlohmann::json& j) {
  ExperimentReport rep;
  rep.name = j.at("name").get<std::string>();
  rep.params = j.at("params").get<std::map<std::string, std::string>>();
  rep.columns = j.at("columns").get<std::vector<std::string>>();
  rep.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  rep.row_labels = j.at("row_labels").get<std::vector<std::string>>();
  rep.summary = j.at("summary").get<std::map<std::string, double>>();
  rep.runtime_seconds = j.at("runtime_seconds").get<double>();
  rep.plot_x = j.at("plot").at("x").get<std::string>();
  rep.plot_y = j.at("plot").at("y").get<std::string>();
  rep.slice_by = j.at("plot").at("slice_by").get<std::string>();
  rep.log_log = j.at("plot").at("log_log").get<bool>();
  return rep;
}

inline std::string report_to_csv(const ExperimentReport& rep) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "label";
  for (const auto& c : rep.columns) os << "," << c;
  os << "\n";
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    os << '"' << rep.row_labels[i] << '"';
    for (double v : rep.rows[i]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

// Log-log scatter with an OLS fit line when the experiment is a power law.
inline std::string report_to_svg(const ExperimentReport& rep, double slice_value,
                                 bool has_slice) {
  const int W = 640, H = 480, ML = 70, MR = 20, MT = 30, MB = 50;
  std::vector<std::pair<double, double>> pts;
  const int cx = rep.plot_x.empty() ? 0 : rep.column(rep.plot_x);
  const int cy = rep.plot_y.empty() ? 1 : rep.column(rep.plot_y);
  const int cs = has_slice ? rep.column(rep.slice_by) : -1;
  for (const auto& row : rep.rows) {
    if (has_slice && std::abs(row[cs] - slice_value) > 1e-12) continue;
    double x = row[cx], y = row[cy];
    if (rep.log_log) {
      if (x <= 0 || y <= 0) continue;
      x = std::log10(x);
      y = std::log10(y);
    }
    pts.push_back({x, y});
  }
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (auto [x, y] : pts) {
    xlo = std::min(xlo, x); xhi = std::max(xhi, x);
    ylo = std::min(ylo, y); yhi = std::max(yhi, y);
  }
  if (pts.empty()) { xlo = ylo = 0; xhi = yhi = 1; }
  if (xhi - xlo < 1e-12) { xhi += 0.5; xlo -= 0.5; }
  if (yhi - ylo < 1e-12) { yhi += 0.5; ylo -= 0.5; }
  auto px = [&](double x) { return ML + (x - xlo) / (xhi - xlo) * (W - ML - MR); };
  auto py = [&](double y) { return H - MB - (y - ylo) / (yhi - ylo) * (H - MT - MB); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\"" << H - MB
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
     << "\" stroke=\"black\"/>\n";
  std::string title = rep.name;
  if (has_slice) title += " [" + rep.slice_by + "=" + std::to_string(slice_value) + "]";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
     << "</text>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
     << (rep.log_log ? "log10 " : "") << rep.plot_x << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 " << H / 2
     << ")\" text-anchor=\"middle\">" << (rep.log_log ? "log10 " : "") << rep.plot_y << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xlo + (xhi - xlo) * t / 4, yv = ylo + (yhi - ylo) * t / 4;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - MB + 16 << "\" font-size=\"10\" text-anchor=\"middle\">"
       << std::setprecision(3) << xv << "</text>\n";
    os << "<text x=\"" << ML - 6 << "\" y=\"" << py(yv) + 3 << "\" font-size=\"10\" text-anchor=\"end\">"
       << std::setprecision(3) << yv << "</text>\n";
  }
  if (pts.size() >= 2) {
    std::vector<double> xs, ys;
    for (auto [x, y] : pts) { xs.push_back(x); ys.push_back(y); }
    const OlsFit fit = ols(xs, ys);
    os << "<line x1=\"" << px(xlo) << "\" y1=\"" << py(fit.intercept + fit.slope * xlo) << "\" x2=\""
       << px(xhi) << "\" y2=\"" << py(fit.intercept + fit.slope * xhi)
       << "\" stroke=\"#cc3333\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << W - MR - 4 << "\" y=\"" << MT + 14
       << "\" font-size=\"11\" text-anchor=\"end\">slope " << std::setprecision(4) << fit.slope
       << "</text>\n";
  }
  for (auto [x, y] : pts)
    os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3.5\" fill=\"#2255aa\"/>\n";
  os << "</svg>\n";
  return os.str();
}

// Writes one file per format; svg gets one plot per slice value.
inline std::vector<std::string> emit(const ExperimentReport& rep, const std::string& format,
                                     const std::string& out_dir) {
  std::vector<std::string> written;
  auto write_file = [&](const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) raise(errc::io_error, "cannot write " + path);
    os << content;
    written.push_back(path);
  };
  if (format == "csv") {
    write_file(out_dir + "/" + rep.name + ".csv", report_to_csv(rep));
  } else if (format == "json") {
    write_file(out_dir + "/" + rep.name + ".json", report_to_json(rep).dump(2) + "\n");
  } else if (format == "svg") {
    if (rep.plot_x.empty() || rep.plot_y.empty())
      raise(errc::parameter_out_of_range, "experiment has no plot hint for svg");
    if (rep.slice_by.empty()) {
      write_file(out_dir + "/" + rep.name + ".svg", report_to_svg(rep, 0, false));
    } else {
      std::vector<double> values;
      const int cs = rep.column(rep.slice_by);
      for (const auto& row : rep.rows)
        if (std::find_if(values.begin(), values.end(),
                         [&](double v) { return std::abs(v - row[cs]) < 1e-12; }) == values.end())
          values.push_back(row[cs]);
      for (double v : values) {
        std::ostringstream name;
        name << out_dir << "/" << rep.name << "_" << rep.slice_by << v << ".svg";
        write_file(name.str(), report_to_svg(rep, v, true));
      }
    }
  } else {
    raise(errc::parameter_out_of_range, "unknown format " + format);
  }
  return written;
}

}  // namespace christoffel
