// Command-line front end: evaluate lambda_n, take geometric measurements,
// compute theorem right-hand sides, build needle certificates, and run the
// named experiments with CSV/JSON/SVG output.

#include <CLI11.hpp>

#include "christoffel/harness.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace christoffel;

namespace {

struct GlobalOpts {
  std::string precision = "double";
  std::uint64_t seed = default_seed;
  int workers = 1;
};

template <typename S>
VecX<S> parse_point(const std::string& csv) {
  std::vector<S> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(S(std::stod(item)));
  VecX<S> x(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) x[i] = vals[i];
  return x;
}

template <typename S>
ConvexBody<S> load_body(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    std::ifstream is(arg);
    nlohmann::json j;
    is >> j;
    return body_from_json<S>(j);
  }
  return body_preset<S>(arg);
}

int exit_code_for(const Error& e) {
  switch (e.code) {
    case errc::containment_failed:
    case errc::round_trip_failed:
    case errc::sigma_violated:
      return 2;
    case errc::x_on_boundary:
    case errc::parameter_out_of_range:
    case errc::unknown_experiment:
    case errc::degree_too_large:
    case errc::unsupported:
    case errc::invalid_normal:
      return 2;
    default:
      return 3;
  }
}

template <typename S>
nlohmann::json affine_to_json(const AffineMap<S>& map) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < map.A.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < map.A.cols(); ++j) row.push_back(double(map.A(i, j)));
    rows.push_back(row);
  }
  nlohmann::json off = nlohmann::json::array();
  for (int i = 0; i < map.b.size(); ++i) off.push_back(double(map.b[i]));
  return {{"matrix", rows}, {"offset", off}, {"det", double(map.det)}};
}

template <typename S>
int run_eval(const GlobalOpts& g, const std::string& body_arg, int n, const std::string& point,
             const std::string& format, const std::string& dump_moments) {
  (void)g;
  auto body = load_body<S>(body_arg);
  const VecX<S> x = parse_point<S>(point);
  Evaluator<S> ev(body);
  auto v = ev.eval(n, x);
  if (!dump_moments.empty() && body.dim == 2) {
    auto spec = body_basis_spec(body, n);
    auto L = legendre_moment_table_2d(body, spec, 2 * n);
    std::ofstream os(dump_moments);
    os << std::setprecision(17) << "k,l,value\n";
    for (int k = 0; k <= 2 * n; ++k)
      for (int l = 0; l + k <= 2 * n; ++l) os << k << "," << l << "," << double(L(k, l)) << "\n";
  }
  if (format == "csv") {
    std::cout << std::setprecision(17) << n << "," << basis_size(body.dim, n) << ","
              << double(v.lambda) << "," << double(v.cond_estimate) << "," << (v.exterior ? 1 : 0)
              << "\n";
  } else {
    nlohmann::json j{{"n", n},
                     {"basis_size", basis_size(body.dim, n)},
                     {"lambda", double(v.lambda)},
                     {"condition_estimate", double(v.cond_estimate)},
                     {"exterior", v.exterior},
                     {"condition_warning", double(v.cond_estimate) > condition_warn_threshold}};
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

template <typename S>
int run_measure(const std::string& body_arg, const std::string& point, const std::string& dir) {
  auto body = load_body<S>(body_arg);
  const VecX<S> x = parse_point<S>(point);
  std::optional<VecX<S>> u;
  if (!dir.empty()) u = VecX<S>(parse_point<S>(dir).normalized());
  auto m = measure(body, x, u);
  nlohmann::json j{{"delta", double(m.delta)},
                   {"dist_boundary", double(m.dist_boundary)},
                   {"nu", double(m.nu)},
                   {"section_volume", double(m.section_volume)}};
  nlohmann::json uj = nlohmann::json::array();
  for (int i = 0; i < m.u.size(); ++i) uj.push_back(double(m.u[i]));
  j["u"] = uj;
  if (body.dim == 2) {
    j["l1"] = double(m.l1);
    j["l2"] = double(m.l2);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

template <typename S>
int run_bound(const std::string& body_arg, const std::string& point, int n, const std::string& dir,
              double sigma) {
  auto body = load_body<S>(body_arg);
  const VecX<S> x = parse_point<S>(point);
  std::optional<VecX<S>> u;
  if (!dir.empty()) u = VecX<S>(parse_point<S>(dir).normalized());
  auto m = measure(body, x, u);
  const S rhs = bound_rhs(m, n, body.dim, S(sigma));
  nlohmann::json j{{"n", n}, {"rhs", double(rhs)}, {"delta", double(m.delta)}, {"nu", double(m.nu)}};
  if (body.dim == 2) j["min_l1l2_delta"] = double(std::min(m.l1 * m.l2, m.delta));
  std::cout << j.dump(2) << "\n";
  return 0;
}

template <typename S>
int run_certify(const std::string& body_arg, const std::string& point, int n, const std::string& dir) {
  auto body = load_body<S>(body_arg);
  const VecX<S> x = parse_point<S>(point);
  std::optional<VecX<S>> u;
  if (!dir.empty()) u = VecX<S>(parse_point<S>(dir).normalized());
  auto cert = certify(body, x, n, u);
  Evaluator<S> ev(body);
  const double lam = double(ev.eval(n, x).lambda);
  nlohmann::json needles = nlohmann::json::array();
  for (const auto& c : cert.needle_coeffs) {
    nlohmann::json cj = nlohmann::json::array();
    for (int i = 0; i < c.size(); ++i) cj.push_back(double(c[i]));
    needles.push_back(cj);
  }
  nlohmann::json y = nlohmann::json::array();
  for (int i = 0; i < cert.map.y.size(); ++i) y.push_back(double(cert.map.y[i]));
  nlohmann::json j{{"n", n},
                   {"per_axis_degree", cert.per_axis_degree},
                   {"map", affine_to_json(cert.map.T)},
                   {"cube_preimage", y},
                   {"needle_coefficients", needles},
                   {"value_at_x", double(cert.value_at_x)},
                   {"l2sq", double(cert.l2sq.value)},
                   {"l2sq_error_bound", double(cert.l2sq.abs_error_bound)},
                   {"product_bound", double(cert.product_bound)},
                   {"lambda", lam},
                   {"containment_violation", double(cert.map.containment_violation)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

template <typename S>
int run_exp(const GlobalOpts& g, const std::string& name, const std::vector<std::string>& params,
            const std::string& out, const std::string& format) {
  ExperimentOptions opt;
  opt.seed = g.seed;
  opt.workers = g.workers;
  for (const auto& pv : params) {
    const auto eq = pv.find('=');
    if (eq == std::string::npos) raise(errc::parameter_out_of_range, "--param expects k=v");
    opt.params[pv.substr(0, eq)] = pv.substr(eq + 1);
  }
  std::filesystem::create_directories(out);
  auto rep = run_experiment<S>(name, opt);
  auto files = emit(rep, format, out);
  nlohmann::json j{{"experiment", rep.name},
                   {"records", rep.rows.size()},
                   {"runtime_seconds", rep.runtime_seconds},
                   {"summary", rep.summary},
                   {"files", files}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Christoffel function laboratory on convex bodies"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--precision", g.precision, "double or extended")
      ->check(CLI::IsMember({"double", "extended"}));
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--workers", g.workers, "worker threads");

  std::string body_arg, point, dir, format = "json", out_dir = ".", dump_moments, exp_name;
  int n = 8;
  double sigma = 1.0;
  std::vector<std::string> params;

  auto* eval = app.add_subcommand("eval", "evaluate lambda_n(D, x)");
  eval->add_option("--body", body_arg, "preset or JSON file")->required();
  eval->add_option("--n", n, "total degree")->required();
  eval->add_option("--point", point, "comma-separated coordinates")->required();
  eval->add_option("--format", format, "json or csv");
  eval->add_option("--dump-moments", dump_moments, "write the Legendre moment table as CSV");

  auto* meas = app.add_subcommand("measure", "geometric measurements at (D, x)");
  meas->add_option("--body", body_arg)->required();
  meas->add_option("--point", point)->required();
  meas->add_option("--dir", dir, "direction u (default: boundary-distance minimizer)");

  auto* bound = app.add_subcommand("bound", "theorem right-hand side at (D, x, n)");
  bound->add_option("--body", body_arg)->required();
  bound->add_option("--point", point)->required();
  bound->add_option("--n", n)->required();
  bound->add_option("--dir", dir);
  bound->add_option("--sigma", sigma);

  auto* cert = app.add_subcommand("certify", "explicit needle certificate at (D, x, n)");
  cert->add_option("--body", body_arg)->required();
  cert->add_option("--point", point)->required();
  cert->add_option("--n", n)->required();
  cert->add_option("--dir", dir);

  auto* exp = app.add_subcommand("experiment", "run a named experiment");
  exp->add_option("name", exp_name, "one of the registry names")->required();
  exp->add_option("--param", params, "k=v overrides (repeatable)");
  exp->add_option("--out", out_dir, "output directory");
  exp->add_option("--format", format, "csv, json or svg");

  auto* list = app.add_subcommand("list", "list experiments");

  CLI11_PARSE(app, argc, argv);

  try {
    auto dispatch = [&](auto scalar_tag) -> int {
      using S = decltype(scalar_tag);
      if (eval->parsed()) return run_eval<S>(g, body_arg, n, point, format, dump_moments);
      if (meas->parsed()) return run_measure<S>(body_arg, point, dir);
      if (bound->parsed()) return run_bound<S>(body_arg, point, n, dir, sigma);
      if (cert->parsed()) return run_certify<S>(body_arg, point, n, dir);
      if (exp->parsed()) return run_exp<S>(g, exp_name, params, out_dir, format);
      if (list->parsed()) {
        for (const auto& nm : experiment_names()) std::cout << nm << "\n";
        return 0;
      }
      return 0;
    };
    if (g.precision == "extended") return dispatch((long double)0);
    return dispatch((double)0);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
