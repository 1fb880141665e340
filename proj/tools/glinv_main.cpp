// glinv command line: certify / solve / invert-scan / validate-pj /
// volterra-demo over JSON problem configs.  Reports are written as JSON and
// CSV into the output directory; exit codes are the machine contract:
//   0 success            4 solve ended at a critical non-solution
//   1 I/O or bad config  5 solve escaped (Palais-Smale diagnostics)
//   2 certify inconclusive  6 iteration cap
//   3 certify fails      7 inverse-Lipschitz bound violation
//                        8 pseudo-Jacobian validation failure

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "glinv/json_io.hpp"
#include "glinv/rng.hpp"

using namespace glinv;
namespace fs = std::filesystem;

namespace {

struct Loaded {
  std::string kind;
  std::optional<VolterraProblem> vol;
  std::optional<PointMap> map;
  std::optional<RadialProfile> profile;  // closed-form or sampled m, when declared
  Eigen::VectorXd y;
  Eigen::VectorXd x0;
  json raw;
};

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

LinearMap l2map(const Eigen::MatrixXd& m) { return LinearMap(m, NormTag::l2(), NormTag::l2()); }

Eigen::VectorXd parse_target(const json& j, int dim) {
  if (j.contains("constant")) return Eigen::VectorXd::Constant(dim, j.at("constant").get<double>());
  if (j.contains("samples")) {
    const Eigen::VectorXd v = vector_from_json(j.at("samples"));
    if (static_cast<int>(v.size()) != dim) throw MalformedInput("target sample count mismatch");
    return v;
  }
  throw MalformedInput("target: expected {\"constant\": v} or {\"samples\": [...]}");
}

VolterraProblem parse_volterra(const json& j) {
  const int n = j.at("N").get<int>();
  const double p = j.value("p", 2.0);
  const json& phi = j.at("phi");
  const std::string family = phi.at("family").get<std::string>();
  const json params = phi.value("params", json::object());
  const Eigen::VectorXd y = parse_target(j.at("y"), n);
  if (family == "sin") return make_sin_problem(n, params.value("theta0", 0.9), y, p);
  if (family == "clip") return make_clip_problem(n, params.value("theta0", 0.9), y, p);
  if (family == "log_shift") return make_log_shift_problem(n, params.value("c", 0.5), y, p);
  throw MalformedInput("unknown volterra kernel family '" + family + "'");
}

PointMap scalar_map(std::function<double(double)> f, std::function<double(double)> df) {
  PointMap map;
  map.domain_dim = map.codomain_dim = 1;
  map.f = [f](const Eigen::VectorXd& x) { return vec1(f(x[0])); };
  map.jf = [df](const Eigen::VectorXd& x) {
    return PseudoJacobian::singleton(
        LinearMap(Eigen::MatrixXd::Constant(1, 1, df(x[0])), NormTag::l2(), NormTag::l2()));
  };
  map.chain_rule = ChainRule::Strong;
  return map;
}

Loaded load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OutOfRange("cannot open config '" + path + "'");
  json j;
  in >> j;

  Loaded out;
  out.raw = j;
  out.kind = j.at("kind").get<std::string>();

  if (out.kind == "volterra") {
    out.vol = parse_volterra(j);
    out.map = build_map(*out.vol);
    out.y = out.vol->y;
    out.profile = out.vol->theta.m_profile(RadialProfile::default_grid(j.value("r_max", 64.0)));
  } else if (out.kind == "linear") {
    const Eigen::MatrixXd a = matrix_from_json(j.at("matrix"));
    PointMap map;
    map.domain_dim = static_cast<int>(a.cols());
    map.codomain_dim = static_cast<int>(a.rows());
    map.f = [a](const Eigen::VectorXd& x) { return a * x; };
    const PseudoJacobian pj = PseudoJacobian::singleton(l2map(a));
    map.jf = [pj](const Eigen::VectorXd&) { return pj; };
    map.chain_rule = ChainRule::Strong;
    out.map = map;
    out.y = parse_target(j.at("y"), map.codomain_dim);
  } else if (out.kind == "abs1d") {
    const std::string jf = j.value("jf", "ball");
    PointMap map;
    map.domain_dim = map.codomain_dim = 1;
    map.f = [](const Eigen::VectorXd& x) { return vec1(std::abs(x[0])); };
    if (jf == "ball") {
      map.jf = [](const Eigen::VectorXd&) {
        return PseudoJacobian::ball(l2map(Eigen::MatrixXd::Zero(1, 1)), 1.0);
      };
      map.chain_rule = ChainRule::Strong;
    } else if (jf == "singleton_zero") {
      // deliberately wrong pair: |.| is not differentiable at 0
      map.jf = [](const Eigen::VectorXd&) {
        return PseudoJacobian::singleton(l2map(Eigen::MatrixXd::Zero(1, 1)));
      };
    } else {
      throw MalformedInput("abs1d: jf must be 'ball' or 'singleton_zero'");
    }
    out.map = map;
    out.y = j.contains("y") ? parse_target(j.at("y"), 1) : vec1(0.5);
  } else if (out.kind == "sin_shift") {
    const int dim = j.value("dim", 4);
    const double amp = j.value("amplitude", 0.5);
    PointMap map;
    map.domain_dim = map.codomain_dim = dim;
    map.f = [amp](const Eigen::VectorXd& x) {
      Eigen::VectorXd o = x;
      for (Eigen::Index i = 0; i < x.size(); ++i) o[i] += amp * std::sin(x[i]);
      return o;
    };
    const LinearMap id = l2map(Eigen::MatrixXd::Identity(dim, dim));
    map.jf = [id, amp](const Eigen::VectorXd&) { return PseudoJacobian::ball(id, amp); };
    map.chain_rule = ChainRule::Strong;
    out.map = map;
    out.y = parse_target(j.at("y"), dim);
  } else if (out.kind == "arctan1d") {
    out.map = scalar_map([](double x) { return std::atan(x); },
                         [](double x) { return 1.0 / (1.0 + x * x); });
    out.y = parse_target(j.at("y"), 1);
  } else if (out.kind == "cubic1d") {
    out.map = scalar_map([](double x) { return x * x * x - x; },
                         [](double x) { return 3.0 * x * x - 1.0; });
    out.y = j.contains("y") ? parse_target(j.at("y"), 1) : vec1(0.0);
  } else if (out.kind == "nonsmooth2d") {
    const double amp = j.value("amplitude", 0.4);
    PointMap map;
    map.domain_dim = map.codomain_dim = 2;
    map.f = [amp](const Eigen::VectorXd& x) {
      Eigen::VectorXd o(2);
      o << x[0] + amp * std::abs(x[0]), x[1] + amp * std::abs(x[1]);
      return o;
    };
    const LinearMap id = l2map(Eigen::MatrixXd::Identity(2, 2));
    map.jf = [id, amp](const Eigen::VectorXd&) { return PseudoJacobian::ball(id, amp); };
    map.chain_rule = ChainRule::Strong;
    out.map = map;
    out.y = j.contains("y") ? parse_target(j.at("y"), 2) : Eigen::VectorXd::Zero(2);
  } else if (out.kind == "profile") {
    const json& m = j.at("m");
    if (m.contains("family")) {
      out.profile = RadialProfile::from_analytic(analytic_from_json(m),
                                                 RadialProfile::default_grid(j.value("r_max", 64.0)));
    } else {
      out.profile = RadialProfile::from_samples(m.at("grid").get<std::vector<double>>(),
                                                m.at("values").get<std::vector<double>>());
    }
  } else {
    throw MalformedInput("unknown problem kind '" + out.kind + "'");
  }

  if (out.map) {
    out.x0 = j.contains("x0") ? vector_from_json(j.at("x0"))
                              : Eigen::VectorXd::Zero(out.map->domain_dim);
    if (static_cast<int>(out.x0.size()) != out.map->domain_dim)
      throw MalformedInput("x0 dimension mismatch");
  }
  return out;
}

SolveOptions parse_options(const json& j, double tol_override, std::uint64_t seed) {
  SolveOptions opts;
  const json o = j.value("options", json::object());
  opts.tol_residual = o.value("tol_residual", opts.tol_residual);
  opts.max_iters = o.value("max_iters", opts.max_iters);
  opts.armijo_c = o.value("armijo_c", opts.armijo_c);
  opts.backtrack = o.value("backtrack", opts.backtrack);
  opts.max_backtracks = o.value("max_backtracks", opts.max_backtracks);
  opts.min_step = o.value("min_step", opts.min_step);
  opts.escape_norm = o.value("escape_norm", opts.escape_norm);
  if (tol_override > 0.0) opts.tol_residual = tol_override;
  opts.seed = seed;
  return opts;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw OutOfRange("cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int exit_for_status(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved:
      return 0;
    case SolveStatus::CriticalNonsolution:
      return 4;
    case SolveStatus::PsEscape:
      return 5;
    case SolveStatus::IterationCap:
      return 6;
  }
  return 6;
}

struct CommonArgs {
  std::string config;
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  double tol = -1.0;
  int starts = 0;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "problem config JSON")->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "random seed");
  cmd->add_option("--tol", args.tol, "residual tolerance override");
  cmd->add_option("--starts", args.starts, "multistart count for uniqueness certification");
  cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

void say(const CommonArgs& args, const std::string& line) {
  if (!args.quiet) std::cout << line << "\n";
}

HadamardCertificate build_certificate(const Loaded& prob, const CommonArgs& args) {
  if (prob.profile) return make_certificate(*prob.profile);
  if (!prob.map) throw MalformedInput("nothing to certify: no map and no profile");
  const double r_max = prob.raw.value("r_max", 8.0);
  const int n_pts = prob.raw.value("n_pts_per_shell", 32);
  const RadialProfile mu =
      mu_profile(*prob.map, RadialProfile::default_grid(r_max), n_pts, args.seed);
  return make_certificate(mu);
}

int cmd_certify(const CommonArgs& args) {
  const Loaded prob = load_problem(args.config);
  const HadamardCertificate cert = build_certificate(prob, args);
  fs::create_directories(args.out_dir);
  write_json(fs::path(args.out_dir) / "certificate.json", certificate_to_json(cert));
  say(args, "certificate verdict: " + to_string(cert.verdict) + "  m0=" + std::to_string(cert.m0));
  switch (cert.verdict) {
    case Verdict::DivergentCertified:
    case Verdict::DivergentEmpirical:
      return 0;
    case Verdict::Inconclusive:
      return 2;
    case Verdict::Fails:
      return 3;
  }
  return 3;
}

int cmd_solve(const CommonArgs& args) {
  const Loaded prob = load_problem(args.config);
  if (!prob.map) throw MalformedInput("kind '" + prob.kind + "' has nothing to solve");
  const SolveOptions opts = parse_options(prob.raw, args.tol, args.seed);

  std::optional<HadamardCertificate> cert;
  if (prob.profile) {
    const HadamardCertificate c = make_certificate(*prob.profile);
    if (c.divergent()) cert = c;
  }

  const SolveReport rep =
      solve(*prob.map, prob.y, prob.x0, opts, cert ? &*cert : nullptr);
  fs::create_directories(args.out_dir);
  write_json(fs::path(args.out_dir) / "solve_report.json", solve_report_to_json(rep));
  say(args, "solve status: " + to_string(rep.status) + "  iterations=" + std::to_string(rep.iterations) +
                "  residual=" + std::to_string(rep.residual_trace.back()));
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";

  if (args.starts > 0) {
    const UniquenessReport uni = uniqueness_certificate(
        *prob.map, prob.y, rep.status == SolveStatus::Solved ? std::vector<Eigen::VectorXd>{rep.x_final}
                                                             : std::vector<Eigen::VectorXd>{},
        args.starts, args.seed + 1, opts, cert ? &*cert : nullptr);
    write_json(fs::path(args.out_dir) / "uniqueness.json", uniqueness_report_to_json(uni));
    say(args, "uniqueness: " + to_string(uni.verdict) + " with " + std::to_string(uni.clusters.size()) +
                  " cluster(s)");
  }
  return exit_for_status(rep.status);
}

int cmd_invert_scan(const CommonArgs& args) {
  const Loaded prob = load_problem(args.config);
  if (!prob.vol) throw MalformedInput("invert-scan needs a volterra problem");
  const SolveOptions opts = parse_options(prob.raw, args.tol, args.seed);
  const int n_pairs = prob.raw.value("n_pairs", 5);
  const double delta = prob.raw.value("delta", 1e-3);
  const double bound_scale = prob.raw.value("bound_scale", 1.0);

  const InverseLipschitzScan scan =
      verify_inverse_lipschitz(*prob.vol, n_pairs, delta, args.seed, opts, bound_scale);

  fs::create_directories(args.out_dir);
  std::string csv = "pair,ratio,bound\n";
  for (std::size_t i = 0; i < scan.ratios.size(); ++i)
    csv += std::to_string(i) + "," + csv_num(scan.ratios[i]) + "," + csv_num(scan.bounds[i]) + "\n";
  write_text(fs::path(args.out_dir) / "invert_scan.csv", csv);
  json j{{"pass", scan.pass}, {"ratios", scan.ratios}, {"bounds", scan.bounds},
         {"worst_excess", scan.worst_excess}, {"delta", delta}, {"bound_scale", bound_scale}};
  write_json(fs::path(args.out_dir) / "invert_scan.json", j);
  say(args, std::string("inverse-Lipschitz scan: ") + (scan.pass ? "pass" : "VIOLATION"));
  return scan.pass ? 0 : 7;
}

int cmd_validate_pj(const CommonArgs& args) {
  const Loaded prob = load_problem(args.config);
  if (!prob.map) throw MalformedInput("kind '" + prob.kind + "' has no map to validate");
  const int n_points = prob.raw.value("n_points", 5);
  const double sample_radius = prob.raw.value("sample_radius", 2.0);
  const int n_dirs = prob.raw.value("n_dirs", 64);
  const int n_duals = prob.raw.value("n_duals", 16);
  const std::vector<double> h_steps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};

  Rng rng(args.seed);
  bool all_pass = true;
  json per_point = json::array();
  for (int k = 0; k < n_points; ++k) {
    const Eigen::VectorXd x =
        (k == 0) ? Eigen::VectorXd::Zero(prob.map->domain_dim)
                 : Eigen::VectorXd(rng.in_norm_ball(prob.map->domain_norm, prob.map->domain_dim,
                                                    sample_radius));
    const ValidationReport rep = pj_validate(*prob.map, x, n_dirs, n_duals, h_steps, args.seed + k);
    all_pass = all_pass && rep.pass;
    json entry = validation_report_to_json(rep);
    entry["x"] = vector_to_json(x);
    per_point.push_back(std::move(entry));
  }
  fs::create_directories(args.out_dir);
  write_json(fs::path(args.out_dir) / "pj_report.json", json{{"pass", all_pass}, {"points", per_point}});
  say(args, std::string("pseudo-Jacobian validation: ") + (all_pass ? "pass" : "FAIL"));
  return all_pass ? 0 : 8;
}

int cmd_volterra_demo(const CommonArgs& args) {
  const Loaded prob = load_problem(args.config);
  if (!prob.vol) throw MalformedInput("volterra-demo needs a volterra problem");
  const VolterraProblem& vp = *prob.vol;
  const SolveOptions opts = parse_options(prob.raw, args.tol, args.seed);
  fs::create_directories(args.out_dir);
  json summary;

  // 1. certificate from the declared Lipschitz profile
  const HadamardCertificate cert = build_certificate(prob, args);
  write_json(fs::path(args.out_dir) / "certificate.json", certificate_to_json(cert));
  summary["verdict"] = to_string(cert.verdict);
  if (!cert.divergent()) return cert.verdict == Verdict::Inconclusive ? 2 : 3;

  // 2. descent solve against the fixed-point oracle
  const SolveReport rep = solve(*prob.map, prob.y, prob.x0, opts, &cert);
  write_json(fs::path(args.out_dir) / "solve_report.json", solve_report_to_json(rep));
  summary["solve_status"] = to_string(rep.status);
  summary["iterations"] = rep.iterations;
  if (rep.status != SolveStatus::Solved) return exit_for_status(rep.status);

  const FixedPointResult fp = fixed_point_solve(vp, 1e-12);
  const double disagreement = norm_of(rep.x_final - fp.d, vp.space_tag());
  summary["fixed_point_iterations"] = fp.iterations;
  summary["oracle_disagreement"] = disagreement;
  say(args, "descent vs fixed-point disagreement: " + std::to_string(disagreement));

  // 3. solution table {t, x, x'}
  const Eigen::VectorXd x = cumulative_x(vp, rep.x_final);
  std::string csv = "t,x,dx\n";
  csv += "0," + csv_num(x[0]) + ",0\n";
  for (int i = 1; i <= vp.N; ++i)
    csv += csv_num(vp.t(i)) + "," + csv_num(x[i]) + "," + csv_num(rep.x_final[i - 1]) + "\n";
  write_text(fs::path(args.out_dir) / "solution.csv", csv);

  // 4. multistart uniqueness
  const int starts = args.starts > 0 ? args.starts : 10;
  const UniquenessReport uni =
      uniqueness_certificate(*prob.map, prob.y, {rep.x_final}, starts, args.seed + 1, opts, &cert);
  write_json(fs::path(args.out_dir) / "uniqueness.json", uniqueness_report_to_json(uni));
  summary["uniqueness"] = to_string(uni.verdict);
  summary["clusters"] = uni.clusters.size();

  // 5. inverse-Lipschitz ratio scan
  const InverseLipschitzScan scan = verify_inverse_lipschitz(
      vp, prob.raw.value("n_pairs", 3), prob.raw.value("delta", 1e-3), args.seed + 2, opts,
      prob.raw.value("bound_scale", 1.0));
  summary["invert_scan_pass"] = scan.pass;
  write_json(fs::path(args.out_dir) / "demo_summary.json", summary);

  say(args, "demo: verdict=" + to_string(cert.verdict) + " solve=" + to_string(rep.status) +
                " uniqueness=" + to_string(uni.verdict) +
                " scan=" + std::string(scan.pass ? "pass" : "VIOLATION"));
  if (disagreement > 1e-7) return 6;
  if (uni.verdict != UniquenessReport::Verdict::UniqueEmpirical) return 4;
  if (!scan.pass) return 7;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified global inversion toolkit for nonsmooth maps"};
  app.require_subcommand(1);
  app.footer(
      "exit codes: 0 ok, 1 config/io error, 2 certify inconclusive, 3 certify fails,\n"
      "4 critical non-solution, 5 PS escape, 6 iteration cap, 7 bound violation,\n"
      "8 pseudo-Jacobian validation failure");

  CommonArgs args;
  auto* certify = app.add_subcommand("certify", "build the radial surjection certificate");
  auto* solve_cmd = app.add_subcommand("solve", "descend on the residual toward the target");
  auto* invert = app.add_subcommand("invert-scan", "check inverse-Lipschitz ratios against the bound");
  auto* validate = app.add_subcommand("validate-pj", "sample-check the pseudo-Jacobian inequality");
  auto* demo = app.add_subcommand("volterra-demo", "full pipeline on an integro-differential problem");
  for (auto* cmd : {certify, solve_cmd, invert, validate, demo}) add_common(cmd, args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify->parsed()) return cmd_certify(args);
    if (solve_cmd->parsed()) return cmd_solve(args);
    if (invert->parsed()) return cmd_invert_scan(args);
    if (validate->parsed()) return cmd_validate_pj(args);
    if (demo->parsed()) return cmd_volterra_demo(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
