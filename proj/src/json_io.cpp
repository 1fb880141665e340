#include "glinv/json_io.hpp"

#include <algorithm>

namespace glinv {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw MalformedInput("matrix: expected a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw MalformedInput("matrix: ragged rows");
    for (std::size_t k = 0; k < cols; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw MalformedInput("vector: expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

json tag_to_json(const NormTag& tag) {
  switch (tag.kind) {
    case NormTag::Kind::L1:
      return "l1";
    case NormTag::Kind::L2:
      return "l2";
    case NormTag::Kind::Linf:
      return "linf";
    case NormTag::Kind::Lp:
      return json{{"lp", tag.p}, {"scale", tag.scale}};
  }
  return "l2";
}

NormTag tag_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "l1") return NormTag::l1();
    if (s == "l2") return NormTag::l2();
    if (s == "linf") return NormTag::linf();
    throw MalformedInput("unknown norm tag '" + s + "'");
  }
  if (j.is_object() && j.contains("lp"))
    return NormTag::lp(j.at("lp").get<double>(), j.value("scale", 1.0));
  throw MalformedInput("norm tag: expected a string or {\"lp\": p, \"scale\": s}");
}

json pj_to_json(const PseudoJacobian& pj) {
  switch (pj.kind()) {
    case PseudoJacobian::Kind::Singleton:
      return json{{"singleton", matrix_to_json(pj.as_singleton().op.matrix())}};
    case PseudoJacobian::Kind::Ball:
      return json{{"ball", {{"center", matrix_to_json(pj.as_ball().center.matrix())},
                            {"radius", pj.as_ball().radius}}}};
    case PseudoJacobian::Kind::Hull: {
      json ops = json::array();
      for (const auto& op : pj.as_hull().ops) ops.push_back(matrix_to_json(op.matrix()));
      return json{{"hull", std::move(ops)}};
    }
  }
  throw MalformedInput("unknown pseudo-Jacobian variant");
}

PseudoJacobian pj_from_json(const json& j, const NormTag& domain, const NormTag& codomain) {
  if (j.contains("singleton"))
    return PseudoJacobian::singleton(LinearMap(matrix_from_json(j.at("singleton")), domain, codomain));
  if (j.contains("ball"))
    return PseudoJacobian::ball(
        LinearMap(matrix_from_json(j.at("ball").at("center")), domain, codomain),
        j.at("ball").at("radius").get<double>());
  if (j.contains("hull")) {
    std::vector<LinearMap> ops;
    for (const auto& m : j.at("hull")) ops.emplace_back(matrix_from_json(m), domain, codomain);
    return PseudoJacobian::hull(std::move(ops));
  }
  throw MalformedInput("pseudo-Jacobian: expected singleton/ball/hull");
}

namespace {

std::string family_name(AnalyticProfile::Family f) {
  switch (f) {
    case AnalyticProfile::Family::Constant:
      return "constant";
    case AnalyticProfile::Family::COver1pRho:
      return "c_over_1p_rho";
    case AnalyticProfile::Family::COver1pRhoPowS:
      return "c_over_1p_rho_pow_s";
  }
  return "?";
}

}  // namespace

json analytic_to_json(const AnalyticProfile& a) {
  json params{{"c", a.c}};
  if (a.family == AnalyticProfile::Family::COver1pRhoPowS) params["s"] = a.s;
  return json{{"family", family_name(a.family)}, {"params", std::move(params)}};
}

AnalyticProfile analytic_from_json(const json& j) {
  AnalyticProfile a;
  const std::string fam = j.at("family").get<std::string>();
  const json params = j.value("params", json::object());
  a.c = params.value("c", 1.0);
  if (fam == "constant")
    a.family = AnalyticProfile::Family::Constant;
  else if (fam == "c_over_1p_rho")
    a.family = AnalyticProfile::Family::COver1pRho;
  else if (fam == "c_over_1p_rho_pow_s") {
    a.family = AnalyticProfile::Family::COver1pRhoPowS;
    a.s = params.value("s", 1.0);
  } else
    throw MalformedInput("unknown profile family '" + fam + "'");
  return a;
}

json certificate_to_json(const HadamardCertificate& cert) {
  json j;
  j["grid"] = cert.m.grid;
  j["mu"] = cert.mu.values;
  j["m"] = cert.m.values;
  j["rho"] = cert.rho;
  j["verdict"] = to_string(cert.verdict);
  j["m0"] = cert.m0;
  j["source"] = cert.m.analytic ? analytic_to_json(*cert.m.analytic) : json("sampled");
  return j;
}

HadamardCertificate certificate_from_json(const json& j) {
  std::vector<double> grid = j.at("grid").get<std::vector<double>>();
  std::vector<double> mu_vals = j.at("mu").get<std::vector<double>>();
  std::vector<double> m_vals = j.at("m").get<std::vector<double>>();

  HadamardCertificate cert;
  if (j.at("source").is_object()) {
    const AnalyticProfile a = analytic_from_json(j.at("source"));
    cert.mu = RadialProfile::from_analytic(a, grid);
    cert.m = cert.mu;
  } else {
    cert.mu = RadialProfile::from_samples(grid, std::move(mu_vals));
    cert.m = RadialProfile::from_samples(grid, std::move(m_vals));
  }
  cert.rho = j.at("rho").get<std::vector<double>>();
  cert.m0 = j.at("m0").get<double>();
  const std::string v = j.at("verdict").get<std::string>();
  if (v == "divergent_certified")
    cert.verdict = Verdict::DivergentCertified;
  else if (v == "divergent_empirical")
    cert.verdict = Verdict::DivergentEmpirical;
  else if (v == "inconclusive")
    cert.verdict = Verdict::Inconclusive;
  else if (v == "fails")
    cert.verdict = Verdict::Fails;
  else
    throw MalformedInput("unknown verdict '" + v + "'");
  return cert;
}

namespace {

// Keep at most `cap` entries, always retaining the first and last.
json downsample(const std::vector<double>& t, std::size_t cap = 1000) {
  json a = json::array();
  if (t.size() <= cap) {
    for (double v : t) a.push_back(v);
    return a;
  }
  const std::size_t stride = (t.size() + cap - 1) / cap;
  for (std::size_t i = 0; i < t.size(); i += stride) a.push_back(t[i]);
  if (!t.empty() && (t.size() - 1) % stride != 0) a.push_back(t.back());
  return a;
}

}  // namespace

json solve_report_to_json(const SolveReport& rep) {
  json j;
  j["status"] = to_string(rep.status);
  j["x_final"] = vector_to_json(rep.x_final);
  j["iterations"] = rep.iterations;
  j["residual_trace"] = downsample(rep.residual_trace);
  j["lambda_trace"] = downsample(rep.lambda_trace);
  j["ps_product_trace"] = downsample(rep.ps_product_trace);
  j["norm_trace"] = downsample(rep.norm_trace);
  if (rep.inv_lip_bound) j["inv_lip_bound"] = *rep.inv_lip_bound;
  j["warnings"] = rep.warnings;
  return j;
}

json validation_report_to_json(const ValidationReport& rep) {
  json j;
  j["pass"] = rep.pass;
  j["worst_margin"] = rep.worst_margin;
  j["pairs_checked"] = rep.pairs_checked;
  j["tolerance"] = rep.tolerance;
  return j;
}

json uniqueness_report_to_json(const UniquenessReport& rep) {
  json j;
  j["verdict"] = to_string(rep.verdict);
  json clusters = json::array();
  for (const auto& c : rep.clusters) clusters.push_back(vector_to_json(c));
  j["clusters"] = std::move(clusters);
  json inc = json::array();
  for (const auto& [a, b] : rep.inconsistencies) inc.push_back(json::array({a, b}));
  j["inconsistencies"] = std::move(inc);
  j["probe_moduli"] = rep.probe_moduli;
  j["solved_runs"] = rep.solved_runs;
  j["search_radius"] = rep.search_radius;
  return j;
}

}  // namespace glinv
