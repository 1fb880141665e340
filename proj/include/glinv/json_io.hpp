// JSON wire formats: matrices as arrays of rows, norm tags as strings or
// {"lp": p, "scale": s}, pseudo-Jacobian variants, certificates, solve
// reports, and problem configurations.

#pragma once

#include <json.hpp>

#include <string>

#include "glinv/certificates.hpp"
#include "glinv/pseudo_jacobian.hpp"
#include "glinv/solver.hpp"
#include "glinv/volterra.hpp"

namespace glinv {

using json = nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j);

json tag_to_json(const NormTag& tag);
NormTag tag_from_json(const json& j);

// {"singleton": matrix} | {"ball": {"center": matrix, "radius": L}} |
// {"hull": [matrix, ...]}.  Tags are supplied by the caller on read.
json pj_to_json(const PseudoJacobian& pj);
PseudoJacobian pj_from_json(const json& j, const NormTag& domain, const NormTag& codomain);

// {"family": "constant"|"c_over_1p_rho"|"c_over_1p_rho_pow_s", "params": {...}}
json analytic_to_json(const AnalyticProfile& a);
AnalyticProfile analytic_from_json(const json& j);

// {grid, mu, m, rho, verdict, m0, source}
json certificate_to_json(const HadamardCertificate& cert);
HadamardCertificate certificate_from_json(const json& j);

// Traces longer than 1000 entries are down-sampled with first and last kept.
json solve_report_to_json(const SolveReport& rep);

json validation_report_to_json(const ValidationReport& rep);
json uniqueness_report_to_json(const UniquenessReport& rep);

}  // namespace glinv
