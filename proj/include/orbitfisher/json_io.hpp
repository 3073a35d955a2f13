#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "orbitfisher/fibration.hpp"
#include "orbitfisher/linear_fisher.hpp"
#include "orbitfisher/orbit.hpp"
#include "orbitfisher/report.hpp"

// JSON wire formats. Matrices are arrays of rows; complex entries are [re, im]
// pairs and parsers accept plain numbers as real entries. All indices in payloads
// are 1-based. Schema violations raise ValidationError.
namespace orbitfisher::jsonio {

using Json = nlohmann::ordered_json;

Json lambda_state_to_json(const LambdaState& state);
LambdaState lambda_state_from_json(const Json& j);

Json chart_to_json(const ChartVector& chart);
ChartVector chart_from_json(const Json& j);

Json real_matrix_to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const Json& j);

Json complex_matrix_to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const Json& j);

Json report_to_json(const CheckReport& report);
Json reports_to_json(const std::vector<CheckReport>& checks);  // {"checks": [...], "pass": ...}

// n, spectrum, purity, degeneracy partition, orbit dimension, active roots.
Json orbit_info(const LambdaState& state);

// Chart tensors at a point: basis labels, F/G/W/J matrices, structure roots delta,
// and the anticommutator eigenvalue probes per active root.
Json fisher_payload(const OrbitPoint& point);

Json fibration_info(const fibration::OrbitFibration& fib);

Json membership_to_json(const linfisher::MembershipResult& m);
Json normal_form_to_json(const linfisher::NormalFormResult& nf);

std::string dump(const Json& j);  // 2-space indent, trailing newline

}  // namespace orbitfisher::jsonio
