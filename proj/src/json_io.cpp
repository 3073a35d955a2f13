#include "orbitfisher/json_io.hpp"

#include "orbitfisher/fisher.hpp"
#include "orbitfisher/kks.hpp"

namespace orbitfisher::jsonio {

namespace {

const Json& require_key(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string("missing key \"") + key + "\"");
  }
  return j.at(key);
}

double as_number(const Json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + ": expected a number");
  return j.get<double>();
}

}  // namespace

Json lambda_state_to_json(const LambdaState& state) {
  Json j;
  j["n"] = state.n();
  j["lambda"] = std::vector<double>(state.lambda().data(), state.lambda().data() + state.n());
  return j;
}

LambdaState lambda_state_from_json(const Json& j) {
  const Json& arr = j.is_array() ? j : require_key(j, "lambda");
  if (!arr.is_array() || arr.empty()) throw ValidationError("lambda: expected a nonempty array");
  std::vector<double> lambda;
  for (const auto& v : arr) lambda.push_back(as_number(v, "lambda entry"));
  if (j.is_object() && j.contains("n")) {
    if (!j.at("n").is_number_integer() || j.at("n").get<int>() != static_cast<int>(lambda.size())) {
      throw ValidationError("n does not match the length of lambda");
    }
  }
  return lambda_state_new(lambda);
}

Json chart_to_json(const ChartVector& chart) {
  Json coords = Json::array();
  for (const auto& c : chart.coords) coords.push_back({c[0], c[1]});
  Json j;
  j["coords"] = std::move(coords);
  return j;
}

ChartVector chart_from_json(const Json& j) {
  const Json& arr = j.is_array() ? j : require_key(j, "coords");
  if (!arr.is_array()) throw ValidationError("coords: expected an array of [x, y] pairs");
  ChartVector out;
  for (const auto& pair : arr) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ValidationError("coords: expected an array of [x, y] pairs");
    }
    out.coords.push_back({as_number(pair[0], "coords"), as_number(pair[1], "coords")});
  }
  return out;
}

Json real_matrix_to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix real_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix: expected an array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ValidationError("matrix: expected nonempty rows");
  RealMatrix m(static_cast<int>(j.size()), static_cast<int>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ValidationError("matrix: rows must have equal length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<int>(r), static_cast<int>(c)) = as_number(j[r][c], "matrix entry");
    }
  }
  return m;
}

Json complex_matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix complex_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix: expected an array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ValidationError("matrix: expected nonempty rows");
  ComplexMatrix m(static_cast<int>(j.size()), static_cast<int>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ValidationError("matrix: rows must have equal length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = j[r][c];
      Complex value;
      if (e.is_number()) {
        value = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        value = Complex(as_number(e[0], "matrix entry"), as_number(e[1], "matrix entry"));
      } else {
        throw ValidationError("matrix entry: expected a number or [re, im]");
      }
      m(static_cast<int>(r), static_cast<int>(c)) = value;
    }
  }
  return m;
}

Json report_to_json(const CheckReport& report) {
  Json j;
  j["check"] = report.check;
  j["max_residual"] = report.max_residual;
  j["samples"] = report.samples;
  j["pass"] = report.pass;
  return j;
}

Json reports_to_json(const std::vector<CheckReport>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) arr.push_back(report_to_json(c));
  Json j;
  j["checks"] = std::move(arr);
  j["pass"] = all_pass(checks);
  return j;
}

Json orbit_info(const LambdaState& state) {
  Json j = lambda_state_to_json(state);
  j["pure"] = state.is_pure();
  j["orbit_dim"] = state.orbit_dim();
  j["stabilizer_dim"] = state.n() * state.n() - state.orbit_dim();
  Json partition = Json::array();
  for (const auto& c : state.clusters()) {
    Json indices = Json::array();
    for (int k = c.begin; k < c.end; ++k) indices.push_back(k + 1);
    partition.push_back(std::move(indices));
  }
  j["partition"] = std::move(partition);
  Json roots = Json::array();
  for (const auto& r : active_roots(state)) {
    Json root;
    root["ij"] = {r.i + 1, r.j + 1};
    root["alpha"] = r.alpha;
    root["beta"] = r.beta;
    roots.push_back(std::move(root));
  }
  j["active_roots"] = std::move(roots);
  return j;
}

Json fisher_payload(const OrbitPoint& point) {
  const fisher::FisherTensor tensor = fisher::fisher_tensor(point);
  const fisher::FisherStructureTensor structure = fisher::fisher_structure(point);
  const kks::InvariantComplexStructure ics =
      kks::invariant_complex_structure(point.state());
  Json j;
  j["basis"] = tensor.basis;
  j["F"] = real_matrix_to_json(tensor.f);
  j["G"] = real_matrix_to_json(tensor.g_sym);
  j["W"] = real_matrix_to_json(tensor.w_antisym);
  j["J"] = real_matrix_to_json(structure.j);
  j["J_invariant"] = real_matrix_to_json(ics.matrix);
  j["delta"] = structure.delta;
  j["square_residual"] = structure.square_residual;
  Json probes = Json::array();
  for (const auto& r : active_roots(point.state())) {
    const fisher::EqMapProbe probe = fisher::eval_eq_map(point.state(), r.i, r.j);
    Json p;
    p["ij"] = {r.i + 1, r.j + 1};
    p["beta_direct"] = probe.beta_direct;
    p["beta_formula"] = probe.beta_formula;
    probes.push_back(std::move(p));
  }
  j["anticommutator_probes"] = std::move(probes);
  return j;
}

Json fibration_info(const fibration::OrbitFibration& fib) {
  Json j;
  j["n"] = fib.total.n();
  j["total"] = lambda_state_to_json(fib.total);
  j["base"] = lambda_state_to_json(fib.base);
  Json dims;
  dims["total"] = fib.total_dim;
  dims["fibre"] = fib.fibre_dim;
  dims["base"] = fib.base_dim;
  j["dims"] = std::move(dims);
  auto roots_json = [](const std::vector<RootIndex>& roots) {
    Json arr = Json::array();
    for (const auto& r : roots) {
      Json root;
      root["ij"] = {r.i + 1, r.j + 1};
      root["alpha"] = r.alpha;
      root["beta"] = r.beta;
      arr.push_back(std::move(root));
    }
    return arr;
  };
  j["vertical_roots"] = roots_json(fib.vertical_roots);
  j["horizontal_roots"] = roots_json(fib.horizontal_roots);
  const auto fibre = fibration::fibre_orbit(fib);
  Json factors = Json::array();
  for (const auto& f : fibre.factors) {
    Json factor;
    Json indices = Json::array();
    for (int k = f.cluster_begin; k < f.cluster_end; ++k) indices.push_back(k + 1);
    factor["indices"] = std::move(indices);
    factor["sub_spectrum"] = f.sub_spectrum;
    factor["dim"] = f.dim;
    factors.push_back(std::move(factor));
  }
  j["fibre_factors"] = std::move(factors);
  return j;
}

Json membership_to_json(const linfisher::MembershipResult& m) {
  Json j;
  j["is_member"] = m.is_member;
  j["skew_ok"] = m.skew_ok;
  j["rows_ok"] = m.rows_ok;
  j["invertible_ok"] = m.invertible_ok;
  if (!m.failure.empty()) j["failure"] = m.failure;
  j["roots"] = m.roots;
  return j;
}

Json normal_form_to_json(const linfisher::NormalFormResult& nf) {
  Json roots = Json::array();
  for (const auto& [d, mult] : nf.roots) roots.push_back({d, mult});
  Json j;
  j["roots"] = std::move(roots);
  j["change_of_basis"] = real_matrix_to_json(nf.change_of_basis);
  j["block_matrix"] = real_matrix_to_json(nf.block_matrix);
  j["residual"] = nf.residual;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace orbitfisher::jsonio
