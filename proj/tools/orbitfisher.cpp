#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "orbitfisher/fibration.hpp"
#include "orbitfisher/fisher.hpp"
#include "orbitfisher/json_io.hpp"
#include "orbitfisher/kks.hpp"
#include "orbitfisher/linear_fisher.hpp"
#include "orbitfisher/orbit.hpp"
#include "orbitfisher/verify.hpp"

namespace {

using orbitfisher::ChartVector;
using orbitfisher::CheckReport;
using orbitfisher::ComplexMatrix;
using orbitfisher::ConvergenceError;
using orbitfisher::LambdaState;
using orbitfisher::OrbitPoint;
using orbitfisher::RealMatrix;
using orbitfisher::SingularStructureError;
using orbitfisher::ValidationError;
using Json = orbitfisher::jsonio::Json;
namespace jsonio = orbitfisher::jsonio;
namespace fibration = orbitfisher::fibration;
namespace fisher = orbitfisher::fisher;
namespace linfisher = orbitfisher::linfisher;
namespace verify = orbitfisher::verify;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSingular = 4;

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct Options {
  std::string input_path;
  std::string inline_json;
  std::uint64_t seed = 42;
  double tol = 0.0;
  int samples = 100;
  std::string out_path;
};

bool has_input(const Options& opt) {
  return !opt.input_path.empty() || !opt.inline_json.empty();
}

Json read_input(const Options& opt) {
  if (!opt.inline_json.empty()) return Json::parse(opt.inline_json);
  if (opt.input_path.empty()) {
    throw IoError("no input given: pass --input FILE or --json STR");
  }
  std::ifstream file(opt.input_path);
  if (!file) throw IoError("cannot open " + opt.input_path);
  return Json::parse(file);
}

void emit(const Options& opt, const Json& payload) {
  const std::string text = jsonio::dump(payload);
  if (opt.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(opt.out_path);
  if (!file) throw IoError("cannot open " + opt.out_path + " for writing");
  file << text;
  if (!file) throw IoError("failed to write " + opt.out_path);
}

int cmd_orbit_info(const Options& opt) {
  const LambdaState state = jsonio::lambda_state_from_json(read_input(opt));
  emit(opt, jsonio::orbit_info(state));
  return kExitPass;
}

int cmd_fisher(const Options& opt) {
  const Json in = read_input(opt);
  const LambdaState state = jsonio::lambda_state_from_json(in);
  OrbitPoint point = OrbitPoint::reference(state);
  if (in.is_object() && in.contains("coords")) {
    point = exp_chart(state, jsonio::chart_from_json(in));
  }
  emit(opt, jsonio::fisher_payload(point));
  return kExitPass;
}

verify::SuiteConfig suite_config(const Options& opt) {
  verify::SuiteConfig cfg;
  cfg.seed = opt.seed;
  cfg.samples = opt.samples;
  cfg.n_min = 2;
  cfg.n_max = 6;
  cfg.tol_override = opt.tol;
  return cfg;
}

Json fibration_checks(const fibration::OrbitFibration& fib, const Options& opt,
                      bool* all_ok) {
  std::vector<CheckReport> checks;
  checks.push_back(orbitfisher::make_report(
      "fibration_dimension_additivity",
      std::abs(double(fib.total_dim - fib.base_dim - fib.fibre_dim)), 1, 0.0));
  checks.push_back(fibration::check_symplectic_orthogonality(
      fib, std::max(1, std::min(opt.samples, 20)), opt.seed,
      opt.tol > 0 ? opt.tol : 1e-10));
  const auto invol = fibration::check_involutivity(fib, opt.tol > 0 ? opt.tol : 1e-12);
  checks.push_back(invol.vertical_vertical);
  checks.push_back(invol.horizontal_vertical);
  Json payload = jsonio::fibration_info(fib);
  if (fib.total.orbit_dim() > 0) {
    const auto blocks =
        fibration::check_tensor_block_diagonality(fib, opt.tol > 0 ? opt.tol : 1e-10);
    checks.insert(checks.end(), blocks.checks.begin(), blocks.checks.end());
    payload["horizontal_vs_base_gap"] = blocks.horizontal_vs_base_gap;
  }
  payload["checks"] = jsonio::reports_to_json(checks)["checks"];
  payload["pass"] = all_pass(checks);
  *all_ok = all_pass(checks);
  return payload;
}

int cmd_verify(const Options& opt, const std::string& scope) {
  if (scope == "fibration" && has_input(opt)) {
    const Json in = read_input(opt);
    const LambdaState total = jsonio::lambda_state_from_json(
        in.is_object() && in.contains("total") ? in.at("total")
                                               : throw ValidationError("missing key \"total\""));
    const LambdaState base = jsonio::lambda_state_from_json(
        in.contains("base") ? in.at("base")
                            : throw ValidationError("missing key \"base\""));
    const auto fib = fibration::fibration_new(total, base);
    bool ok = false;
    emit(opt, fibration_checks(fib, opt, &ok));
    return ok ? kExitPass : kExitCheckFailure;
  }

  const verify::SuiteConfig cfg = suite_config(opt);
  verify::SuiteResult result;
  if (scope == "all") {
    result = verify::run_all(cfg);
  } else if (scope == "kks") {
    result = verify::run_kks_suite(cfg);
  } else if (scope == "fisher") {
    result = verify::run_fisher_suite(cfg);
  } else if (scope == "fibration") {
    result = verify::run_fibration_suite(cfg);
  } else if (scope == "linfisher") {
    result = verify::run_linfisher_suite(cfg);
  } else {
    throw ValidationError("unknown verify scope: " + scope);
  }
  emit(opt, jsonio::reports_to_json(result.checks));
  return result.pass ? kExitPass : kExitCheckFailure;
}

int cmd_fibration(const Options& opt) {
  const Json in = read_input(opt);
  if (!in.is_object() || !in.contains("total") || !in.contains("base")) {
    throw ValidationError("fibration input must be {\"total\": ..., \"base\": ...}");
  }
  const LambdaState total = jsonio::lambda_state_from_json(in.at("total"));
  const LambdaState base = jsonio::lambda_state_from_json(in.at("base"));
  const auto fib = fibration::fibration_new(total, base);
  bool ok = false;
  emit(opt, fibration_checks(fib, opt, &ok));
  return ok ? kExitPass : kExitCheckFailure;
}

linfisher::LinearFisherStructure structure_from_json(const Json& in) {
  if (!in.is_object() || !in.contains("form") || !in.contains("matrix")) {
    throw ValidationError(
        "linfisher input must be {\"form\": \"real\"|\"complex\", \"matrix\": ...}");
  }
  const std::string form = in.at("form").is_string() ? in.at("form").get<std::string>() : "";
  linfisher::LinearFisherStructure j;
  if (form == "real") {
    j.form = linfisher::Form::Real;
    j.real_rep = jsonio::real_matrix_from_json(in.at("matrix"));
    if (j.real_rep.rows() != j.real_rep.cols()) {
      throw ValidationError("matrix must be square");
    }
  } else if (form == "complex") {
    j.form = linfisher::Form::Complex;
    j.complex_rep = jsonio::complex_matrix_from_json(in.at("matrix"));
    if (j.complex_rep.rows() != j.complex_rep.cols()) {
      throw ValidationError("matrix must be square");
    }
  } else {
    throw ValidationError("form must be \"real\" or \"complex\"");
  }
  return j;
}

int cmd_linfisher(const Options& opt, const std::string& sub) {
  const Json in = read_input(opt);
  const double tol = opt.tol > 0 ? opt.tol : orbitfisher::Tolerances::verification;

  if (sub == "check") {
    emit(opt, jsonio::membership_to_json(
                  linfisher::is_fisher_structure(structure_from_json(in), tol)));
    return kExitPass;
  }
  if (sub == "normal-form") {
    const auto j = structure_from_json(in);
    const auto membership = linfisher::is_fisher_structure(j, tol);
    if (!membership.is_member) {
      emit(opt, jsonio::membership_to_json(membership));
      return kExitCheckFailure;
    }
    emit(opt, jsonio::normal_form_to_json(linfisher::normal_form(j, tol)));
    return kExitPass;
  }
  if (sub == "scale") {
    const auto j = structure_from_json(in);
    if (j.form != linfisher::Form::Complex) {
      throw ValidationError("scale acts on the complex form");
    }
    if (!in.contains("q") || !in.at("q").is_array()) {
      throw ValidationError("scale input needs a \"q\" array of positive weights");
    }
    std::vector<double> q;
    for (const auto& v : in.at("q")) {
      if (!v.is_number()) throw ValidationError("q entries must be numbers");
      q.push_back(v.get<double>());
    }
    const ComplexMatrix scaled = linfisher::scaling_action(q, j.complex_rep, tol);
    linfisher::LinearFisherStructure out;
    out.form = linfisher::Form::Complex;
    out.complex_rep = scaled;
    Json payload;
    payload["matrix"] = jsonio::complex_matrix_to_json(scaled);
    payload["membership"] = jsonio::membership_to_json(linfisher::is_fisher_structure(out, tol));
    emit(opt, payload);
    return kExitPass;
  }
  throw ValidationError("unknown linfisher subcommand: " + sub);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coadjoint-orbit Fisher geometry toolkit"};
  app.require_subcommand(1);

  Options opt;
  std::string verify_scope = "all";
  std::string linfisher_sub;

  auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--input", opt.input_path, "Input JSON file");
    cmd->add_option("--json", opt.inline_json, "Inline input JSON");
    cmd->add_option("--seed", opt.seed, "RNG seed");
    cmd->add_option("--tol", opt.tol, "Tolerance override (0 keeps per-check defaults)");
    cmd->add_option("--samples", opt.samples, "Sample count");
    cmd->add_option("--out", opt.out_path, "Output file (defaults to stdout)");
  };

  CLI::App* orbit_info = app.add_subcommand("orbit-info", "Orbit dimensions, degeneracy partition, active roots");
  add_common(orbit_info);
  CLI::App* fisher_cmd = app.add_subcommand("fisher", "Fisher tensors F, G, W, structure J and delta at a state");
  add_common(fisher_cmd);
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run randomized verification suites");
  verify_cmd->add_option("scope", verify_scope, "all | kks | fisher | fibration | linfisher")
      ->check(CLI::IsMember({"all", "kks", "fisher", "fibration", "linfisher"}));
  add_common(verify_cmd);
  CLI::App* fibration_cmd = app.add_subcommand("fibration", "Fibration structure and compatibility checks for a state pair");
  add_common(fibration_cmd);
  CLI::App* linfisher_cmd = app.add_subcommand("linfisher", "Linear Fisher structure operations");
  linfisher_cmd->add_option("subcommand", linfisher_sub, "check | normal-form | scale")
      ->required()
      ->check(CLI::IsMember({"check", "normal-form", "scale"}));
  add_common(linfisher_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitIo;
  }

  try {
    if (orbit_info->parsed()) return cmd_orbit_info(opt);
    if (fisher_cmd->parsed()) return cmd_fisher(opt);
    if (verify_cmd->parsed()) return cmd_verify(opt, verify_scope);
    if (fibration_cmd->parsed()) return cmd_fibration(opt);
    if (linfisher_cmd->parsed()) return cmd_linfisher(opt, linfisher_sub);
    std::cerr << "error: no command given\n";
    return kExitIo;
  } catch (const Json::parse_error& e) {
    std::cerr << "error: invalid JSON: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SingularStructureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSingular;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSingular;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}
