#include "geodissip/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "geodissip/leafgeom.hpp"
#include "geodissip/models.hpp"
#include "geodissip/trajectory_io.hpp"
#include "geodissip/verify.hpp"

namespace geodissip::cli {

namespace {

using nlohmann::ordered_json;

Eigen::VectorXd to_vector(const ordered_json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError("field '" + field + "' must be a non-empty array");
  }
  Eigen::VectorXd v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ConfigError("field '" + field + "' must contain numbers");
    }
    v(static_cast<long>(i)) = j[i].get<double>();
  }
  return v;
}

ScalarField parse_field_spec(const ordered_json& j, int dim,
                             const std::string& where) {
  if (!j.is_object() || !j.contains("type")) {
    throw ConfigError("field '" + where + "' must be an object with a 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "half-norm2") return fields::half_norm_squared(dim);
  if (type == "coordinate") {
    if (!j.contains("index")) {
      throw ConfigError("field '" + where + ".index' is required");
    }
    return fields::coordinate(dim, j.at("index").get<int>());
  }
  if (type == "linear") {
    Eigen::VectorXd b = to_vector(j.at("b"), where + ".b");
    if (b.size() != dim) {
      throw ConfigError("field '" + where + ".b' has wrong dimension");
    }
    return fields::linear(std::move(b));
  }
  if (type == "inertia-energy") {
    Eigen::VectorXd I = to_vector(j.at("I"), where + ".I");
    if (I.size() != dim) {
      throw ConfigError("field '" + where + ".I' has wrong dimension");
    }
    return fields::inertia_energy(std::move(I));
  }
  if (type == "scaled-norm") {
    return fields::scaled_norm(dim, j.value("scale", 1.0));
  }
  if (type == "constant") {
    if (!j.contains("value")) {
      throw ConfigError("field '" + where + ".value' is required");
    }
    const double c = j.at("value").get<double>();
    return ScalarField(
        dim, [c](const ChartPoint&) { return c; },
        [dim](const ChartPoint&) { return Eigen::VectorXd::Zero(dim); });
  }
  throw ConfigError("field '" + where + ".type' unknown: '" + type + "'");
}

MetricField parse_metric_spec(const ordered_json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw ConfigError("field 'metric' must be an object with a 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "euclidean") {
    if (!j.contains("dim")) throw ConfigError("field 'metric.dim' is required");
    return MetricField::euclidean(j.at("dim").get<int>());
  }
  if (type == "diagonal") {
    return MetricField::diagonal(to_vector(j.at("entries"), "metric.entries"));
  }
  throw ConfigError("field 'metric.type' unknown: '" + type + "'");
}

struct ModelBundle {
  ControlProblem problem;
  std::function<TangentVector(const ChartPoint&)> base;
  ordered_json resolved;
};

ModelBundle build_landau_lifschitz(const ordered_json& params) {
  const double gamma = params.value("gamma", 1.0);
  const double lambda = params.value("lambda", 1.0);
  Eigen::Vector3d b(0.0, 0.0, 1.0);
  if (params.contains("b")) {
    const Eigen::VectorXd raw = to_vector(params.at("b"), "params.b");
    if (raw.size() != 3) throw ConfigError("field 'params.b' must have 3 entries");
    b = raw;
  }
  LandauLifschitzModel model =
      LandauLifschitzModel::constant_field(gamma, lambda, b);
  ordered_json resolved;
  resolved["gamma"] = gamma;
  resolved["lambda"] = lambda;
  resolved["b"] = {b(0), b(1), b(2)};
  return ModelBundle{
      model.control_problem(),
      [model](const ChartPoint& M) { return model.base_field(M); },
      std::move(resolved)};
}

ModelBundle build_rigid_body(const ordered_json& params) {
  Eigen::Vector3d I(3.0, 2.0, 1.0);
  if (params.contains("I")) {
    const Eigen::VectorXd raw = to_vector(params.at("I"), "params.I");
    if (raw.size() != 3) throw ConfigError("field 'params.I' must have 3 entries");
    I = raw;
  }
  RigidBodyModel model = I(0) == I(1) ? RigidBodyModel::axisymmetric(I(0), I(2))
                                      : RigidBodyModel(I(0), I(1), I(2));
  ordered_json resolved;
  resolved["I"] = {I(0), I(1), I(2)};
  return ModelBundle{
      model.control_problem(),
      [model](const ChartPoint& x) { return model.base_field(x); },
      std::move(resolved)};
}

ModelBundle build_custom(const ordered_json& config) {
  if (!config.contains("metric")) {
    throw ConfigError("field 'metric' is required for the custom model");
  }
  MetricField metric = parse_metric_spec(config.at("metric"));
  const int dim = metric.dim();
  if (!config.contains("conserved") || !config.at("conserved").is_array() ||
      config.at("conserved").empty()) {
    throw ConfigError("field 'conserved' must be a non-empty array");
  }
  std::vector<ScalarField> conserved;
  for (std::size_t i = 0; i < config.at("conserved").size(); ++i) {
    conserved.push_back(parse_field_spec(
        config.at("conserved")[i], dim, "conserved[" + std::to_string(i) + "]"));
  }
  if (!config.contains("target")) {
    throw ConfigError("field 'target' is required for the custom model");
  }
  ScalarField target = parse_field_spec(config.at("target"), dim, "target");
  ordered_json resolved;
  resolved["metric"] = config.at("metric");
  resolved["conserved"] = config.at("conserved");
  resolved["target"] = config.at("target");
  return ModelBundle{ControlProblem(std::move(metric), std::move(conserved),
                                    std::move(target)),
                     nullptr, std::move(resolved)};
}

ModelBundle build_model(const std::string& name, const ordered_json& config) {
  const ordered_json params = config.value("params", ordered_json::object());
  if (name == "landau-lifschitz") return build_landau_lifschitz(params);
  if (name == "rigid-body") return build_rigid_body(params);
  if (name == "custom") return build_custom(config);
  std::string known;
  for (const auto& m : registered_model_names()) {
    if (!known.empty()) known += ", ";
    known += m;
  }
  throw ConfigError("field 'model' names an unknown model '" + name +
                    "'; registered models: " + known);
}

}  // namespace

std::vector<std::string> registered_model_names() {
  return {"landau-lifschitz", "rigid-body", "custom"};
}

SimulationSetup parse_simulation_config(const std::string& json_text) {
  ordered_json config = ordered_json::parse(json_text, nullptr, false);
  if (config.is_discarded()) {
    throw ConfigError("config is not valid JSON");
  }
  for (const auto& [key, value] : config.items()) {
    static const std::vector<std::string> known = {
        "model",  "params", "metric",     "conserved",
        "target", "control", "integrator", "output"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  if (!config.contains("model")) throw ConfigError("field 'model' is required");
  const std::string model_name = config.at("model").get<std::string>();
  ModelBundle bundle = build_model(model_name, config);
  const int dim = bundle.problem.dim();

  SimulationSetup setup;
  setup.spec.base = bundle.base;
  setup.spec.control = bundle.problem;

  // Control section.
  std::string mode = "v0";
  ordered_json control = config.value("control", ordered_json::object());
  if (control.contains("mode")) mode = control.at("mode").get<std::string>();
  if (mode == "off") {
    setup.spec.mode = ControlMode::off;
  } else if (mode == "v0") {
    setup.spec.mode = ControlMode::v0;
  } else if (mode == "rate") {
    setup.spec.mode = ControlMode::rate;
    if (!control.contains("h")) {
      throw ConfigError("field 'control.h' is required in rate mode");
    }
    setup.spec.control->with_rate(
        parse_field_spec(control.at("h"), dim, "control.h"));
    if (control.contains("q")) {
      const double q = control.at("q").value("value", 0.0);
      if (control.at("q").value("type", "constant") != "constant") {
        throw ConfigError("field 'control.q.type' must be 'constant'");
      }
      setup.spec.control->with_prolonged_quotient(
          [q](const ChartPoint&) { return q; });
    }
  } else {
    throw ConfigError("field 'control.mode' must be off, v0 or rate");
  }
  if (setup.spec.mode == ControlMode::off && !setup.spec.base) {
    throw ConfigError(
        "field 'control.mode': off requires a model with a base field");
  }

  // Integrator section.
  if (!config.contains("integrator")) {
    throw ConfigError("field 'integrator' is required");
  }
  const ordered_json& integ = config.at("integrator");
  setup.spec.t0 = integ.value("t0", 0.0);
  if (!integ.contains("t1")) throw ConfigError("field 'integrator.t1' is required");
  setup.spec.t1 = integ.at("t1").get<double>();
  if (!integ.contains("dt")) throw ConfigError("field 'integrator.dt' is required");
  setup.spec.dt = integ.at("dt").get<double>();
  if (!(setup.spec.dt > 0.0)) {
    throw ConfigError("field 'integrator.dt' must be positive");
  }
  if (!(setup.spec.t1 > setup.spec.t0)) {
    throw ConfigError("field 'integrator.t1' must exceed t0");
  }
  if (!integ.contains("x0")) throw ConfigError("field 'integrator.x0' is required");
  setup.spec.x0 = ChartPoint(to_vector(integ.at("x0"), "integrator.x0"));
  if (setup.spec.x0.dim() != dim) {
    throw ConfigError("field 'integrator.x0' has dimension " +
                      std::to_string(setup.spec.x0.dim()) + ", model needs " +
                      std::to_string(dim));
  }
  if (!setup.spec.x0.all_finite()) {
    throw ConfigError("field 'integrator.x0' must be finite");
  }

  // Output section.
  const ordered_json output = config.value("output", ordered_json::object());
  setup.stride = output.value("stride", 1);
  if (setup.stride < 1) throw ConfigError("field 'output.stride' must be >= 1");
  setup.format = output.value("format", "csv");
  io::parse_format(setup.format);  // validates

  ordered_json resolved;
  resolved["model"] = model_name;
  resolved["params"] = bundle.resolved;
  resolved["control"] = {{"mode", mode}};
  resolved["integrator"] = {{"t0", setup.spec.t0},
                            {"t1", setup.spec.t1},
                            {"dt", setup.spec.dt}};
  std::vector<double> x0(setup.spec.x0.coords.data(),
                         setup.spec.x0.coords.data() + dim);
  resolved["integrator"]["x0"] = x0;
  resolved["output"] = {{"stride", setup.stride}, {"format", setup.format}};
  resolved["defaults"] = {{"transverse_w", "zero"}};
  setup.resolved_echo = resolved.dump();
  return setup;
}

namespace {

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& format_flag) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config file '" << config_path << "'\n";
    return kExitConfigError;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  SimulationSetup setup;
  try {
    setup = parse_simulation_config(buffer.str());
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (!format_flag.empty()) setup.format = format_flag;

  std::cerr << "geodissip simulate: " << setup.resolved_echo << "\n";

  IntegrationResult result;
  try {
    result = integrate(setup.spec);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot open output file '" << out_path << "'\n";
    return kExitConfigError;
  }
  if (!result.samples.empty()) {
    io::write_trajectory(out, result.samples, io::parse_format(setup.format),
                         setup.stride);
  }
  out.flush();

  if (!result.ok()) {
    std::cerr << "integration failed at t=" << io::format_double(result.t_fail)
              << ": " << result.message << " (partial trajectory written)\n";
    return kExitRuntimeFailure;
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, const verify::VerifyConfig& config,
               const std::string& json_path) {
  std::vector<verify::SuiteReport> reports;
  try {
    if (!verify::is_suite(suite)) {
      throw ConfigError("unknown verification suite '" + suite + "'");
    }
    reports = verify::run(suite, config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  std::cout << verify::report_text(reports);
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "error: cannot open report file '" << json_path << "'\n";
      return kExitConfigError;
    }
    out << verify::report_json(reports, config);
  }
  const bool all = std::all_of(reports.begin(), reports.end(),
                               [](const auto& r) { return r.all_pass(); });
  std::cout << (all ? "verification passed" : "verification FAILED") << "\n";
  return all ? kExitOk : kExitVerifyFailure;
}

int cmd_eval(const std::string& model, const std::string& point_text,
             const std::string& what,
             const std::vector<std::string>& params_kv) {
  try {
    ordered_json config;
    config["model"] = model;
    ordered_json params = ordered_json::object();
    for (const auto& kv : params_kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("param '" + kv + "' is not of the form key=value");
      }
      const std::string key = kv.substr(0, eq);
      const std::string value = kv.substr(eq + 1);
      if (value.find(',') != std::string::npos) {
        ordered_json arr = ordered_json::array();
        std::stringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ',')) arr.push_back(std::stod(tok));
        params[key] = arr;
      } else {
        params[key] = std::stod(value);
      }
    }
    config["params"] = params;
    ModelBundle bundle = build_model(model, config);

    std::vector<double> coords;
    std::stringstream ss(point_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) coords.push_back(std::stod(tok));
    ChartPoint x(Eigen::Map<const Eigen::VectorXd>(
        coords.data(), static_cast<long>(coords.size())));
    if (x.dim() != bundle.problem.dim()) {
      throw ConfigError("point has dimension " + std::to_string(x.dim()) +
                        ", model needs " +
                        std::to_string(bundle.problem.dim()));
    }

    auto print_vector = [](const Eigen::VectorXd& v) {
      for (int i = 0; i < v.size(); ++i) {
        if (i) std::cout << ' ';
        std::cout << io::format_double(v(i));
      }
      std::cout << '\n';
    };
    auto print_matrix = [&](const Eigen::MatrixXd& m) {
      for (int i = 0; i < m.rows(); ++i) {
        print_vector(m.row(i));
      }
    };

    if (what == "v0") {
      print_vector(v0(bundle.problem, x).components);
    } else if (what == "T") {
      print_matrix(tensor_T(bundle.problem, x));
    } else if (what == "projector") {
      print_matrix(projector(bundle.problem, x));
    } else if (what == "sigma") {
      print_matrix(point_data(bundle.problem.metric(),
                              bundle.problem.conserved(), x)
                       .gram);
    } else {
      throw ConfigError("unknown eval target '" + what +
                        "' (v0, T, projector, sigma)");
    }
    return kExitOk;
  } catch (const std::invalid_argument&) {
    std::cerr << "config error: point/params must be comma-separated numbers\n";
    return kExitConfigError;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"geodissip: conserved-quantity-preserving dissipation engine"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "integrate a perturbed flow");
  std::string config_path, out_path, format_flag;
  simulate->add_option("--config", config_path, "JSON config file")->required();
  simulate->add_option("--out", out_path, "output trajectory file")->required();
  simulate->add_option("--format", format_flag, "csv or jsonl");

  auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
  std::string suite, json_path;
  verify::VerifyConfig vconfig;
  std::vector<std::string> tol_kv;
  verify_cmd->add_option("--suite", suite, "formulations|gram|exterior-identities|leaf|models|all")
      ->required();
  verify_cmd->add_option("--seed", vconfig.seed, "RNG seed");
  verify_cmd->add_option("--count", vconfig.count, "instances per property")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--json", json_path, "write JSON report here");
  verify_cmd->add_option("--tol", tol_kv, "tolerance override name=value");

  auto* eval_cmd = app.add_subcommand("eval", "print an object at a point");
  std::string model, point_text, what;
  std::vector<std::string> params_kv;
  eval_cmd->add_option("--model", model, "registered model name")->required();
  eval_cmd->add_option("--point", point_text, "comma-separated coordinates")
      ->required();
  eval_cmd->add_option("--what", what, "v0|T|projector|sigma")->required();
  eval_cmd->add_option("--param", params_kv, "model parameter key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  if (simulate->parsed()) {
    if (!format_flag.empty()) {
      try {
        io::parse_format(format_flag);
      } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
      }
    }
    return cmd_simulate(config_path, out_path, format_flag);
  }
  if (verify_cmd->parsed()) {
    for (const auto& kv : tol_kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "config error: --tol expects name=value\n";
        return kExitConfigError;
      }
      try {
        vconfig.tolerance_overrides[kv.substr(0, eq)] =
            std::stod(kv.substr(eq + 1));
      } catch (const std::invalid_argument&) {
        std::cerr << "config error: --tol value is not a number\n";
        return kExitConfigError;
      }
    }
    return cmd_verify(suite, vconfig, json_path);
  }
  return cmd_eval(model, point_text, what, params_kv);
}

}  // namespace geodissip::cli
