#include "rkbal/pipeline.hpp"

#include <cmath>
#include <ostream>

#include "json_util.hpp"

namespace rkbal {

using nlohmann::json;
using detail::matrix_from_json;
using detail::matrix_to_json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& prefix = "") {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + prefix + key + "': " + e.what());
  }
}

void read_run(const json& j, const char* key, RunSpec& spec) {
  if (!j.contains(key)) return;
  const auto& r = j.at(key);
  if (!r.is_object()) throw ConfigError(std::string("config field '") + key + "': expected an object");
  const std::string prefix = std::string(key) + ".";
  read(r, "input", spec.input, prefix);
  read(r, "samples", spec.samples, prefix);
  read(r, "horizon", spec.horizon, prefix);
}

json run_to_json(const RunSpec& r) {
  return {{"input", r.input}, {"samples", r.samples}, {"horizon", r.horizon}};
}

}  // namespace

PipelineConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  PipelineConfig c;
  if (j.contains("system")) {
    const auto& s = j.at("system");
    if (s.is_string()) {
      c.system = s.get<std::string>();
    } else if (s.is_object() && s.contains("linear")) {
      const auto& l = s.at("linear");
      c.system = "linear";
      for (const char* key : {"A", "B", "C"}) {
        if (!l.contains(key)) throw ConfigError(std::string("system.linear.") + key + ": missing");
      }
      c.A = matrix_from_json(l.at("A"), "system.linear.A");
      c.B = matrix_from_json(l.at("B"), "system.linear.B");
      c.C = matrix_from_json(l.at("C"), "system.linear.C");
    } else {
      throw ConfigError("config field 'system': expected a name or {\"linear\": {A, B, C}}");
    }
  }
  read(j, "kernel", c.kernel);
  read(j, "dyn_kernel", c.dyn_kernel);
  read(j, "out_kernel", c.out_kernel);
  if (j.contains("sampling")) {
    const auto& s = j.at("sampling");
    read(s, "horizon", c.sampling.horizon, "sampling.");
    read(s, "samples", c.sampling.samples, "sampling.");
    read(s, "step", c.sampling.step, "sampling.");
  }
  if (j.contains("order")) {
    const auto& o = j.at("order");
    if (o.is_number_integer()) {
      c.order = std::to_string(o.get<int>());
    } else {
      read(j, "order", c.order);
    }
  }
  read(j, "jacobian", c.jacobian);
  read_run(j, "train_dynamics", c.train_dynamics);
  read_run(j, "train_output", c.train_output);
  read_run(j, "evaluation", c.evaluation);
  read(j, "output_bias", c.output_bias);
  read(j, "dyn_targets", c.dyn_targets);
  read(j, "lambda_grid", c.lambda_grid);
  read(j, "seed", c.seed);

  // Validate the textual fields up front so errors name the field.
  auto guard = [](const char* field, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config field '") + field + "': " + e.what());
    }
  };
  guard("kernel", [&] { parse_kernel(c.kernel); });
  guard("dyn_kernel", [&] { parse_kernel(c.dyn_kernel); });
  guard("out_kernel", [&] { parse_kernel(c.out_kernel); });
  guard("order", [&] { parse_order(c.order); });
  if (c.jacobian != "taylor" && c.jacobian != "poly") {
    throw ConfigError("config field 'jacobian': expected taylor or poly");
  }
  if (c.dyn_targets != "true" && c.dyn_targets != "finite_difference") {
    throw ConfigError("config field 'dyn_targets': expected true or finite_difference");
  }
  for (const RunSpec* r : {&c.train_dynamics, &c.train_output, &c.evaluation}) {
    guard("input", [&] { parse_signal(r->input, 1.0, 1); });
    if (r->samples < 2 || !(r->horizon > 0)) throw ConfigError("run samples must be >= 2 and horizon > 0");
  }
  if (c.sampling.samples < 2 || !(c.sampling.horizon > 0) || !(c.sampling.step > 0)) {
    throw ConfigError("config field 'sampling': need samples >= 2, horizon > 0, step > 0");
  }
  guard("system", [&] { make_system(c); });
  return c;
}

std::string config_to_json(const PipelineConfig& c) {
  json j;
  if (c.system == "linear" && c.A) {
    j["system"] = {{"linear", {{"A", matrix_to_json(*c.A)}, {"B", matrix_to_json(*c.B)},
                                {"C", matrix_to_json(*c.C)}}}};
  } else {
    j["system"] = c.system;
  }
  j["kernel"] = c.kernel;
  j["dyn_kernel"] = c.dyn_kernel;
  j["out_kernel"] = c.out_kernel;
  j["sampling"] = {{"horizon", c.sampling.horizon}, {"samples", c.sampling.samples},
                   {"step", c.sampling.step}};
  j["order"] = c.order;
  j["jacobian"] = c.jacobian;
  j["train_dynamics"] = run_to_json(c.train_dynamics);
  j["train_output"] = run_to_json(c.train_output);
  j["evaluation"] = run_to_json(c.evaluation);
  j["output_bias"] = c.output_bias;
  j["dyn_targets"] = c.dyn_targets;
  j["lambda_grid"] = c.lambda_grid;
  j["seed"] = c.seed;
  return j.dump(2);
}

ControlSystem make_system(const PipelineConfig& config) {
  if (config.system == "2d") return system_2d();
  if (config.system == "7d") return system_7d();
  if (config.system == "2d_reference") return system_2d_reference();
  if (config.system == "linear") {
    if (!config.A || !config.B || !config.C) throw ConfigError("linear system needs A, B and C");
    return LinearSystem(*config.A, *config.B, *config.C).to_control_system();
  }
  throw ConfigError("unknown system '" + config.system + "' (expected 2d, 7d or linear)");
}

OrderPolicy parse_order(const std::string& text) {
  try {
    if (text == "auto") return AutoOrder{};
    if (text.rfind("auto:", 0) == 0) {
      std::size_t pos = 0;
      const std::string arg = text.substr(5);
      const double ratio = std::stod(arg, &pos);
      if (pos == arg.size() && ratio > 1.0) return AutoOrder{ratio};
    } else {
      std::size_t pos = 0;
      const int q = std::stoi(text, &pos);
      if (pos == text.size() && q >= 1) return FixedOrder{q};
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("order '" + text + "': expected auto, auto:RATIO (> 1) or a positive integer");
}

SimSettings effective_settings(double horizon, int samples, double max_step) {
  return SimSettings{horizon, samples, compatible_step(horizon, samples, max_step)};
}

namespace {

struct Stage {
  const char* name;
  template <typename Fn>
  auto operator()(Fn&& fn) const {
    try {
      return fn();
    } catch (const NumericalError& e) {
      throw NumericalError(prefixed(e.what()));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(prefixed(e.what()));
    }
  }
  std::string prefixed(const std::string& what) const {
    const std::string head = std::string(name) + ": ";
    return what.rfind(head, 0) == 0 ? what : head + what;
  }
};

struct BalancedData {
  ControlSystem sys;
  SampleEnsemble ens;
  KernelMatrices mats;
  HankelSpectrum spectrum;
};

BalancedData balance_stage(const PipelineConfig& config) {
  BalancedData b;
  b.sys = make_system(config);
  const SimSettings gramian = effective_settings(config.sampling.horizon, config.sampling.samples,
                                                 config.sampling.step);
  b.ens = Stage{"collect_samples"}([&] { return collect_samples(b.sys, gramian); });
  b.mats = Stage{"build_kernel_matrices"}(
      [&] { return build_kernel_matrices(b.ens, parse_kernel(config.kernel)); });
  b.spectrum = Stage{"hankel_spectrum"}([&] { return hankel_spectrum(b.mats); });
  return b;
}

Trajectory run_input(const ControlSystem& sys, const RunSpec& run, double max_step) {
  const SimSettings s = effective_settings(run.horizon, run.samples, max_step);
  return integrate(sys, Vec::Zero(sys.n), parse_signal(run.input, s.step, sys.m), s);
}

}  // namespace

HankelSpectrum run_spectrum(const PipelineConfig& config) { return balance_stage(config).spectrum; }

void write_spectrum_csv(std::ostream& os, const HankelSpectrum& spectrum) {
  os << "index,sigma_Koc,sigma_KocT_Koc\n";
  const auto old = os.precision(17);
  const int count = std::min(100, numerical_rank(spectrum.values));
  for (int i = 0; i < count; ++i) {
    const double s = spectrum.values(i);
    os << i + 1 << "," << s << "," << s * s << "\n";
  }
  os.precision(old);
}

ReducedModel run_reduce(const PipelineConfig& config, ReduceReport* report) {
  BalancedData b = balance_stage(config);
  const int q = Stage{"select_order"}(
      [&] { return select_order(b.spectrum.values, parse_order(config.order)); });
  ReductionMap map =
      Stage{"build_reduction_map"}([&] { return build_reduction_map(b.mats, b.ens, b.spectrum, q); });

  ReduceReport rep;
  rep.spectrum = b.spectrum;
  rep.q = q;
  const double h = config.sampling.step;
  RkhsRegressor f_hat = Stage{"fit_dynamics"}([&] {
    const Trajectory train = run_input(b.sys, config.train_dynamics, h);
    const auto targets = config.dyn_targets == "true" ? DynamicsTargets::TrueField
                                                       : DynamicsTargets::FiniteDifference;
    return fit_dynamics(map, b.sys, train, parse_kernel(config.dyn_kernel), config.lambda_grid,
                        targets, &rep.dyn_cv);
  });
  RkhsRegressor h_hat = Stage{"fit_output"}([&] {
    const Trajectory train = run_input(b.sys, config.train_output, h);
    return fit_output(map, train, parse_kernel(config.out_kernel), config.lambda_grid,
                      config.output_bias, &rep.out_cv);
  });
  JacobianStrategy jac = Stage{"jacobian"}([&]() -> JacobianStrategy {
    if (config.jacobian == "poly") return make_poly(map);
    return make_taylor(map, Vec::Zero(b.sys.n));
  });
  if (report) *report = std::move(rep);
  return assemble_model(b.sys.name, std::move(map), std::move(f_hat), std::move(h_hat),
                        std::move(jac), b.sys.m);
}

CompareResult output_error(const Trajectory& full, const Trajectory& approx) {
  if (full.outputs.rows() != approx.outputs.rows() || full.outputs.cols() != approx.outputs.cols()) {
    throw std::invalid_argument("compare: output trajectories have different shapes");
  }
  CompareResult r;
  r.full = full;
  r.reduced = approx;
  r.rmse = std::sqrt((full.outputs - approx.outputs).squaredNorm() /
                     static_cast<double>(full.outputs.size()));
  r.peak = full.outputs.cwiseAbs().maxCoeff();
  r.relative_rmse = r.peak > 0 ? r.rmse / r.peak : (r.rmse == 0 ? 0.0 : INFINITY);
  return r;
}

CompareResult run_compare(const ReducedModel& model, const PipelineConfig& config) {
  const ControlSystem sys = make_system(config);
  if (sys.n != model.n || sys.m != model.m || sys.p != model.p) {
    throw std::invalid_argument("compare: model dimensions (n=" + std::to_string(model.n) +
                                ", m=" + std::to_string(model.m) + ", p=" + std::to_string(model.p) +
                                ") do not match system '" + sys.name + "'");
  }
  const auto& run = config.evaluation;
  const SimSettings s = effective_settings(run.horizon, run.samples, config.sampling.step);
  const Signal u = parse_signal(run.input, s.step, sys.m);
  const Vec x0 = Vec::Zero(sys.n);
  const Trajectory full = integrate(sys, x0, u, s);
  const Trajectory reduced =
      Stage{"simulate_reduced"}([&] { return simulate_reduced(model, model.map.reduce(x0), u, s); });
  return output_error(full, reduced);
}

void write_compare_csv(std::ostream& os, const CompareResult& r) {
  const auto p = r.full.outputs.cols();
  os << "t";
  for (Eigen::Index j = 0; j < p; ++j) os << (p == 1 ? ",y_full" : ",y_full" + std::to_string(j + 1));
  for (Eigen::Index j = 0; j < p; ++j) {
    os << (p == 1 ? ",y_reduced" : ",y_reduced" + std::to_string(j + 1));
  }
  os << "\n";
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < r.full.size(); ++i) {
    os << r.full.times(i);
    for (Eigen::Index j = 0; j < p; ++j) os << "," << r.full.outputs(i, j);
    for (Eigen::Index j = 0; j < p; ++j) os << "," << r.reduced.outputs(i, j);
    os << "\n";
  }
  os.precision(old);
}

Trajectory run_simulate(const PipelineConfig& config) {
  const ControlSystem sys = make_system(config);
  return run_input(sys, config.evaluation, config.sampling.step);
}

}  // namespace rkbal
