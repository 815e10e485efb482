// rkbal: command-line driver for kernel balanced model reduction.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rkbal/rkbal.h"

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumeric = 3, kCheck = 4 };

struct Options {
  std::string config_path;
  std::optional<std::string> system, kernel, dyn_kernel, out_kernel, order, jacobian, input;
  std::optional<int> samples;
  std::optional<double> horizon, step;
  std::optional<unsigned long long> seed;
  std::string out;
  std::string model;
  std::string summary;
};

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw CliError(origin + ": " + e.what());
  }
}

// Config file first, then flags on top.
std::string merged_config(const Options& o) {
  json j = json::object();
  if (!o.config_path.empty()) {
    j = parse_json(slurp(o.config_path), o.config_path);
    if (!j.is_object()) throw CliError(o.config_path + ": config must be a JSON object");
  }
  if (o.system) {
    const std::string& s = *o.system;
    if (s.rfind("linear:", 0) == 0) {
      const std::string path = s.substr(7);
      json m = parse_json(slurp(path), path);
      if (m.is_object() && m.contains("linear")) m = m["linear"];
      j["system"] = {{"linear", m}};
    } else {
      j["system"] = s;
    }
  }
  if (o.kernel) j["kernel"] = *o.kernel;
  if (o.dyn_kernel) j["dyn_kernel"] = *o.dyn_kernel;
  if (o.out_kernel) j["out_kernel"] = *o.out_kernel;
  if (o.order) j["order"] = *o.order;
  if (o.jacobian) j["jacobian"] = *o.jacobian;
  if (o.samples) j["sampling"]["samples"] = *o.samples;
  if (o.horizon) j["sampling"]["horizon"] = *o.horizon;
  if (o.step) j["sampling"]["step"] = *o.step;
  if (o.input) j["evaluation"]["input"] = *o.input;
  if (o.seed) j["seed"] = *o.seed;
  return j.dump();
}

int status_exit(rkbal_status s) {
  switch (s) {
    case RKBAL_OK: return kOk;
    case RKBAL_ERR_CHECK: return kCheck;
    case RKBAL_ERR_NUMERIC: return kNumeric;
    default: return kConfig;
  }
}

int fail(rkbal_status s) {
  std::cerr << "rkbal: " << rkbal_last_error() << "\n";
  return status_exit(s);
}

struct ConfigHandle {
  rkbal_config* ptr = nullptr;
  ~ConfigHandle() { rkbal_config_free(ptr); }
};

struct ModelHandle {
  rkbal_model* ptr = nullptr;
  ~ModelHandle() { rkbal_model_free(ptr); }
};

std::string default_summary_path(const std::string& csv) {
  const auto dot = csv.rfind('.');
  const auto slash = csv.find_last_of('/');
  const std::string stem =
      (dot != std::string::npos && (slash == std::string::npos || dot > slash)) ? csv.substr(0, dot)
                                                                                : csv;
  return stem + ".summary.json";
}

int run(const std::string& command, const Options& o) {
  ConfigHandle config;
  if (auto s = rkbal_config_from_json(merged_config(o).c_str(), &config.ptr); s != RKBAL_OK) {
    return fail(s);
  }

  if (command == "spectrum") {
    const std::string out = o.out.empty() ? "spectrum.csv" : o.out;
    double values[3] = {0, 0, 0};
    size_t rank = 0;
    if (auto s = rkbal_spectrum(config.ptr, out.c_str(), values, 3, &rank); s != RKBAL_OK) {
      return fail(s);
    }
    std::printf("rank %zu; sigma(KocT Koc): %.6g %.6g %.6g\nwrote %s\n", rank, values[0] * values[0],
                values[1] * values[1], values[2] * values[2], out.c_str());
    return kOk;
  }

  if (command == "reduce") {
    const std::string out = o.out.empty() ? "model.json" : o.out;
    ModelHandle model;
    if (auto s = rkbal_reduce(config.ptr, &model.ptr); s != RKBAL_OK) return fail(s);
    if (auto s = rkbal_model_save(model.ptr, out.c_str()); s != RKBAL_OK) return fail(s);
    rkbal_dims d{};
    rkbal_model_dims(model.ptr, &d);
    std::printf("n=%d m=%d p=%d q=%d\nwrote %s\n", d.n, d.m, d.p, d.q, out.c_str());
    return kOk;
  }

  if (command == "compare") {
    const std::string out = o.out.empty() ? "compare.csv" : o.out;
    const std::string summary = o.summary.empty() ? default_summary_path(out) : o.summary;
    ModelHandle model;
    if (o.model.empty()) {
      if (auto s = rkbal_reduce(config.ptr, &model.ptr); s != RKBAL_OK) return fail(s);
    } else if (auto s = rkbal_model_load(o.model.c_str(), &model.ptr); s != RKBAL_OK) {
      return fail(s);
    }
    rkbal_compare_summary r{};
    if (auto s = rkbal_compare(model.ptr, config.ptr, out.c_str(), summary.c_str(), &r);
        s != RKBAL_OK) {
      return fail(s);
    }
    std::printf("rmse %.6g peak %.6g relative %.6g\nwrote %s, %s\n", r.rmse, r.peak,
                r.relative_rmse, out.c_str(), summary.c_str());
    return kOk;
  }

  if (command == "simulate") {
    const std::string out = o.out.empty() ? "trajectory.csv" : o.out;
    if (auto s = rkbal_simulate(config.ptr, out.c_str()); s != RKBAL_OK) return fail(s);
    std::printf("wrote %s\n", out.c_str());
    return kOk;
  }

  // oracle
  const std::string out = o.out.empty() ? "oracle.json" : o.out;
  int passed = 0;
  const rkbal_status s = rkbal_oracle(config.ptr, out.c_str(), &passed);
  if (s != RKBAL_OK && s != RKBAL_ERR_CHECK) return fail(s);
  std::cout << slurp(out);
  if (!passed) {
    std::cerr << "rkbal: " << rkbal_last_error() << "\n";
    return kCheck;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel balanced model reduction"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--system", o.system, "2d, 7d, 2d_reference or linear:FILE");
    sub->add_option("--kernel", o.kernel, "balancing kernel (linear, poly:D, gauss:G, gauss:auto)");
    sub->add_option("--dyn-kernel", o.dyn_kernel, "dynamics regression kernel");
    sub->add_option("--out-kernel", o.out_kernel, "output regression kernel");
    sub->add_option("--samples", o.samples, "samples N on [0, T]");
    sub->add_option("--horizon", o.horizon, "horizon T in seconds");
    sub->add_option("--step", o.step, "largest RK4 step");
    sub->add_option("--order", o.order, "auto, auto:RATIO or Q");
    sub->add_option("--jacobian", o.jacobian, "taylor or poly");
    sub->add_option("--input", o.input, "evaluation input (test, square:F:A, impulse:CH, ...)");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--out", o.out, "output path");
  };

  auto* spectrum = app.add_subcommand("spectrum", "Hankel kernel singular values as CSV");
  auto* reduce = app.add_subcommand("reduce", "build a reduced model and write it as JSON");
  auto* compare = app.add_subcommand("compare", "full against reduced output under the evaluation input");
  auto* oracle = app.add_subcommand("oracle", "linear-kernel equivalence checks");
  auto* simulate = app.add_subcommand("simulate", "full-order trajectory as CSV");
  for (auto* sub : {spectrum, reduce, compare, oracle, simulate}) add_common(sub);
  compare->add_option("--model", o.model, "model JSON; reduced from the config when omitted")
      ->check(CLI::ExistingFile);
  compare->add_option("--summary", o.summary, "summary JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), o);
  } catch (const CliError& e) {
    std::cerr << "rkbal: " << e.what() << "\n";
    return kConfig;
  }
}
