#include "rkbal/rkbal.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "rkbal/pipeline.hpp"

struct rkbal_config {
  rkbal::PipelineConfig value;
};

struct rkbal_model {
  rkbal::ReducedModel value;
};

namespace {

thread_local std::string g_last_error;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Fn>
rkbal_status guard(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const rkbal::ConfigError& e) {
    g_last_error = e.what();
    return RKBAL_ERR_CONFIG;
  } catch (const rkbal::NumericalError& e) {
    g_last_error = e.what();
    return RKBAL_ERR_NUMERIC;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return RKBAL_ERR_IO;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return RKBAL_ERR_CONFIG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RKBAL_ERR_NUMERIC;
  } catch (...) {
    g_last_error = "unknown error";
    return RKBAL_ERR_NUMERIC;
  }
}

rkbal_status bad_argument(const char* what) {
  g_last_error = what;
  return RKBAL_ERR_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open '") + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Writer>
void write_file(const char* path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(std::string("cannot write '") + path + "'");
  writer(out);
  out.flush();
  if (!out) throw IoError(std::string("error while writing '") + path + "'");
}

}  // namespace

extern "C" {

const char* rkbal_last_error(void) { return g_last_error.c_str(); }

const char* rkbal_version(void) { return "1.0.0"; }

void rkbal_string_free(char* s) { delete[] s; }

rkbal_status rkbal_config_default(rkbal_config** out) {
  if (!out) return bad_argument("rkbal_config_default: null output");
  return guard([&] {
    *out = new rkbal_config{};
    return RKBAL_OK;
  });
}

rkbal_status rkbal_config_from_json(const char* json, rkbal_config** out) {
  if (!json || !out) return bad_argument("rkbal_config_from_json: null argument");
  return guard([&] {
    *out = new rkbal_config{rkbal::config_from_json(json)};
    return RKBAL_OK;
  });
}

rkbal_status rkbal_config_from_file(const char* path, rkbal_config** out) {
  if (!path || !out) return bad_argument("rkbal_config_from_file: null argument");
  return guard([&] {
    const std::string text = read_file(path);
    try {
      *out = new rkbal_config{rkbal::config_from_json(text)};
    } catch (const rkbal::ConfigError& e) {
      throw rkbal::ConfigError(std::string(path) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw rkbal::ConfigError(std::string(path) + ": " + e.what());
    }
    return RKBAL_OK;
  });
}

rkbal_status rkbal_config_to_json(const rkbal_config* config, char** json) {
  if (!config || !json) return bad_argument("rkbal_config_to_json: null argument");
  return guard([&] {
    *json = dup_string(rkbal::config_to_json(config->value));
    return RKBAL_OK;
  });
}

void rkbal_config_free(rkbal_config* config) { delete config; }

rkbal_status rkbal_spectrum(const rkbal_config* config, const char* csv_path, double* values,
                            size_t capacity, size_t* count) {
  if (!config) return bad_argument("rkbal_spectrum: null config");
  if (capacity > 0 && !values) return bad_argument("rkbal_spectrum: null values buffer");
  return guard([&] {
    const auto spectrum = rkbal::run_spectrum(config->value);
    if (csv_path) {
      write_file(csv_path, [&](std::ostream& os) { rkbal::write_spectrum_csv(os, spectrum); });
    }
    const auto rank = static_cast<size_t>(rkbal::numerical_rank(spectrum.values));
    for (size_t i = 0; i < capacity && i < static_cast<size_t>(spectrum.values.size()); ++i) {
      values[i] = spectrum.values(static_cast<Eigen::Index>(i));
    }
    if (count) *count = rank;
    return RKBAL_OK;
  });
}

rkbal_status rkbal_reduce(const rkbal_config* config, rkbal_model** out) {
  if (!config || !out) return bad_argument("rkbal_reduce: null argument");
  return guard([&] {
    *out = new rkbal_model{rkbal::run_reduce(config->value)};
    return RKBAL_OK;
  });
}

rkbal_status rkbal_model_save(const rkbal_model* model, const char* path) {
  if (!model || !path) return bad_argument("rkbal_model_save: null argument");
  return guard([&] {
    const std::string text = rkbal::model_to_json(model->value);
    write_file(path, [&](std::ostream& os) { os << text << "\n"; });
    return RKBAL_OK;
  });
}

rkbal_status rkbal_model_load(const char* path, rkbal_model** out) {
  if (!path || !out) return bad_argument("rkbal_model_load: null argument");
  return guard([&] {
    const std::string text = read_file(path);
    *out = new rkbal_model{rkbal::model_from_json(text)};
    return RKBAL_OK;
  });
}

rkbal_status rkbal_model_to_json(const rkbal_model* model, char** json) {
  if (!model || !json) return bad_argument("rkbal_model_to_json: null argument");
  return guard([&] {
    *json = dup_string(rkbal::model_to_json(model->value));
    return RKBAL_OK;
  });
}

rkbal_status rkbal_model_from_json(const char* json, rkbal_model** out) {
  if (!json || !out) return bad_argument("rkbal_model_from_json: null argument");
  return guard([&] {
    *out = new rkbal_model{rkbal::model_from_json(json)};
    return RKBAL_OK;
  });
}

void rkbal_model_free(rkbal_model* model) { delete model; }

rkbal_status rkbal_model_dims(const rkbal_model* model, rkbal_dims* dims) {
  if (!model || !dims) return bad_argument("rkbal_model_dims: null argument");
  const auto& m = model->value;
  *dims = rkbal_dims{m.n, m.m, m.p, m.q};
  return RKBAL_OK;
}

rkbal_status rkbal_model_reduce_state(const rkbal_model* model, const double* x, double* xr) {
  if (!model || !x || !xr) return bad_argument("rkbal_model_reduce_state: null argument");
  return guard([&] {
    const auto& m = model->value;
    const rkbal::Vec r = m.map.reduce(Eigen::Map<const rkbal::Vec>(x, m.n));
    Eigen::Map<rkbal::Vec>(xr, m.q) = r;
    return RKBAL_OK;
  });
}

rkbal_status rkbal_model_closed_rhs(const rkbal_model* model, const double* xr, const double* u,
                                    double* dxr) {
  if (!model || !xr || !dxr || (!u && model->value.m > 0)) {
    return bad_argument("rkbal_model_closed_rhs: null argument");
  }
  return guard([&] {
    const auto& m = model->value;
    const rkbal::Vec uv = m.m > 0 ? rkbal::Vec(Eigen::Map<const rkbal::Vec>(u, m.m)) : rkbal::Vec();
    const rkbal::Vec d = m.closed_rhs(Eigen::Map<const rkbal::Vec>(xr, m.q), uv);
    Eigen::Map<rkbal::Vec>(dxr, m.q) = d;
    return RKBAL_OK;
  });
}

rkbal_status rkbal_model_output(const rkbal_model* model, const double* xr, double* y) {
  if (!model || !xr || !y) return bad_argument("rkbal_model_output: null argument");
  return guard([&] {
    const auto& m = model->value;
    const rkbal::Vec out = m.output(Eigen::Map<const rkbal::Vec>(xr, m.q));
    Eigen::Map<rkbal::Vec>(y, m.p) = out;
    return RKBAL_OK;
  });
}

rkbal_status rkbal_compare(const rkbal_model* model, const rkbal_config* config,
                           const char* csv_path, const char* summary_path,
                           rkbal_compare_summary* summary) {
  if (!model || !config) return bad_argument("rkbal_compare: null argument");
  return guard([&] {
    const auto r = rkbal::run_compare(model->value, config->value);
    if (csv_path) {
      write_file(csv_path, [&](std::ostream& os) { rkbal::write_compare_csv(os, r); });
    }
    if (summary_path) {
      write_file(summary_path, [&](std::ostream& os) {
        const auto old = os.precision(17);
        os << "{\"rmse\": " << r.rmse << ", \"peak\": " << r.peak
           << ", \"relative_rmse\": " << r.relative_rmse << ", \"samples\": " << r.full.size()
           << "}\n";
        os.precision(old);
      });
    }
    if (summary) {
      *summary = rkbal_compare_summary{r.rmse, r.peak, r.relative_rmse,
                                       static_cast<int>(r.full.size())};
    }
    return RKBAL_OK;
  });
}

rkbal_status rkbal_simulate(const rkbal_config* config, const char* csv_path) {
  if (!config || !csv_path) return bad_argument("rkbal_simulate: null argument");
  return guard([&] {
    const auto traj = rkbal::run_simulate(config->value);
    write_file(csv_path, [&](std::ostream& os) { rkbal::write_trajectory_csv(os, traj); });
    return RKBAL_OK;
  });
}

rkbal_status rkbal_oracle(const rkbal_config* config, const char* report_path, int* all_passed) {
  if (!config) return bad_argument("rkbal_oracle: null config");
  return guard([&] {
    const auto report = rkbal::run_oracle(config->value);
    if (report_path) {
      const std::string text = rkbal::oracle_report_json(report);
      write_file(report_path, [&](std::ostream& os) { os << text << "\n"; });
    }
    const bool ok = report.all_passed();
    if (all_passed) *all_passed = ok ? 1 : 0;
    if (!ok) {
      std::string failed;
      for (const auto& c : report.checks) {
        if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
      }
      g_last_error = "oracle checks failed: " + failed;
      return RKBAL_ERR_CHECK;
    }
    return RKBAL_OK;
  });
}

}  // extern "C"
