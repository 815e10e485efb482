#include "json_util.hpp"
#include "rkbal/pipeline.hpp"

namespace rkbal {

using nlohmann::json;
using detail::matrix_from_json;
using detail::matrix_to_json;
using detail::vector_from_json;
using detail::vector_to_json;

namespace {

constexpr const char* kFormat = "rkbal-model/1";

json regressor_to_json(const RkhsRegressor& r) {
  return {{"kernel", r.kernel.describe()},
          {"lambda", r.lambda},
          {"bias_appended", r.bias_appended},
          {"centers", matrix_to_json(r.centers)},
          {"coeffs", matrix_to_json(r.coeffs)}};
}

RkhsRegressor regressor_from_json(const json& j, const std::string& field) {
  RkhsRegressor r;
  r.kernel = parse_kernel(j.at("kernel").get<std::string>());
  if (r.kernel.is_auto()) throw ConfigError(field + ".kernel: unresolved gauss:auto");
  r.lambda = j.at("lambda").get<double>();
  r.bias_appended = j.at("bias_appended").get<bool>();
  r.centers = matrix_from_json(j.at("centers"), field + ".centers");
  r.coeffs = matrix_from_json(j.at("coeffs"), field + ".coeffs");
  if (r.centers.rows() != r.coeffs.rows()) throw ConfigError(field + ": centers/coeffs size mismatch");
  return r;
}

}  // namespace

std::string model_to_json(const ReducedModel& model) {
  const ReductionMap& map = model.map;
  json j;
  j["format"] = kFormat;
  j["system"] = model.system;
  j["dims"] = {{"n", model.n}, {"m", model.m}, {"p", model.p}, {"q", model.q}};
  j["reduction_map"] = {{"kernel", map.features.kernel.describe()},
                        {"hankel_values", vector_to_json(map.hankel_values)},
                        {"V_q", matrix_to_json(map.V_q)},
                        {"T_q", matrix_to_json(map.T_q)},
                        {"obs_samples", matrix_to_json(map.features.obs)},
                        {"row_means", vector_to_json(map.features.row_means)},
                        {"grand_mean", map.features.grand_mean}};
  j["f_hat"] = regressor_to_json(model.f_hat);
  j["h_hat"] = regressor_to_json(model.h_hat);
  if (const auto* t = std::get_if<TaylorJacobian>(&model.jac)) {
    j["jacobian"] = {{"kind", "taylor"},
                     {"a", vector_to_json(t->a)},
                     {"J_a", matrix_to_json(t->J_a)},
                     {"Pi_a", vector_to_json(t->Pi_a)}};
  } else {
    const auto& pj = std::get<PolyJacobian>(model.jac);
    j["jacobian"] = {{"kind", "poly"},
                     {"degree", pj.degree},
                     {"gram", matrix_to_json(pj.gram)},
                     {"weights", matrix_to_json(pj.weights)}};
  }
  return j.dump();
}

ReducedModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("model is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw ConfigError("model: unsupported format '" + j.at("format").get<std::string>() + "'");
    }
    const auto& dims = j.at("dims");
    const auto& rm = j.at("reduction_map");
    ReductionMap map;
    map.n = dims.at("n").get<int>();
    map.q = dims.at("q").get<int>();
    map.hankel_values = vector_from_json(rm.at("hankel_values"), "reduction_map.hankel_values");
    map.V_q = matrix_from_json(rm.at("V_q"), "reduction_map.V_q");
    map.T_q = matrix_from_json(rm.at("T_q"), "reduction_map.T_q");
    map.features.kernel = parse_kernel(rm.at("kernel").get<std::string>());
    map.features.obs = matrix_from_json(rm.at("obs_samples"), "reduction_map.obs_samples");
    map.features.row_means = vector_from_json(rm.at("row_means"), "reduction_map.row_means");
    map.features.grand_mean = rm.at("grand_mean").get<double>();
    if (map.T_q.cols() != map.q || map.T_q.rows() != map.features.obs.rows() ||
        map.features.obs.cols() != map.n || map.features.row_means.size() != map.T_q.rows()) {
      throw ConfigError("model: reduction map arrays have inconsistent shapes");
    }

    JacobianStrategy jac;
    const auto& jj = j.at("jacobian");
    const std::string kind = jj.at("kind").get<std::string>();
    if (kind == "taylor") {
      jac = TaylorJacobian{vector_from_json(jj.at("a"), "jacobian.a"),
                           matrix_from_json(jj.at("J_a"), "jacobian.J_a"),
                           vector_from_json(jj.at("Pi_a"), "jacobian.Pi_a")};
    } else if (kind == "poly") {
      jac = PolyJacobian{jj.at("degree").get<int>(), matrix_from_json(jj.at("gram"), "jacobian.gram"),
                         matrix_from_json(jj.at("weights"), "jacobian.weights")};
    } else {
      throw ConfigError("model: unknown jacobian kind '" + kind + "'");
    }
    ReducedModel model = assemble_model(j.at("system").get<std::string>(), std::move(map),
                                        regressor_from_json(j.at("f_hat"), "f_hat"),
                                        regressor_from_json(j.at("h_hat"), "h_hat"), std::move(jac),
                                        dims.at("m").get<int>());
    if (model.p != dims.at("p").get<int>()) throw ConfigError("model: output dimension mismatch");
    return model;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

}  // namespace rkbal
