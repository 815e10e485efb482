#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "rkbal/pipeline.hpp"

using namespace rkbal;

namespace {

PipelineConfig small_config() {
  PipelineConfig c;
  c.sampling = SimSettings{5.0, 150, 1e-3};
  c.train_dynamics.samples = 200;
  c.train_output.samples = 200;
  c.evaluation.samples = 200;
  return c;
}

}  // namespace

TEST_CASE("defaults reproduce the reference protocol") {
  const PipelineConfig c;
  CHECK(c.system == "2d");
  CHECK(c.kernel == "poly:3");
  CHECK(c.dyn_kernel == "poly:3");
  CHECK(c.out_kernel == "gauss:auto");
  CHECK(c.sampling.horizon == 5.0);
  CHECK(c.sampling.samples == 800);
  CHECK(c.sampling.step == 1e-3);
  CHECK(c.train_dynamics.input == "square:10:1");
  CHECK(c.train_dynamics.samples == 1000);
  CHECK(c.train_output.input == "square:10:2");
  CHECK(c.train_output.samples == 700);
  CHECK(c.evaluation.input == "test");
  CHECK(c.jacobian == "taylor");
  CHECK(std::get<AutoOrder>(parse_order(c.order)).ratio == 10.0);
}

TEST_CASE("config json") {
  const auto c = config_from_json(R"({"system": "7d", "order": 2, "sampling": {"samples": 400}})");
  CHECK(c.system == "7d");
  CHECK(c.order == "2");
  CHECK(c.sampling.samples == 400);
  CHECK(c.sampling.horizon == 5.0);
  const auto back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));

  const auto lin = config_from_json(
      R"({"system": {"linear": {"A": [[-1, 0], [0, -2]], "B": [[1], [0]], "C": [[1, 1]]}}})");
  CHECK(lin.system == "linear");
  CHECK(make_system(lin).n == 2);
  CHECK(make_system(lin).p == 1);
  CHECK(config_from_json(config_to_json(lin)).A->isApprox(*lin.A));
}

TEST_CASE("config errors name the field") {
  auto message = [](const std::string& text) {
    try {
      config_from_json(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"kernel": "poly:x"})").find("kernel") != std::string::npos);
  CHECK(message(R"({"sampling": {"samples": "many"}})").find("sampling.samples") != std::string::npos);
  CHECK(message(R"({"order": "big"})").find("order") != std::string::npos);
  CHECK(message(R"({"system": "9d"})").find("9d") != std::string::npos);
  CHECK(message(R"({"jacobian": "exact"})").find("jacobian") != std::string::npos);
  CHECK(message(R"({"system": {"linear": {"A": [[1]], "B": [[1]], "C": [[1]]}}})").find("system") !=
        std::string::npos);
  CHECK(message("{\"kernel\":\n  poly}").find("line 2") != std::string::npos);
  CHECK(message("[1, 2]") != "");
}

TEST_CASE("order parsing") {
  CHECK(std::get<AutoOrder>(parse_order("auto")).ratio == 10.0);
  CHECK(std::get<AutoOrder>(parse_order("auto:50")).ratio == 50.0);
  CHECK(std::get<FixedOrder>(parse_order("3")).q == 3);
  CHECK_THROWS_AS(parse_order("0"), ConfigError);
  CHECK_THROWS_AS(parse_order("auto:0.5"), ConfigError);
}

TEST_CASE("spectrum csv") {
  const auto spec = run_spectrum(small_config());
  std::ostringstream os;
  write_spectrum_csv(os, spec);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,sigma_Koc,sigma_KocT_Koc");
  std::getline(in, line);
  CHECK(line.rfind("1,", 0) == 0);
  const std::string text = os.str();
  const auto lines = std::count(text.begin(), text.end(), '\n');
  CHECK(lines == 1 + std::min(100, numerical_rank(spec.values)));
}

TEST_CASE("zero system spectrum") {
  PipelineConfig c = small_config();
  c.system = "linear";
  c.A = -Mat::Identity(2, 2);
  c.B = Mat::Zero(2, 1);
  c.C = Mat::Zero(1, 2);
  c.kernel = "linear";
  CHECK(run_spectrum(c).values.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("reduce, serialize and compare") {
  const auto c = small_config();
  ReduceReport rep;
  const auto model = run_reduce(c, &rep);
  CHECK(model.q == 1);
  CHECK(rep.q == 1);
  const std::string text = model_to_json(model);
  const auto back = model_from_json(text);
  CHECK(model_to_json(back) == text);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const Vec xr = testing::random_vector(rng, 1, -0.2, 0.2);
    const Vec u = testing::random_vector(rng, 1);
    const Vec a = model.closed_rhs(xr, u), b = back.closed_rhs(xr, u);
    CHECK((a - b).norm() <= 1e-12 * std::max(1.0, a.norm()));
    CHECK((model.output(xr) - back.output(xr)).norm() <= 1e-12);
  }
  CHECK(model_to_json(run_reduce(c)) == text);

  const auto r = run_compare(model, c);
  CHECK(r.full.size() == c.evaluation.samples);
  CHECK(r.peak > 0.0);
  CHECK(std::isfinite(r.relative_rmse));
  const auto self = output_error(r.full, r.full);
  CHECK(self.rmse == 0.0);
  std::ostringstream os;
  write_compare_csv(os, r);
  CHECK(os.str().rfind("t,y_full,y_reduced\n", 0) == 0);

  PipelineConfig other = c;
  other.system = "7d";
  CHECK_THROWS_AS(run_compare(model, other), std::invalid_argument);
}

TEST_CASE("poly jacobian model round trip") {
  auto c = small_config();
  c.jacobian = "poly";
  const auto model = run_reduce(c);
  const auto back = model_from_json(model_to_json(model));
  const Vec xr = Vec::Constant(1, 0.05), u = Vec::Constant(1, 0.2);
  CHECK((model.closed_rhs(xr, u) - back.closed_rhs(xr, u)).norm() <= 1e-12);
}

TEST_CASE("malformed model documents") {
  CHECK_THROWS_AS(model_from_json("{}"), ConfigError);
  CHECK_THROWS_AS(model_from_json("not json"), ConfigError);
  const auto model = run_reduce(small_config());
  auto j = nlohmann::json::parse(model_to_json(model));
  j["reduction_map"]["T_q"] = {{1.0}};
  CHECK_THROWS_AS(model_from_json(j.dump()), ConfigError);
  j = nlohmann::json::parse(model_to_json(model));
  j["f_hat"]["coeffs"] = "none";
  CHECK_THROWS_AS(model_from_json(j.dump()), ConfigError);
}

TEST_CASE("stage errors name the stage") {
  auto c = small_config();
  c.order = "40";
  try {
    run_reduce(c);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).rfind("select_order:", 0) == 0);
    CHECK(std::string(e.what()).find("rank") != std::string::npos);
  }
}

TEST_CASE("simulate") {
  const auto tr = run_simulate(small_config());
  CHECK(tr.size() == 200);
  CHECK(tr.states.cols() == 2);
}

TEST_CASE("oracle") {
  PipelineConfig c;
  c.sampling = SimSettings{5.0, 200, 1e-3};
  const auto report = run_oracle(c);
  CHECK(report.checks.size() == 4);
  for (const auto& check : report.checks) {
    CAPTURE(check.name);
    CHECK(check.passed);
  }
  CHECK(report.all_passed());
  CHECK(oracle_report_json(report).find("kpca_vs_covariance_pca") != std::string::npos);
  const auto sys = random_stable_lti(4, 2, 3, 5);
  Eigen::EigenSolver<Mat> eig(sys.A());
  CHECK(eig.eigenvalues().real().maxCoeff() <= -0.5 + 1e-12);
}
