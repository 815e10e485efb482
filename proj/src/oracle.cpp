#include <algorithm>
#include <random>

#include "json_util.hpp"
#include "rkbal/pipeline.hpp"

namespace rkbal {

namespace {

// Eigenvalues of a general matrix with real spectrum, descending.
Vec real_eigenvalues_desc(const Mat& M) {
  Eigen::EigenSolver<Mat> es(M, false);
  Vec ev = es.eigenvalues().real();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  return ev;
}

// Max relative deviation over the reference values above 1e-10 * max.
double relative_deviation(const Vec& computed, const Vec& reference) {
  double worst = 0.0;
  const double floor = 1e-10 * reference.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < reference.size(); ++i) {
    if (std::abs(reference(i)) <= floor) continue;
    const double c = i < computed.size() ? computed(i) : 0.0;
    worst = std::max(worst, std::abs(c - reference(i)) / std::abs(reference(i)));
  }
  return worst;
}

OracleCheck check(std::string name, double residual, double tol) {
  return OracleCheck{std::move(name), residual, tol, residual <= tol};
}

Points centered(const Points& P) { return P.rowwise() - P.colwise().mean(); }

Vec singular_values(const Mat& K) { return Eigen::BDCSVD<Mat>(K).singularValues(); }

}  // namespace

bool OracleReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
}

LinearSystem random_stable_lti(int n, int m, int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](int r, int c) {
    Mat M(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) M(i, j) = normal(rng);
    return M;
  };
  const Mat R = draw(n, n);
  const Mat W = draw(n, n);
  // Symmetric part <= -0.5 I keeps every eigenvalue's real part <= -0.5.
  const Mat A = -(R * R.transpose() / n + 0.5 * Mat::Identity(n, n)) + 0.5 * (W - W.transpose());
  return LinearSystem(A, draw(n, m), draw(p, n));
}

OracleReport run_oracle(const PipelineConfig& config) {
  const LinearSystem lti = config.system == "linear" && config.A
                               ? LinearSystem(*config.A, *config.B, *config.C)
                               : random_stable_lti(3, 2, 2, config.seed);
  const ControlSystem sys = lti.to_control_system();
  const SimSettings s =
      effective_settings(config.sampling.horizon, config.sampling.samples, config.sampling.step);
  const SampleEnsemble ens = collect_samples(sys, s);
  const KernelMatrices mats = build_kernel_matrices(ens, Kernel::linear());

  OracleReport report;
  const auto n = ens.n;

  // Raw Hankel kernel matrix against the unscaled Gramian sums.
  const Vec raw_sigma = singular_values(mats.K_oc_raw);
  const Mat Gc = ens.ctrl.transpose() * ens.ctrl;
  const Mat Go = ens.obs.transpose() * ens.obs;
  const Vec prod_eig = real_eigenvalues_desc(Go * Gc);
  report.checks.push_back(check("kernel_vs_gramian_product",
                                relative_deviation(raw_sigma.head(n).array().square(), prod_eig), 1e-6));

  // Classical empirical Hankel values after the (T/mN)(T/pN) scaling.
  const auto [Wc, Wo] = empirical_linear_gramians(ens);
  const Vec classical = real_eigenvalues_desc(Wo * Wc).cwiseMax(0.0).cwiseSqrt();
  const double scale = ens.horizon / (ens.N * std::sqrt(static_cast<double>(ens.m) * ens.p));
  report.checks.push_back(check("classical_hankel_values",
                                relative_deviation(scale * raw_sigma.head(n), classical), 1e-6));

  // Centered kernel matrix against centered sample sums.
  const Points Xc = centered(ens.ctrl), Dc = centered(ens.obs);
  const Vec centered_sigma = singular_values(mats.K_oc);
  const Vec centered_eig = real_eigenvalues_desc((Dc.transpose() * Dc) * (Xc.transpose() * Xc));
  report.checks.push_back(check("centered_kernel_vs_covariance_product",
                                relative_deviation(centered_sigma.head(n).array().square(), centered_eig),
                                1e-6));

  // Kernel PCA with the linear kernel against covariance PCA.
  const KernelPca pca = kpca(ens.ctrl, Kernel::linear(), 0);
  const Mat cov = Xc.transpose() * Xc / static_cast<double>(ens.ctrl.rows());
  Eigen::SelfAdjointEigenSolver<Mat> ce(cov);
  const Vec cov_eig = ce.eigenvalues().reverse();
  const double kpca_err = (pca.eigvals.head(n) - cov_eig).cwiseAbs().maxCoeff() / cov_eig(0);
  report.checks.push_back(check("kpca_vs_covariance_pca", kpca_err, 1e-10));
  return report;
}

std::string oracle_report_json(const OracleReport& report) {
  nlohmann::json j;
  j["passed"] = report.all_passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back(
        {{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  }
  return j.dump(2);
}

}  // namespace rkbal
