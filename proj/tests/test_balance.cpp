#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "rkbal/balance.hpp"
#include "rkbal/sim.hpp"

using namespace rkbal;

namespace {

struct Fixture {
  SampleEnsemble ens;
  KernelMatrices mats;
  HankelSpectrum spec;
};

Fixture make(const ControlSystem& sys, const Kernel& k, int N = 150) {
  Fixture f;
  f.ens = collect_samples(sys, SimSettings{5.0, N, compatible_step(5.0, N, 1e-3)});
  f.mats = build_kernel_matrices(f.ens, k);
  f.spec = hankel_spectrum(f.mats);
  return f;
}

ControlSystem lti3() {
  Mat A(3, 3);
  A << -1, 0.5, 0, -0.2, -2, 0.3, 0, 0.1, -0.7;
  Mat B(3, 2);
  B << 1, 0, 0.5, 1, 0, -1;
  Mat C(2, 3);
  C << 1, 0, 1, 0, 1, -0.5;
  return linear_system(A, B, C);
}

}  // namespace

TEST_CASE("spectrum of small matrices") {
  Mat K(2, 2);
  K << 2, 0, 0, 1;
  const auto s = hankel_spectrum(K);
  CHECK(s.values(0) == doctest::Approx(2.0));
  CHECK(s.values(1) == doctest::Approx(1.0));
  CHECK(s.gram_values()(0) == doctest::Approx(4.0));
  CHECK(s.gram_values()(1) == doctest::Approx(1.0));
  CHECK(hankel_spectrum(Mat::Zero(3, 3)).values.norm() == 0.0);
  CHECK(numerical_rank(hankel_spectrum(Mat::Zero(3, 3)).values) == 0);
}

TEST_CASE("order selection") {
  Vec a(3), b(3), c(1);
  a << 100, 1, 0.5;
  b << 100, 90, 0.1;
  c << 5;
  CHECK(select_order(a, AutoOrder{10}) == 1);
  CHECK(select_order(b, AutoOrder{10}) == 2);
  CHECK(select_order(b, FixedOrder{3}) == 3);
  CHECK_THROWS_AS(select_order(c, FixedOrder{2}), std::invalid_argument);
  Vec flat(3);
  flat << 3, 2, 1;
  CHECK(select_order(flat, AutoOrder{10}) == 3);
  Vec tail(3);
  tail << 1, 1e-12, 1e-30;
  CHECK(select_order(tail, AutoOrder{10}) == 1);
}

TEST_CASE("transform from values and vectors") {
  HankelSpectrum s;
  s.values = Vec::Constant(1, 4.0);
  s.V = Mat::Identity(2, 1);
  ObsFeatureMap fm;
  fm.kernel = Kernel::linear();
  fm.obs = Points::Zero(2, 1);
  fm.row_means = Vec::Zero(2);
  const auto map = build_reduction_map(fm, s, 1, 1);
  CHECK(map.T_q(0, 0) == doctest::Approx(0.5));
  CHECK(map.T_q(1, 0) == 0.0);
}

TEST_CASE("spectrum invariants") {
  const auto f = make(system_2d(), Kernel::polynomial(3));
  const Vec& s = f.spec.values;
  for (Eigen::Index i = 0; i + 1 < s.size(); ++i) CHECK(s(i) >= s(i + 1));
  CHECK(s.minCoeff() >= 0.0);
  const int rank = numerical_rank(s);
  CHECK(rank >= 2);
  const Mat V = f.spec.V.leftCols(rank);
  CHECK((V.transpose() * V - Mat::Identity(rank, rank)).norm() <= 1e-10);

  for (int q = 1; q <= rank; ++q) {
    const auto map = build_reduction_map(f.mats, f.ens, f.spec, q);
    CHECK(map.reduce(Vec::Zero(2)).size() == q);
    const Mat lhs = map.T_q.transpose() * f.mats.K_oc * f.mats.K_oc.transpose() * map.T_q;
    const Mat rhs = s.head(q).asDiagonal();
    CHECK((lhs - rhs).norm() <= 1e-8 * rhs.norm());
  }
}

TEST_CASE("permuting samples keeps the spectrum") {
  auto f = make(system_2d(), Kernel::polynomial(3), 80);
  std::vector<int> perm(f.ens.obs.rows());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(1);
  std::shuffle(perm.begin(), perm.end(), rng);
  SampleEnsemble shuffled = f.ens;
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled.obs.row(i) = f.ens.obs.row(perm[i]);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled.ctrl.row(i) = f.ens.ctrl.row(perm[i]);
  const auto s2 = hankel_spectrum(build_kernel_matrices(shuffled, Kernel::polynomial(3)));
  const int r = numerical_rank(f.spec.values);
  CHECK((s2.values.head(r) - f.spec.values.head(r)).norm() <= 1e-10 * f.spec.values(0));
}

TEST_CASE("reduction map at training points") {
  const auto f = make(system_2d(), Kernel::polynomial(3));
  const auto map = build_reduction_map(f.mats, f.ens, f.spec, 2);
  for (Eigen::Index v = 0; v < f.ens.ctrl.rows(); v += 13) {
    const Vec expected = map.T_q.transpose() * f.mats.K_oc.col(v);
    CHECK((map.reduce(f.ens.ctrl.row(v).transpose()) - expected).norm() <=
          1e-10 * std::max(1.0, expected.norm()));
  }
  const Mat rows = map.reduce_rows(f.ens.ctrl.topRows(4));
  CHECK(rows.rows() == 4);
  CHECK(rows.cols() == 2);
}

TEST_CASE("reduction jacobian matches finite differences") {
  std::mt19937_64 rng(21);
  struct Case {
    ControlSystem sys;
    Kernel k;
    int q;
  };
  for (const auto& c : {Case{system_2d(), Kernel::polynomial(3), 1}, Case{system_2d(), Kernel::gaussian(4.0), 2},
                        Case{system_7d(), Kernel::polynomial(3), 2}, Case{lti3(), Kernel::linear(), 2}}) {
    const auto f = make(c.sys, c.k, 100);
    const auto map = build_reduction_map(f.mats, f.ens, f.spec, c.q);
    for (int t = 0; t < 50; ++t) {
      const Vec x = testing::random_vector(rng, c.sys.n, -0.5, 0.5);
      const Mat fd = testing::fd_jacobian([&](const Vec& z) { return map.reduce(z); }, x);
      const Mat J = jacobian_feature_map(map, x);
      CHECK((fd - J).norm() <= 1e-5 * std::max(J.norm(), 1e-8));
    }
  }
}

TEST_CASE("linear kernel jacobian is constant") {
  const auto f = make(lti3(), Kernel::linear(), 60);
  const auto map = build_reduction_map(f.mats, f.ens, f.spec, 2);
  std::mt19937_64 rng(8);
  const Mat J0 = map.jacobian(Vec::Zero(3));
  for (int t = 0; t < 5; ++t) CHECK((map.jacobian(testing::random_vector(rng, 3)) - J0).norm() <= 1e-12 * J0.norm());
}

TEST_CASE("identical observability samples collapse the map") {
  auto f = make(system_2d(), Kernel::polynomial(3), 40);
  SampleEnsemble flat = f.ens;
  flat.obs.rowwise() = f.ens.obs.row(3);
  const auto mats = build_kernel_matrices(flat, Kernel::polynomial(3));
  ObsFeatureMap fm = obs_feature_map(mats, flat);
  HankelSpectrum s;
  s.values = Vec::Ones(1);
  s.V = Mat::Zero(flat.obs.rows(), 1);
  s.V(0, 0) = 1.0;
  const auto map = build_reduction_map(fm, s, 1, 2);
  std::mt19937_64 rng(6);
  const Vec x = testing::random_vector(rng, 2);
  CHECK(map.reduce(x).norm() <= 1e-10);
  CHECK(map.jacobian(x).norm() <= 1e-10);
}

TEST_CASE("balancing rows reproduce the centered observability gram") {
  const auto f = make(lti3(), Kernel::linear(), 120);
  const int q = 2;
  const auto map = build_reduction_map(f.mats, f.ens, f.spec, q);
  // Explicit feature-space rows: the linear map Pi(x) = M_q (x - mean ctrl).
  const Mat D = f.ens.obs.rowwise() - f.ens.obs.colwise().mean();
  const Mat M_q = map.T_q.transpose() * D;
  const Mat G = map.T_q.transpose() * double_center(f.mats.K_o) * map.T_q;
  CHECK((M_q * M_q.transpose() - G).norm() <= 1e-8 * G.norm());
  CHECK((G - G.transpose()).norm() <= 1e-12 * G.norm());
  CHECK(Eigen::SelfAdjointEigenSolver<Mat>(G).eigenvalues().minCoeff() > 0.0);
  const RowVec mu = f.ens.ctrl.colwise().mean();
  std::mt19937_64 rng(3);
  const Vec x = testing::random_vector(rng, 3);
  CHECK((map.reduce(x) - M_q * (x - mu.transpose())).norm() <= 1e-10 * map.reduce(x).norm());
}

TEST_CASE("linear oracle against gramian products") {
  const auto f = make(lti3(), Kernel::linear(), 200);
  const Mat Gc = f.ens.ctrl.transpose() * f.ens.ctrl;
  const Mat Go = f.ens.obs.transpose() * f.ens.obs;
  Eigen::EigenSolver<Mat> eig(Go * Gc);
  Vec ev = eig.eigenvalues().real();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  const Vec raw = testing::nonzero_eigs(f.mats.K_oc_raw * f.mats.K_oc_raw.transpose());
  REQUIRE(raw.size() == 3);
  CHECK(testing::rel_err(raw, ev) <= 1e-6);
}

TEST_CASE("kernel pca") {
  std::mt19937_64 rng(17);
  const Points pts = testing::random_matrix(rng, 50, 2) * Mat(Eigen::Vector2d(2.0, 0.5).asDiagonal());
  const auto pca = kpca(pts, Kernel::linear(), 2);
  const Points Xc = pts.rowwise() - pts.colwise().mean();
  const Mat Cov = Xc.transpose() * Xc / 50.0;
  Vec ce = Eigen::SelfAdjointEigenSolver<Mat>(Cov).eigenvalues().reverse();
  CHECK((pca.eigvals.head(2) - ce).cwiseAbs().maxCoeff() <= 1e-10 * ce(0));
  const Mat Kc = double_center(gram(Kernel::linear(), pts));
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(pca.alphas.col(i).dot(Kc * pca.alphas.col(i)) - 1.0) <= 1e-10);
  }
  const auto g = kpca(pts, Kernel::gaussian(1.0), 3);
  const Mat Kg = double_center(gram(Kernel::gaussian(1.0), pts));
  for (int i = 0; i < 3; ++i) CHECK(std::abs(g.alphas.col(i).dot(Kg * g.alphas.col(i)) - 1.0) <= 1e-10);

  Points same = Points::Ones(6, 2);
  CHECK(kpca(same, Kernel::polynomial(2), 0).eigvals.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(kpca(same, Kernel::polynomial(2), 1), std::invalid_argument);

  // Projection of a training point equals the centered gram row times alpha.
  const Vec proj = pca.project(pts.row(4).transpose());
  const Vec expected = pca.alphas.transpose() * Kc.col(4);
  CHECK((proj - expected).norm() <= 1e-10 * std::max(1.0, expected.norm()));
}
