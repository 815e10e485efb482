#include "rkbal/empirical.hpp"

namespace rkbal {

SampleEnsemble assemble_samples(const std::vector<Trajectory>& impulse,
                                const std::vector<Trajectory>& initial, double horizon) {
  if (impulse.empty() || initial.empty()) {
    throw std::invalid_argument("assemble_samples: no trajectories");
  }
  SampleEnsemble ens;
  ens.m = static_cast<int>(impulse.size());
  ens.n = static_cast<int>(initial.size());
  ens.N = static_cast<int>(impulse.front().size());
  ens.p = static_cast<int>(initial.front().outputs.cols());
  ens.horizon = horizon;
  if (impulse.front().states.cols() != ens.n) {
    throw std::invalid_argument("assemble_samples: need one initial-condition run per state");
  }
  ens.ctrl.resize(static_cast<Eigen::Index>(ens.N) * ens.m, ens.n);
  ens.obs.resize(static_cast<Eigen::Index>(ens.N) * ens.p, ens.n);
  for (int i = 0; i < ens.N; ++i) {
    for (int j = 0; j < ens.m; ++j) {
      ens.ctrl.row(static_cast<Eigen::Index>(i) * ens.m + j) = impulse[j].states.row(i);
    }
    for (int j = 0; j < ens.p; ++j) {
      auto row = ens.obs.row(static_cast<Eigen::Index>(i) * ens.p + j);
      for (int k = 0; k < ens.n; ++k) row(k) = initial[k].outputs(i, j);
    }
  }
  return ens;
}

SampleEnsemble collect_samples(const ControlSystem& sys, const SimSettings& settings) {
  return assemble_samples(impulse_responses(sys, settings), output_responses(sys, settings),
                          settings.horizon);
}

Vec ObsFeatureMap::eval(const Eigen::Ref<const Vec>& x) const {
  Vec k = kernel_vector(kernel, obs, x);
  const double mean = k.mean();
  k -= row_means;
  k.array() += grand_mean - mean;
  return k;
}

Mat ObsFeatureMap::jacobian(const Eigen::Ref<const Vec>& x) const {
  Mat J = kernel_vector_jacobian(kernel, obs, x);
  J.rowwise() -= J.colwise().mean();
  return J;
}

Mat double_center(const Mat& K) {
  const Vec r = K.rowwise().mean();
  const RowVec c = K.colwise().mean();
  const double g = K.mean();
  Mat out = K;
  out.colwise() -= r;
  out.rowwise() -= c;
  out.array() += g;
  return out;
}

KernelMatrices build_kernel_matrices(const SampleEnsemble& ens, const Kernel& k) {
  if (ens.ctrl.rows() == 0 || ens.obs.rows() == 0) {
    throw std::invalid_argument("build_kernel_matrices: empty ensemble");
  }
  KernelMatrices mats;
  mats.kernel = k.resolve(ens.ctrl);
  mats.K_c = gram(mats.kernel, ens.ctrl);
  mats.K_o = gram(mats.kernel, ens.obs);
  mats.K_oc_raw = cross_gram(mats.kernel, ens.obs, ens.ctrl);
  mats.row_means = mats.K_oc_raw.rowwise().mean();
  mats.col_means = mats.K_oc_raw.colwise().mean().transpose();
  mats.grand_mean = mats.K_oc_raw.mean();
  mats.K_oc = double_center(mats.K_oc_raw);
  return mats;
}

ObsFeatureMap obs_feature_map(const KernelMatrices& mats, const SampleEnsemble& ens) {
  return ObsFeatureMap{mats.kernel, ens.obs, mats.row_means, mats.grand_mean};
}

Vec feature_map_obs(const KernelMatrices& mats, const SampleEnsemble& ens,
                    const Eigen::Ref<const Vec>& x) {
  if (x.size() != ens.n) throw std::invalid_argument("feature_map_obs: dimension mismatch");
  return obs_feature_map(mats, ens).eval(x);
}

std::pair<Mat, Mat> empirical_linear_gramians(const SampleEnsemble& ens) {
  if (ens.ctrl.rows() == 0 || ens.obs.rows() == 0) {
    throw std::invalid_argument("empirical_linear_gramians: empty ensemble");
  }
  const Mat Wc = (ens.horizon / (static_cast<double>(ens.m) * ens.N)) * (ens.ctrl.transpose() * ens.ctrl);
  const Mat Wo = (ens.horizon / (static_cast<double>(ens.p) * ens.N)) * (ens.obs.transpose() * ens.obs);
  return {Wc, Wo};
}

}  // namespace rkbal
