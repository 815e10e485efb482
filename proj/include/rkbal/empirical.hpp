#pragma once

#include <utility>

#include "rkbal/kernels.hpp"
#include "rkbal/sim.hpp"

namespace rkbal {

/// Gramian samples. Rows are linearly indexed time-outer, channel-inner:
/// row i*m + j of `ctrl` is the state at t_{i+1} of the response to an
/// impulse on input j+1; row i*p + j of `obs` is d_{j+1}(t_{i+1}), the value
/// of output j+1 at t_{i+1} stacked across the n unit initial conditions.
struct SampleEnsemble {
  Points ctrl;  // (N m) x n
  Points obs;   // (N p) x n
  int N = 0;
  int n = 0;
  int m = 0;
  int p = 0;
  double horizon = 0.0;
};

SampleEnsemble collect_samples(const ControlSystem& sys, const SimSettings& settings);

/// Assembles an ensemble from already simulated responses.
SampleEnsemble assemble_samples(const std::vector<Trajectory>& impulse,
                                const std::vector<Trajectory>& initial, double horizon);

/// Centered empirical observability feature map
/// x -> k_o(x) - r - mean(k_o(x)) 1 + g 1, where r holds the row means and g
/// the grand mean of the raw Hankel kernel matrix.
struct ObsFeatureMap {
  Kernel kernel;
  Points obs;
  Vec row_means;
  double grand_mean = 0.0;

  Eigen::Index size() const { return obs.rows(); }
  Vec eval(const Eigen::Ref<const Vec>& x) const;
  /// Derivative of eval(): the centering projector applied to the rows
  /// dK(x, d_mu)/dx. Shape M x n.
  Mat jacobian(const Eigen::Ref<const Vec>& x) const;
};

struct KernelMatrices {
  Mat K_c;       // (N m) x (N m)
  Mat K_o;       // (N p) x (N p)
  Mat K_oc_raw;  // (N p) x (N m)
  Mat K_oc;      // doubly centered K_oc_raw
  Vec row_means;
  Vec col_means;
  double grand_mean = 0.0;
  Kernel kernel;
};

/// Subtracts row and column means and adds back the grand mean.
Mat double_center(const Mat& K);

KernelMatrices build_kernel_matrices(const SampleEnsemble& ens, const Kernel& k);

ObsFeatureMap obs_feature_map(const KernelMatrices& mats, const SampleEnsemble& ens);

Vec feature_map_obs(const KernelMatrices& mats, const SampleEnsemble& ens,
                    const Eigen::Ref<const Vec>& x);

/// Scaled empirical Gramians (T/(mN)) sum X X^T and (T/(pN)) sum d d^T.
std::pair<Mat, Mat> empirical_linear_gramians(const SampleEnsemble& ens);

}  // namespace rkbal
