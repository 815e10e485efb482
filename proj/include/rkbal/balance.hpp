#pragma once

#include <variant>

#include "rkbal/empirical.hpp"

namespace rkbal {

/// Relative threshold below which singular values count as zero.
inline constexpr double kRankTolerance = 1e-10;

struct HankelSpectrum {
  Vec values;  // singular values of the centered Hankel kernel matrix, descending
  Mat V;       // left singular vectors, one per column

  /// sigma_i(K_oc^T K_oc) = sigma_i(K_oc)^2.
  Vec gram_values() const { return values.array().square(); }
};

HankelSpectrum hankel_spectrum(const Mat& K_oc);
inline HankelSpectrum hankel_spectrum(const KernelMatrices& mats) { return hankel_spectrum(mats.K_oc); }

/// Number of values above kRankTolerance * values(0).
int numerical_rank(const Vec& values);

struct AutoOrder {
  double ratio = 10.0;
};
struct FixedOrder {
  int q = 1;
};
using OrderPolicy = std::variant<AutoOrder, FixedOrder>;

/// Auto: smallest q with values(q-1)/values(q) >= ratio among indices whose
/// trailing value is above the rank threshold, else the numerical rank.
/// Fixed: q itself; throws std::invalid_argument if q exceeds the rank.
int select_order(const Vec& values, const OrderPolicy& policy);

/// x -> T_q^T k~_o(x) with T_q = V_q Sigma_q^{-1/2}.
struct ReductionMap {
  Vec hankel_values;
  Mat V_q;  // M x q
  Mat T_q;  // M x q
  ObsFeatureMap features;
  int q = 0;
  int n = 0;

  Vec reduce(const Eigen::Ref<const Vec>& x) const;
  /// Reduces every row of `states`; result is |states| x q.
  Mat reduce_rows(const Mat& states) const;
  /// Jacobian of reduce() at x, q x n.
  Mat jacobian(const Eigen::Ref<const Vec>& x) const;
};

ReductionMap build_reduction_map(const ObsFeatureMap& features, const HankelSpectrum& spectrum,
                                 int q, int n);
ReductionMap build_reduction_map(const KernelMatrices& mats, const SampleEnsemble& ens,
                                 const HankelSpectrum& spectrum, int q);

/// Same as ReductionMap::reduce; kept as a free function for symmetry with
/// the other pipeline stages.
inline Vec reduce(const ReductionMap& map, const Eigen::Ref<const Vec>& x) { return map.reduce(x); }
Mat jacobian_feature_map(const ReductionMap& map, const Eigen::Ref<const Vec>& x);

/// Kernel PCA on doubly centered data.
struct KernelPca {
  Vec eigvals;  // covariance eigenvalues (Gram eigenvalue / N), descending
  Mat alphas;   // N x q, scaled so that alpha^T K~ alpha = 1
  Points points;
  Kernel kernel;
  Vec gram_row_means;
  double gram_mean = 0.0;

  Vec project(const Eigen::Ref<const Vec>& x) const;
};

/// q = 0 computes eigenvalues only.
KernelPca kpca(const Points& points, const Kernel& k, int q);

}  // namespace rkbal
