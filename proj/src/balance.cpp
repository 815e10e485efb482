#include "rkbal/balance.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace rkbal {

HankelSpectrum hankel_spectrum(const Mat& K_oc) {
  if (K_oc.size() == 0) throw std::invalid_argument("hankel_spectrum: empty matrix");
  if (!K_oc.allFinite()) throw NumericalError("hankel_spectrum: non-finite Hankel kernel matrix");
  Eigen::BDCSVD<Mat> svd(K_oc, Eigen::ComputeThinU);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("hankel_spectrum: SVD failed to converge");
  }
  HankelSpectrum s;
  s.values = svd.singularValues();
  s.V = svd.matrixU();
  // Fix the sign of each singular vector so the output is reproducible
  // across decomposition routes: the largest-magnitude entry is positive.
  for (Eigen::Index j = 0; j < s.V.cols(); ++j) {
    Eigen::Index idx = 0;
    s.V.col(j).cwiseAbs().maxCoeff(&idx);
    if (s.V(idx, j) < 0) s.V.col(j) *= -1.0;
  }
  return s;
}

int numerical_rank(const Vec& values) {
  if (values.size() == 0 || !(values(0) > 0.0)) return 0;
  const double tol = kRankTolerance * values(0);
  int r = 0;
  while (r < values.size() && values(r) > tol) ++r;
  return r;
}

int select_order(const Vec& values, const OrderPolicy& policy) {
  if (values.size() == 0) throw std::invalid_argument("select_order: empty spectrum");
  const int rank = numerical_rank(values);
  if (const auto* fixed = std::get_if<FixedOrder>(&policy)) {
    if (fixed->q < 1) throw std::invalid_argument("select_order: order must be >= 1");
    if (fixed->q > rank) {
      throw std::invalid_argument("select_order: order " + std::to_string(fixed->q) +
                                  " exceeds the numerical rank " + std::to_string(rank));
    }
    return fixed->q;
  }
  const double ratio = std::get<AutoOrder>(policy).ratio;
  if (rank == 0) throw std::invalid_argument("select_order: spectrum has numerical rank 0");
  for (int q = 1; q < rank; ++q) {
    if (values(q - 1) / values(q) >= ratio) return q;
  }
  return rank;
}

Vec ReductionMap::reduce(const Eigen::Ref<const Vec>& x) const {
  if (x.size() != n) throw std::invalid_argument("reduce: dimension mismatch");
  return T_q.transpose() * features.eval(x);
}

Mat ReductionMap::reduce_rows(const Mat& states) const {
  Mat out(states.rows(), q);
  for (Eigen::Index i = 0; i < states.rows(); ++i) {
    out.row(i) = reduce(states.row(i).transpose()).transpose();
  }
  return out;
}

Mat ReductionMap::jacobian(const Eigen::Ref<const Vec>& x) const {
  if (x.size() != n) throw std::invalid_argument("jacobian_feature_map: dimension mismatch");
  return T_q.transpose() * features.jacobian(x);
}

Mat jacobian_feature_map(const ReductionMap& map, const Eigen::Ref<const Vec>& x) {
  return map.jacobian(x);
}

ReductionMap build_reduction_map(const ObsFeatureMap& features, const HankelSpectrum& spectrum,
                                 int q, int n) {
  const int rank = numerical_rank(spectrum.values);
  if (q < 1 || q > rank) {
    throw std::invalid_argument("build_reduction_map: order " + std::to_string(q) +
                                " outside 1.." + std::to_string(rank) + " (numerical rank)");
  }
  if (spectrum.V.rows() != features.size()) {
    throw std::invalid_argument("build_reduction_map: spectrum and feature map sizes differ");
  }
  ReductionMap map;
  map.hankel_values = spectrum.values;
  map.V_q = spectrum.V.leftCols(q);
  const Vec scale = spectrum.values.head(q).array().rsqrt();
  map.T_q = map.V_q * scale.asDiagonal();
  map.features = features;
  map.q = q;
  map.n = n;
  return map;
}

ReductionMap build_reduction_map(const KernelMatrices& mats, const SampleEnsemble& ens,
                                 const HankelSpectrum& spectrum, int q) {
  return build_reduction_map(obs_feature_map(mats, ens), spectrum, q, ens.n);
}

Vec KernelPca::project(const Eigen::Ref<const Vec>& x) const {
  Vec k = kernel_vector(kernel, points, x);
  const double mean = k.mean();
  k -= gram_row_means;
  k.array() += gram_mean - mean;
  return alphas.transpose() * k;
}

KernelPca kpca(const Points& points, const Kernel& k, int q) {
  KernelPca out;
  out.kernel = k.resolve(points);
  out.points = points;
  const Mat K = gram(out.kernel, points);
  out.gram_row_means = K.rowwise().mean();
  out.gram_mean = K.mean();
  const Mat Kc = double_center(K);
  Eigen::SelfAdjointEigenSolver<Mat> eig(Kc, q == 0 ? Eigen::EigenvaluesOnly : Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) throw NumericalError("kpca: eigensolver failed");
  const auto N = points.rows();
  // Eigen returns ascending order.
  const Vec mu = eig.eigenvalues().reverse();
  out.eigvals = (mu / static_cast<double>(N)).cwiseMax(0.0);
  const Vec clipped = mu.cwiseMax(0.0);
  const int rank = numerical_rank(clipped);
  if (q < 0 || q > rank) {
    throw std::invalid_argument("kpca: order " + std::to_string(q) + " exceeds rank " +
                                std::to_string(rank));
  }
  if (q == 0) {
    out.alphas = Mat::Zero(N, 0);
    return out;
  }
  const Mat U = eig.eigenvectors().rowwise().reverse();
  out.alphas = U.leftCols(q) * clipped.head(q).array().rsqrt().matrix().asDiagonal();
  return out;
}

}  // namespace rkbal
