#pragma once

#include <string>
#include <vector>

#include "rkbal/balance.hpp"

namespace rkbal {

/// Kernel expansion z -> sum_j c_j K(z, z_j), one coefficient column per
/// output coordinate. When `bias_appended` is set a constant 1 is appended to
/// every input before evaluating the kernel.
struct RkhsRegressor {
  Kernel kernel;
  Points centers;  // includes the bias column when bias_appended
  Mat coeffs;      // |centers| x out
  double lambda = 0.0;
  bool bias_appended = false;

  Eigen::Index input_dim() const { return centers.cols() - (bias_appended ? 1 : 0); }
  Eigen::Index output_dim() const { return coeffs.cols(); }

  Vec predict(const Eigen::Ref<const Vec>& z) const;
};

/// Appends a column of ones.
Points with_bias(const Points& inputs);

/// Solves (lambda m I + K) C = Y with m = |inputs|. Throws NumericalError for
/// a singular system.
RkhsRegressor fit(const Kernel& k, const Points& inputs, const Mat& targets, double lambda,
                  bool bias = false);

inline Vec predict(const RkhsRegressor& r, const Eigen::Ref<const Vec>& z) { return r.predict(z); }

struct LoocvResult {
  double lambda = 0.0;
  std::vector<double> cv_errors;  // mean squared LOO residual per grid entry, NaN if skipped
  std::vector<std::string> warnings;
};

/// Ten values log-spaced over [1e-10, 1] times the mean diagonal of `K`.
std::vector<double> default_lambda_grid(const Mat& K);

/// Closed-form leave-one-out residuals r_i = (y_i - yhat_i) / (1 - H_ii),
/// H = K (K + lambda m I)^{-1}, for one lambda.
Mat loocv_residuals(const Mat& K, const Mat& targets, double lambda);

/// Picks the grid entry with the smallest mean squared LOO residual. An empty
/// grid selects default_lambda_grid().
LoocvResult loocv_select(const Kernel& k, const Points& inputs, const Mat& targets,
                         std::vector<double> grid);

/// Fit + LOOCV in one go, sharing the eigendecomposition.
RkhsRegressor fit_cv(const Kernel& k, const Points& inputs, const Mat& targets,
                     const std::vector<double>& grid, bool bias, LoocvResult* report = nullptr);

enum class DynamicsTargets { TrueField, FiniteDifference };

/// Learns (Pi(x), u) -> f(x, u) on a recorded trajectory, with an appended
/// bias coordinate.
RkhsRegressor fit_dynamics(const ReductionMap& map, const ControlSystem& sys,
                           const Trajectory& train, const Kernel& k,
                           const std::vector<double>& grid,
                           DynamicsTargets targets = DynamicsTargets::TrueField,
                           LoocvResult* report = nullptr);

/// Learns Pi(x) -> y on a recorded trajectory.
RkhsRegressor fit_output(const ReductionMap& map, const Trajectory& train, const Kernel& k,
                         const std::vector<double>& grid, bool bias = false,
                         LoocvResult* report = nullptr);

}  // namespace rkbal
