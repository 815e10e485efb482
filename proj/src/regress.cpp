#include "rkbal/regress.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rkbal {

namespace {

struct GramEigen {
  Vec values;  // clipped at zero
  Mat vectors;
};

GramEigen decompose(const Mat& K) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(K);
  if (eig.info() != Eigen::Success) throw NumericalError("regression: eigensolver failed");
  return {eig.eigenvalues().cwiseMax(0.0), eig.eigenvectors()};
}

// Mean squared closed-form LOO residual; NaN when some leverage equals one.
Mat residuals_from_eigen(const GramEigen& ge, const Mat& Y, double lambda, bool* degenerate) {
  const auto m = static_cast<double>(Y.rows());
  const double ridge = lambda * m;
  const Vec shrink = ge.values.array() / (ge.values.array() + ridge);
  const Mat QtY = ge.vectors.transpose() * Y;
  const Mat Yhat = ge.vectors * (shrink.asDiagonal() * QtY);
  const Vec H = ge.vectors.array().square().matrix() * shrink;
  Mat r = Y - Yhat;
  *degenerate = false;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    const double denom = 1.0 - H(i);
    if (!(std::abs(denom) > 1e-12)) {
      *degenerate = true;
      r.row(i).setConstant(std::numeric_limits<double>::quiet_NaN());
    } else {
      r.row(i) /= denom;
    }
  }
  return r;
}

void check_training_set(const Points& inputs, const Mat& targets) {
  if (inputs.rows() < 1) throw std::invalid_argument("fit: no training points");
  if (inputs.rows() != targets.rows()) {
    throw std::invalid_argument("fit: inputs and targets have different lengths");
  }
}

}  // namespace

Points with_bias(const Points& inputs) {
  Points out(inputs.rows(), inputs.cols() + 1);
  out.leftCols(inputs.cols()) = inputs;
  out.col(inputs.cols()).setOnes();
  return out;
}

Vec RkhsRegressor::predict(const Eigen::Ref<const Vec>& z) const {
  if (z.size() != input_dim()) {
    throw std::invalid_argument("predict: input dimension " + std::to_string(z.size()) +
                                ", expected " + std::to_string(input_dim()));
  }
  if (!bias_appended) return coeffs.transpose() * kernel_vector(kernel, centers, z);
  Vec za(z.size() + 1);
  za.head(z.size()) = z;
  za(z.size()) = 1.0;
  return coeffs.transpose() * kernel_vector(kernel, centers, za);
}

RkhsRegressor fit(const Kernel& k, const Points& inputs, const Mat& targets, double lambda,
                  bool bias) {
  check_training_set(inputs, targets);
  if (!(lambda >= 0.0)) throw std::invalid_argument("fit: lambda must be >= 0");
  RkhsRegressor r;
  r.centers = bias ? with_bias(inputs) : inputs;
  r.kernel = k.resolve(r.centers);
  r.lambda = lambda;
  r.bias_appended = bias;

  const auto m = r.centers.rows();
  Mat A = gram(r.kernel, r.centers);
  A.diagonal().array() += lambda * static_cast<double>(m);
  Eigen::LDLT<Mat> ldlt(A);
  const Vec pivots = ldlt.vectorD().cwiseAbs();
  const bool singular =
      ldlt.info() != Eigen::Success ||
      (lambda == 0.0 && (pivots.minCoeff() <= 1e-13 * pivots.maxCoeff() || ldlt.rcond() < 1e-13));
  if (singular) {
    throw NumericalError("fit: kernel system is singular; use lambda > 0");
  }
  Mat C = ldlt.solve(targets);
  for (int it = 0; it < 2; ++it) C += ldlt.solve(targets - A * C);
  if (!C.allFinite()) throw NumericalError("fit: non-finite coefficients; use lambda > 0");
  r.coeffs = std::move(C);
  return r;
}

std::vector<double> default_lambda_grid(const Mat& K) {
  const double scale = K.diagonal().mean();
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(scale * std::pow(10.0, -10.0 + 10.0 * i / 9.0));
  return grid;
}

Mat loocv_residuals(const Mat& K, const Mat& targets, double lambda) {
  bool degenerate = false;
  return residuals_from_eigen(decompose(K), targets, lambda, &degenerate);
}

namespace {

LoocvResult select_from_eigen(const GramEigen& ge, const Mat& Y, const std::vector<double>& grid) {
  LoocvResult res;
  double best = std::numeric_limits<double>::infinity();
  for (double lambda : grid) {
    bool degenerate = false;
    const Mat r = residuals_from_eigen(ge, Y, lambda, &degenerate);
    if (degenerate) {
      std::ostringstream os;
      os << "loocv: lambda " << lambda << " skipped (leverage equals one)";
      res.warnings.push_back(os.str());
      res.cv_errors.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double err = r.squaredNorm() / static_cast<double>(r.size());
    res.cv_errors.push_back(err);
    if (err < best) {
      best = err;
      res.lambda = lambda;
    }
  }
  if (!std::isfinite(best)) throw NumericalError("loocv: every lambda in the grid was degenerate");
  return res;
}

}  // namespace

LoocvResult loocv_select(const Kernel& k, const Points& inputs, const Mat& targets,
                         std::vector<double> grid) {
  check_training_set(inputs, targets);
  if (inputs.rows() < 2) throw std::invalid_argument("loocv: need at least two training points");
  const Mat K = gram(k.resolve(inputs), inputs);
  if (grid.empty()) grid = default_lambda_grid(K);
  if (grid.size() == 1) {
    LoocvResult res;
    res.lambda = grid.front();
    bool degenerate = false;
    const Mat r = residuals_from_eigen(decompose(K), targets, grid.front(), &degenerate);
    res.cv_errors.push_back(degenerate ? std::numeric_limits<double>::quiet_NaN()
                                       : r.squaredNorm() / static_cast<double>(r.size()));
    return res;
  }
  return select_from_eigen(decompose(K), targets, grid);
}

RkhsRegressor fit_cv(const Kernel& k, const Points& inputs, const Mat& targets,
                     const std::vector<double>& grid, bool bias, LoocvResult* report) {
  check_training_set(inputs, targets);
  const Points centers = bias ? with_bias(inputs) : inputs;
  const LoocvResult sel = loocv_select(k.resolve(centers), centers, targets, grid);
  if (report) *report = sel;
  return fit(k, inputs, targets, sel.lambda, bias);
}

RkhsRegressor fit_dynamics(const ReductionMap& map, const ControlSystem& sys,
                           const Trajectory& train, const Kernel& k,
                           const std::vector<double>& grid, DynamicsTargets targets,
                           LoocvResult* report) {
  if (train.states.cols() != sys.n || train.inputs.cols() != sys.m) {
    throw std::invalid_argument("fit_dynamics: trajectory does not match the system");
  }
  const Eigen::Index rows =
      targets == DynamicsTargets::TrueField ? train.size() : train.size() - 1;
  if (rows < 2) throw std::invalid_argument("fit_dynamics: trajectory too short");
  Points inputs(rows, map.q + sys.m);
  Mat Y(rows, sys.n);
  for (Eigen::Index j = 0; j < rows; ++j) {
    const Vec x = train.states.row(j).transpose();
    const Vec u = train.inputs.row(j).transpose();
    inputs.row(j).head(map.q) = map.reduce(x).transpose();
    inputs.row(j).tail(sys.m) = u.transpose();
    if (targets == DynamicsTargets::TrueField) {
      Y.row(j) = sys.dynamics(x, u).transpose();
    } else {
      const double dt = train.times(j + 1) - train.times(j);
      Y.row(j) = (train.states.row(j + 1) - train.states.row(j)) / dt;
    }
  }
  return fit_cv(k, inputs, Y, grid, true, report);
}

RkhsRegressor fit_output(const ReductionMap& map, const Trajectory& train, const Kernel& k,
                         const std::vector<double>& grid, bool bias, LoocvResult* report) {
  if (train.states.cols() != map.n) {
    throw std::invalid_argument("fit_output: trajectory does not match the reduction map");
  }
  return fit_cv(k, map.reduce_rows(train.states), train.outputs, grid, bias, report);
}

}  // namespace rkbal
