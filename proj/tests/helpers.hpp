#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "rkbal/types.hpp"

namespace testing {

using rkbal::Mat;
using rkbal::Vec;

inline Mat random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Mat out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = dist(rng);
  return out;
}

inline Vec random_vector(std::mt19937_64& rng, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
  return random_matrix(rng, n, 1, lo, hi);
}

// Central differences of a vector function, one column per coordinate of x.
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& x, double step = 1e-6) {
  const Vec f0 = fn(x);
  Mat J(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vec xp = x, xm = x;
    xp(j) += step;
    xm(j) -= step;
    J.col(j) = (fn(xp) - fn(xm)) / (2.0 * step);
  }
  return J;
}

inline double rel_err(const Mat& a, const Mat& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

// Nonzero eigenvalues of a symmetric matrix, descending.
inline Vec nonzero_eigs(const Mat& S, double rel_tol = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (S + S.transpose()));
  Vec ev = eig.eigenvalues().reverse();
  const double top = ev.cwiseAbs().maxCoeff();
  Eigen::Index k = 0;
  while (k < ev.size() && ev(k) > rel_tol * top) ++k;
  return ev.head(k);
}

}  // namespace testing
