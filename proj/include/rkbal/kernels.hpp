#pragma once

#include <string>

#include "rkbal/types.hpp"

namespace rkbal {

/// Mercer kernel: linear <x,y>, polynomial (1 + <x,y>)^d, or Gaussian
/// exp(-gamma |x - y|^2). A Gaussian kernel may be left "auto" until the
/// training points are known (see resolve()).
class Kernel {
 public:
  enum class Family { Linear, Polynomial, Gaussian };

  static Kernel linear();
  static Kernel polynomial(int degree);
  /// gamma = 1 / sigma^2.
  static Kernel gaussian(double gamma);
  static Kernel gaussian_auto();

  Family family() const { return family_; }
  int degree() const { return degree_; }
  double gamma() const { return gamma_; }
  bool is_auto() const { return auto_gamma_; }

  double eval(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y) const;

  /// dK(x, y)/dx as a row vector.
  RowVec grad_x(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y) const;

  /// Fixes an automatic Gaussian scale from `points` (one per row); other
  /// kernels are returned unchanged.
  Kernel resolve(const Points& points) const;

  /// "linear", "poly:D", "gauss:GAMMA" or "gauss:auto".
  std::string describe() const;

 private:
  void require_resolved() const;

  Family family_ = Family::Linear;
  int degree_ = 1;
  double gamma_ = 0.0;
  bool auto_gamma_ = false;
};

/// Throws ConfigError on malformed text.
Kernel parse_kernel(const std::string& text);

/// Reciprocal of the mean squared distance over all unordered distinct pairs.
double mean_sq_distance_gamma(const Points& points);

/// Symmetric Gram matrix of the rows of `points`.
Mat gram(const Kernel& k, const Points& points);

/// Entry (i, j) = K(rows_i, cols_j).
Mat cross_gram(const Kernel& k, const Points& rows, const Points& cols);

/// Row i = K(x, points_i); size |points|.
Vec kernel_vector(const Kernel& k, const Points& points, const Eigen::Ref<const Vec>& x);

/// Row i = dK(x, points_i)/dx; shape |points| x dim.
Mat kernel_vector_jacobian(const Kernel& k, const Points& points, const Eigen::Ref<const Vec>& x);

}  // namespace rkbal
