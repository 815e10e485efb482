#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rkbal/regress.hpp"

namespace rkbal {

/// First-order expansion of the reduction map about `a`, frozen for the
/// whole simulation.
struct TaylorJacobian {
  Vec a;
  Mat J_a;   // q x n
  Vec Pi_a;  // q
};

/// Closed-form Jacobian at the minimum-norm feature-space preimage, valid for
/// polynomial balancing kernels.
struct PolyJacobian {
  int degree = 1;
  Mat gram;     // T_q^T K~_o T_q, q x q
  Mat weights;  // row i = (T_q^T K~_o T_q)^{-1} Pi(d_i), M x q
};

using JacobianStrategy = std::variant<TaylorJacobian, PolyJacobian>;

TaylorJacobian make_taylor(const ReductionMap& map, const Eigen::Ref<const Vec>& a);

/// Throws std::invalid_argument unless the map uses a polynomial kernel, and
/// NumericalError when T_q^T K~_o T_q is singular.
PolyJacobian make_poly(const ReductionMap& map);

/// Moore-Penrose pseudo-inverse with relative rank tolerance kRankTolerance.
Mat pseudo_inverse(const Mat& A);

/// a + J_Pi(a)^+ (x_r - Pi(a)). Returns `a` and sets *warning when the
/// Jacobian vanishes.
Vec taylor_pseudoinverse(const TaylorJacobian& t, const Eigen::Ref<const Vec>& x_r,
                         std::string* warning = nullptr);

Mat poly_jacobian_at_preimage(const PolyJacobian& pj, const ReductionMap& map,
                              const Eigen::Ref<const Vec>& x_r);

struct ReducedModel {
  std::string system;
  ReductionMap map;
  RkhsRegressor f_hat;  // (x_r, u) -> R^n
  RkhsRegressor h_hat;  // x_r -> R^p
  JacobianStrategy jac;
  int n = 0;
  int m = 0;
  int p = 0;
  int q = 0;

  /// Jacobian contribution evaluated at the preimage of x_r.
  Mat jacobian_at(const Eigen::Ref<const Vec>& x_r) const;
  Vec closed_rhs(const Eigen::Ref<const Vec>& x_r, const Eigen::Ref<const Vec>& u) const;
  Vec output(const Eigen::Ref<const Vec>& x_r) const;
};

ReducedModel assemble_model(std::string system, ReductionMap map, RkhsRegressor f_hat,
                            RkhsRegressor h_hat, JacobianStrategy jac, int m);

inline Vec closed_rhs(const ReducedModel& model, const Eigen::Ref<const Vec>& x_r,
                      const Eigen::Ref<const Vec>& u) {
  return model.closed_rhs(x_r, u);
}

/// RK4 on the closed reduced dynamics; outputs are h_hat(x_r).
Trajectory simulate_reduced(const ReducedModel& model, const Vec& x_r0, const Signal& u,
                            const SimSettings& settings);

}  // namespace rkbal
