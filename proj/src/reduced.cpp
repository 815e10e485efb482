#include "rkbal/reduced.hpp"

#include <cmath>

namespace rkbal {

TaylorJacobian make_taylor(const ReductionMap& map, const Eigen::Ref<const Vec>& a) {
  return TaylorJacobian{a, map.jacobian(a), map.reduce(a)};
}

PolyJacobian make_poly(const ReductionMap& map) {
  const Kernel& k = map.features.kernel;
  int degree = 0;
  if (k.family() == Kernel::Family::Polynomial) {
    degree = k.degree();
  } else if (k.family() == Kernel::Family::Linear) {
    degree = 1;
  } else {
    throw std::invalid_argument("poly Jacobian requires a polynomial balancing kernel");
  }
  // T_q^T K~_o T_q with K~_o the doubly centered observability kernel matrix.
  const Mat Ko = double_center(gram(k, map.features.obs));
  PolyJacobian pj;
  pj.degree = degree;
  pj.gram = map.T_q.transpose() * Ko * map.T_q;
  pj.gram = 0.5 * (pj.gram + pj.gram.transpose()).eval();
  Eigen::LDLT<Mat> ldlt(pj.gram);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-13) {
    throw NumericalError("poly Jacobian: T_q^T K_o T_q is singular; reduce the order");
  }
  const Mat Pi_obs = map.reduce_rows(map.features.obs);  // M x q
  pj.weights = ldlt.solve(Pi_obs.transpose()).transpose();
  return pj;
}

Mat pseudo_inverse(const Mat& A) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  Vec inv = Vec::Zero(s.size());
  if (s.size() > 0 && s(0) > 0.0) {
    const double tol = kRankTolerance * s(0);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > tol) inv(i) = 1.0 / s(i);
    }
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Vec taylor_pseudoinverse(const TaylorJacobian& t, const Eigen::Ref<const Vec>& x_r,
                         std::string* warning) {
  if (x_r.size() != t.Pi_a.size()) {
    throw std::invalid_argument("taylor_pseudoinverse: dimension mismatch");
  }
  if (t.J_a.cwiseAbs().maxCoeff() == 0.0) {
    if (warning) *warning = "taylor_pseudoinverse: zero Jacobian, returning the expansion point";
    return t.a;
  }
  return t.a + pseudo_inverse(t.J_a) * (x_r - t.Pi_a);
}

Mat poly_jacobian_at_preimage(const PolyJacobian& pj, const ReductionMap& map,
                              const Eigen::Ref<const Vec>& x_r) {
  if (x_r.size() != map.q) throw std::invalid_argument("poly Jacobian: dimension mismatch");
  const Vec s = pj.weights * x_r;
  const int d = pj.degree;
  const double expo = static_cast<double>(d - 1) / d;
  Vec scale(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    // Real branch: sign(s)^(d-1) |s|^((d-1)/d); 0^0 = 1 for d = 1.
    const double mag = d == 1 ? 1.0 : std::pow(std::abs(s(i)), expo);
    const double sign = ((d - 1) % 2 == 1 && s(i) < 0) ? -1.0 : 1.0;
    scale(i) = d * sign * mag;
  }
  Mat rows = scale.asDiagonal() * map.features.obs;  // M x n
  rows.rowwise() -= rows.colwise().mean();
  return map.T_q.transpose() * rows;
}

Mat ReducedModel::jacobian_at(const Eigen::Ref<const Vec>& x_r) const {
  if (const auto* t = std::get_if<TaylorJacobian>(&jac)) return t->J_a;
  return poly_jacobian_at_preimage(std::get<PolyJacobian>(jac), map, x_r);
}

Vec ReducedModel::closed_rhs(const Eigen::Ref<const Vec>& x_r, const Eigen::Ref<const Vec>& u) const {
  if (x_r.size() != q || u.size() != m) throw std::invalid_argument("closed_rhs: dimension mismatch");
  Vec z(q + m);
  z.head(q) = x_r;
  z.tail(m) = u;
  return jacobian_at(x_r) * f_hat.predict(z);
}

Vec ReducedModel::output(const Eigen::Ref<const Vec>& x_r) const { return h_hat.predict(x_r); }

ReducedModel assemble_model(std::string system, ReductionMap map, RkhsRegressor f_hat,
                            RkhsRegressor h_hat, JacobianStrategy jac, int m) {
  ReducedModel model;
  model.system = std::move(system);
  model.n = map.n;
  model.q = map.q;
  model.m = m;
  model.p = static_cast<int>(h_hat.output_dim());
  if (f_hat.output_dim() != model.n || f_hat.input_dim() != model.q + m) {
    throw std::invalid_argument("assemble_model: dynamics regressor has the wrong shape");
  }
  if (h_hat.input_dim() != model.q) {
    throw std::invalid_argument("assemble_model: output regressor has the wrong shape");
  }
  model.map = std::move(map);
  model.f_hat = std::move(f_hat);
  model.h_hat = std::move(h_hat);
  model.jac = std::move(jac);
  return model;
}

Trajectory simulate_reduced(const ReducedModel& model, const Vec& x_r0, const Signal& u,
                            const SimSettings& settings) {
  if (x_r0.size() != model.q) throw std::invalid_argument("simulate_reduced: x_r0 has wrong dimension");
  return integrate([&model](const Vec& x, const Vec& v) -> Vec { return model.closed_rhs(x, v); },
                   [&model](const Vec& x) -> Vec { return model.output(x); }, model.m, x_r0, u,
                   settings);
}

}  // namespace rkbal
