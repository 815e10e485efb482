#include "rkbal/systems.hpp"

#include <sstream>

namespace rkbal {

LinearSystem::LinearSystem(Mat A, Mat B, Mat C)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)) {
  const auto n = A_.rows();
  if (n == 0 || A_.cols() != n) {
    throw std::invalid_argument("linear_system: A must be square and non-empty");
  }
  if (B_.rows() != n || B_.cols() == 0) {
    throw std::invalid_argument("linear_system: B must have as many rows as A");
  }
  if (C_.cols() != n || C_.rows() == 0) {
    throw std::invalid_argument("linear_system: C must have as many columns as A");
  }
  const Eigen::VectorXcd eig = A_.eigenvalues();
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (!(eig(i).real() < 0.0)) {
      std::ostringstream os;
      os << "linear_system: A is not Hurwitz (eigenvalue " << eig(i).real()
         << (eig(i).imag() >= 0 ? "+" : "") << eig(i).imag() << "i)";
      throw std::invalid_argument(os.str());
    }
  }
}

ControlSystem LinearSystem::to_control_system(std::string name) const {
  ControlSystem sys;
  sys.n = static_cast<int>(A_.rows());
  sys.m = static_cast<int>(B_.cols());
  sys.p = static_cast<int>(C_.rows());
  sys.name = std::move(name);
  Mat A = A_, B = B_, C = C_;
  sys.dynamics = [A, B](const Vec& x, const Vec& u) -> Vec { return A * x + B * u; };
  sys.output = [C](const Vec& x) -> Vec { return C * x; };
  return sys;
}

ControlSystem linear_system(const Mat& A, const Mat& B, const Mat& C) {
  return LinearSystem(A, B, C).to_control_system();
}

ControlSystem system_2d() {
  ControlSystem sys;
  sys.n = 2;
  sys.m = 1;
  sys.p = 1;
  sys.name = "2d";
  sys.dynamics = [](const Vec& x, const Vec& u) -> Vec {
    const double x1 = x(0), x2 = x(1);
    Vec dx(2);
    dx(0) = -3 * x1 * x1 * x1 + x1 * x1 * x2 + 2 * x1 * x2 * x2 - x2 * x2 * x2;
    dx(1) = 2 * x1 * x1 * x1 - 10 * x1 * x1 * x2 + 10 * x1 * x2 * x2 -
            3 * x2 * x2 * x2 - u(0);
    return dx;
  };
  sys.output = [](const Vec& x) -> Vec {
    Vec y(1);
    y(0) = 2 * x(0) - x(1);
    return y;
  };
  return sys;
}

ControlSystem system_2d_reference() {
  ControlSystem sys;
  sys.n = 1;
  sys.m = 1;
  sys.p = 1;
  sys.name = "2d_reference";
  sys.dynamics = [](const Vec& x, const Vec& u) -> Vec {
    Vec dx(1);
    dx(0) = -x(0) * x(0) * x(0) + u(0);
    return dx;
  };
  sys.output = [](const Vec& x) -> Vec { return x; };
  return sys;
}

ControlSystem system_7d() {
  ControlSystem sys;
  sys.n = 7;
  sys.m = 1;
  sys.p = 1;
  sys.name = "7d";
  sys.dynamics = [](const Vec& x, const Vec& uv) -> Vec {
    const double x1 = x(0), x2 = x(1), x3 = x(2), x4 = x(3), x5 = x(4),
                 x6 = x(5), x7 = x(6);
    const double u = uv(0);
    auto cube = [](double v) { return v * v * v; };
    Vec dx(7);
    dx(0) = -cube(x1) + u;
    dx(1) = -cube(x2) - x1 * x1 * x2 + 3 * x1 * x2 * x2 - u;
    dx(2) = -cube(x3) + x5 + u;
    dx(3) = -cube(x4) + x1 - x2 + x3 + 2 * u;
    dx(4) = x1 * x2 * x3 - cube(x5) + u;
    dx(5) = x5 - cube(x6) - cube(x5) + 2 * u;
    dx(6) = -2 * cube(x6) + 2 * x5 - x7 - cube(x5) + 4 * u;
    return dx;
  };
  sys.output = [](const Vec& x) -> Vec {
    Vec y(1);
    // x4 * x3 is a genuine quadratic term.
    y(0) = x(0) - x(1) * x(1) + x(2) + x(3) * x(2) + x(4) - 2 * x(5) + 2 * x(6);
    return y;
  };
  return sys;
}

}  // namespace rkbal
