#include "rkbal/kernels.hpp"

#include <cmath>
#include <sstream>

namespace rkbal {

namespace {

void check_dims(Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    throw std::invalid_argument("kernel: dimension mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

Kernel Kernel::linear() { return Kernel{}; }

Kernel Kernel::polynomial(int degree) {
  if (degree < 1) throw std::invalid_argument("polynomial kernel degree must be >= 1");
  Kernel k;
  k.family_ = Family::Polynomial;
  k.degree_ = degree;
  return k;
}

Kernel Kernel::gaussian(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gaussian kernel gamma must be positive");
  }
  Kernel k;
  k.family_ = Family::Gaussian;
  k.gamma_ = gamma;
  return k;
}

Kernel Kernel::gaussian_auto() {
  Kernel k;
  k.family_ = Family::Gaussian;
  k.auto_gamma_ = true;
  return k;
}

void Kernel::require_resolved() const {
  if (auto_gamma_) {
    throw std::logic_error("gauss:auto kernel must be resolved against training points first");
  }
}

double Kernel::eval(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y) const {
  check_dims(x.size(), y.size());
  switch (family_) {
    case Family::Linear:
      return x.dot(y);
    case Family::Polynomial:
      return std::pow(1.0 + x.dot(y), degree_);
    case Family::Gaussian:
      require_resolved();
      return std::exp(-gamma_ * (x - y).squaredNorm());
  }
  return 0.0;
}

RowVec Kernel::grad_x(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y) const {
  check_dims(x.size(), y.size());
  switch (family_) {
    case Family::Linear:
      return y.transpose();
    case Family::Polynomial:
      return degree_ * std::pow(1.0 + x.dot(y), degree_ - 1) * y.transpose();
    case Family::Gaussian:
      require_resolved();
      return (-2.0 * gamma_ * std::exp(-gamma_ * (x - y).squaredNorm())) * (x - y).transpose();
  }
  return RowVec();
}

Kernel Kernel::resolve(const Points& points) const {
  if (!auto_gamma_) return *this;
  return gaussian(mean_sq_distance_gamma(points));
}

std::string Kernel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case Family::Linear:
      os << "linear";
      break;
    case Family::Polynomial:
      os << "poly:" << degree_;
      break;
    case Family::Gaussian:
      if (auto_gamma_) {
        os << "gauss:auto";
      } else {
        os << "gauss:" << gamma_;
      }
      break;
  }
  return os.str();
}

Kernel parse_kernel(const std::string& text) {
  if (text == "linear") return Kernel::linear();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (head == "poly" && !arg.empty()) {
      std::size_t pos = 0;
      const int d = std::stoi(arg, &pos);
      if (pos == arg.size()) return Kernel::polynomial(d);
    } else if (head == "gauss" && arg == "auto") {
      return Kernel::gaussian_auto();
    } else if (head == "gauss" && !arg.empty()) {
      std::size_t pos = 0;
      const double g = std::stod(arg, &pos);
      if (pos == arg.size()) return Kernel::gaussian(g);
    }
  } catch (const std::exception& e) {
    throw ConfigError("kernel '" + text + "': " + e.what());
  }
  throw ConfigError("unrecognized kernel '" + text +
                    "' (expected linear, poly:D, gauss:GAMMA or gauss:auto)");
}

double mean_sq_distance_gamma(const Points& points) {
  const auto N = points.rows();
  if (N < 2) throw std::invalid_argument("gauss:auto needs at least two training points");
  // sum_{i<j} |x_i - x_j|^2 = N sum |x_i|^2 - |sum x_i|^2
  const double total = N * points.rowwise().squaredNorm().sum() -
                       points.colwise().sum().squaredNorm();
  const double pairs = 0.5 * static_cast<double>(N) * static_cast<double>(N - 1);
  const double mean = total / pairs;
  if (!(mean > 0.0)) {
    throw NumericalError("gauss:auto: training points are all identical");
  }
  return 1.0 / mean;
}

Mat gram(const Kernel& k, const Points& points) {
  const auto N = points.rows();
  if (N == 0) throw std::invalid_argument("gram: empty point list");
  Mat G(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = i; j < N; ++j) {
      G(i, j) = k.eval(points.row(i).transpose(), points.row(j).transpose());
      G(j, i) = G(i, j);
    }
  }
  return G;
}

Mat cross_gram(const Kernel& k, const Points& rows, const Points& cols) {
  if (rows.rows() == 0 || cols.rows() == 0) throw std::invalid_argument("cross_gram: empty point list");
  check_dims(rows.cols(), cols.cols());
  Mat G(rows.rows(), cols.rows());
  for (Eigen::Index j = 0; j < cols.rows(); ++j) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      G(i, j) = k.eval(rows.row(i).transpose(), cols.row(j).transpose());
    }
  }
  return G;
}

Vec kernel_vector(const Kernel& k, const Points& points, const Eigen::Ref<const Vec>& x) {
  check_dims(points.cols(), x.size());
  Vec v(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) v(i) = k.eval(x, points.row(i).transpose());
  return v;
}

Mat kernel_vector_jacobian(const Kernel& k, const Points& points, const Eigen::Ref<const Vec>& x) {
  check_dims(points.cols(), x.size());
  Mat J(points.rows(), x.size());
  for (Eigen::Index i = 0; i < points.rows(); ++i) J.row(i) = k.grad_x(x, points.row(i).transpose());
  return J;
}

}  // namespace rkbal
