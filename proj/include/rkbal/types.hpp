#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rkbal {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using RowVec = Eigen::RowVectorXd;

// Point sets are stored one point per row.
using Points = Eigen::MatrixXd;

/// Raised when a configuration document or CLI argument cannot be interpreted.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computation produces non-finite values or an ill-posed
/// linear-algebra problem.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rkbal
