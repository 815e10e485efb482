#pragma once

#include <functional>
#include <string>

#include "rkbal/types.hpp"

namespace rkbal {

/// Continuous-time control system x' = f(x, u), y = h(x).
///
/// Values are immutable after construction; the callables must be pure so
/// that concurrent evaluation is safe.
struct ControlSystem {
  using Dynamics = std::function<Vec(const Vec& x, const Vec& u)>;
  using Output = std::function<Vec(const Vec& x)>;

  int n = 0;
  int m = 0;
  int p = 0;
  Dynamics dynamics;
  Output output;
  std::string name;
};

/// Stable LTI system x' = Ax + Bu, y = Cx.
class LinearSystem {
 public:
  /// Throws std::invalid_argument on dimension mismatch or non-Hurwitz A.
  LinearSystem(Mat A, Mat B, Mat C);

  const Mat& A() const { return A_; }
  const Mat& B() const { return B_; }
  const Mat& C() const { return C_; }

  ControlSystem to_control_system(std::string name = "linear") const;

 private:
  Mat A_, B_, C_;
};

/// Two-state polynomial system with output 2 x1 - x2, exactly reducible to
/// the scalar system z' = -z^3 + u.
ControlSystem system_2d();

/// The scalar reference z' = -z^3 + u, y = z.
ControlSystem system_2d_reference();

/// Seven-state polynomial benchmark with a single input and output.
ControlSystem system_7d();

ControlSystem linear_system(const Mat& A, const Mat& B, const Mat& C);

}  // namespace rkbal
