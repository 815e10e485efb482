#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "rkbal/types.hpp"

namespace rkbal {

/// Time-dependent input u(t).
///
/// Scalar kinds (square, sine, zero, and sums of them) are broadcast to every
/// input channel. An impulse carries its own channel count.
class Signal {
 public:
  struct Zero {};
  struct Impulse {
    int channel;  // 1-based
    double width;
    int m;
  };
  struct Square {
    double freq;
    double amplitude;
    double phase;
  };
  struct Sine {
    double freq;
    double amplitude;
  };
  struct Sum {
    std::vector<Signal> terms;
  };
  using Kind = std::variant<Zero, Impulse, Square, Sine, Sum>;

  Signal() : kind_(Zero{}) {}
  explicit Signal(Kind kind) : kind_(std::move(kind)) {}

  /// Value at t for an m-channel system.
  Vec value(double t, int m) const;

  /// Left limit u(t-). Identical to value() except at jump points; the
  /// integrator uses it for the end-of-step stage.
  Vec value_left(double t, int m) const;
  /// Right limit u(t+); used for the first stage of each step.
  Vec value_right(double t, int m) const;

  const Kind& kind() const { return kind_; }

  /// Canonical textual form, accepted back by parse_signal().
  std::string describe() const;

 private:
  Kind kind_;
};

Signal zero_signal();

/// Rectangular pulse of unit area on channel `channel` (1-based):
/// u(t) = e_channel / width on [0, width).
Signal impulse(int channel, double width, int m);

/// amplitude * sq(2 pi freq t + phase), with sq(theta) = +1 when sin(theta) >= 0.
Signal square(double freq, double amplitude, double phase = 0.0);

Signal sine(double freq, double amplitude);

Signal sum(std::vector<Signal> terms);

/// u(t) = (sin(2 pi 3 t) + sq(2 pi 5 t - pi/2)) / 4.
Signal test_input();

/// Unit square wave sq(theta).
double square_wave(double theta);

/// Parses "zero", "test", "impulse:CH", "square:FREQ:AMP[:PHASE]",
/// "sine:FREQ:AMP" and '+'-joined sums. `impulse_width` and `m` are only used
/// by impulse terms. Throws ConfigError.
Signal parse_signal(const std::string& text, double impulse_width, int m);

}  // namespace rkbal
