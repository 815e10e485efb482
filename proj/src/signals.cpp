#include "rkbal/signals.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rkbal {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Side { Left, Point, Right };

// Square wave with one-sided limits. Phases within 1e-9 half-cycles of an
// edge are treated as lying on it, so times built from accumulated steps hit
// the edges reproducibly.
double square_value(double theta, Side side) {
  const double half = theta / std::numbers::pi;
  const double k = std::round(half);
  if (std::abs(half - k) > 1e-9 * std::max(1.0, std::abs(half))) return square_wave(theta);
  auto on_half_cycle = [](double j) { return std::fmod(std::abs(j), 2.0) == 0.0 ? 1.0 : -1.0; };
  switch (side) {
    case Side::Left: return on_half_cycle(k - 1);
    case Side::Right: return on_half_cycle(k);
    case Side::Point: break;
  }
  return 1.0;
}

template <Side S>
Vec evaluate(const Signal::Kind& kind, double t, int m) {
  return std::visit(
      [&](const auto& k) -> Vec {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Signal::Zero>) {
          return Vec::Zero(m);
        } else if constexpr (std::is_same_v<K, Signal::Impulse>) {
          if (k.m != m) {
            throw std::invalid_argument("impulse signal built for a different input dimension");
          }
          Vec u = Vec::Zero(m);
          const bool on = S == Side::Left ? (t > 0.0 && t <= k.width) : (t >= 0.0 && t < k.width);
          if (on) u(k.channel - 1) = 1.0 / k.width;
          return u;
        } else if constexpr (std::is_same_v<K, Signal::Square>) {
          const double theta = kTwoPi * k.freq * t + k.phase;
          return Vec::Constant(m, k.amplitude * square_value(theta, S));
        } else if constexpr (std::is_same_v<K, Signal::Sine>) {
          return Vec::Constant(m, k.amplitude * std::sin(kTwoPi * k.freq * t));
        } else {
          Vec u = Vec::Zero(m);
          for (const auto& term : k.terms) u += evaluate<S>(term.kind(), t, m);
          return u;
        }
      },
      kind);
}

double parse_number(const std::string& field, const std::string& whole) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("signal '" + whole + "': '" + field + "' is not a number");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

double square_wave(double theta) { return std::sin(theta) >= 0 ? 1.0 : -1.0; }

Vec Signal::value(double t, int m) const { return evaluate<Side::Point>(kind_, t, m); }

Vec Signal::value_left(double t, int m) const { return evaluate<Side::Left>(kind_, t, m); }

Vec Signal::value_right(double t, int m) const { return evaluate<Side::Right>(kind_, t, m); }

std::string Signal::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Zero>) {
          os << "zero";
        } else if constexpr (std::is_same_v<K, Impulse>) {
          os << "impulse:" << k.channel;
        } else if constexpr (std::is_same_v<K, Square>) {
          os << "square:" << k.freq << ":" << k.amplitude;
          if (k.phase != 0.0) os << ":" << k.phase;
        } else if constexpr (std::is_same_v<K, Sine>) {
          os << "sine:" << k.freq << ":" << k.amplitude;
        } else {
          for (std::size_t i = 0; i < k.terms.size(); ++i) {
            if (i) os << "+";
            os << k.terms[i].describe();
          }
        }
      },
      kind_);
  return os.str();
}

Signal zero_signal() { return Signal(Signal::Zero{}); }

Signal impulse(int channel, double width, int m) {
  if (m < 1 || channel < 1 || channel > m) {
    throw std::invalid_argument("impulse: channel " + std::to_string(channel) +
                                " outside 1.." + std::to_string(m));
  }
  if (!(width > 0.0)) throw std::invalid_argument("impulse: width must be positive");
  return Signal(Signal::Impulse{channel, width, m});
}

Signal square(double freq, double amplitude, double phase) {
  if (!(freq > 0.0)) throw std::invalid_argument("square: frequency must be positive");
  return Signal(Signal::Square{freq, amplitude, phase});
}

Signal sine(double freq, double amplitude) {
  if (!(freq > 0.0)) throw std::invalid_argument("sine: frequency must be positive");
  return Signal(Signal::Sine{freq, amplitude});
}

Signal sum(std::vector<Signal> terms) { return Signal(Signal::Sum{std::move(terms)}); }

Signal test_input() {
  return sum({sine(3.0, 0.25), square(5.0, 0.25, -std::numbers::pi / 2)});
}

Signal parse_signal(const std::string& text, double impulse_width, int m) {
  const auto terms = split(text, '+');
  if (terms.size() > 1) {
    std::vector<Signal> parsed;
    for (const auto& t : terms) parsed.push_back(parse_signal(t, impulse_width, m));
    return sum(std::move(parsed));
  }
  const auto f = split(text, ':');
  const std::string& head = f[0];
  try {
    if (head == "zero" && f.size() == 1) return zero_signal();
    if (head == "test" && f.size() == 1) return test_input();
    if (head == "impulse" && f.size() == 2) {
      return impulse(static_cast<int>(parse_number(f[1], text)), impulse_width, m);
    }
    if (head == "square" && (f.size() == 3 || f.size() == 4)) {
      const double phase = f.size() == 4 ? parse_number(f[3], text) : 0.0;
      return square(parse_number(f[1], text), parse_number(f[2], text), phase);
    }
    if (head == "sine" && f.size() == 3) {
      return sine(parse_number(f[1], text), parse_number(f[2], text));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("signal '" + text + "': " + e.what());
  }
  throw ConfigError("unrecognized signal '" + text +
                    "' (expected zero, test, impulse:CH, square:FREQ:AMP[:PHASE], sine:FREQ:AMP)");
}

}  // namespace rkbal
