#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace evflex {

/// Exact money amount in micro-euros. Solver floats are converted with
/// round-half-to-even at 1e-6 EUR; all settlement arithmetic after that is
/// integer.
class Money {
 public:
  constexpr Money() = default;

  static Money from_micros(std::int64_t micros) { return Money(micros); }
  static Money from_euros(double euros) {
    // nearbyint honours the default round-to-nearest-even mode.
    return Money(static_cast<std::int64_t>(std::nearbyint(euros * 1e6)));
  }

  [[nodiscard]] constexpr std::int64_t micros() const { return micros_; }
  [[nodiscard]] double euros() const { return static_cast<double>(micros_) / 1e6; }

  /// Fixed six-decimal rendering, e.g. "-1.500000".
  [[nodiscard]] std::string to_string() const;

  constexpr Money operator+(Money o) const { return Money(micros_ + o.micros_); }
  constexpr Money operator-(Money o) const { return Money(micros_ - o.micros_); }
  constexpr Money operator-() const { return Money(-micros_); }
  Money& operator+=(Money o) {
    micros_ += o.micros_;
    return *this;
  }
  Money& operator-=(Money o) {
    micros_ -= o.micros_;
    return *this;
  }
  constexpr auto operator<=>(const Money&) const = default;

 private:
  constexpr explicit Money(std::int64_t micros) : micros_(micros) {}
  std::int64_t micros_ = 0;
};

}  // namespace evflex
