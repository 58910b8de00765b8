#pragma once

#include "trilat/scalar.hpp"

#include <compare>
#include <cstdint>
#include <string>

namespace trilat {

// A power of p on the quarter grid: the value is quarters()/4.  One
// saturated value stands for "exact" (no truncation).
class Exponent {
 public:
  static constexpr std::int64_t kPerUnit = 4;

  constexpr Exponent() = default;

  static constexpr Exponent whole(std::int64_t n) { return Exponent(n * kPerUnit); }
  static constexpr Exponent quarters(std::int64_t q) { return Exponent(q); }
  static constexpr Exponent infinity() { return Exponent(kInf); }
  // Throws GridViolation when r is not a multiple of 1/4.
  static Exponent from_rational(const Rational& r);
  // Accepts "5", "-3/2", "7/4", "inf".
  static Exponent parse(const std::string& text);

  constexpr std::int64_t quarters() const { return q_; }
  constexpr bool is_infinite() const { return q_ >= kInf; }
  constexpr bool is_integer() const { return q_ % kPerUnit == 0; }
  std::int64_t whole() const;  // requires is_integer()
  // Largest integer n with n < *this, i.e. how far integer-indexed data is known.
  std::int64_t integer_ceiling() const;
  Rational to_rational() const;
  double to_double() const { return static_cast<double>(q_) / kPerUnit; }
  std::string str() const;

  friend constexpr Exponent operator+(Exponent a, Exponent b) { return Exponent(sat(a.q_ + b.q_, a, b)); }
  friend constexpr Exponent operator-(Exponent a, Exponent b) {
    return a.is_infinite() ? a : Exponent(a.q_ - b.q_);
  }
  friend constexpr Exponent operator-(Exponent a) { return Exponent(-a.q_); }
  friend constexpr Exponent operator*(Exponent a, std::int64_t k) {
    return a.is_infinite() ? a : Exponent(a.q_ * k);
  }
  friend constexpr Exponent operator*(std::int64_t k, Exponent a) { return a * k; }
  Exponent& operator+=(Exponent o) { return *this = *this + o; }
  Exponent& operator-=(Exponent o) { return *this = *this - o; }

  friend constexpr auto operator<=>(Exponent, Exponent) = default;

 private:
  static constexpr std::int64_t kInf = std::int64_t{1} << 60;
  constexpr explicit Exponent(std::int64_t q) : q_(q) {}
  static constexpr std::int64_t sat(std::int64_t v, Exponent a, Exponent b) {
    return (a.is_infinite() || b.is_infinite() || v >= kInf) ? kInf : v;
  }

  std::int64_t q_ = 0;
};

}  // namespace trilat
