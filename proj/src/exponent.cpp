#include "trilat/exponent.hpp"
#include "trilat/error.hpp"

namespace trilat {

Exponent Exponent::from_rational(const Rational& r) {
  Rational q = r * kPerUnit;
  if (denominator(q) != 1)
    throw Error(ErrorKind::GridViolation, "exponent " + r.str() + " is off the 1/4 grid");
  return Exponent(numerator(q).convert_to<std::int64_t>());
}

Exponent Exponent::parse(const std::string& text) {
  if (text == "inf") return infinity();
  return from_rational(parse_rational(text));
}

std::int64_t Exponent::whole() const {
  if (!is_integer()) throw Error(ErrorKind::GridViolation, "exponent " + str() + " is not an integer");
  return q_ / kPerUnit;
}

std::int64_t Exponent::integer_ceiling() const {
  // largest n with 4n < q_
  std::int64_t x = q_ - 1;
  return x >= 0 ? x / kPerUnit : -((-x + kPerUnit - 1) / kPerUnit);
}

Rational Exponent::to_rational() const { return Rational(q_, kPerUnit); }

std::string Exponent::str() const {
  if (is_infinite()) return "inf";
  Rational r = to_rational();
  return denominator(r) == 1 ? numerator(r).str() : r.str();
}

}  // namespace trilat
