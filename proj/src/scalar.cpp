#include "trilat/scalar.hpp"
#include "trilat/error.hpp"

#include <gmp.h>

namespace trilat {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroDivisor: return "zero divisor";
    case ErrorKind::PrecisionExhausted: return "precision exhausted";
    case ErrorKind::UnnormalizedLog: return "unnormalized logarithm";
    case ErrorKind::NonNormalizedRoot: return "non-normalized root";
    case ErrorKind::GridViolation: return "grid violation";
    case ErrorKind::NoStablePattern: return "no stable pattern";
    case ErrorKind::InvalidShape: return "invalid shape";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Consistency: return "internal-consistency error";
    case ErrorKind::Configuration: return "configuration error";
    case ErrorKind::Contamination: return "finite-size contamination or model error";
    case ErrorKind::Budget: return "budget exceeded";
    case ErrorKind::Parse: return "parse error";
  }
  return "error";
}

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ' && ch != '+') t += ch;
  if (t.empty()) throw Error(ErrorKind::Parse, "empty rational");
  auto slash = t.find('/');
  auto digits = [&](const std::string& s) {
    std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!digits(t)) throw Error(ErrorKind::Parse, "not a rational: '" + text + "'");
    return Rational(Integer(t));
  }
  std::string n = t.substr(0, slash), d = t.substr(slash + 1);
  if (!digits(n) || !digits(d) || d[0] == '-')
    throw Error(ErrorKind::Parse, "not a rational: '" + text + "'");
  Integer den(d);
  if (den == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + text + "'");
  return Rational(Integer(n), den);
}

std::string to_fraction_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

bool exact_root(const Rational& r, unsigned d, Rational& out) {
  if (d == 1) {
    out = r;
    return true;
  }
  if (r < 0 && d % 2 == 0) return false;
  Integer n = numerator(r), m = denominator(r);
  bool neg = n < 0;
  if (neg) n = -n;
  Integer rn, rm;
  int en = mpz_root(rn.backend().data(), n.backend().data(), d);
  int em = mpz_root(rm.backend().data(), m.backend().data(), d);
  if (!en || !em) return false;
  out = Rational(neg ? Integer(-rn) : rn, rm);
  return true;
}

std::ostream& operator<<(std::ostream& os, const GaussRational& g) {
  return os << ScalarTraits<GaussRational>::format(g);
}

std::string ScalarTraits<GaussRational>::format(const GaussRational& x) {
  std::string s = to_fraction_string(x.re);
  if (x.im != 0) s += " + i*" + to_fraction_string(x.im);
  return s;
}

}  // namespace trilat
