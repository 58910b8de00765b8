#include "trilat/series.hpp"

namespace trilat {

Series<Rational> pow(const Series<Rational>& a, const Rational& r) {
  if (r == 0) return Series<Rational>(Rational(1));
  if (a.is_zero()) {
    if (r < 0) throw Error(ErrorKind::ZeroDivisor, "negative power of a vanishing series");
    return Series<Rational>::big_o(Exponent::from_rational(a.precision().to_rational() * r));
  }
  const Exponent v = a.valuation();
  const Exponent vr = Exponent::from_rational(v.to_rational() * r);
  const Rational& c = a.leading_coefficient();
  Rational cr;
  const Integer num = numerator(r), den = denominator(r);
  if (!exact_root(c, den.convert_to<unsigned>(), cr))
    throw Error(ErrorKind::NonNormalizedRoot,
                "leading coefficient " + c.str() + " has no exact rational root of order " + den.str());
  {
    // cr^num
    Rational base = num < 0 ? Rational(1) / cr : cr;
    Integer e = num < 0 ? Integer(-num) : num;
    Rational out(1);
    for (Integer i = 0; i < e; ++i) out *= base;
    cr = out;
  }
  Series<Rational> unit = a.shifted(-v) * (Rational(1) / c);
  return detail::unit_pow(unit, r).shifted(vr) * cr;
}

Series<Rational> sqrt(const Series<Rational>& a) { return pow(a, Rational(1, 2)); }

Series<Rational> real_part(const Series<GaussRational>& s) {
  std::vector<Series<Rational>::Term> terms;
  for (const auto& t : s.terms()) {
    if (!t.c.is_real())
      throw Error(ErrorKind::Consistency, "imaginary part at p^" + Exponent::quarters(t.q).str());
    terms.push_back({t.q, t.c.re});
  }
  return Series<Rational>::from_terms(std::move(terms), s.precision());
}

Series<GaussRational> to_gauss(const Series<Rational>& s) {
  std::vector<Series<GaussRational>::Term> terms;
  for (const auto& t : s.terms()) terms.push_back({t.q, GaussRational(t.c)});
  return Series<GaussRational>::from_terms(std::move(terms), s.precision());
}

}  // namespace trilat
