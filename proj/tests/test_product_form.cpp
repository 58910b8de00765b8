#include "doctest.h"
#include "trilat/product_form.hpp"
#include "trilat/series_io.hpp"

#include <random>

using namespace trilat;

namespace {
Exponent W(long n) { return Exponent::whole(n); }
}  // namespace

TEST_CASE("product exponents of elementary series") {
  RSeries one_minus_p = RSeries(1L) - RSeries::monomial(Rational(1), W(1));
  ProductForm a = product_exponents(one_minus_p.truncated(W(15)));
  CHECK(a.exponents.size() == 1);
  CHECK(a.exponent(1) == 1);
  CHECK(a.known_to == 14);
  RSeries inv2 = inverse(one_minus_p * one_minus_p, W(15));
  ProductForm b = product_exponents(inv2);
  CHECK(b.exponents.size() == 1);
  CHECK(b.exponent(1) == -2);
  CHECK_THROWS_AS(b.exponent(15), Error);
}

TEST_CASE("product exponents round trip") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> e(-3, 3), d(1, 3);
  for (int trial = 0; trial < 10; ++trial) {
    ProductForm pf;
    pf.known_to = 30;
    for (int n = 1; n <= 30; ++n) {
      Rational v(e(rng), d(rng));
      if (v != 0) pf.exponents[n] = v;
    }
    RSeries f = product_series(pf, W(31));
    ProductForm back = product_exponents(f);
    CHECK(back.known_to == 30);
    CHECK(back.exponents == pf.exponents);
  }
}

TEST_CASE("product exponents reject quarter powers") {
  RSeries f = RSeries(1L) + RSeries::monomial(Rational(1), Exponent::quarters(2), W(5));
  CHECK_THROWS_AS(product_exponents(f), Error);
}

TEST_CASE("sum formula against direct logarithm of the product") {
  const Exponent D = W(40);
  // Lambert series for log prod (1 - p^k)
  RSeries lambert = sum_formula(1, 0, Rational(1), Rational(0), Rational(0), D);
  LogProduct euler(D);
  for (int k = 1; k < 40; ++k) euler.factor(W(k), Rational(1));
  CHECK_FALSE(first_difference(lambert, euler.log()).has_value());
  // -sum_m p^m/(m(1-p^m)) computed term by term
  RSeries direct = RSeries::big_o(D);
  for (int m = 1; m < 40; ++m) {
    RSeries geo = inverse(RSeries(1L) - RSeries::monomial(Rational(1), W(m)), D);
    direct -= RSeries::monomial(Rational(1, m), W(m), D) * geo;
  }
  CHECK_FALSE(first_difference(lambert, direct).has_value());

  struct Case { int r, s; Rational a, b, c; };
  for (const Case& cs : {Case{24, 18, Rational(-1), Rational(0), Rational(0)},
                         Case{12, 2, Rational(0), Rational(2), Rational(0)},
                         Case{24, 20, Rational(2), Rational(-1), Rational(1)},
                         Case{5, 3, Rational(1, 3), Rational(-1, 2), Rational(3, 2)}}) {
    LogProduct lp(D);
    for (int k = 1; cs.r * k - cs.s < 40; ++k)
      lp.factor(W(cs.r * k - cs.s), cs.a + cs.b * k + cs.c * k * k);
    CHECK_FALSE(first_difference(sum_formula(cs.r, cs.s, cs.a, cs.b, cs.c, D), lp.log()).has_value());
  }
  // degenerate coefficients: only a/(1 - p^{rm}) survives
  RSeries only_a = sum_formula(3, 1, Rational(2), Rational(0), Rational(0), D);
  RSeries ref = RSeries::big_o(D);
  for (int m = 1; 2 * m < 40; ++m)
    ref -= RSeries::monomial(Rational(2, m), W(2 * m), D) *
           inverse(RSeries(1L) - RSeries::monomial(Rational(1), W(3 * m)), D);
  CHECK_FALSE(first_difference(only_a, ref).has_value());
}

TEST_CASE("period-24 fitting") {
  ProductForm zero;
  zero.known_to = 96;
  ProductForm z = fit_period24(zero, 2);
  for (const auto& c : z.pattern->coeffs)
    for (const auto& x : c) CHECK(x == 0);
  CHECK(z.verified_to == 96);

  ProductForm pf;
  pf.known_to = 96;
  for (int k = 1; k <= 4; ++k) {
    pf.exponents[24 * k - 20] = Rational(k * k - k + 2);
    pf.exponents[24 * k - 12] = Rational(1, 3);
  }
  for (int k = 1; k <= 8; ++k) pf.exponents[12 * k - 2] += Rational(2 * k);
  ProductForm fitted = fit_period24(pf, 2);
  CHECK(fitted.pattern->coeffs[3] == std::array<Rational, 3>{Rational(2), Rational(-1), Rational(1)});
  CHECK(fitted.pattern->coeffs[9] == std::array<Rational, 3>{Rational(-2), Rational(4), Rational(0)});
  CHECK(fitted.pattern->coeffs[21] == std::array<Rational, 3>{Rational(0), Rational(4), Rational(0)});
  CHECK(fitted.verified_to == 96);
  ProductForm more = extrapolate(fitted, 200);
  CHECK(more.exponent(24 * 8 - 20) == 58);

  pf.exponents[24 * 4 - 20] += 1;
  try {
    (void)fit_period24(pf, 2);
    FAIL("expected no stable pattern");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoStablePattern);
    CHECK(std::string(e.what()).find("residue 4") != std::string::npos);
    CHECK(std::string(e.what()).find("n = 76") != std::string::npos);
  }
}

TEST_CASE("series text round trip") {
  RSeries s = RSeries::from_terms({{-4, Rational(3, 2)}, {1, Rational(-7)}, {20, Rational(1, 9)}}, W(9));
  std::string text = to_text(s);
  CHECK(text == "prec=36 minexp=-4\n3/2\t-4\n-7/1\t1\n1/9\t20\n");
  CHECK_FALSE(first_difference(from_text(text), s).has_value());
  CHECK(from_text(text).precision() == W(9));
  CHECK(to_text(RSeries(1L)) == "prec=inf minexp=0\n1/1\t0\n");

  Series<GaussRational> g = Series<GaussRational>::from_terms(
      {{0, GaussRational(Rational(1), Rational(-1, 2))}, {4, GaussRational(Rational(2))}}, W(3));
  std::ostringstream os;
  write_series(os, g);
  CHECK(os.str() == "prec=12 minexp=0\n1/1 + i*-1/2\t0\n2/1\t4\n");
  std::istringstream is(os.str());
  auto back = read_gauss_series(is);
  CHECK_FALSE(first_difference(back, g).has_value());
  std::istringstream dot("prec=8 minexp=0\n1/2 + i\xC2\xB7" "3/4\t0\n");
  CHECK(read_gauss_series(dot).coefficient(0) == GaussRational(Rational(1, 2), Rational(3, 4)));
  CHECK_THROWS_AS(from_text("prec=8 minexp=4\n1/1\t0\n"), Error);
}
