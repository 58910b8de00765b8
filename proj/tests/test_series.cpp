#include "doctest.h"
#include "trilat/series.hpp"

#include <random>

using namespace trilat;

namespace {

Exponent W(long n) { return Exponent::whole(n); }

RSeries poly(std::initializer_list<long> coeffs, long prec) {
  std::vector<RSeries::Term> t;
  long e = 0;
  for (long c : coeffs) t.push_back({4 * e++, Rational(c)});
  return RSeries::from_terms(std::move(t), W(prec));
}

// Plain integer polynomial arithmetic, used as an independent oracle.
std::vector<long long> pmul(const std::vector<long long>& a, const std::vector<long long>& b, size_t n) {
  std::vector<long long> c(n, 0);
  for (size_t i = 0; i < a.size() && i < n; ++i)
    for (size_t j = 0; j < b.size() && i + j < n; ++j) c[i + j] += a[i] * b[j];
  return c;
}

RSeries random_series(std::mt19937& rng, long lo, long prec, bool unit) {
  std::uniform_int_distribution<int> coef(-5, 5), den(1, 4);
  std::vector<RSeries::Term> t;
  for (long e = lo; e < prec; ++e) {
    int c = coef(rng);
    if (c != 0) t.push_back({4 * e, Rational(c, den(rng))});
  }
  if (unit) t.push_back({0, Rational(1)});
  return RSeries::from_terms(std::move(t), W(prec));
}

}  // namespace

TEST_CASE("geometric series times (1 - p) is one") {
  RSeries one_minus_p = poly({1, -1}, 1000);
  RSeries geo = inverse(poly({1, -1}, 12));
  for (long k = 0; k < 12; ++k) CHECK(geo.coefficient(k) == 1);
  RSeries prod = one_minus_p * geo;
  CHECK(prod.precision() == W(12));
  CHECK(prod.terms().size() == 1);
  CHECK(prod.coefficient(0) == 1);
}

TEST_CASE("Laurent bookkeeping") {
  RSeries a = RSeries::monomial(Rational(1), W(-1)) + RSeries::monomial(Rational(1), W(1));
  RSeries b = a * RSeries::monomial(Rational(1), W(1));
  CHECK(b.valuation() == W(0));
  CHECK(b.coefficient(0) == 1);
  CHECK(b.coefficient(1) == 0);
  CHECK(b.coefficient(2) == 1);
  CHECK(b.is_exact());
}

TEST_CASE("window rule for products") {
  RSeries a = RSeries::monomial(Rational(1), W(-2), W(5));  // p^-2 + O(p^5)
  RSeries b = RSeries::monomial(Rational(3), W(1), W(4));   // 3p + O(p^4)
  RSeries c = a * b;
  // min(5 + 1, 4 - 2) = 2
  CHECK(c.precision() == W(2));
  CHECK(c.coefficient(-1) == 3);
  CHECK_THROWS_AS(c.coefficient(2), Error);
}

TEST_CASE("isotropic z squared against integer polynomial oracle") {
  const size_t n = 14;
  // z/p = prod_k (1-p^{24k-20})(1-p^{24k-4}) / ((1-p^{24k-16})(1-p^{24k-8})), to p^13
  std::vector<long long> num(n, 0), z(n, 0);
  num[0] = 1;
  auto times_binom = [&](std::vector<long long> v, size_t e, int sign) {
    std::vector<long long> f(n, 0);
    f[0] = 1;
    if (sign < 0) {
      if (e < n) f[e] = -1;
    } else {
      for (size_t k = e; k < n; k += e) f[k] = 1;  // 1/(1-p^e)
    }
    return pmul(v, f, n);
  };
  std::vector<long long> zp = num;
  zp = times_binom(zp, 4, -1);
  zp = times_binom(zp, 20, -1);
  zp = times_binom(zp, 8, +1);
  zp = times_binom(zp, 16, +1);
  for (size_t k = 0; k + 1 < n; ++k) z[k + 1] = zp[k];
  auto z2 = pmul(z, z, n);

  std::vector<RSeries::Term> t;
  for (size_t k = 0; k < n; ++k)
    if (z[k]) t.push_back({4 * static_cast<long>(k), Rational(z[k])});
  RSeries zs = RSeries::from_terms(t, W(n));
  RSeries sq = zs * zs;
  CHECK(sq.precision() == W(n + 1));
  for (size_t k = 0; k < n; ++k) CHECK(sq.coefficient(long(k)) == z2[k]);
  CHECK(sq.coefficient(2) == 1);
  CHECK(sq.coefficient(6) == -2);
}

TEST_CASE("Mercator series and exp of zero") {
  RSeries l = log(poly({1, -1}, 20));
  for (long k = 1; k < 20; ++k) CHECK(l.coefficient(k) == Rational(-1, k));
  CHECK(l.coefficient(0) == 0);
  RSeries e = exp(RSeries::big_o(W(10)));
  CHECK(e.coefficient(0) == 1);
  CHECK(e.terms().size() == 1);
}

TEST_CASE("log and exp are inverse on random inputs") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 100; ++trial) {
    long prec = 6 + trial % 9;
    RSeries f = random_series(rng, 1, prec, true);
    RSeries g = random_series(rng, 1, prec, false);
    CHECK_FALSE(first_difference(exp(log(f)), f).has_value());
    CHECK_FALSE(first_difference(log(exp(g)), g).has_value());
  }
}

TEST_CASE("log of a product is the sum of logs") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    RSeries a = random_series(rng, 1, 12, true), b = random_series(rng, 1, 12, true);
    CHECK_FALSE(first_difference(log(a * b), log(a) + log(b)).has_value());
  }
}

TEST_CASE("ring axioms on random series") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    RSeries a = random_series(rng, -2, 8, false), b = random_series(rng, 0, 9, false),
            c = random_series(rng, 1, 7, false);
    CHECK_FALSE(first_difference((a * b) * c, a * (b * c)).has_value());
    CHECK_FALSE(first_difference(a * (b + c), a * b + a * c).has_value());
    CHECK_FALSE(first_difference(a * b, b * a).has_value());
  }
}

TEST_CASE("roots and powers") {
  CHECK_FALSE(first_difference(sqrt(poly({1, 2, 1}, 30)), poly({1, 1}, 30)).has_value());
  RSeries x = poly({1, 0, -1}, 25);
  RSeries lhs = pow(x, Rational(3, 2)) * pow(x, Rational(1, 2));
  CHECK_FALSE(first_difference(lhs, poly({1, 0, -2, 0, 1}, 25)).has_value());
  RSeries z = poly({0, 1, 0, 0, 0, -1, 0, 0, 0, 1}, 16);
  RSeries one_minus_z2 = RSeries(1L) - z * z;
  RSeries r = sqrt(one_minus_z2);
  CHECK_FALSE(first_difference(r * r, one_minus_z2).has_value());
  // non-unit leading coefficient with an exact root
  RSeries four = poly({0, 0, 4, 4, 1}, 20);  // (2p + p^2)^2
  RSeries s = sqrt(four);
  CHECK(s.valuation() == W(1));
  CHECK(s.coefficient(1) == 2);
  CHECK(s.coefficient(2) == 1);
  CHECK_THROWS_AS(sqrt(poly({2, 1}, 10)), Error);
  try {
    (void)sqrt(poly({2, 1}, 10));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonNormalizedRoot);
  }
  // quarter-grid results
  RSeries p1 = RSeries::monomial(Rational(1), W(1), W(9));
  RSeries q = sqrt(sqrt(p1 * poly({1, 1}, 8)));
  CHECK(q.valuation() == Exponent::quarters(1));
}

TEST_CASE("substitution") {
  RSeries s = substitute(poly({1, 1}, 10), Rational(2));
  CHECK(s.coefficient(2) == 1);
  CHECK(s.coefficient(1) == 0);
  CHECK(s.precision() == W(20));
  RSeries z = poly({0, 1, 0, 0, 0, -1}, 12);
  CHECK_FALSE(first_difference(substitute(z, Rational(1)), z).has_value());
  RSeries quarter = RSeries::monomial(Rational(1), Exponent::quarters(1), W(3));
  CHECK_THROWS_AS(substitute(quarter, Rational(1, 2)), Error);
}

TEST_CASE("error kinds") {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Parse;
  };
  CHECK(kind_of([] { (void)log(poly({2, 1}, 5)); }) == ErrorKind::UnnormalizedLog);
  CHECK(kind_of([] { (void)(poly({1}, 5) / RSeries::big_o(W(5))); }) == ErrorKind::ZeroDivisor);
  CHECK(kind_of([] { (void)poly({1, 1}, 5).coefficient(5); }) == ErrorKind::PrecisionExhausted);
  CHECK(kind_of([] { (void)(RSeries(1L) / (RSeries(1L) + RSeries::monomial(Rational(1), W(1)))); }) ==
        ErrorKind::PrecisionExhausted);
}
