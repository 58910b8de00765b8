#include "doctest.h"
#include "trilat/conjectures.hpp"
#include "trilat/error.hpp"
#include "trilat/product_form.hpp"

using namespace trilat;

namespace {

Exponent W(long n) { return Exponent::whole(n); }

const Kappa kAll[] = {Kappa::Bulk, Kappa::Surface, Kappa::Corner60, Kappa::Corner120};

}  // namespace

TEST_CASE("isotropic products equal their sum forms") {
  for (Kappa k : kAll) {
    CAPTURE(to_string(k));
    const auto d = first_difference(log_kappa_product_isotropic(k, W(24)), log_kappa_sumform_isotropic(k, W(24)));
    CHECK(!d);
  }
}

TEST_CASE("anisotropic products equal their sum forms") {
  for (auto ep : {EllipticParams::make({2, 4, 6}, 12), EllipticParams::make({2, 2, 8}, 12),
                  EllipticParams::make({1, 2, 3}, 6)})
    for (Kappa k : kAll)
      for (int i = 0; i < 3; ++i) {
        CAPTURE(ep.str());
        CAPTURE(to_string(k));
        CAPTURE(i);
        CHECK(!first_difference(log_kappa_product(k, ep, i, W(20)), log_kappa_sumform(k, ep, i, W(20))));
      }
}

TEST_CASE("elliptic formulas reduce to the isotropic ones") {
  const auto ep = EllipticParams::isotropic();
  for (Kappa k : kAll)
    for (int i = 0; i < 3; ++i) {
      CAPTURE(to_string(k));
      CHECK(!first_difference(log_kappa_product(k, ep, i, W(24)), log_kappa_product_isotropic(k, W(24))));
    }
  // and the summands, exactly, at a_j = p^2, q = p^6
  for (const Rational& p : {Rational(1, 3), Rational(2, 5), Rational(3, 7)}) {
    const Rational p3 = p * p * p;
    CHECK(F_bulk(p, p3) * 3 == F_isotropic(Kappa::Bulk, p));
    CHECK(F_surface(p, p, p, p3) == F_isotropic(Kappa::Surface, p));
    CHECK(F_corner60(p, p3) == F_isotropic(Kappa::Corner60, p));
    CHECK(F_corner120(p, p, p, p3) == F_isotropic(Kappa::Corner120, p));
  }
}

TEST_CASE("isotropic bulk summand as printed") {
  for (const Rational& p : {Rational(1, 2), Rational(2, 9)}) {
    const Rational p2 = p * p, p4 = p2 * p2, p6 = p4 * p2, p12 = p6 * p6;
    const Rational d = 1 - p2 + p4;
    const Rational one_minus = 1 - p2;
    CHECK(F_isotropic(Kappa::Bulk, p) == p6 * one_minus * one_minus * one_minus * (1 + p2) / ((1 + p12) * d * d));
  }
}

TEST_CASE("bulk product starts at (1 - p^6)^-1") {
  const ProductForm pf = product_exponents(exp(log_kappa_product_isotropic(Kappa::Bulk, W(7))));
  CHECK(pf.exponent(6) == -1);
  for (int n = 1; n < 6; ++n) CHECK(pf.exponent(n) == 0);
  CHECK(log_kappa_product_isotropic(Kappa::Bulk, W(6)).is_zero());
}

TEST_CASE("the printed 1/1 power of P0 fails against the sum form") {
  const auto args = EllipticParams::isotropic().args(0);
  const RSeries sum = log_kappa_sumform(Kappa::Corner120, args, W(24));
  auto fs = product_factors(Kappa::Corner120, args, W(24));
  CHECK(!first_difference(log_of_factors(fs, W(24)), sum));
  int p0 = 0;
  for (auto& f : fs)
    if (std::string(f.part) == "P0") {
      CHECK(f.power == Rational(1, 3));
      f.power = 1;
      ++p0;
    }
  CHECK(p0 > 0);
  const auto d = first_difference(log_of_factors(fs, W(24)), sum);
  REQUIRE(d);
  CHECK(*d == W(12));  // q^2 with q = p^6
}

TEST_CASE("Q depends on b through b^(1/2), R through b") {
  const auto args = EllipticParams::make({2, 4, 6}, 12).args(0);
  int q_count = 0, r_count = 0;
  for (const auto& f : product_factors(Kappa::Corner120, args, W(40))) {
    const std::string part = f.part;
    if (part[0] != 'Q' && part[0] != 'R') continue;
    const int b = part.find("a2") != std::string::npos ? 1 : 2;
    const int other = 3 - b;
    CAPTURE(part);
    CHECK(f.a[other] == 0);
    const Rational x = f.a[b] < 0 ? Rational(-f.a[b]) : f.a[b];
    if (part[0] == 'Q') {
      CHECK((x == 0 || x == Rational(1, 2)));
      q_count += x != 0;
    } else {
      CHECK((x == 0 || x == 1));
      r_count += x != 0;
    }
  }
  CHECK(q_count > 0);
  CHECK(r_count > 0);
}

TEST_CASE("sum forms refuse arguments outside their domain") {
  NomeArgs bad{{W(6), W(3), W(3)}, W(6)};  // a = q
  try {
    log_kappa_sumform(Kappa::Corner60, bad, W(10));
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
    CHECK(std::string(e.what()).find("a > q") != std::string::npos);
  }
  CHECK(sumform_domain_violation(Kappa::Bulk, bad) == std::nullopt);
  CHECK_THROWS_AS(EllipticParams::make({2, 2, 2}, 7), Error);
  CHECK_THROWS_AS(EllipticParams::make({0, 2, 4}, 6), Error);
}

TEST_CASE("identity and antisymmetry suites") {
  for (const auto& r : identity_suite()) {
    CAPTURE(r.name);
    CAPTURE(r.detail);
    CHECK(r.pass);
  }
  for (const auto& r : antisymmetry_suite()) {
    CAPTURE(r.name);
    CHECK(r.pass);
  }
}

TEST_CASE("an injected exponent fault is reported at its order") {
  const Exponent D = W(24);
  KappaSet ks;
  ks.isotropic = true;
  ks.trusted_order = D;
  ks.log_kb = log_kappa_product_isotropic(Kappa::Bulk, D);
  ks.log_ks = {log_kappa_product_isotropic(Kappa::Surface, D), {}, {}};
  ks.log_kc = log_kappa_product_isotropic(Kappa::Corner60, D);
  ks.log_kct = log_kappa_product_isotropic(Kappa::Corner120, D);
  for (const auto& c : verify_against_extraction(ks, EllipticParams::isotropic())) CHECK(c.pass());
  for (const auto& c : verify_against_extraction(ks, EllipticParams::isotropic(), Fault{Kappa::Corner60, 7})) {
    CAPTURE(c.name);
    if (c.name == "log_kc") {
      REQUIRE(c.first_mismatch);
      CHECK(*c.first_mismatch == W(7));
    } else {
      CHECK(c.pass());
    }
  }
}

TEST_CASE("z from its product") {
  // z = p - p^5 + ... in the isotropic case, so z^2 = p^2 - 2 p^6 + ...
  const RSeries z = z_series(W(2), W(6), W(12));
  const RSeries z2 = (z * z).truncated(W(10));
  CHECK(z2.coefficient(W(2)) == 1);
  CHECK(z2.coefficient(W(6)) == -2);
}
