#include "doctest.h"
#include "trilat/spinor.hpp"

using namespace trilat;

namespace {

Exponent W(long n) { return Exponent::whole(n); }

// The displayed low-order expansion, valid through degree 6 for M, N >= 4.
TrivariatePoly displayed_expansion(int M, int N) {
  TrivariatePoly p;
  auto set = [&](int a, int b, int c, long v) { p.coeffs[{a, b, c}] = Integer(v); };
  set(0, 0, 0, 1);
  set(1, 1, 0, 2);
  set(1, 1, 1, 2);
  set(2, 2, 0, 3);
  set(1, 2, 1, 2 * M - 2);
  set(2, 1, 1, 2 * N - 2);
  set(2, 2, 1, 4);
  set(2, 1, 2, 2);
  set(1, 2, 2, 2);
  set(3, 3, 0, 6);
  set(2, 3, 1, 4 * M - 4);
  set(3, 2, 1, 4 * N - 4);
  set(3, 1, 2, 2);
  set(2, 2, 2, M * N - 5);
  set(1, 3, 2, 2);
  return p;
}

RSeries tseries(std::initializer_list<long> c, long prec) {
  std::vector<RSeries::Term> t;
  long e = 0;
  for (long v : c) t.push_back({4 * e++, Rational(v)});
  return RSeries::from_terms(t, W(prec));
}

}  // namespace

TEST_CASE("brute force reproduces the smallest displayed terms") {
  auto p = zhat_bruteforce(make_shape("parallelogram", 3, 3), 6);
  CHECK(p.at(0, 0, 0) == 1);
  CHECK(p.at(1, 1, 0) == 2);
  CHECK(p.at(2, 2, 0) == 3);
  CHECK_THROWS_AS(zhat_bruteforce(make_shape("parallelogram", 5, 5), 4), Error);
}

TEST_CASE("displayed expansion through degree six") {
  for (int M : {4, 5, 6})
    for (int N : {4, 5, 6}) {
      CAPTURE(M);
      CAPTURE(N);
      auto p = zhat_polynomial(make_shape("parallelogram", M, N), {1, 1, 1}, 6);
      CHECK(p == displayed_expansion(M, N));
      auto iso = zhat_isotropic(make_shape("parallelogram", M, N), 6);
      CHECK(iso == std::vector<Integer>{1, 0, 2, 2, 2 * M + 2 * N - 1, 8, M * N + 4 * M + 4 * N - 3});
    }
}

TEST_CASE("spinor route equals enumeration on small shapes") {
  std::vector<Shape> shapes = {
      make_shape("parallelogram", 3, 3),   make_shape("parallelogram", 4, 2),
      make_shape("parallelogram", 2, 5),   make_shape("triangle", 5, 5),
      make_shape("hexagon", 5, 5),         make_shape("parallelogram13", 3, 3),
      make_shape("parallelogram23", 3, 4), make_shape("clipped", 4, 5),
  };
  for (const Shape& s : shapes) {
    CAPTURE(s.name());
    CHECK(zhat_polynomial(s, {1, 1, 1}, 9) == zhat_bruteforce(s, 9));
  }
}

TEST_CASE("narrow columns") {
  Shape s = make_shape("parallelogram", 4, 2);
  auto chain = transfer_chain(s);
  for (int r = 1; r < 4; ++r) {
    int u = 0, w = 0;
    for (const auto& f : chain)
      if (f.slot.row == r) u += f.kind == FactorKind::U, w += f.kind == FactorKind::W;
    CHECK(u == 1);
    CHECK(w == 1);
  }
}

TEST_CASE("weighted interpolation against enumeration") {
  Shape s = make_shape("parallelogram", 3, 4);
  auto full = zhat_bruteforce(s, 40);
  BoltzmannPoint bp = BoltzmannPoint::elliptic({2, 4, 6}, 12, W(16));
  CHECK_FALSE(first_difference(zhat_spinor(s, bp, W(16)), evaluate(full, bp.z, W(16))).has_value());
  BoltzmannPoint bq = BoltzmannPoint::elliptic({2, 2, 8}, 12, W(14));
  CHECK_FALSE(first_difference(zhat_spinor(s, bq, W(14)), evaluate(full, bq.z, W(14))).has_value());
  // odd alpha puts z on the half-integer grid
  BoltzmannPoint br = BoltzmannPoint::elliptic({1, 2, 4}, 7, W(9));
  CHECK(br.z[0].valuation() == Exponent::quarters(2));
  CHECK_FALSE(first_difference(zhat_spinor(s, br, W(9)), evaluate(full, br.z, W(9))).has_value());
}

TEST_CASE("complex gauge agrees with the real gauge") {
  // z1 = t, z2 = 2t + t^2, z3 = 3t: distinct weights, exact Gaussian arithmetic
  BoltzmannPoint bp = BoltzmannPoint::symbolic({tseries({0, 1}, 40), tseries({0, 2, 1}, 40), tseries({0, 3}, 40)});
  for (const Shape& s : {make_shape("parallelogram", 3, 3), make_shape("clipped", 4, 4)}) {
    CAPTURE(s.name());
    auto sq = zhat_squared_complex_gauge(s, bp, W(7));
    RSeries z = zhat_spinor(s, bp, W(7));
    CHECK_FALSE(first_difference(real_part(sq), z * z).has_value());
  }
}

TEST_CASE("isotropic series in p") {
  Shape s = make_shape("parallelogram", 4, 4);
  BoltzmannPoint bp = BoltzmannPoint::isotropic(W(12));
  RSeries z = zhat_spinor(s, bp, W(12));
  auto c = zhat_isotropic(s, 11);
  TrivariatePoly poly;
  for (int k = 0; k < 12; ++k) poly.coeffs[{k, 0, 0}] = c[k];
  CHECK_FALSE(first_difference(z, evaluate(poly, bp.z, W(12))).has_value());
  CHECK(z.coefficient(0) == 1);
  CHECK(z.coefficient(2) == 2);
  RSeries one = zhat_spinor(s, bp, W(1));
  CHECK(one.terms().size() == 1);
  CHECK(one.precision() == W(1));
}

TEST_CASE("log Z-hat grows linearly in M") {
  const int N = 7, D = 12;
  std::vector<RSeries> logs;
  for (int M = 7; M <= 10; ++M) {
    auto c = zhat_isotropic(make_shape("parallelogram", M, N), D);
    std::vector<RSeries::Term> t;
    for (int k = 0; k <= D; ++k) t.push_back({4 * k, Rational(c[k])});
    logs.push_back(log(RSeries::from_terms(t, W(D + 1))));
  }
  RSeries d1 = logs[1] - logs[0], d2 = logs[2] - logs[1], d3 = logs[3] - logs[2];
  CHECK_FALSE(first_difference(d1, d2).has_value());
  CHECK_FALSE(first_difference(d2, d3).has_value());
}
