#pragma once

#include "trilat/lattice.hpp"
#include "trilat/series.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace trilat {

// z_j = exp(-2 K_j) as series in p.
struct BoltzmannPoint {
  enum class Kind { Isotropic, Elliptic, Symbolic };
  Kind kind = Kind::Symbolic;
  std::array<RSeries, 3> z;
  std::array<int, 3> alpha{};  // elliptic only
  int sigma = 0;

  // z = p * prod (1-p^{24k-20})(1-p^{24k-4}) / ((1-p^{24k-16})(1-p^{24k-8}))
  static BoltzmannPoint isotropic(Exponent D);
  // z_j = a_j^{1/2} G(a_j, q) with a_j = p^{alpha_j}, q = p^sigma.
  static BoltzmannPoint elliptic(std::array<int, 3> alpha, int sigma, Exponent D);
  static BoltzmannPoint symbolic(std::array<RSeries, 3> z);
};

struct SpinorFactor {
  FactorKind kind;
  FactorSlot slot;
  int m;  // U, W act on spinor rows (2m, 2m+1); V on (2m-1, 2m)
};

// Kept factors in chain order, left to right.
std::vector<SpinorFactor> transfer_chain(const Shape& s);

// The 2x2 active block of a factor (rows a, a+1), complex gauge.
std::array<std::array<Series<GaussRational>, 2>, 2> spinor_block(const SpinorFactor& f,
                                                                  const BoltzmannPoint& z,
                                                                  Exponent prec);

// Monomials z1^a z2^b z3^c -> integer coefficient.
struct TrivariatePoly {
  std::map<std::array<int, 3>, Integer> coeffs;

  Integer at(int a, int b, int c) const;
  int total_degree() const;
  TrivariatePoly truncated(int degree) const;  // total degree <= degree
  std::string str() const;
  friend bool operator==(const TrivariatePoly&, const TrivariatePoly&) = default;
};

struct SpinorStats {
  int primes = 0;
  int runs = 0;
  int window = 0;  // final relative window
};

// Z-hat(z1, z2, z3) keeping monomials with w1 a + w2 b + w3 c <= degree.
TrivariatePoly zhat_polynomial(const Shape& s, std::array<int, 3> weights, int degree,
                               SpinorStats* stats = nullptr);
// Z-hat at z1 = z2 = z3 = z, coefficients of z^0 .. z^degree.
std::vector<Integer> zhat_isotropic(const Shape& s, int degree, SpinorStats* stats = nullptr);
// Z-hat as a series in p, known modulo p^D.
RSeries zhat_spinor(const Shape& s, const BoltzmannPoint& z, Exponent D, SpinorStats* stats = nullptr);

// Z-hat squared through the complex-gauge matrices, in exact
// Gaussian-rational arithmetic.  Slow; a cross-check for small shapes.
Series<GaussRational> zhat_squared_complex_gauge(const Shape& s, const BoltzmannPoint& z, Exponent D);

// Sum over all spin configurations; refuses shapes with more than 24 spins.
TrivariatePoly zhat_bruteforce(const Shape& s, int maxdeg);

// Substitutes series for z1, z2, z3.
RSeries evaluate(const TrivariatePoly& poly, const std::array<RSeries, 3>& z, Exponent D);

// Determinant of a square matrix of series, pivoting on the lowest valuation.
template <class S>
Series<S> series_determinant(std::vector<std::vector<Series<S>>> a);

}  // namespace trilat
