#pragma once

#include "trilat/extract.hpp"
#include "trilat/series.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trilat {

enum class Kappa { Bulk, Surface, Corner60, Corner120 };
const char* to_string(Kappa k);
Kappa parse_kappa(const std::string& s);  // kb | ks | kc | kct

// a_j = p^{a[j]}, q = p^{q}.  The three a's are not tied to q here so the
// same evaluators serve the inversion relations (1/a, q^2/a, ...).
struct NomeArgs {
  std::array<Exponent, 3> a;
  Exponent q;
};

// a_j = p^{alpha_j}, q = p^{sigma}, alpha_1 + alpha_2 + alpha_3 = sigma.
struct EllipticParams {
  std::array<int, 3> alpha{2, 2, 2};
  int sigma = 6;

  static EllipticParams isotropic() { return {}; }
  static EllipticParams make(std::array<int, 3> alpha, int sigma);  // validates
  bool is_isotropic() const { return alpha[0] == alpha[1] && alpha[1] == alpha[2]; }
  // Arguments of the i-th quantity: (a_i | a_{i+1}, a_{i-1} | q).
  NomeArgs args(int i) const;
  std::string str() const;
};

// One factor (1 - p^e)^power of a product conjecture, with e written as
// a1^{x0} a2^{x1} a3^{x2} q^{y} p^{z} in the rotated arguments.
struct ProductFactor {
  const char* part;
  std::array<Rational, 3> a;
  Rational q, p;
  Rational power;
  Exponent e;
};

// Factors of the anisotropic products with e < D.  Bulk covers all three a's;
// the others are the i = 0 quantity of the given (already rotated) args.
std::vector<ProductFactor> product_factors(Kappa which, const NomeArgs& args, Exponent D);
// The isotropic products written directly in p.
std::vector<ProductFactor> isotropic_product_factors(Kappa which, Exponent D);

RSeries log_of_factors(const std::vector<ProductFactor>& fs, Exponent D);

// log kappa from the product conjectures.  For Bulk, i is ignored.
RSeries log_kappa_product(Kappa which, const EllipticParams& ep, int i, Exponent D);
RSeries log_kappa_product(Kappa which, const NomeArgs& args, Exponent D);
RSeries log_kappa_product_isotropic(Kappa which, Exponent D);
RSeries kappa_product(Kappa which, const EllipticParams& ep, int i, Exponent D);

// log kappa from sum_m F(a^m, q^m)/m.  Throws Domain naming the violated
// inequality when the sum does not converge.
RSeries log_kappa_sumform(Kappa which, const EllipticParams& ep, int i, Exponent D);
RSeries log_kappa_sumform(Kappa which, const NomeArgs& args, Exponent D);
RSeries log_kappa_sumform_isotropic(Kappa which, Exponent D);
// sum_m F(p^m)/m over m >= 1 (or odd m only) for a summand known to p^D.
RSeries lambert_sum(const RSeries& F, Exponent D, bool odd_only = false);
// Empty when the args lie in the convergence domain of the sum.
std::optional<std::string> sumform_domain_violation(Kappa which, const NomeArgs& args);

// The summands.  Arguments are square roots: A = a^{1/2}, Qr = q^{1/2}.
template <class T>
T F_bulk(const T& A, const T& Qr);
template <class T>
T F_surface(const T& A1, const T& A2, const T& A3, const T& Qr);
template <class T>
T F_corner60(const T& A, const T& Qr);
template <class T>
T F_corner120(const T& A1, const T& A2, const T& A3, const T& Qr);
// The isotropic summands in p (bulk is for kappa_b itself, all three a's).
template <class T>
T F_isotropic(Kappa which, const T& p);

// z(a, q) = a^{1/2} G(a, q); a must be on the half grid.
RSeries z_series(Exponent a, Exponent q, Exponent D);
RSeries log_G_series(Exponent w, Exponent q, Exponent D);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// The relations between the F's and the eta, mu, 1 - z^2 identities.
// Rational points are drawn from a seeded generator.
std::vector<CheckResult> identity_suite(std::uint64_t seed = 2024, int points = 5,
                                        Exponent D = Exponent::whole(25));
// F(1/args) = -F(args) for every F.
std::vector<CheckResult> antisymmetry_suite(std::uint64_t seed = 2024, int points = 5);

struct QuantityCheck {
  std::string name;
  Exponent agrees_to;                     // first order not compared or first mismatch
  std::optional<Exponent> first_mismatch;
  bool pass() const { return !first_mismatch; }
};

// Perturbs the exponent of (1 - p^n) in the Euler product of one kappa by +1.
struct Fault {
  Kappa which = Kappa::Corner60;
  int n = 0;
};

// Each gauge-invariant combination of the extraction against the products.
std::vector<QuantityCheck> verify_against_extraction(const KappaSet& ks, const EllipticParams& ep,
                                                     std::optional<Fault> fault = std::nullopt);

}  // namespace trilat
