#pragma once

#include "trilat/conjectures.hpp"

#include <boost/multiprecision/float128.hpp>

#include <array>
#include <ostream>
#include <string>
#include <vector>

namespace trilat {

using Real = boost::multiprecision::float128;

// q = e^{-pi lambda}, a_j = e^{-pi u_j}, q' = e^{-pi/lambda}.
struct CriticalPoint {
  Real lambda;
  std::array<Real, 3> u;

  // u_j = ratio_j * lambda; the ratios must be in [0, 1) and sum to 1.
  static CriticalPoint make(Real lambda, std::array<Real, 3> ratio);
  static CriticalPoint from_qprime(Real qprime, std::array<Real, 3> ratio);
  static std::array<Real, 3> isotropic_ratio();

  Real q() const;
  Real qprime() const;
  Real a(int j) const;
  Real ratio(int j) const { return u[j] / lambda; }
  // u_i moved to the front, the others in cyclic order.
  CriticalPoint rotated(int i) const;
};

enum class EllipticFn { G, H, z, k, eta, mu };
const char* to_string(EllipticFn f);

// Defining products, truncated once the geometric tail bound drops below
// tol/10.  w is ignored for k, eta and mu.
Real elliptic_eval(EllipticFn f, Real w, Real q, Real tol = Real("1e-30"));

// log z(e^{-pi u}, e^{-pi lambda}) and log H(e^{-pi u}, e^{-pi lambda})
// from their expansions in the conjugate nome.
enum class ConjugateFn { z, H };
Real conjugate_log(ConjugateFn f, Real lambda, Real u, Real tol = Real("1e-30"));
// The same at u_j of a critical point.
Real conjugate_forms(const CriticalPoint& pt, int j, ConjugateFn f);
// Integral of g(x) = sinh(2ux/lambda)/(x cosh^2 x) over the real line.
Real ghat_zero(Real u_over_lambda);

enum class Singularity { Bulk, Surface, Corner60, Corner120, SquareCorner };
const char* to_string(Singularity s);
Singularity parse_singularity(const std::string& s);  // kb ks kc kct sq

// Closed-form coefficient of q'^2 log q' (bulk), q' log q' (surface) or
// log q' (corners) in log kappa.  Surface, corner120: u_1; corner60: u = u_1;
// square corner: mean of both corner forms at u_3.
Real singular_coefficient(Singularity s, const CriticalPoint& pt);
Rational corner_coefficient_exact(Kappa which, const Rational& u_over_lambda);

// (c/24)(gamma/pi - pi/gamma).  The corner term of log kappa is this times
// -log q'.
Rational cardy_peschel(const Rational& gamma_over_pi, const Rational& c);
Real cardy_peschel(Real gamma, Real c);

// log kappa at a critical point by direct summation of F(a^m, q^m)/m.
// Bulk sums all three a's; surface and corners take u_1 first.
Real log_kappa_direct(Kappa which, const CriticalPoint& pt, Real tol = Real("1e-30"));
// The free energy whose singularity is fitted.
Real free_energy(Singularity s, const CriticalPoint& pt);

// Behaviour of F(e^{-pi u n}, e^{-pi lambda n})/n at n -> 0: pole/n^2 + constant.
struct PoleExpansion {
  Real pole, constant;
  Real pole_closed, constant_closed;  // zero closed forms where none is stated
};
PoleExpansion pole_expansion(Kappa which, const CriticalPoint& pt);

struct SingularFit {
  Singularity which;
  std::array<Real, 3> ratio;
  std::vector<Real> qprime, free_energy;
  std::vector<std::string> columns;
  Real coefficient, closed_form;
  Real condition;  // of the column-scaled design matrix
  Real relative_error() const;
};

std::vector<Real> default_qprime_grid();  // 10^{-3 - k/2}, k = 0..8
// Least-squares fit of the free energy along a q' grid at fixed u_j/lambda.
// The grid must span at least two decades inside [1e-7, 1e-3].
SingularFit fit_singularity(Singularity s, std::array<Real, 3> ratio, const std::vector<Real>& qprime_grid);

struct NumCheck {
  std::string name;
  Real lhs, rhs;
  Real tol;
  bool pass() const;
};

// Conjugate vs product forms over lambda x u/lambda grids.
std::vector<NumCheck> conjugate_suite(const std::vector<Real>& lambdas, const std::vector<Real>& ratios,
                                      Real tol = Real("1e-10"));
// The n -> 0 constants cancel from every gauge-invariant combination.
std::vector<NumCheck> modularity_suite(const CriticalPoint& pt);

// a_1 = q/w^2, a_2 = w^2, a_3 = 1.
struct SquareReport {
  std::vector<CheckResult> series;  // as series in p with q = p^4, w = p^{k/2}
  std::vector<NumCheck> numeric;
  std::vector<CheckResult> rational;  // summand identities at rational (q, w)
  bool pass() const;
};
SquareReport square_reduction(Real q = Real("0.1"), Real w = Real("0.7"), Exponent order_q = Exponent::whole(20));

void write_fit_csv(std::ostream& os, const std::vector<SingularFit>& fits);

std::string str(const Real& x, int digits = 12);

}  // namespace trilat
