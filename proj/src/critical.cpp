#include "trilat/critical.hpp"
#include "trilat/error.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/SVD>

#include <functional>
#include <iomanip>
#include <sstream>

namespace trilat {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::cos;
using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::pow;
using boost::multiprecision::sin;
using boost::multiprecision::sqrt;
using boost::multiprecision::tan;

const Real pi = boost::math::constants::pi<Real>();

constexpr long kMaxTerms = 2000000;

// Sum of t(m) over m = first, first+step, ...  Terms are assumed to decay at
// least geometrically with ratio rho once m is past the first few.
Real geometric_sum(const std::function<Real(long)>& t, Real rho, Real tol, const char* what, long first = 1,
                   long step = 1) {
  Real s = 0;
  int quiet = 0;
  for (long m = first; m < kMaxTerms; m += step) {
    const Real x = t(m);
    s += x;
    const Real r = rho * Real(m + step) / Real(m);
    const Real bound = r < 1 ? abs(x) * r / (1 - r) : Real(1);
    if (bound < tol / 10) {
      if (++quiet >= 2) return s;
    } else {
      quiet = 0;
    }
    if (m + step >= kMaxTerms) {
      std::ostringstream os;
      os << what << ": tolerance not reached, tail bound " << str(bound, 3);
      throw Error(ErrorKind::PrecisionExhausted, os.str());
    }
  }
  return s;
}

// Product of f(n), n >= 1, stopping when the geometric bound on the log of
// the remaining factors drops below tol/10.
Real geometric_product(const std::function<Real(long)>& f, Real rho, Real tol, const char* what) {
  Real prod = 1;
  int quiet = 0;
  for (long n = 1; n < kMaxTerms; ++n) {
    const Real x = f(n);
    if (x == 0) throw Error(ErrorKind::Domain, std::string(what) + ": factor vanishes");
    prod *= x;
    const Real t = abs(x - 1);
    const Real r = rho * Real(n + 1) / Real(n);
    const Real bound = r < 1 && t < Real(0.5) ? 2 * t * r / (1 - r) : Real(1);
    if (bound < tol / 10) {
      if (++quiet >= 2) return prod;
    } else {
      quiet = 0;
    }
  }
  throw Error(ErrorKind::PrecisionExhausted, std::string(what) + ": product did not converge");
}

void check_q(Real q) {
  if (!(q > 0 && q < 1)) throw Error(ErrorKind::Domain, "need 0 < q < 1, got q = " + str(q, 6));
}

}  // namespace

std::string str(const Real& x, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// Critical points

CriticalPoint CriticalPoint::make(Real lambda, std::array<Real, 3> ratio) {
  if (!(lambda > 0)) throw Error(ErrorKind::Domain, "lambda must be positive");
  Real s = 0;
  for (auto r : ratio) {
    if (r < 0 || r >= 1) throw Error(ErrorKind::Domain, "need 0 <= u_j < lambda");
    s += r;
  }
  if (abs(s - 1) > Real("1e-30")) throw Error(ErrorKind::Domain, "need u_1 + u_2 + u_3 = lambda");
  CriticalPoint pt;
  pt.lambda = lambda;
  for (int j = 0; j < 3; ++j) pt.u[j] = ratio[j] * lambda;
  return pt;
}

CriticalPoint CriticalPoint::from_qprime(Real qprime, std::array<Real, 3> ratio) {
  if (!(qprime > 0 && qprime < 1)) throw Error(ErrorKind::Domain, "need 0 < q' < 1");
  return make(-pi / log(qprime), ratio);
}

std::array<Real, 3> CriticalPoint::isotropic_ratio() {
  const Real t = Real(1) / 3;
  return {t, t, 1 - 2 * t};
}

Real CriticalPoint::q() const { return exp(-pi * lambda); }
Real CriticalPoint::qprime() const { return exp(-pi / lambda); }
Real CriticalPoint::a(int j) const { return exp(-pi * u[j]); }

CriticalPoint CriticalPoint::rotated(int i) const {
  CriticalPoint r = *this;
  for (int k = 0; k < 3; ++k) r.u[k] = u[(i + k) % 3];
  return r;
}

// ---------------------------------------------------------------------------
// Products

const char* to_string(EllipticFn f) {
  switch (f) {
    case EllipticFn::G: return "G";
    case EllipticFn::H: return "H";
    case EllipticFn::z: return "z";
    case EllipticFn::k: return "k";
    case EllipticFn::eta: return "eta";
    case EllipticFn::mu: return "mu";
  }
  return "?";
}

Real elliptic_eval(EllipticFn f, Real w, Real q, Real tol) {
  check_q(q);
  const bool uses_w = f == EllipticFn::G || f == EllipticFn::H || f == EllipticFn::z;
  if (uses_w && w == 0) throw Error(ErrorKind::Domain, "w = 0");
  switch (f) {
    case EllipticFn::G:
      return geometric_product(
          [&](long n) {
            const Real x = pow(q, 4 * n - 3), y = pow(q, 4 * n - 1);
            return (1 - x / w) * (1 - y * w) / ((1 - x * w) * (1 - y / w));
          },
          q, tol, "G");
    case EllipticFn::z:
      if (w < 0) throw Error(ErrorKind::Domain, "z(w, q) needs w > 0");
      return sqrt(w) * elliptic_eval(EllipticFn::G, w, q, tol);
    case EllipticFn::H:
      return geometric_product(
          [&](long n) {
            const Real x = pow(q, 2 * n - 1), y = pow(q, 2 * n);
            return pow((1 - x / w) / (1 - x * w), 2 * n - 1) * pow((1 - y * w) / (1 - y / w), 2 * n);
          },
          q, tol, "H");
    case EllipticFn::k:
      return 4 * sqrt(q) * geometric_product(
                               [&](long n) { return pow((1 + pow(q, 2 * n)) / (1 + pow(q, 2 * n - 1)), 4); }, q,
                               tol, "k");
    case EllipticFn::eta:
      return geometric_product(
          [&](long n) {
            const Real x = 1 - pow(q, 4 * n - 2);
            return x * x / (1 - pow(q, 2 * n - 1));
          },
          q, tol, "eta");
    case EllipticFn::mu:
      return geometric_product([&](long n) { return 1 - pow(q, 4 * n - 2); }, q, tol, "mu");
  }
  throw Error(ErrorKind::Domain, "unknown function");
}

// ---------------------------------------------------------------------------
// Conjugate-nome forms

Real ghat_zero(Real r) {
  // d/db of the integral of sinh(bx)/(x cosh^2 x) is pi b / sin(pi b / 2).
  const Real b = 2 * r;
  if (abs(b) >= 2) throw Error(ErrorKind::Domain, "g-hat(0) needs |u| < lambda");
  if (b == 0) return 0;
  auto f = [](Real beta) -> Real {
    if (abs(beta) < Real("1e-12")) return 2 + pi * pi * beta * beta / 12;
    return pi * beta / sin(pi * beta / 2);
  };
  Real err = 0;
  const Real v = boost::math::quadrature::gauss_kronrod<Real, 31>::integrate(f, Real(0), b, 20, Real("1e-32"), &err);
  if (err > Real("1e-25")) throw Error(ErrorKind::PrecisionExhausted, "g-hat(0) quadrature error " + str(err, 3));
  return v;
}

Real conjugate_log(ConjugateFn f, Real lambda, Real u, Real tol) {
  if (!(lambda > 0)) throw Error(ErrorKind::Domain, "lambda must be positive");
  if (abs(u) >= lambda) throw Error(ErrorKind::Domain, "conjugate forms need |u| < lambda");
  const Real qp = exp(-pi / lambda);
  if (f == ConjugateFn::z) {
    const Real s = geometric_sum(
        [&](long m) {
          const Real sign = ((m - 1) / 2) % 2 == 0 ? 1 : -1;
          return sign * pow(qp, m) * sin(pi * m * u / (2 * lambda)) / (m * (1 - pow(qp, m)));
        },
        qp * qp, tol, "conjugate z", 1, 2);
    return log(tan(pi * (lambda - u) / (4 * lambda))) - 4 * s;
  }
  const Real s = geometric_sum(
      [&](long m) {
        const Real x = pow(qp, 2 * m);
        const Real S = sin(pi * m * u / lambda), C = cos(pi * m * u / lambda);
        return 4 * x * (S - pi * m * u * C / lambda) / (pi * m * m * (1 - x)) +
               8 * x * S / (lambda * m * (1 - x) * (1 - x));
      },
      pow(qp, 4), tol, "conjugate H", 1, 2);
  return pi * u / 4 - ghat_zero(u / lambda) / 4 - s;
}

Real conjugate_forms(const CriticalPoint& pt, int j, ConjugateFn f) { return conjugate_log(f, pt.lambda, pt.u[j]); }

// ---------------------------------------------------------------------------
// Singular coefficients

const char* to_string(Singularity s) {
  switch (s) {
    case Singularity::Bulk: return "kb";
    case Singularity::Surface: return "ks";
    case Singularity::Corner60: return "kc";
    case Singularity::Corner120: return "kct";
    case Singularity::SquareCorner: return "sq";
  }
  return "?";
}

Singularity parse_singularity(const std::string& s) {
  if (s == "kb") return Singularity::Bulk;
  if (s == "ks") return Singularity::Surface;
  if (s == "kc") return Singularity::Corner60;
  if (s == "kct") return Singularity::Corner120;
  if (s == "sq") return Singularity::SquareCorner;
  throw Error(ErrorKind::Parse, "unknown singularity '" + s + "' (kb, ks, kc, kct, sq)");
}

namespace {

Real corner60_coefficient(Real r) {
  if (r >= 1) throw Error(ErrorKind::Domain, "60-degree corner coefficient has a pole at u = lambda");
  return -(5 + r) / (144 * (1 - r));
}

Real corner120_coefficient(Real r) { return -(2 - r) / (72 * (1 + r)); }

}  // namespace

Real singular_coefficient(Singularity s, const CriticalPoint& pt) {
  switch (s) {
    case Singularity::Bulk: {
      Real t = 0;
      for (int j = 0; j < 3; ++j) t += sin(pi * pt.ratio(j));
      return -4 * t / pi;
    }
    case Singularity::Surface:
      return -sin(pi * (1 + pt.ratio(0)) / 2) / pi;
    case Singularity::Corner60:
      return corner60_coefficient(pt.ratio(0));
    case Singularity::Corner120:
      return corner120_coefficient(pt.ratio(0));
    case Singularity::SquareCorner:
      return (corner60_coefficient(pt.ratio(2)) + corner120_coefficient(pt.ratio(2))) / 2;
  }
  throw Error(ErrorKind::Domain, "unknown singularity");
}

Rational corner_coefficient_exact(Kappa which, const Rational& r) {
  if (which == Kappa::Corner60) {
    if (r >= 1) throw Error(ErrorKind::Domain, "60-degree corner coefficient has a pole at u = lambda");
    return -(5 + r) / (144 * (1 - r));
  }
  if (which == Kappa::Corner120) return -(2 - r) / (72 * (1 + r));
  throw Error(ErrorKind::Domain, "exact coefficients exist for the corners only");
}

Rational cardy_peschel(const Rational& g, const Rational& c) {
  if (g <= 0 || g >= 2) throw Error(ErrorKind::Domain, "need 0 < gamma < 2 pi");
  return c / 24 * (g - 1 / g);
}

Real cardy_peschel(Real gamma, Real c) {
  if (gamma <= 0 || gamma >= 2 * pi) throw Error(ErrorKind::Domain, "need 0 < gamma < 2 pi");
  return c / 24 * (gamma / pi - pi / gamma);
}

// ---------------------------------------------------------------------------
// Direct sums

namespace {

Real summand(Kappa which, const CriticalPoint& pt, Real n) {
  const Real Qr = exp(-pi * pt.lambda * n / 2);
  std::array<Real, 3> A;
  for (int j = 0; j < 3; ++j) A[j] = exp(-pi * pt.u[j] * n / 2);
  switch (which) {
    case Kappa::Bulk: return F_bulk(A[0], Qr) + F_bulk(A[1], Qr) + F_bulk(A[2], Qr);
    case Kappa::Surface: return F_surface(A[0], A[1], A[2], Qr);
    case Kappa::Corner60: return F_corner60(A[0], Qr);
    case Kappa::Corner120: return F_corner120(A[0], A[1], A[2], Qr);
  }
  return 0;
}

}  // namespace

Real log_kappa_direct(Kappa which, const CriticalPoint& pt, Real tol) {
  Real umax = 0;
  for (auto u : pt.u) umax = std::max(umax, u);
  const Real rho = exp(-pi * (pt.lambda - umax) / 2);
  return geometric_sum([&](long m) { return summand(which, pt, Real(m)) / m; }, rho, tol, "direct sum");
}

Real free_energy(Singularity s, const CriticalPoint& pt) {
  switch (s) {
    case Singularity::Bulk: return log_kappa_direct(Kappa::Bulk, pt);
    case Singularity::Surface: return log_kappa_direct(Kappa::Surface, pt);
    case Singularity::Corner60: return log_kappa_direct(Kappa::Corner60, pt);
    case Singularity::Corner120: return log_kappa_direct(Kappa::Corner120, pt);
    case Singularity::SquareCorner: {
      const CriticalPoint r = pt.rotated(2);
      return (log_kappa_direct(Kappa::Corner60, r) + log_kappa_direct(Kappa::Corner120, r)) / 2;
    }
  }
  throw Error(ErrorKind::Domain, "unknown singularity");
}

PoleExpansion pole_expansion(Kappa which, const CriticalPoint& pt) {
  // n F(n) = pole + constant n^2 + c4 n^4 + O(n^6), solved from three n's.
  const Real h = Real("1e-4");
  Real f[3];
  for (int i = 0; i < 3; ++i) {
    const Real n = h * (i + 1);
    f[i] = n * summand(which, pt, n);
  }
  // Newton divided differences in x = n^2 at x = h^2, 4h^2, 9h^2.
  const Real x0 = h * h, x1 = 4 * h * h, x2 = 9 * h * h;
  const Real d01 = (f[1] - f[0]) / (x1 - x0), d12 = (f[2] - f[1]) / (x2 - x1);
  const Real d012 = (d12 - d01) / (x2 - x0);
  PoleExpansion e;
  e.constant = d01 - d012 * (x0 + x1);
  e.pole = f[0] - d01 * x0 + d012 * x0 * x1;
  const Real lam = pt.lambda, u = pt.u[0];
  e.pole_closed = 0;
  e.constant_closed = 0;
  if (which == Kappa::Corner60) {
    e.pole_closed = (5 * lam + u) / (24 * pi * lam * (lam - u));
    e.constant_closed = pi * (3 * u - lam) / 72;
  } else if (which == Kappa::Corner120) {
    e.pole_closed = (2 * lam - u) / (12 * pi * lam * (lam + u));
    e.constant_closed = pi * (lam - 3 * u) / 72;
  }
  return e;
}

// ---------------------------------------------------------------------------
// Fits

Real SingularFit::relative_error() const { return abs(coefficient - closed_form) / abs(closed_form); }

std::vector<Real> default_qprime_grid() {
  std::vector<Real> g;
  for (int k = 0; k <= 8; ++k) g.push_back(pow(Real(10), Real(-3) - Real(k) / 2));
  return g;
}

SingularFit fit_singularity(Singularity s, std::array<Real, 3> ratio, const std::vector<Real>& grid) {
  using Col = std::function<Real(Real, Real)>;  // (q', log q')
  std::vector<std::pair<std::string, Col>> cols;
  std::size_t target = 0;
  auto pw = [](Real e) { return [e](Real x, Real) { return pow(x, e); }; };
  auto pwlog = [](Real e) { return [e](Real x, Real L) { return pow(x, e) * L; }; };
  switch (s) {
    case Singularity::Bulk:
      cols = {{"1", pw(0)},          {"q'", pw(1)},          {"q'^2", pw(2)}, {"q'^2 log q'", pwlog(2)},
              {"q'^3", pw(3)},       {"q'^3 log q'", pwlog(3)}, {"q'^4", pw(4)}, {"q'^4 log q'", pwlog(4)}};
      target = 3;
      break;
    case Singularity::Surface:
      cols = {{"1", pw(0)},
              {"q'^1/2", pw(Real(1) / 2)},
              {"q'", pw(1)},
              {"q' log q'", pwlog(1)},
              {"q'^3/2", pw(Real(3) / 2)},
              {"q'^3/2 log q'", pwlog(Real(3) / 2)},
              {"q'^2", pw(2)},
              {"q'^2 log q'", pwlog(2)}};
      target = 3;
      break;
    default:
      cols = {{"log q'", pwlog(0)}, {"1", pw(0)}, {"q'", pw(1)}, {"q' log q'", pwlog(1)}};
      target = 0;
  }
  if (grid.size() < cols.size())
    throw Error(ErrorKind::Configuration, "fit needs at least " + std::to_string(cols.size()) + " grid points");
  Real lo = grid.front(), hi = grid.front();
  for (auto x : grid) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (lo < Real("0.99e-7") || hi > Real("1.01e-3") || hi / lo < Real(99))
    throw Error(ErrorKind::Domain, "q' grid must span at least two decades inside [1e-7, 1e-3]");

  SingularFit fit;
  fit.which = s;
  fit.ratio = ratio;
  fit.qprime = grid;
  for (auto& c : cols) fit.columns.push_back(c.first);
  fit.closed_form = singular_coefficient(s, CriticalPoint::from_qprime(grid.front(), ratio));

  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  Mat M(grid.size(), cols.size());
  Vec y(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Real qp = grid[i], L = log(qp);
    const CriticalPoint pt = CriticalPoint::from_qprime(qp, ratio);
    const Real f = free_energy(s, pt);
    fit.free_energy.push_back(f);
    // The n -> 0 constant of the corner summands enters through -g(0)/2,
    // which is linear in lambda = -pi/log q'.
    Real corr = 0;
    if (s == Singularity::Corner60) corr = pi * pi * (3 * ratio[0] - 1) / (144 * L);
    if (s == Singularity::Corner120) corr = pi * pi * (1 - 3 * ratio[0]) / (144 * L);
    y(i) = f - corr;
    for (std::size_t j = 0; j < cols.size(); ++j) M(i, j) = cols[j].second(qp, L);
  }
  Vec scale(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    scale(j) = M.col(j).norm();
    M.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  fit.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : Real(std::numeric_limits<double>::infinity());
  if (!(fit.condition < Real("1e24")))
    throw Error(ErrorKind::Configuration, "ill-conditioned fit, condition estimate " + str(fit.condition, 3));
  const Vec sol = svd.solve(y);
  fit.coefficient = sol(target) / scale(target);
  return fit;
}

void write_fit_csv(std::ostream& os, const std::vector<SingularFit>& fits) {
  os << "kind,ratio1,ratio2,ratio3,qprime,free_energy,fitted_coefficient,closed_form\n";
  for (const auto& f : fits)
    for (std::size_t i = 0; i < f.qprime.size(); ++i)
      os << to_string(f.which) << ',' << str(f.ratio[0], 17) << ',' << str(f.ratio[1], 17) << ','
         << str(f.ratio[2], 17) << ',' << str(f.qprime[i], 17) << ',' << str(f.free_energy[i], 30) << ','
         << str(f.coefficient, 17) << ',' << str(f.closed_form, 17) << '\n';
}

// ---------------------------------------------------------------------------
// Suites

bool NumCheck::pass() const { return abs(lhs - rhs) <= tol * std::max(Real(1), abs(rhs)); }

std::vector<NumCheck> conjugate_suite(const std::vector<Real>& lambdas, const std::vector<Real>& ratios, Real tol) {
  std::vector<NumCheck> out;
  for (auto lam : lambdas)
    for (auto r : ratios) {
      const Real u = r * lam, q = exp(-pi * lam), a = exp(-pi * u);
      const std::string at = " at lambda=" + str(lam, 4) + ", u/lambda=" + str(r, 4);
      out.push_back({"log z" + at, conjugate_log(ConjugateFn::z, lam, u), log(elliptic_eval(EllipticFn::z, a, q)),
                     tol});
      out.push_back({"log H" + at, conjugate_log(ConjugateFn::H, lam, u), log(elliptic_eval(EllipticFn::H, a, q)),
                     tol});
    }
  return out;
}

std::vector<NumCheck> modularity_suite(const CriticalPoint& pt) {
  const Real tol("1e-9");
  std::vector<NumCheck> out;
  std::array<PoleExpansion, 3> c, ct, s;
  for (int i = 0; i < 3; ++i) {
    const CriticalPoint r = pt.rotated(i);
    c[i] = pole_expansion(Kappa::Corner60, r);
    ct[i] = pole_expansion(Kappa::Corner120, r);
    s[i] = pole_expansion(Kappa::Surface, r);
  }
  const PoleExpansion b = pole_expansion(Kappa::Bulk, pt);
  for (int i = 0; i < 3; ++i) {
    const std::string k = std::to_string(i + 1);
    out.push_back({"kc" + k + " pole", c[i].pole, c[i].pole_closed, tol});
    out.push_back({"kc" + k + " constant", c[i].constant, c[i].constant_closed, tol});
    out.push_back({"kct" + k + " pole", ct[i].pole, ct[i].pole_closed, tol});
    out.push_back({"kct" + k + " constant", ct[i].constant, ct[i].constant_closed, tol});
    out.push_back({"kc" + k + " kct" + k + " constant cancels", c[i].constant + ct[i].constant, Real(0), tol});
    out.push_back({"ks" + k + " constant cancels", s[i].constant, Real(0), tol});
  }
  out.push_back({"kc1 kc2 kc3 constant cancels", c[0].constant + c[1].constant + c[2].constant, Real(0), tol});
  out.push_back({"kct1 kct2 kct3 constant cancels", ct[0].constant + ct[1].constant + ct[2].constant, Real(0), tol});
  out.push_back({"kb constant cancels", b.constant, Real(0), tol});
  return out;
}

// ---------------------------------------------------------------------------
// Square lattice

namespace {

// F_c(1, q) + Ft_c(1 | a_1, a_2 | q) for the square lattice, R = q^{1/2}.
template <class T>
T corner_sq(const T& R) {
  const T one(1), q = R * R, q2 = q * q;
  return T(2) * R * (one + q2) / ((one + q) * (one - q2)) - q / (one - q2);
}

template <class T>
T bulk_sq(const T& R, const T& W) {
  const T one(1), q = R * R;
  return q * (one - q) * (W - q / W) * (one / W - W) / ((one + q) * (one + q) * (one + q * q));
}

template <class T>
T surface_sq(const T& R, const T& W) {
  const T one(1), q = R * R, q2 = q * q;
  return q * (one / W - W) / ((one + q) * (one + q)) -
         q2 * (one / (W * W) - W * W) / (T(2) * (one + q2) * (one + q2));
}

// Odd-m summands of the right-hand sides.
template <class T>
T surface_odd(const T& R, const T& W) {
  const T one(1), q = R * R;
  return q * (one / W - W) / ((one + q) * (one + q));
}

template <class T>
T corner_odd(const T& R) {
  const T one(1), q = R * R, q2 = q * q;
  return -q / (one - q2) + T(2) * R * (one + q2) / ((one + q) * (one - q2));
}

CheckResult series_check(const std::string& name, const RSeries& a, const RSeries& b, Exponent D) {
  CheckResult r;
  r.name = name;
  const auto d = first_difference(a.truncated(D), b.truncated(D));
  r.pass = !d;
  r.detail = d ? "first difference at p^" + d->str() : "agree below p^" + D.str();
  return r;
}

}  // namespace

bool SquareReport::pass() const {
  for (const auto& c : series)
    if (!c.pass) return false;
  for (const auto& c : rational)
    if (!c.pass) return false;
  for (const auto& c : numeric)
    if (!c.pass()) return false;
  return true;
}

SquareReport square_reduction(Real q, Real w, Exponent order_q) {
  SquareReport rep;

  // Summand identities at rational points.
  const std::array<Rational, 3> Rs{Rational(1, 3), Rational(2, 7), Rational(1, 5)};
  const std::array<Rational, 3> Ws{Rational(7, 10), Rational(3, 5), Rational(4, 5)};
  bool bulk_ok = true, surf_ok = true, corner_ok = true, indep_ok = true;
  for (const auto& R : Rs) {
    const Rational one(1);
    Rational first;
    for (std::size_t k = 0; k < Ws.size(); ++k) {
      const Rational& W = Ws[k];
      const Rational A1 = R / W;
      bulk_ok &= F_bulk(A1, R) + F_bulk(W, R) + F_bulk(one, R) == bulk_sq(R, W);
      surf_ok &= F_surface(A1, W, one, R) == surface_sq(R, W);
      const Rational c = F_corner60(one, R) + F_corner120(one, A1, W, R);
      corner_ok &= c == corner_sq(R) - corner_sq(Rational(R * R)) / 2;
      if (k == 0) first = c;
      indep_ok &= c == first;
    }
  }
  rep.rational.push_back({"F_b(q/w^2) + F_b(w^2) + F_b(1) = square bulk summand", bulk_ok, "9 rational points"});
  rep.rational.push_back({"F_s(q/w^2 | w^2, 1 | q) = square surface summand", surf_ok, "9 rational points"});
  rep.rational.push_back({"two-corner summand = f(q) - f(q^2)/2", corner_ok, "9 rational points"});
  rep.rational.push_back({"two-corner summand independent of w", indep_ok, "3 values of w per q"});

  // Series in p with q = p^4 and w = p^{k/2}.
  const Exponent D = order_q * 4;
  const Exponent qe = Exponent::whole(4);
  for (int k = 1; k <= 3; ++k) {
    const Exponent we = Exponent::from_rational(Rational(k, 2));
    const Exponent a1 = qe - we * 2, a2 = we * 2, a3 = Exponent();
    const std::string at = " (w = p^" + we.str() + ", q = p^4)";
    const Exponent W = D + Exponent::whole(16);
    const RSeries R = RSeries::monomial(Rational(1), Exponent::whole(2), W);
    const RSeries Ws = RSeries::monomial(Rational(1), we, W);

    const RSeries bulk_rhs = lambert_sum(bulk_sq(R, Ws).truncated(D), D);
    const NomeArgs nb{{a1, a2, a3}, qe};
    rep.series.push_back(series_check("bulk sum form" + at, log_kappa_sumform(Kappa::Bulk, nb, D), bulk_rhs, D));
    rep.series.push_back(series_check("bulk product" + at, log_kappa_product(Kappa::Bulk, nb, D), bulk_rhs, D));

    const RSeries surf_rhs = lambert_sum(surface_odd(R, Ws).truncated(D), D, true);
    rep.series.push_back(
        series_check("surface sum form = odd-m sum" + at, log_kappa_sumform(Kappa::Surface, nb, D), surf_rhs, D));
    rep.series.push_back(
        series_check("surface product = odd-m sum" + at, log_kappa_product(Kappa::Surface, nb, D), surf_rhs, D));

    const NomeArgs nc{{a3, a1, a2}, qe};
    const RSeries corner_rhs = lambert_sum(corner_odd(R).truncated(D), D, true);
    rep.series.push_back(series_check(
        "two-corner sum form" + at,
        log_kappa_sumform(Kappa::Corner60, nc, D) + log_kappa_sumform(Kappa::Corner120, nc, D), corner_rhs, D));
    rep.series.push_back(series_check(
        "two-corner product" + at,
        log_kappa_product(Kappa::Corner60, nc, D) + log_kappa_product(Kappa::Corner120, nc, D), corner_rhs, D));
  }

  // Numerics at (q, w).
  check_q(q);
  if (!(w * w > q && w < 1)) throw Error(ErrorKind::Domain, "square reduction needs q < w^2 < 1");
  const Real tol("1e-28"), rho("0.95");
  const Real R = sqrt(q), A1 = R / w;
  auto msum = [&](const std::function<Real(Real)>& f, bool odd) {
    return geometric_sum([&](long m) { return f(Real(m)) / m; }, rho, tol, "square sum", 1, odd ? 2 : 1);
  };
  const Real one(1);
  const Real lb = msum([&](Real m) { return F_bulk(pow(A1, m), pow(R, m)) + F_bulk(pow(w, m), pow(R, m)) +
                                            F_bulk(one, pow(R, m)); },
                       false);
  const Real rb = msum([&](Real m) { return bulk_sq(pow(R, m), pow(w, m)); }, false);
  rep.numeric.push_back({"bulk sum at (q, w) = (" + str(q, 4) + ", " + str(w, 4) + ")", lb, rb, Real("1e-10")});
  const Real ls = msum([&](Real m) { return F_surface(pow(A1, m), pow(w, m), one, pow(R, m)); }, false);
  const Real rs = msum([&](Real m) { return surface_odd(pow(R, m), pow(w, m)); }, true);
  rep.numeric.push_back({"surface odd-m sum", ls, rs, Real("1e-10")});
  const Real lc = msum([&](Real m) { return F_corner60(one, pow(R, m)) + F_corner120(one, pow(A1, m), pow(w, m),
                                                                                      pow(R, m)); },
                       false);
  const Real log_kp = -8 * msum([&](Real m) { return pow(q, m) / (1 - pow(q, 2 * m)); }, true);
  const Real rc = log_kp / 8 +
                  2 * msum([&](Real m) { return pow(R, m) * (1 + pow(q, 2 * m)) / ((1 + pow(q, m)) * (1 - pow(q, 2 * m))); },
                           true);
  rep.numeric.push_back({"two-corner sum", lc, rc, Real("1e-10")});
  const Real k = elliptic_eval(EllipticFn::k, 0, q);
  rep.numeric.push_back({"log k' sum = log sqrt(1 - k^2)", log_kp, log(1 - k * k) / 2, Real("1e-10")});
  return rep;
}

}  // namespace trilat
