#include "trilat/product_form.hpp"

#include <string>

namespace trilat {

Rational Period24Pattern::at(std::int64_t n) const {
  const std::int64_t k = (n - 1) / 24 + 1;
  const auto& c = coeffs[static_cast<std::size_t>((n - 1) % 24)];
  return c[0] + c[1] * k + c[2] * k * k;
}

Rational ProductForm::exponent(std::int64_t n) const {
  if (n < 1 || n > known_to)
    throw Error(ErrorKind::PrecisionExhausted, "exponent e_" + std::to_string(n) +
                                                   " unknown (known to " + std::to_string(known_to) + ")");
  auto it = exponents.find(n);
  return it == exponents.end() ? Rational(0) : it->second;
}

ProductForm product_exponents(const RSeries& f) {
  for (const auto& t : f.terms())
    if (t.q % Exponent::kPerUnit != 0)
      throw Error(ErrorKind::GridViolation,
                  "product exponents need integer powers, found p^" + Exponent::quarters(t.q).str());
  if (f.is_exact())
    throw Error(ErrorKind::PrecisionExhausted, "product exponents of an exact series are unbounded");
  const RSeries L = log(f);
  ProductForm pf;
  pf.known_to = f.precision().integer_ceiling();
  std::vector<Rational> e(static_cast<std::size_t>(pf.known_to + 1));
  // -N L_N = sum_{d | N} d e_d
  for (std::int64_t N = 1; N <= pf.known_to; ++N) {
    Rational acc = -Rational(N) * L.coefficient(N);
    for (std::int64_t d = 1; d * 2 <= N; ++d)
      if (N % d == 0) acc -= Rational(d) * e[d];
    e[N] = acc / N;
    if (e[N] != 0) pf.exponents[N] = e[N];
  }
  return pf;
}

RSeries product_series(const ProductForm& pf, Exponent prec) {
  LogProduct lp(prec);
  for (const auto& [n, en] : pf.exponents) {
    if (Exponent::whole(n) >= prec) break;
    lp.factor(Exponent::whole(n), en);
  }
  return lp.value();
}

namespace {

// Polynomial through (1, y1), ..., (d+1, y_{d+1}), as (a, b, c).
std::array<Rational, 3> interpolate(const std::vector<Rational>& y) {
  std::array<Rational, 3> out{};
  const int m = static_cast<int>(y.size());
  for (int i = 0; i < m; ++i) {
    // Lagrange basis at nodes 1..m, expanded to monomials (degree <= 2).
    std::array<Rational, 3> basis{Rational(1), Rational(0), Rational(0)};
    Rational denom(1);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const Rational node(j + 1);
      std::array<Rational, 3> next{};
      for (int d = 0; d < 3; ++d) {
        next[d] -= basis[d] * node;
        if (d + 1 < 3) next[d + 1] += basis[d];
      }
      basis = next;
      denom *= Rational(i - j);
    }
    for (int d = 0; d < 3; ++d) out[d] += y[i] * basis[d] / denom;
  }
  return out;
}

}  // namespace

ProductForm fit_period24(ProductForm pf, int degree) {
  if (degree < 0 || degree > 2) throw Error(ErrorKind::Configuration, "pattern degree must be 0, 1 or 2");
  const std::int64_t periods = degree + 1;
  if (pf.known_to < 24 * periods)
    throw Error(ErrorKind::Configuration,
                "fitting degree " + std::to_string(degree) + " needs exponents through n = " +
                    std::to_string(24 * periods) + ", have " + std::to_string(pf.known_to));
  Period24Pattern pat;
  pat.degree = degree;
  for (int r = 1; r <= 24; ++r) {
    std::vector<Rational> y;
    for (std::int64_t k = 1; k <= periods; ++k) y.push_back(pf.exponent(24 * (k - 1) + r));
    pat.coeffs[r - 1] = interpolate(y);
  }
  for (std::int64_t n = 1; n <= pf.known_to; ++n) {
    if (pat.at(n) != pf.exponent(n)) {
      const std::int64_t r = (n - 1) % 24 + 1;
      throw Error(ErrorKind::NoStablePattern,
                  "residue " + std::to_string(r) + " mod 24 fails first at n = " + std::to_string(n) +
                      " (pattern " + pat.at(n).str() + ", actual " + pf.exponent(n).str() + ")");
    }
  }
  pf.pattern = pat;
  pf.fitted_from = 1;
  pf.fitted_to = 24 * periods;
  pf.verified_to = pf.known_to;
  return pf;
}

ProductForm extrapolate(const ProductForm& pf, std::int64_t n_max) {
  if (!pf.pattern) throw Error(ErrorKind::Configuration, "no fitted pattern to extrapolate");
  ProductForm out = pf;
  out.exponents.clear();
  out.known_to = n_max;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    Rational e = n <= pf.known_to ? pf.exponent(n) : pf.pattern->at(n);
    if (e != 0) out.exponents[n] = e;
  }
  return out;
}

RSeries sum_formula(int r, int s, const Rational& a, const Rational& b, const Rational& c,
                    Exponent D) {
  if (r < 1 || s < 0 || s >= r)
    throw Error(ErrorKind::Domain, "sum formula needs r >= 1 and 0 <= s < r");
  return sum_formula(Exponent::whole(r), Exponent::whole(s), a, b, c, D);
}

RSeries sum_formula(Exponent r, Exponent s, const Rational& a, const Rational& b,
                    const Rational& c, Exponent D) {
  if (r <= Exponent() || r - s <= Exponent())
    throw Error(ErrorKind::Domain, "sum formula needs r > 0 and r - s > 0");
  // -sum_m x^{(r-s)m}/m [a/(1-y) + (b-c)/(1-y)^2 + 2c/(1-y)^3], y = p^{rm};
  // the bracket's y^i coefficient is a + (b-c)(i+1) + c(i+1)(i+2).
  std::vector<RSeries::Term> terms;
  for (std::int64_t m = 1; (r - s) * m < D; ++m) {
    for (std::int64_t i = 0;; ++i) {
      const Exponent e = (r - s) * m + r * (m * i);
      if (e >= D) break;
      Rational coef = a + (b - c) * (i + 1) + c * (i + 1) * (i + 2);
      terms.push_back({e.quarters(), -coef / m});
    }
  }
  return RSeries::from_terms(std::move(terms), D);
}

LogProduct::LogProduct(Exponent D) : D_(D) {
  if (D.is_infinite()) throw Error(ErrorKind::PrecisionExhausted, "log-product needs a finite window");
  acc_.resize(static_cast<std::size_t>(std::max<std::int64_t>(D.quarters(), 0)));
}

void LogProduct::factor(Exponent e, const Rational& power, int sign) {
  if (e <= Exponent()) throw Error(ErrorKind::Domain, "factor (1 - p^" + e.str() + ") is not a unit");
  if (power == 0) return;
  // log(1 - c x) = -sum_m c^m x^m / m
  for (std::int64_t m = 1; e * m < D_; ++m) {
    const Rational t = power / m;
    const bool neg = sign < 0 && (m % 2 == 1);
    acc_[static_cast<std::size_t>((e * m).quarters())] += neg ? t : Rational(-t);
  }
}

void LogProduct::add(const RSeries& log_term) {
  if (log_term.precision() < D_)
    throw Error(ErrorKind::PrecisionExhausted, "log term known only below p^" + log_term.precision().str());
  for (const auto& t : log_term.terms()) {
    if (Exponent::quarters(t.q) >= D_) break;
    if (t.q <= 0) throw Error(ErrorKind::Domain, "log term must have positive valuation");
    acc_[static_cast<std::size_t>(t.q)] += t.c;
  }
}

RSeries LogProduct::log() const {
  std::vector<RSeries::Term> terms;
  for (std::size_t q = 1; q < acc_.size(); ++q)
    if (acc_[q] != 0) terms.push_back({static_cast<std::int64_t>(q), acc_[q]});
  return RSeries::from_terms(std::move(terms), D_);
}

RSeries LogProduct::value() const { return exp(log()); }

}  // namespace trilat
