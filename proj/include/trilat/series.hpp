#pragma once

#include "trilat/error.hpp"
#include "trilat/exponent.hpp"
#include "trilat/scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace trilat {

// Truncated Laurent series in p on the quarter grid.  Terms are kept sorted
// by exponent, all coefficients nonzero, all exponents below precision().
// A series with infinite precision is an exact Laurent polynomial.
template <class S>
class Series {
 public:
  using Scalar = S;
  using Traits = ScalarTraits<S>;
  struct Term {
    std::int64_t q;  // exponent in quarters
    S c;
  };

  Series() : prec_(Exponent::infinity()) {}
  explicit Series(const S& c) : prec_(Exponent::infinity()) {
    if (!Traits::is_zero(c)) terms_.push_back({0, c});
  }
  explicit Series(long c) : Series(S(c)) {}

  static Series monomial(const S& c, Exponent e, Exponent prec = Exponent::infinity()) {
    Series s;
    s.prec_ = prec;
    if (!Traits::is_zero(c) && e < prec) s.terms_.push_back({e.quarters(), c});
    return s;
  }
  static Series big_o(Exponent prec) {
    Series s;
    s.prec_ = prec;
    return s;
  }
  static Series from_terms(std::vector<Term> terms, Exponent prec) {
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.q < b.q; });
    Series s;
    s.prec_ = prec;
    for (auto& t : terms) {
      if (Exponent::quarters(t.q) >= prec) break;
      if (!s.terms_.empty() && s.terms_.back().q == t.q) {
        s.terms_.back().c += t.c;
        if (Traits::is_zero(s.terms_.back().c)) s.terms_.pop_back();
      } else if (!Traits::is_zero(t.c)) {
        s.terms_.push_back(std::move(t));
      }
    }
    return s;
  }

  Exponent precision() const { return prec_; }
  Exponent valuation() const {
    return terms_.empty() ? prec_ : Exponent::quarters(terms_.front().q);
  }
  bool is_exact() const { return prec_.is_infinite(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  const std::vector<Term>& terms() const { return terms_; }

  S coefficient(Exponent e) const {
    if (e >= prec_)
      throw Error(ErrorKind::PrecisionExhausted,
                  "coefficient of p^" + e.str() + " requested, known below p^" + prec_.str());
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e.quarters(),
                               [](const Term& t, std::int64_t q) { return t.q < q; });
    return (it != terms_.end() && it->q == e.quarters()) ? it->c : S(0);
  }
  S coefficient(std::int64_t n) const { return coefficient(Exponent::whole(n)); }

  const S& leading_coefficient() const {
    if (terms_.empty()) throw Error(ErrorKind::ZeroDivisor, "series vanishes to p^" + prec_.str());
    return terms_.front().c;
  }

  Series truncated(Exponent prec) const {
    if (prec >= prec_) return *this;
    Series s;
    s.prec_ = prec;
    for (const auto& t : terms_) {
      if (Exponent::quarters(t.q) >= prec) break;
      s.terms_.push_back(t);
    }
    return s;
  }

  // Multiply by p^e.
  Series shifted(Exponent e) const {
    Series s = *this;
    for (auto& t : s.terms_) t.q += e.quarters();
    s.prec_ = prec_ + e;
    return s;
  }

  Series operator-() const {
    Series s = *this;
    for (auto& t : s.terms_) t.c = -t.c;
    return s;
  }

  Series& operator+=(const Series& o) { return *this = combine(*this, o, false); }
  Series& operator-=(const Series& o) { return *this = combine(*this, o, true); }
  Series& operator*=(const Series& o) { return *this = multiply(*this, o); }
  Series& operator/=(const Series& o) { return *this = divide(*this, o); }
  Series& operator*=(const S& c) {
    if (Traits::is_zero(c)) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.c *= c;
    return *this;
  }

  friend Series operator+(const Series& a, const Series& b) { return combine(a, b, false); }
  friend Series operator-(const Series& a, const Series& b) { return combine(a, b, true); }
  friend Series operator*(const Series& a, const Series& b) { return multiply(a, b); }
  friend Series operator/(const Series& a, const Series& b) { return divide(a, b); }
  friend Series operator*(Series a, const S& c) { return a *= c; }
  friend Series operator*(const S& c, Series a) { return a *= c; }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << Traits::format(t.c) << ")";
      if (t.q != 0) os << "*p^" << Exponent::quarters(t.q).str();
    }
    if (first) os << "0";
    if (!is_exact()) os << " + O(p^" << prec_.str() << ")";
    return os.str();
  }

 private:
  static Series combine(const Series& a, const Series& b, bool subtract) {
    Series s;
    s.prec_ = std::min(a.prec_, b.prec_);
    const std::int64_t lim = s.prec_.quarters();
    const bool bounded = !s.prec_.is_infinite();
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    s.terms_.reserve(a.terms_.size() + b.terms_.size());
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      std::int64_t qa = ia != a.terms_.end() ? ia->q : INT64_MAX;
      std::int64_t qb = ib != b.terms_.end() ? ib->q : INT64_MAX;
      std::int64_t q = std::min(qa, qb);
      if (bounded && q >= lim) break;
      if (qa == qb) {
        S c = subtract ? ia->c - ib->c : ia->c + ib->c;
        if (!Traits::is_zero(c)) s.terms_.push_back({q, std::move(c)});
        ++ia;
        ++ib;
      } else if (qa < qb) {
        s.terms_.push_back(*ia++);
      } else {
        s.terms_.push_back({q, subtract ? S(-ib->c) : ib->c});
        ++ib;
      }
    }
    return s;
  }

  static Series multiply(const Series& a, const Series& b) {
    Exponent prec = std::min(a.prec_ + b.valuation(), b.prec_ + a.valuation());
    if (a.terms_.empty() || b.terms_.empty()) return big_o(prec);
    const std::int64_t a0 = a.terms_.front().q, b0 = b.terms_.front().q;
    const std::int64_t lo = a0 + b0;
    if (Exponent::quarters(lo) >= prec) return big_o(prec);
    std::int64_t g = 0;
    for (const auto& t : a.terms_) g = std::gcd(g, t.q - a0);
    for (const auto& t : b.terms_) g = std::gcd(g, t.q - b0);
    if (g == 0) g = 1;
    std::int64_t span = (a.terms_.back().q - a0) + (b.terms_.back().q - b0);
    if (!prec.is_infinite()) span = std::min(span, prec.quarters() - 1 - lo);
    const std::int64_t n = span / g + 1;
    std::vector<S> buf(static_cast<std::size_t>(n));
    std::vector<char> hit(static_cast<std::size_t>(n), 0);
    S tmp;
    for (const auto& ta : a.terms_) {
      const std::int64_t da = (ta.q - a0) / g;
      if (da >= n) break;
      for (const auto& tb : b.terms_) {
        const std::int64_t k = da + (tb.q - b0) / g;
        if (k >= n) break;
        Traits::add_product(buf[k], ta.c, tb.c, tmp);
        hit[k] = 1;
      }
    }
    Series s;
    s.prec_ = prec;
    for (std::int64_t k = 0; k < n; ++k)
      if (hit[k] && !Traits::is_zero(buf[k])) s.terms_.push_back({lo + k * g, std::move(buf[k])});
    return s;
  }

  static Series divide(const Series& a, const Series& b);

  std::vector<Term> terms_;
  Exponent prec_;
};

namespace detail {

template <class S>
std::int64_t stride_of(const Series<S>& s, std::int64_t base) {
  std::int64_t g = 0;
  for (const auto& t : s.terms()) g = std::gcd(g, t.q - base);
  return g;
}

// Dense coefficient vector of a unit series (valuation 0) at indices k*g.
template <class S>
std::vector<S> dense(const Series<S>& s, std::int64_t g, std::int64_t n) {
  std::vector<S> v(static_cast<std::size_t>(n));
  for (const auto& t : s.terms()) {
    const std::int64_t k = t.q / g;
    if (k >= n) break;
    v[k] = t.c;
  }
  return v;
}

template <class S>
Series<S> from_dense(std::vector<S>& v, std::int64_t g, Exponent prec) {
  std::vector<typename Series<S>::Term> terms;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!ScalarTraits<S>::is_zero(v[k]))
      terms.push_back({static_cast<std::int64_t>(k) * g, std::move(v[k])});
  return Series<S>::from_terms(std::move(terms), prec);
}

template <class S>
void require_bounded(const Series<S>& s, const char* what) {
  if (s.is_exact() && !s.is_monomial() && !s.is_zero())
    throw Error(ErrorKind::PrecisionExhausted,
                std::string(what) + " of an exact non-monomial needs an explicit window");
}

// f^r for f = 1 + (terms of positive exponent), via h_n n = sum (r k - (n-k)) f_k h_{n-k}.
template <class S>
Series<S> unit_pow(const Series<S>& f, const Rational& r) {
  const Exponent prec = f.precision();
  if (f.is_monomial() || f.is_zero()) return f.is_zero() ? f : Series<S>(S(1)).truncated(prec);
  require_bounded(f, "power");
  const std::int64_t g = stride_of(f, 0);
  const std::int64_t n = (prec.quarters() + g - 1) / g;
  auto fd = dense(f, g, n);
  std::vector<std::int64_t> nz;
  for (std::int64_t k = 1; k < n; ++k)
    if (!ScalarTraits<S>::is_zero(fd[k])) nz.push_back(k);
  std::vector<S> h(static_cast<std::size_t>(n));
  h[0] = S(1);
  for (std::int64_t m = 1; m < n; ++m) {
    S acc(0);
    for (std::int64_t k : nz) {
      if (k > m) break;
      if (ScalarTraits<S>::is_zero(h[m - k])) continue;
      Rational w = r * k - (m - k);
      if (w == 0) continue;
      acc += S(w) * fd[k] * h[m - k];
    }
    h[m] = acc * S(Rational(1, m));
  }
  return from_dense(h, g, prec);
}

}  // namespace detail

// Inverse of b; when b is exact and not a monomial the result is cut at prec.
template <class S>
Series<S> inverse(const Series<S>& b, Exponent prec = Exponent::infinity()) {
  if (b.is_zero())
    throw Error(ErrorKind::ZeroDivisor, "series vanishes to its full precision p^" +
                                            b.precision().str());
  const Exponent v = b.valuation();
  const S c = b.leading_coefficient();
  const S cinv = S(1) / c;
  Series<S> unit = (b.shifted(-v)) * cinv;
  if (unit.is_exact() && !unit.is_monomial()) {
    if (prec.is_infinite())
      throw Error(ErrorKind::PrecisionExhausted,
                  "inverse of an exact non-monomial needs an explicit window");
    unit = unit.truncated(prec + v);
  }
  if (unit.is_monomial()) return Series<S>::monomial(cinv, -v, unit.precision() - v);
  const Exponent uprec = unit.precision();
  const std::int64_t g = detail::stride_of(unit, 0);
  const std::int64_t n = (uprec.quarters() + g - 1) / g;
  auto u = detail::dense(unit, g, n);
  std::vector<std::int64_t> nz;
  for (std::int64_t k = 1; k < n; ++k)
    if (!ScalarTraits<S>::is_zero(u[k])) nz.push_back(k);
  std::vector<S> h(static_cast<std::size_t>(n));
  h[0] = S(1);
  S tmp;
  for (std::int64_t m = 1; m < n; ++m) {
    S acc(0);
    for (std::int64_t k : nz) {
      if (k > m) break;
      ScalarTraits<S>::add_product(acc, u[k], h[m - k], tmp);
    }
    h[m] = -acc;
  }
  return detail::from_dense(h, g, uprec).shifted(-v) * cinv;
}

template <class S>
Series<S> Series<S>::divide(const Series<S>& a, const Series<S>& b) {
  if (b.is_zero())
    throw Error(ErrorKind::ZeroDivisor, "series vanishes to its full precision p^" +
                                            b.prec_.str());
  if (b.is_exact() && !b.is_monomial()) {
    if (a.is_exact())
      throw Error(ErrorKind::PrecisionExhausted,
                  "quotient of exact series needs an explicit window");
    const Exponent need = a.prec_ - a.valuation() - b.valuation();
    return a * inverse(b, need);
  }
  return a * inverse(b);
}

// log f for f = 1 + O(p^{>0}).
template <class S>
Series<S> log(const Series<S>& f) {
  if (f.is_zero() || f.valuation() != Exponent() ||
      !ScalarTraits<S>::is_one(f.leading_coefficient()))
    throw Error(ErrorKind::UnnormalizedLog,
                "log needs leading term 1 at p^0, got " + f.truncated(f.valuation() + Exponent::whole(1)).str());
  const Exponent prec = f.precision();
  if (f.is_monomial()) return Series<S>::big_o(prec);
  detail::require_bounded(f, "log");
  const std::int64_t g = detail::stride_of(f, 0);
  const std::int64_t n = (prec.quarters() + g - 1) / g;
  auto fd = detail::dense(f, g, n);
  std::vector<std::int64_t> nz;
  for (std::int64_t k = 1; k < n; ++k)
    if (!ScalarTraits<S>::is_zero(fd[k])) nz.push_back(k);
  // m f_m = sum_k k L_k f_{m-k}
  std::vector<S> L(static_cast<std::size_t>(n));
  S tmp;
  for (std::int64_t m = 1; m < n; ++m) {
    S acc = S(m) * fd[m];
    for (std::int64_t j : nz) {
      if (j >= m) break;
      if (ScalarTraits<S>::is_zero(L[m - j])) continue;
      S w = S(m - j) * L[m - j];
      acc -= w * fd[j];
    }
    L[m] = acc * S(Rational(1, m));
  }
  return detail::from_dense(L, g, prec);
}

// exp g for g of positive valuation.
template <class S>
Series<S> exp(const Series<S>& gs) {
  const Exponent prec = gs.precision();
  if (gs.is_zero()) return Series<S>(S(1)).truncated(prec);
  if (gs.valuation() <= Exponent())
    throw Error(ErrorKind::Domain, "exp needs positive valuation, got p^" + gs.valuation().str());
  if (gs.is_exact())
    throw Error(ErrorKind::PrecisionExhausted, "exp of an exact series needs an explicit window");
  const std::int64_t g = detail::stride_of(gs, 0);
  const std::int64_t n = (prec.quarters() + g - 1) / g;
  auto gd = detail::dense(gs, g, n);
  std::vector<std::pair<std::int64_t, S>> nz;  // (k, k g_k)
  for (std::int64_t k = 1; k < n; ++k)
    if (!ScalarTraits<S>::is_zero(gd[k])) nz.push_back({k, S(k) * gd[k]});
  std::vector<S> f(static_cast<std::size_t>(n));
  f[0] = S(1);
  S tmp;
  for (std::int64_t m = 1; m < n; ++m) {
    S acc(0);
    for (const auto& [k, kg] : nz) {
      if (k > m) break;
      ScalarTraits<S>::add_product(acc, kg, f[m - k], tmp);
    }
    f[m] = acc * S(Rational(1, m));
  }
  return detail::from_dense(f, g, prec);
}

// a^r for rational r.  The leading coefficient must have an exact rational
// r-th power and the leading exponent times r must stay on the grid.
Series<Rational> pow(const Series<Rational>& a, const Rational& r);
Series<Rational> sqrt(const Series<Rational>& a);

// p -> p^scale.
template <class S>
Series<S> substitute(const Series<S>& a, const Rational& scale) {
  if (scale <= 0) throw Error(ErrorKind::Domain, "substitution scale must be positive");
  const Integer num = numerator(scale), den = denominator(scale);
  const std::int64_t nu = num.convert_to<std::int64_t>(), de = den.convert_to<std::int64_t>();
  std::vector<typename Series<S>::Term> terms;
  terms.reserve(a.terms().size());
  for (const auto& t : a.terms()) {
    if ((t.q * nu) % de != 0)
      throw Error(ErrorKind::GridViolation,
                  "p^" + Exponent::quarters(t.q).str() + " scaled by " + scale.str() + " is off the 1/4 grid");
    terms.push_back({t.q * nu / de, t.c});
  }
  Exponent prec = a.precision();
  if (!prec.is_infinite()) {
    std::int64_t x = prec.quarters() * nu;
    std::int64_t c = x >= 0 ? (x + de - 1) / de : -((-x) / de);
    prec = Exponent::quarters(c);
  }
  return Series<S>::from_terms(std::move(terms), prec);
}

// First exponent where a and b differ inside their common window.
template <class S>
std::optional<Exponent> first_difference(const Series<S>& a, const Series<S>& b) {
  const Series<S> d = a - b;
  if (d.is_zero()) return std::nullopt;
  return d.valuation();
}

template <class S>
Series<S> pow_int(Series<S> base, long n) {
  if (n < 0) {
    base = inverse(base);
    n = -n;
  }
  Series<S> result(S(1));
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

Series<Rational> real_part(const Series<GaussRational>& s);
Series<GaussRational> to_gauss(const Series<Rational>& s);

using RSeries = Series<Rational>;

}  // namespace trilat
