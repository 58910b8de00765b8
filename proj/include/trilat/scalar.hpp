#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>

#include <cstdint>
#include <ostream>
#include <string>

namespace trilat {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

Rational parse_rational(const std::string& text);
// Always "num/den", also for integers.
std::string to_fraction_string(const Rational& r);
double to_double(const Rational& r);

// Exact d-th root of r if it has one.
bool exact_root(const Rational& r, unsigned d, Rational& out);

// a + b·i with rational parts.
struct GaussRational {
  Rational re;
  Rational im;

  GaussRational() = default;
  GaussRational(const Rational& r) : re(r) {}  // NOLINT: implicit on purpose
  GaussRational(long v) : re(v) {}             // NOLINT
  GaussRational(const Rational& r, const Rational& i) : re(r), im(i) {}

  static GaussRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  GaussRational conj() const { return {re, -im}; }

  GaussRational& operator+=(const GaussRational& o) { re += o.re; im += o.im; return *this; }
  GaussRational& operator-=(const GaussRational& o) { re -= o.re; im -= o.im; return *this; }
  GaussRational& operator*=(const GaussRational& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o) {
    Rational n = o.re * o.re + o.im * o.im;
    Rational r = (re * o.re + im * o.im) / n;
    im = (im * o.re - re * o.im) / n;
    re = std::move(r);
    return *this;
  }
  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend std::ostream& operator<<(std::ostream& os, const GaussRational& g);
};

// Uniform access used by the series templates.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static bool is_zero(const Rational& x) { return x == 0; }
  static bool is_one(const Rational& x) { return x == 1; }
  static Rational from_rational(const Rational& r) { return r; }
  static bool is_real(const Rational&) { return true; }
  static Rational real(const Rational& x) { return x; }
  static std::string format(const Rational& x) { return to_fraction_string(x); }
  // acc += x*y without a fresh temporary per call.
  static void add_product(Rational& acc, const Rational& x, const Rational& y, Rational& tmp) {
    mpq_mul(tmp.backend().data(), x.backend().data(), y.backend().data());
    mpq_add(acc.backend().data(), acc.backend().data(), tmp.backend().data());
  }
};

template <>
struct ScalarTraits<GaussRational> {
  static bool is_zero(const GaussRational& x) { return x.is_zero(); }
  static bool is_one(const GaussRational& x) { return x.re == 1 && x.im == 0; }
  static GaussRational from_rational(const Rational& r) { return GaussRational(r); }
  static bool is_real(const GaussRational& x) { return x.is_real(); }
  static Rational real(const GaussRational& x) { return x.re; }
  static std::string format(const GaussRational& x);
  static void add_product(GaussRational& acc, const GaussRational& x, const GaussRational& y,
                          GaussRational&) {
    acc += x * y;
  }
};

}  // namespace trilat

namespace Eigen {

template <>
struct NumTraits<trilat::Rational> : GenericNumTraits<trilat::Rational> {
  using Real = trilat::Rational;
  using NonInteger = trilat::Rational;
  using Nested = trilat::Rational;
  using Literal = trilat::Rational;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 16
  };
  static inline trilat::Rational epsilon() { return 0; }
  static inline trilat::Rational dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
