#pragma once

#include "trilat/series.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>

namespace trilat {

// e_{24(k-1)+r} = a_r + b_r k + c_r k^2 for each residue r = 1..24.
struct Period24Pattern {
  int degree = 0;
  std::array<std::array<Rational, 3>, 24> coeffs{};

  Rational at(std::int64_t n) const;
};

// f = prod_{n>=1} (1 - p^n)^{e_n}.  Exponents are known for 1 <= n <= known_to;
// the map holds only the nonzero ones.
struct ProductForm {
  std::map<std::int64_t, Rational> exponents;
  std::int64_t known_to = 0;
  std::optional<Period24Pattern> pattern;
  std::int64_t fitted_from = 0;
  std::int64_t fitted_to = 0;
  std::int64_t verified_to = 0;

  Rational exponent(std::int64_t n) const;
};

ProductForm product_exponents(const RSeries& f);
// prod (1-p^n)^{e_n} over the known exponents, cut at prec.
RSeries product_series(const ProductForm& pf, Exponent prec);
// Fit each residue class on its first degree+1 periods, verify on the rest.
ProductForm fit_period24(ProductForm pf, int degree);
// Exponents predicted by the fitted pattern for 1 <= n <= n_max.
ProductForm extrapolate(const ProductForm& pf, std::int64_t n_max);

// log prod_{k>=1} (1 - p^{rk-s})^{a + b k + c k^2}, through the summed form.
RSeries sum_formula(int r, int s, const Rational& a, const Rational& b, const Rational& c,
                    Exponent D);
RSeries sum_formula(Exponent r, Exponent s, const Rational& a, const Rational& b,
                    const Rational& c, Exponent D);

// Accumulates log of prod (1 - p^e)^power on a dense quarter grid below D.
class LogProduct {
 public:
  explicit LogProduct(Exponent D);

  // power * log(1 - c p^e), c = +1 or -1
  void factor(Exponent e, const Rational& power, int sign = 1);
  void add(const RSeries& log_term);
  Exponent precision() const { return D_; }
  RSeries log() const;
  RSeries value() const;

 private:
  Exponent D_;
  std::vector<Rational> acc_;  // coefficient of p^{q/4}, q >= 1
};

}  // namespace trilat
