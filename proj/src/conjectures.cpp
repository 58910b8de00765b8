#include "trilat/conjectures.hpp"
#include "trilat/error.hpp"
#include "trilat/product_form.hpp"

#include <boost/multiprecision/float128.hpp>

#include <functional>
#include <type_traits>
#include <random>
#include <sstream>

namespace trilat {

const char* to_string(Kappa k) {
  switch (k) {
    case Kappa::Bulk: return "kb";
    case Kappa::Surface: return "ks";
    case Kappa::Corner60: return "kc";
    case Kappa::Corner120: return "kct";
  }
  return "?";
}

Kappa parse_kappa(const std::string& s) {
  if (s == "kb") return Kappa::Bulk;
  if (s == "ks") return Kappa::Surface;
  if (s == "kc") return Kappa::Corner60;
  if (s == "kct") return Kappa::Corner120;
  throw Error(ErrorKind::Parse, "unknown free energy '" + s + "' (kb, ks, kc, kct)");
}

EllipticParams EllipticParams::make(std::array<int, 3> alpha, int sigma) {
  EllipticParams ep{alpha, sigma};
  if (alpha[0] + alpha[1] + alpha[2] != sigma)
    throw Error(ErrorKind::Domain, "alphas must sum to sigma (a1 a2 a3 = q): " + ep.str());
  for (int a : alpha)
    if (a <= 0 || a >= sigma)
      throw Error(ErrorKind::Domain, "need 0 < alpha_j < sigma so that q < a_j < 1: " + ep.str());
  return ep;
}

NomeArgs EllipticParams::args(int i) const {
  NomeArgs n;
  for (int j = 0; j < 3; ++j) n.a[j] = Exponent::whole(alpha[(i + j) % 3]);
  // (a_i | a_{i+1}, a_{i-1})
  n.q = Exponent::whole(sigma);
  return n;
}

std::string EllipticParams::str() const {
  std::ostringstream os;
  os << "alpha=(" << alpha[0] << "," << alpha[1] << "," << alpha[2] << ") sigma=" << sigma;
  return os.str();
}

// ---------------------------------------------------------------------------
// Factor tables

namespace {

class Table {
 public:
  Table(const NomeArgs& args, Exponent D, std::vector<ProductFactor>& out)
      : args_(args), D_(D), out_(out) {}

  void part(const char* p) { part_ = p; }

  // (1 - a0^x0 a1^x1 a2^x2 q^y p^z)^power; returns whether the factor lies
  // below the window (whatever its power).
  bool add(Rational x0, Rational x1, Rational x2, Rational y, Rational power, Rational z = 0) {
    Rational er = x0 * args_.a[0].to_rational() + x1 * args_.a[1].to_rational() +
                  x2 * args_.a[2].to_rational() + y * args_.q.to_rational() + z;
    const Exponent e = Exponent::from_rational(er);
    if (e >= D_) return false;
    if (power == 0) return true;
    if (e <= Exponent())
      throw Error(ErrorKind::Domain, std::string("factor of ") + part_ + " is not small: p^" + e.str());
    out_.push_back({part_, {x0, x1, x2}, y, z, power, e});
    return true;
  }
  // single-argument shorthand: a0^x q^y
  bool a(Rational x, Rational y, Rational power) { return add(x, 0, 0, y, power); }
  bool q(Rational y, Rational power) { return add(0, 0, 0, y, power); }
  bool p(Rational z, Rational power) { return add(0, 0, 0, 0, power, z); }

 private:
  const NomeArgs& args_;
  Exponent D_;
  std::vector<ProductFactor>& out_;
  const char* part_ = "";
};

constexpr int kLoopCap = 100000;

void loop_k(const std::function<bool(Rational)>& body) {
  for (int k = 1; k < kLoopCap; ++k)
    if (!body(Rational(k)) && k > 2) return;
  throw Error(ErrorKind::Domain, "product does not converge (k loop)");
}

void loop_m(int from, const std::function<bool(Rational)>& body) {
  for (int m = from; m < kLoopCap; ++m)
    if (!body(Rational(m)) && m > from + 1) return;
  throw Error(ErrorKind::Domain, "product does not converge (m loop)");
}

// kappa_b(a, q) for a = args.a[j], written with a0 ... via the x-slot j.
void bulk_factors(Table& t, int j) {
  auto A = [&](Rational x, Rational y, Rational pw) {
    std::array<Rational, 3> xs{0, 0, 0};
    xs[j] = x;
    return t.add(xs[0], xs[1], xs[2], y, pw);
  };
  loop_k([&](Rational k) {
    bool any = false;
    any |= A(0, 4 * k - 2, Rational(2, 3));
    any |= A(0, 4 * k - 3, Rational(-1, 3));
    any |= A(0, 4 * k - 1, Rational(-1, 3));
    any |= A(-1, 4 * k - 2, 2 * k - 1);
    any |= A(1, 4 * k - 2, -(2 * k - 1));
    any |= A(1, 4 * k + 1, 2 * k);
    any |= A(1, 4 * k - 1, 2 * k);
    any |= A(-1, 4 * k, 2 * k);
    any |= A(-1, 4 * k - 1, -2 * k);
    any |= A(-1, 4 * k + 1, -2 * k);
    any |= A(1, 4 * k, -2 * k);
    return any;
  });
}

void surface_factors(Table& t) {
  const Rational h(1, 2);
  loop_k([&](Rational k) {
    bool any = false;
    any |= t.a(-h, 2 * k - h, 2 * k - 1);
    any |= t.a(1, 4 * k - 3, 2 * k - 1);
    any |= t.a(h, 2 * k - 3 * h, -(2 * k - 1));
    any |= t.a(-1, 4 * k - 1, -(2 * k - 1));
    any |= t.a(h, 2 * k - h, 2 * k);
    any |= t.a(-h, 2 * k + h, -2 * k);
    any |= t.a(-1, 4 * k, k);
    any |= t.a(-1, 4 * k + 2, k);
    any |= t.a(1, 4 * k, -k);
    any |= t.a(1, 4 * k - 2, -k);
    for (int j = 1; j <= 2; ++j) {
      auto B = [&](Rational x, Rational y, Rational pw) {
        return j == 1 ? t.add(0, x, 0, y, pw) : t.add(0, 0, x, y, pw);
      };
      any |= B(1, 2 * k, k / 2);
      any |= B(-1, 2 * k, -k / 2);
      any |= B(-1, 4 * k - 1, k);
      any |= B(-1, 4 * k + 1, k);
      any |= B(1, 4 * k + 1, -k);
      any |= B(1, 4 * k - 1, -k);
    }
    return any;
  });
}

void corner60_factors(Table& t) {
  const Rational h(1, 2);
  loop_k([&](Rational k) {
    bool any = false;
    any |= t.q(4 * k - 2, Rational(1, 6));
    any |= t.q(2 * k - 1, 2 * k - 1);
    any |= t.q(4 * k - 2, -(5 * k - Rational(5, 2)));
    any |= t.q(4 * k, -3 * k);
    return any;
  });
  loop_m(1, [&](Rational m) { return t.a(-(m - h), m - h, -1); });
  loop_k([&](Rational k) {
    bool anyk = false;
    loop_m(1, [&](Rational m) {
      bool any = false;
      any |= t.a(-m / 2, 2 * k + m / 2 - 1, 4 * k - 2);
      any |= t.a(-(m - h), 2 * k + m - h, -4 * k);
      any |= t.a(-m, 4 * k + m - 2, -(10 * k - 5));
      any |= t.a(-m, 4 * k + m, -6 * k);
      anyk |= any;
      return any;
    });
    return anyk;
  });
}

Rational eps(const Rational& m, int j) { return m == j ? Rational(1, 2) : Rational(1); }

void corner120_factors(Table& t) {
  const Rational h(1, 2);
  // Printed as prod (1 - q^{4k-2}); the sum form, the isotropic product and
  // the extracted series all need the power 1/3.
  t.part("P0");
  loop_k([&](Rational k) { return t.q(4 * k - 2, Rational(1, 3)); });
  t.part("P1");
  loop_k([&](Rational k) {
    bool anyk = false;
    loop_m(1, [&](Rational m) {
      bool any = false;
      any |= t.a(m - h, 2 * k + m - 3 * h, 4 * k - 2);
      any |= t.a(m - h, 2 * k + m - 1, 2);
      any |= t.a(m - h, 2 * k + m - 5 * h, -(4 * k - 4));
      any |= t.a(m - h, 2 * k + m - 2, -2);
      anyk |= any;
      return any;
    });
    return anyk;
  });
  t.part("P2");
  loop_k([&](Rational k) {
    bool anyk = false;
    loop_m(0, [&](Rational m) {
      bool any = false;
      any |= t.a(m, 2 * k + m - h, 2 * eps(m, 0));
      any |= t.a(m, 2 * k + m - 3 * h, -2 * eps(m, 0));
      anyk |= any;
      return any;
    });
    return anyk;
  });
  t.part("P3");
  loop_k([&](Rational k) {
    bool any = false;
    any |= t.a(-1, 2 * k, k / 2);
    any |= t.a(-1, 4 * k - 1, -k);
    any |= t.a(-1, 4 * k + 1, -k);
    any |= t.q(4 * k - 3, 8 * k - 5);
    any |= t.q(4 * k - 1, 8 * k - 2);
    any |= t.q(4 * k - 2, -(9 * k - Rational(7, 2)));
    any |= t.q(4 * k, -7 * k);
    any |= t.a(1, 4 * k - 2, 15 * k - Rational(21, 2));
    any |= t.a(1, 4 * k, 15 * k - 5);
    any |= t.a(1, 4 * k - 1, -(17 * k - 9));
    any |= t.a(1, 4 * k + 1, -13 * k);
    loop_m(2, [&](Rational m) {
      bool anym = false;
      anym |= t.a(m, 4 * k + m - 3, 16 * k - 11);
      anym |= t.a(m, 4 * k + m - 1, 16 * k - 5);
      anym |= t.a(m, 4 * k + m, -14 * k);
      anym |= t.a(m, 4 * k + m - 2, -(18 * k - 9));
      any |= anym;
      return anym;
    });
    return any;
  });
  for (int j = 1; j <= 2; ++j) {
    // b = a_{j}; x1 or x2 carries its power
    auto F = [&](Rational xa, Rational xb, Rational y, Rational pw) {
      return j == 1 ? t.add(xa, xb, 0, y, pw) : t.add(xa, 0, xb, y, pw);
    };
    t.part(j == 1 ? "Q(a1,a2)" : "Q(a1,a3)");
    loop_k([&](Rational k) {
      bool any = false;
      any |= F(0, h, 2 * k - 3 * h, 2 * k - 1);
      any |= F(0, h, 2 * k - h, -2 * k);
      loop_m(1, [&](Rational m) {
        bool anym = false;
        anym |= F(m / 2, h, 2 * k + m / 2 - 3 * h, (4 * k - 2) * eps(m, 1));
        anym |= F(m / 2, h, 2 * k + m / 2 - 1, 1);
        anym |= F(m / 2, h, 2 * k + m / 2 - h, -4 * k * eps(m, 1));
        anym |= F(m / 2, h, 2 * k + m / 2 - 2, -1);
        any |= anym;
        return anym;
      });
      return any;
    });
    t.part(j == 1 ? "R(a1,a2)" : "R(a1,a3)");
    loop_k([&](Rational k) {
      bool any = false;
      any |= F(0, 1, 4 * k - 4, k - 1);
      any |= F(0, 1, 4 * k - 2, k);
      any |= F(1, 1, 4 * k - 3, 3 * k - 2);
      any |= F(0, 1, 4 * k - 3, -(2 * k - 1));
      any |= F(1, 1, 4 * k - 2, -(4 * k - 2));
      any |= F(1, 1, 4 * k - 1, 3 * k - 1);
      any |= F(1, 1, 4 * k, -2 * k);
      loop_m(2, [&](Rational m) {
        bool anym = false;
        anym |= F(m, 1, 4 * k + m - 4, 4 * k - 3);
        anym |= F(m, 1, 4 * k + m - 2, 4 * k - 1);
        anym |= F(m, 1, 4 * k + m - 3, -(6 * k - 3));
        anym |= F(m, 1, 4 * k + m - 1, -2 * k);
        any |= anym;
        return anym;
      });
      return any;
    });
  }
}

}  // namespace

std::vector<ProductFactor> product_factors(Kappa which, const NomeArgs& args, Exponent D) {
  std::vector<ProductFactor> out;
  Table t(args, D, out);
  switch (which) {
    case Kappa::Bulk:
      for (int j = 0; j < 3; ++j) {
        static const char* names[] = {"kb(a1)", "kb(a2)", "kb(a3)"};
        t.part(names[j]);
        bulk_factors(t, j);
      }
      break;
    case Kappa::Surface:
      t.part("ks");
      surface_factors(t);
      break;
    case Kappa::Corner60:
      t.part("kc");
      corner60_factors(t);
      break;
    case Kappa::Corner120:
      corner120_factors(t);
      break;
  }
  return out;
}

std::vector<ProductFactor> isotropic_product_factors(Kappa which, Exponent D) {
  std::vector<ProductFactor> out;
  NomeArgs none{{Exponent(), Exponent(), Exponent()}, Exponent()};
  Table t(none, D, out);
  t.part(to_string(which));
  switch (which) {
    case Kappa::Bulk:
      loop_k([&](Rational k) {
        bool any = false;
        any |= t.p(24 * k - 12, 2);
        any |= t.p(24 * k - 18, -1);
        any |= t.p(24 * k - 6, -1);
        any |= t.p(24 * k - 14, 6 * k - 3);
        any |= t.p(24 * k - 10, -(6 * k - 3));
        any |= t.p(24 * k + 8, 6 * k);
        any |= t.p(24 * k - 2, 6 * k);
        any |= t.p(24 * k - 4, 6 * k);
        any |= t.p(24 * k - 8, -6 * k);
        any |= t.p(24 * k + 2, -6 * k);
        any |= t.p(24 * k + 4, -6 * k);
        return any;
      });
      break;
    case Kappa::Surface:
      loop_k([&](Rational k) {
        bool any = false;
        any |= t.p(12 * k - 2, 2 * k);
        any |= t.p(12 * k + 2, -2 * k);
        any |= t.p(12 * k - 4, 2 * k - 1);
        any |= t.p(12 * k - 8, -(2 * k - 1));
        any |= t.p(24 * k - 2, k);
        any |= t.p(24 * k + 10, k);
        any |= t.p(24 * k + 2, -k);
        any |= t.p(24 * k - 10, -k);
        any |= t.p(24 * k - 16, 2 * k - 1);
        any |= t.p(24 * k - 8, -(2 * k - 1));
        any |= t.p(24 * k + 2, 2 * k);
        any |= t.p(24 * k + 4, 2 * k);
        any |= t.p(24 * k - 8, 2 * k);
        any |= t.p(24 * k - 2, -2 * k);
        any |= t.p(24 * k - 4, -2 * k);
        any |= t.p(24 * k + 8, -2 * k);
        any |= t.p(24 * k - 10, 2 * k - 1);
        any |= t.p(24 * k - 14, -(2 * k - 1));
        return any;
      });
      break;
    case Kappa::Corner60:
      loop_k([&](Rational k) {
        bool any = false;
        any |= t.p(12 * k - 2, 2 * k - 1);
        any |= t.p(24 * k - 16, 5 * k - 3);
        any |= t.p(24 * k - 4, 3 * k);
        any |= t.p(24 * k - 12, Rational(-1, 3));
        any |= t.p(12 * k - 10, -(2 * k - 1));
        any |= t.p(24 * k - 20, -(3 * k - 3));
        any |= t.p(24 * k - 8, -(5 * k - 2));
        return any;
      });
      break;
    case Kappa::Corner120:
      loop_k([&](Rational k) {
        bool any = false;
        any |= t.p(24 * k - 14, Rational(1, 2));
        any |= t.p(24 * k - 10, Rational(1, 2));
        any |= t.p(24 * k - 12, Rational(-1, 6));
        any |= t.p(12 * k - 9, -1);
        any |= t.p(12 * k - 7, -2);
        any |= t.p(12 * k - 5, -2);
        any |= t.p(12 * k - 3, -1);
        const Rational k2 = k * k;
        any |= t.p(24 * k - 20, k2 - k + 2);
        any |= t.p(24 * k - 12, k2 - k - 1);
        any |= t.p(24 * k - 4, k2 - k + 2);
        any |= t.p(24 * k - 16, -(k2 - 1));
        any |= t.p(24 * k - 8, -(k2 - 2 * k));
        any |= t.p(24 * k, -k2);
        any |= t.p(24 * k - 18, k + 2);
        any |= t.p(24 * k - 10, 2 * k);
        any |= t.p(24 * k - 14, -(2 * k - 2));
        any |= t.p(24 * k - 6, -(k - 3));
        return any;
      });
      break;
  }
  return out;
}

RSeries log_of_factors(const std::vector<ProductFactor>& fs, Exponent D) {
  LogProduct lp(D);
  for (const auto& f : fs) lp.factor(f.e, f.power);
  return lp.log();
}

RSeries log_kappa_product(Kappa which, const NomeArgs& args, Exponent D) {
  return log_of_factors(product_factors(which, args, D), D);
}

RSeries log_kappa_product(Kappa which, const EllipticParams& ep, int i, Exponent D) {
  return log_kappa_product(which, ep.args(which == Kappa::Bulk ? 0 : i), D);
}

RSeries log_kappa_product_isotropic(Kappa which, Exponent D) {
  return log_of_factors(isotropic_product_factors(which, D), D);
}

RSeries kappa_product(Kappa which, const EllipticParams& ep, int i, Exponent D) {
  return exp(log_kappa_product(which, ep, i, D));
}

// ---------------------------------------------------------------------------
// Summands

namespace {

template <class T>
T c(long n, long d = 1) {
  if constexpr (std::is_same_v<T, Rational> || std::is_same_v<T, RSeries>)
    return T(Rational(n, d));
  else
    return T(n) / T(d);
}

}  // namespace

template <class T>
T F_bulk(const T& A, const T& Qr) {
  const T one = c<T>(1);
  const T a = A * A, q = Qr * Qr;
  const T ainv = one / a;
  const T q2 = q * q;
  const T u = one + q, v = one + q2;
  T r = (q - q2) / (c<T>(3) * u * v);
  r = r + q * (a - ainv) / (c<T>(2) * v);
  r = r - q * (a - ainv) / (c<T>(2) * u * u);
  return r;
}

template <class T>
T F_surface(const T& A1, const T& A2, const T& A3, const T& Qr) {
  const T one = c<T>(1);
  const T a1 = A1 * A1, a2 = A2 * A2, a3 = A3 * A3, q = Qr * Qr;
  const T q2 = q * q;
  const T u = one + q, v = one + q2;
  const T u2 = u * u, v2 = v * v;
  const T x = a1 - q2 / a1;
  const T y = a2 - one / a2 + a3 - one / a3;
  T r = Qr * (A1 - q / A1) / u2;
  r = r + x / (c<T>(4) * u2);
  r = r - u2 * x / (c<T>(4) * v2);
  r = r + q * y / (c<T>(4) * u2);
  r = r - q * y / (c<T>(4) * v);
  return r;
}

template <class T>
T F_corner60(const T& A, const T& Qr) {
  const T one = c<T>(1);
  const T a = A * A, q = Qr * Qr;
  const T q2 = q * q;
  const T u = one + q, v = one + q2;
  const T w = q / a;
  const T lo = one - w, hi = one + w;
  T r = -q2 / (c<T>(6) * (one - q2 * q2));
  r = r + Qr * v / (A * lo * u * u);
  r = r - q * hi / (lo * u * u);
  r = r + q2 * hi / (c<T>(2) * lo * v * v);
  return r;
}

template <class T>
T F_corner120(const T& A1, const T& A2, const T& A3, const T& Qr) {
  const T one = c<T>(1);
  const T a1 = A1 * A1, a2 = A2 * A2, a3 = A3 * A3, q = Qr * Qr;
  const T q2 = q * q;
  const T u = one + q, v = one + q2;
  const T u2 = u * u, v2 = v * v;
  const T lo = one - q * a1, hi = one + q * a1;
  T r = -q2 / (c<T>(3) * (one - q2 * q2));
  r = r + c<T>(2) * q * A1 * (one - Qr + q) / (u2 * lo);
  r = r + Qr * hi / (u * lo);
  r = r + q2 * hi / (c<T>(2) * v2 * lo);
  r = r - c<T>(2) * q * hi / (u2 * lo);
  r = r - q * hi / (c<T>(2) * v * lo);
  r = r - q * lo * (q + a1) / (c<T>(2) * a1 * u2 * v);
  r = r - Qr * (A2 + A3) * (one - A1) * (one - q * A1) / (u2 * (one - Qr * A1));
  r = r + q * (a2 + a3) * (one + q + q2) * (one - a1) * (one - q2 * a1) / (u2 * v2 * lo);
  return r;
}

template <class T>
T F_isotropic(Kappa which, const T& p) {
  const T one = c<T>(1);
  const T p2 = p * p;
  const T p4 = p2 * p2;
  const T p8 = p4 * p4;
  const T p12 = p8 * p4;
  const T p16 = p8 * p8;
  const T p24 = p12 * p12;
  switch (which) {
    case Kappa::Bulk: {
      const T d = one - p2 + p4;
      return p4 * p2 * (one - p2) * (one - p2) * (one - p2) * (one + p2) / ((one + p12) * d * d);
    }
    case Kappa::Surface: {
      const T d = one - p2 + p4;
      return p4 * (one - p2) * (one - p2) * (one - p4) * (one + p4 * p2 + p12) /
             ((one + p12) * d * d * (one - p4 + p8));
    }
    case Kappa::Corner60: {
      T r = p12 / (c<T>(3) * (one - p24));
      r = r + p2 * (one + p4) * (one + p12) / ((one + p4 + p8) * (one - p12));
      r = r - p8 * (c<T>(2) - p8 + c<T>(3) * p12 - p16 + c<T>(2) * p24) / ((one + p8 + p16) * (one - p24));
      return r;
    }
    case Kappa::Corner120: {
      const T p3 = p2 * p;
      const T p20 = p16 * p4;
      T r = p12 / (c<T>(6) * (one - p24));
      r = r - p8 * p2 / (c<T>(2) * (one - p4) * (one + p8 + p16));
      r = r + p3 / ((one - p2) * (one - p2 + p4));
      r = r - p4 * p2 *
                  (c<T>(3) + c<T>(6) * p4 + c<T>(8) * p8 + c<T>(9) * p12 + c<T>(8) * p16 + c<T>(6) * p20 +
                   c<T>(3) * p24) /
                  ((one + p4) * (one + p4 + p8) * (one - p24));
      r = r - p4 *
                  (c<T>(2) + c<T>(4) * p4 + c<T>(3) * p8 + c<T>(3) * p12 + c<T>(6) * p16 + c<T>(7) * p20 +
                   c<T>(6) * p24 + c<T>(3) * p24 * p4 + c<T>(3) * p24 * p8 + c<T>(4) * p24 * p12 +
                   c<T>(2) * p24 * p16) /
                  ((one + p4) * (one + p4) * (one + p8 + p16) * (one - p24));
      return r;
    }
  }
  throw Error(ErrorKind::Domain, "unknown F");
}

#define TRILAT_INSTANTIATE(T)                                                   \
  template T F_bulk<T>(const T&, const T&);                                     \
  template T F_surface<T>(const T&, const T&, const T&, const T&);             \
  template T F_corner60<T>(const T&, const T&);                                 \
  template T F_corner120<T>(const T&, const T&, const T&, const T&);           \
  template T F_isotropic<T>(Kappa, const T&);
TRILAT_INSTANTIATE(Rational)
TRILAT_INSTANTIATE(RSeries)
TRILAT_INSTANTIATE(boost::multiprecision::float128)
#undef TRILAT_INSTANTIATE

// ---------------------------------------------------------------------------
// Summation forms

std::optional<std::string> sumform_domain_violation(Kappa which, const NomeArgs& n) {
  const Exponent q = n.q;
  auto need = [](bool ok, const std::string& what) -> std::optional<std::string> {
    if (ok) return std::nullopt;
    return what;
  };
  // x < y for powers of p means exponent(x) > exponent(y)
  switch (which) {
    case Kappa::Bulk:
      for (int j = 0; j < 3; ++j)
        if (auto v = need(n.a[j] < q * 2 && n.a[j] > -(q * 2),
                          "q^2 < a_" + std::to_string(j + 1) + " < q^-2"))
          return v;
      return std::nullopt;
    case Kappa::Surface:
      if (auto v = need(n.a[0] < q * 3 && n.a[0] > -q, "q^3 < a_1 < 1/q")) return v;
      for (int j = 1; j < 3; ++j)
        if (auto v = need(n.a[j] < q * 2 && n.a[j] > -(q * 2),
                          "q^2 < a_" + std::to_string(j + 1) + " < q^-2"))
          return v;
      return std::nullopt;
    case Kappa::Corner60:
      return need(n.a[0] < q, "a > q");
    case Kappa::Corner120:
      if (auto v = need(n.a[0] > -q, "a_1 < 1/q")) return v;
      for (int j = 1; j < 3; ++j)
        if (auto v = need(n.a[j] > -q && n.a[j] > -q - n.a[0],
                          "a_" + std::to_string(j + 1) + " < min(1/q, 1/(q a_1))"))
          return v;
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

Exponent half(Exponent e) { return Exponent::from_rational(e.to_rational() / 2); }

template <class Fn>
RSeries summand(Fn&& fn, Exponent D, Exponent slack) {
  for (Exponent W = D + slack;; W = W + slack) {
    RSeries F = fn(W);
    if (F.precision() >= D) return F.truncated(D);
    if (W > D * 64 + slack * 64)
      throw Error(ErrorKind::PrecisionExhausted, "summand window does not close");
  }
}

}  // namespace

RSeries lambert_sum(const RSeries& F, Exponent D, bool odd_only) {
  if (F.precision() < D)
    throw Error(ErrorKind::PrecisionExhausted, "summand known only below p^" + F.precision().str());
  if (F.is_zero()) return RSeries::big_o(D);
  if (F.valuation() <= Exponent())
    throw Error(ErrorKind::Domain, "summand has no positive valuation; the sum over m diverges");
  RSeries s = RSeries::big_o(D);
  for (std::int64_t m = 1; F.valuation() * m < D; m += odd_only ? 2 : 1)
    s += substitute(F.truncated(D), Rational(m)).truncated(D) * Rational(1, m);
  return s;
}

RSeries log_kappa_sumform(Kappa which, const NomeArgs& n, Exponent D) {
  if (auto v = sumform_domain_violation(which, n))
    throw Error(ErrorKind::Domain, std::string("sum for ") + to_string(which) + " diverges: need " + *v);
  Exponent slack = n.q * 4 + Exponent::whole(8);
  for (auto a : n.a) slack += (a < Exponent() ? -a : a) * 2;
  auto mono = [](Exponent e, Exponent W) { return RSeries::monomial(Rational(1), e, W); };
  RSeries F = summand(
      [&](Exponent W) {
        const RSeries Qr = mono(half(n.q), W);
        std::array<RSeries, 3> A;
        for (int j = 0; j < 3; ++j) A[j] = mono(half(n.a[j]), W);
        switch (which) {
          case Kappa::Bulk:
            return F_bulk(A[0], Qr) + F_bulk(A[1], Qr) + F_bulk(A[2], Qr);
          case Kappa::Surface:
            return F_surface(A[0], A[1], A[2], Qr);
          case Kappa::Corner60:
            return F_corner60(A[0], Qr);
          case Kappa::Corner120:
            return F_corner120(A[0], A[1], A[2], Qr);
        }
        return RSeries();
      },
      D, slack);
  return lambert_sum(F, D);
}

RSeries log_kappa_sumform(Kappa which, const EllipticParams& ep, int i, Exponent D) {
  return log_kappa_sumform(which, ep.args(which == Kappa::Bulk ? 0 : i), D);
}

RSeries log_kappa_sumform_isotropic(Kappa which, Exponent D) {
  RSeries F = summand(
      [&](Exponent W) { return F_isotropic(which, RSeries::monomial(Rational(1), Exponent::whole(1), W)); },
      D, Exponent::whole(32));
  return lambert_sum(F, D);
}

RSeries log_G_series(Exponent w, Exponent q, Exponent D) {
  LogProduct lp(D);
  for (std::int64_t n = 1; q * (4 * n - 3) - (w < Exponent() ? -w : w) < D; ++n) {
    auto f = [&](Exponent e, int pw) {
      if (e < D) lp.factor(e, Rational(pw));
    };
    f(q * (4 * n - 3) - w, 1);
    f(q * (4 * n - 1) + w, 1);
    f(q * (4 * n - 3) + w, -1);
    f(q * (4 * n - 1) - w, -1);
  }
  return lp.log();
}

RSeries z_series(Exponent a, Exponent q, Exponent D) {
  const Exponent h = half(a);
  return exp(log_G_series(a, q, D - h)).shifted(h);
}

// ---------------------------------------------------------------------------
// Identity suite

namespace {

class Points {
 public:
  explicit Points(std::uint64_t seed) : rng_(seed) {}
  // uniform rational in [lo, hi] with denominator den
  Rational in(const Rational& lo, const Rational& hi, long den = 997) {
    std::uniform_int_distribution<long> d(1, den - 1);
    return lo + (hi - lo) * Rational(d(rng_), den);
  }

 private:
  std::mt19937_64 rng_;
};

struct Pt {
  Rational A1, A2, A3, Qr;
};

// Physical points: q < a_j < 1 with a1 a2 a3 = q, in root variables.
Pt physical(Points& P) {
  Pt t;
  t.Qr = P.in(Rational(1, 10), Rational(1, 3));
  t.A1 = P.in(Rational(3, 5), Rational(19, 20));
  t.A2 = P.in(Rational(3, 5), Rational(19, 20));
  t.A3 = t.Qr / (t.A1 * t.A2);
  return t;
}

std::string show(const Pt& t) {
  std::ostringstream os;
  os << "A1=" << t.A1 << " A2=" << t.A2 << " A3=" << t.A3 << " Qr=" << t.Qr;
  return os.str();
}

CheckResult rational_identity(const std::string& name, std::uint64_t seed, int points,
                              const std::function<Rational(const Pt&)>& lhs_minus_rhs) {
  Points P(seed);
  CheckResult r{name, true, ""};
  for (int i = 0; i < points; ++i) {
    const Pt t = physical(P);
    const Rational d = lhs_minus_rhs(t);
    if (d != 0) {
      r.pass = false;
      std::ostringstream os;
      os << "at " << show(t) << " discrepancy " << d;
      r.detail = os.str();
      return r;
    }
  }
  r.detail = std::to_string(points) + " points exact";
  return r;
}

CheckResult series_identity(const std::string& name, const RSeries& lhs, const RSeries& rhs, Exponent D) {
  CheckResult r{name, true, ""};
  const RSeries a = lhs.truncated(D), b = rhs.truncated(D);
  if (a.precision() < D || b.precision() < D) {
    r.pass = false;
    r.detail = "window below p^" + D.str();
    return r;
  }
  if (auto d = first_difference(a, b)) {
    r.pass = false;
    r.detail = "first difference at p^" + d->str();
  } else {
    r.detail = "agree through p^" + (D - Exponent::whole(1)).str();
  }
  return r;
}

// q^m/(m(1+q^m)) - q^{2m}/(m(1+q^{2m})) summed over m, times (2 - q^m/a^m - a^m/q^m) if a given.
RSeries eta_like_sum(Exponent q, std::optional<Exponent> a, Exponent D) {
  RSeries s = RSeries::big_o(D);
  const Exponent step = a ? std::min(q, *a) : q;
  for (std::int64_t m = 1; step * m < D; ++m) {
    const Exponent W = D + (a ? q * m * 2 : Exponent()) + Exponent::whole(4);
    const RSeries one(1L);
    const RSeries qm = RSeries::monomial(Rational(1), q * m, W);
    RSeries term = qm / (one + qm) - qm * qm / (one + qm * qm);
    if (a) {
      const RSeries r = RSeries::monomial(Rational(1), (q - *a) * m, W);
      const RSeries r1 = RSeries::monomial(Rational(1), (*a - q) * m, W);
      term = term * (RSeries(2L) - r - r1);
    }
    s += term.truncated(D) * Rational(1, m);
  }
  return s;
}

RSeries single_bulk(Exponent a, Exponent q, Exponent D) {
  NomeArgs n{{a, Exponent(), Exponent()}, q};
  std::vector<ProductFactor> out;
  Table t(n, D, out);
  t.part("kb");
  bulk_factors(t, 0);
  return log_of_factors(out, D);
}

}  // namespace

std::vector<CheckResult> identity_suite(std::uint64_t seed, int points, Exponent D) {
  std::vector<CheckResult> out;
  using R = Rational;
  auto common = [](const R& q) { return q / (1 + q) - q * q / (1 + q * q); };
  out.push_back(rational_identity("F_b(a,q) + F_b(1/a,q)", seed, points, [&](const Pt& t) {
    const R q = t.Qr * t.Qr;
    return R(F_bulk(t.A1, t.Qr) + F_bulk(R(1 / t.A1), t.Qr) - R(2, 3) * common(q));
  }));
  out.push_back(rational_identity("F_b(a,q) + F_b(q^2/a,q)", seed + 1, points, [&](const Pt& t) {
    const R q = t.Qr * t.Qr, a = t.A1 * t.A1;
    return R(F_bulk(t.A1, t.Qr) + F_bulk(R(q / t.A1), t.Qr) - (R(2, 3) - q / a - a / q) * common(q));
  }));
  out.push_back(rational_identity("F_s(a1|a2,a3) + F_s(q^2/a1|1/a2,1/a3)", seed + 2, points, [&](const Pt& t) {
    const R q = t.Qr * t.Qr;
    return R(F_surface(t.A1, t.A2, t.A3, t.Qr) + F_surface(R(q / t.A1), R(1 / t.A2), R(1 / t.A3), t.Qr));
  }));
  out.push_back(rational_identity("F_c(a,q) + F_c(q^2/a,q)", seed + 3, points, [&](const Pt& t) {
    const R q = t.Qr * t.Qr;
    return R(F_corner60(t.A1, t.Qr) + F_corner60(R(q / t.A1), t.Qr) + q * q / (3 * (1 - q * q * q * q)));
  }));
  out.push_back(rational_identity("Ft_c(a1|a2,a3) + Ft_c(1/(q^2 a1)|q^2/a2,q^2/a3)", seed + 4, points,
                                  [&](const Pt& t) {
                                    const R q = t.Qr * t.Qr, a1 = t.A1 * t.A1;
                                    const R lhs = F_corner120(t.A1, t.A2, t.A3, t.Qr) +
                                                  F_corner120(R(1 / (q * t.A1)), R(q / t.A2), R(q / t.A3), t.Qr);
                                    const R rhs = -2 * q * q / (3 * (1 - q * q * q * q)) +
                                                  (1 - q) * (1 - q * a1) * (1 - q * a1) / (2 * a1 * (1 + q) * (1 + q * q));
                                    return R(lhs - rhs);
                                  }));

  for (const auto& ep : {EllipticParams::isotropic(), EllipticParams::make({2, 4, 6}, 12),
                         EllipticParams::make({2, 2, 8}, 12)}) {
    const std::string tag = " [" + ep.str() + "]";
    const Exponent q = Exponent::whole(ep.sigma);
    {
      LogProduct eta(D), mu(D);
      for (std::int64_t k = 1; q * (2 * k - 1) < D; ++k) {
        if (q * (4 * k - 2) < D) {
          eta.factor(q * (4 * k - 2), 2);
          mu.factor(q * (4 * k - 2), 1);
        }
        eta.factor(q * (2 * k - 1), -1);
      }
      out.push_back(series_identity("log eta product = sum" + tag, eta.log(), eta_like_sum(q, std::nullopt, D), D));
      RSeries mus = RSeries::big_o(D);
      for (std::int64_t m = 1; q * (2 * m) < D; ++m) {
        const RSeries one(1L);
        const RSeries q4 = RSeries::monomial(Rational(1), q * (4 * m), D);
        mus -= (RSeries::monomial(Rational(1), q * (2 * m), D) / (one - q4)) * Rational(1, m);
      }
      out.push_back(series_identity("log mu product = sum" + tag, mu.log(), mus, D));

      for (int j = 0; j < 3; ++j) {
        if (j > 0 && ep.alpha[j] == ep.alpha[j - 1]) continue;
        const Exponent a = Exponent::whole(ep.alpha[j]);
        const std::string at = " a=p^" + a.str() + tag;
        LogProduct lp(D);
        for (std::int64_t k = 1; q * (2 * k - 2) < D; ++k) {
          if (q * (4 * k - 2) < D) lp.factor(q * (4 * k - 2), 4);
          if (q * (2 * k - 2) + a < D) lp.factor(q * (2 * k - 2) + a, 1);
          if (q * (2 * k) - a < D) lp.factor(q * (2 * k) - a, 1);
          if (q * (2 * k - 1) < D) lp.factor(q * (2 * k - 1), -2);
          if (q * (4 * k - 3) + a < D) lp.factor(q * (4 * k - 3) + a, -2);
          if (q * (4 * k - 1) - a < D) lp.factor(q * (4 * k - 1) - a, -2);
        }
        const RSeries z = z_series(a, q, D);
        const RSeries one_minus_z2 = (RSeries(1L) - z * z).truncated(D);
        out.push_back(series_identity("1 - z^2 product = 1 - (a^1/2 G)^2" + at, exp(lp.log()), one_minus_z2, D));
        out.push_back(series_identity("log(1 - z^2) sum" + at, lp.log(), eta_like_sum(q, a, D), D));
        // inversion relations
        const RSeries lkb = single_bulk(a, q, D);
        out.push_back(series_identity("kb(a) kb(1/a) = eta^(2/3)" + at, lkb + single_bulk(-a, q, D),
                                      eta.log() * Rational(2, 3), D));
        out.push_back(series_identity("kb(a) kb(q^2/a) = (1 - z^2)/eta^(4/3)" + at,
                                      lkb + single_bulk(q * 2 - a, q, D),
                                      lp.log() - eta.log() * Rational(4, 3), D));
      }
      for (int i = 0; i < 3; ++i) {
        const NomeArgs n = ep.args(i);
        const NomeArgs inv{{q * 2 - n.a[0], -n.a[1], -n.a[2]}, q};
        out.push_back(series_identity("ks(a1|a2,a3) ks(q^2/a1|1/a2,1/a3) = 1 [i=" + std::to_string(i + 1) + "]" + tag,
                                      log_kappa_product(Kappa::Surface, n, D) +
                                          log_kappa_product(Kappa::Surface, inv, D),
                                      RSeries::big_o(D), D));
        if (ep.is_isotropic()) break;
      }
    }
  }
  return out;
}

std::vector<CheckResult> antisymmetry_suite(std::uint64_t seed, int points) {
  using R = Rational;
  std::vector<CheckResult> out;
  auto inv = [](const R& x) { return R(1 / x); };
  out.push_back(rational_identity("F_b(1/a,1/q) = -F_b(a,q)", seed, points, [&](const Pt& t) {
    return R(F_bulk(t.A1, t.Qr) + F_bulk(inv(t.A1), inv(t.Qr)));
  }));
  out.push_back(rational_identity("F_s inverted = -F_s", seed + 1, points, [&](const Pt& t) {
    return R(F_surface(t.A1, t.A2, t.A3, t.Qr) + F_surface(inv(t.A1), inv(t.A2), inv(t.A3), inv(t.Qr)));
  }));
  out.push_back(rational_identity("F_c(1/a,1/q) = -F_c(a,q)", seed + 2, points, [&](const Pt& t) {
    return R(F_corner60(t.A1, t.Qr) + F_corner60(inv(t.A1), inv(t.Qr)));
  }));
  out.push_back(rational_identity("Ft_c inverted = -Ft_c", seed + 3, points, [&](const Pt& t) {
    return R(F_corner120(t.A1, t.A2, t.A3, t.Qr) + F_corner120(inv(t.A1), inv(t.A2), inv(t.A3), inv(t.Qr)));
  }));
  for (Kappa k : {Kappa::Bulk, Kappa::Surface, Kappa::Corner60, Kappa::Corner120}) {
    out.push_back(rational_identity(std::string("F(1/p) = -F(p) isotropic ") + to_string(k), seed + 10, points,
                                    [&](const Pt& t) {
                                      const R p = t.A1;
                                      return R(F_isotropic(k, p) + F_isotropic(k, inv(p)));
                                    }));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

QuantityCheck compare(const std::string& name, const RSeries& extracted, const RSeries& conjectured, Exponent t) {
  QuantityCheck c{name, t, std::nullopt};
  if (auto d = first_difference(extracted.truncated(t), conjectured.truncated(t))) {
    c.first_mismatch = *d;
    c.agrees_to = *d;
  }
  return c;
}

}  // namespace

std::vector<QuantityCheck> verify_against_extraction(const KappaSet& ks, const EllipticParams& ep,
                                                     std::optional<Fault> fault) {
  const Exponent t = ks.trusted_order;
  auto L = [&](Kappa k, int i) {
    RSeries s = log_kappa_product(k, ep, i, t);
    if (fault && fault->which == k && fault->n > 0 && Exponent::whole(fault->n) < t) {
      LogProduct lp(t);
      lp.factor(Exponent::whole(fault->n), 1);
      s += lp.log();
    }
    return s;
  };
  std::vector<QuantityCheck> out;
  out.push_back(compare("log_kb", ks.log_kb, L(Kappa::Bulk, 0), t));
  if (ks.isotropic) {
    out.push_back(compare("log_ks", ks.log_ks[0], L(Kappa::Surface, 0), t));
    out.push_back(compare("log_kc", ks.log_kc, L(Kappa::Corner60, 0), t));
    out.push_back(compare("log_kct", ks.log_kct, L(Kappa::Corner120, 0), t));
    return out;
  }
  RSeries pc = RSeries::big_o(t), pct = RSeries::big_o(t);
  std::array<RSeries, 3> lc, lct;
  for (int i = 0; i < 3; ++i) {
    lc[i] = L(Kappa::Corner60, i);
    lct[i] = L(Kappa::Corner120, i);
    pc += lc[i];
    pct += lct[i];
  }
  for (int i = 0; i < 3; ++i)
    out.push_back(compare("log_ks" + std::to_string(i + 1), ks.log_ks[i], L(Kappa::Surface, i), t));
  for (int i = 0; i < 3; ++i)
    out.push_back(compare("log_kc_kct" + std::to_string(i + 1), ks.log_kc_kct[i], lc[i] + lct[i], t));
  out.push_back(compare("log_prod_kc", ks.log_prod_kc, pc, t));
  out.push_back(compare("log_prod_kct", ks.log_prod_kct, pct, t));
  return out;
}

}  // namespace trilat
