#include "trilat/spinor.hpp"
#include "trilat/error.hpp"
#include "trilat/product_form.hpp"

#include "modseries.hpp"

#include <numeric>
#include <optional>
#include <sstream>

namespace trilat {

namespace modp {

namespace {

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 sp : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL})
    if (n % sp == 0) return n == sp;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  Field F{n};
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = F.pow(a, d);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int r = 1; r < s && comp; ++r) {
      x = F.mul(x, x);
      if (x == n - 1) comp = false;
    }
    if (comp) return false;
  }
  return true;
}

}  // namespace

std::vector<u64> primes(std::size_t count) {
  static std::vector<u64> cache;
  u64 n = cache.empty() ? (u64{1} << 56) - 1 : cache.back() - 2;
  while (cache.size() < count) {
    if (is_prime(n)) cache.push_back(n);
    n -= 2;
  }
  return {cache.begin(), cache.begin() + static_cast<std::ptrdiff_t>(count)};
}

}  // namespace modp

using namespace modp;

// ---------------------------------------------------------------------------
// Boltzmann points

BoltzmannPoint BoltzmannPoint::isotropic(Exponent D) {
  BoltzmannPoint b = elliptic({2, 2, 2}, 6, D);
  b.kind = Kind::Isotropic;
  return b;
}

BoltzmannPoint BoltzmannPoint::elliptic(std::array<int, 3> alpha, int sigma, Exponent D) {
  BoltzmannPoint b;
  b.kind = Kind::Elliptic;
  b.alpha = alpha;
  b.sigma = sigma;
  for (int j = 0; j < 3; ++j) {
    const int a = alpha[j];
    if (a <= 0 || a >= sigma)
      throw Error(ErrorKind::Domain, "need 0 < alpha_j < sigma, got alpha_" + std::to_string(j + 1) +
                                         " = " + std::to_string(a) + ", sigma = " + std::to_string(sigma));
    LogProduct G(D);
    for (std::int64_t n = 1;; ++n) {
      const std::int64_t lo = sigma * (4 * n - 3) - a;
      if (Exponent::whole(lo) >= D) break;
      G.factor(Exponent::whole(sigma * (4 * n - 3) - a), Rational(1));
      G.factor(Exponent::whole(sigma * (4 * n - 1) + a), Rational(1));
      G.factor(Exponent::whole(sigma * (4 * n - 3) + a), Rational(-1));
      G.factor(Exponent::whole(sigma * (4 * n - 1) - a), Rational(-1));
    }
    b.z[j] = G.value().shifted(Exponent::from_rational(Rational(a, 2))).truncated(D);
  }
  return b;
}

BoltzmannPoint BoltzmannPoint::symbolic(std::array<RSeries, 3> z) {
  BoltzmannPoint b;
  for (const auto& s : z)
    if (s.is_zero() || s.valuation() <= Exponent())
      throw Error(ErrorKind::Domain, "Boltzmann weights need positive leading exponent");
  b.z = std::move(z);
  return b;
}

// ---------------------------------------------------------------------------
// Chain and the complex-gauge blocks

std::vector<SpinorFactor> transfer_chain(const Shape& s) {
  std::vector<SpinorFactor> out;
  for (const auto& f : kept_factors(s)) out.push_back({f.kind, f, f.col});
  return out;
}

std::array<std::array<Series<GaussRational>, 2>, 2> spinor_block(const SpinorFactor& f,
                                                                  const BoltzmannPoint& bp,
                                                                  Exponent prec) {
  using GS = Series<GaussRational>;
  const GaussRational I = GaussRational::i();
  const RSeries& z = bp.z[static_cast<int>(f.kind)];
  const RSeries one(1L);
  if (f.kind == FactorKind::V) {
    RSeries den = inverse(one - z * z, prec);
    GS C = to_gauss((one + z * z) * den);
    GS invS = to_gauss(z * den * Rational(2));
    return {{{C, invS * (-I)}, {invS * I, C}}};
  }
  RSeries zi = inverse(z, prec);
  GS c = to_gauss((z + zi) * Rational(1, 2));
  GS sh = to_gauss((zi - z) * Rational(1, 2));
  return {{{c, sh * I}, {sh * (-I), c}}};
}

// ---------------------------------------------------------------------------
// Polynomials

Integer TrivariatePoly::at(int a, int b, int c) const {
  auto it = coeffs.find({a, b, c});
  return it == coeffs.end() ? Integer(0) : it->second;
}

int TrivariatePoly::total_degree() const {
  int d = -1;
  for (const auto& [k, v] : coeffs) d = std::max(d, k[0] + k[1] + k[2]);
  return d;
}

TrivariatePoly TrivariatePoly::truncated(int degree) const {
  TrivariatePoly out;
  for (const auto& [k, v] : coeffs)
    if (k[0] + k[1] + k[2] <= degree) out.coeffs.emplace(k, v);
  return out;
}

std::string TrivariatePoly::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : coeffs) {
    if (!first) os << " + ";
    first = false;
    os << v;
    for (int i = 0; i < 3; ++i)
      if (k[i]) os << "*z" << i + 1 << (k[i] > 1 ? "^" + std::to_string(k[i]) : "");
  }
  return first ? "0" : os.str();
}

RSeries evaluate(const TrivariatePoly& poly, const std::array<RSeries, 3>& z, Exponent D) {
  std::array<std::vector<RSeries>, 3> pw;
  for (int i = 0; i < 3; ++i) pw[i].push_back(RSeries(1L));
  auto power = [&](int i, int k) -> const RSeries& {
    while (static_cast<int>(pw[i].size()) <= k) pw[i].push_back((pw[i].back() * z[i]).truncated(D));
    return pw[i][static_cast<std::size_t>(k)];
  };
  RSeries acc = RSeries::big_o(D);
  for (const auto& [k, v] : poly.coeffs) {
    Exponent val = z[0].valuation() * k[0] + z[1].valuation() * k[1] + z[2].valuation() * k[2];
    if (val >= D) continue;
    RSeries term = (power(0, k[0]) * power(1, k[1])).truncated(D) * power(2, k[2]);
    acc += term.truncated(D) * Rational(v);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Determinants

template <class S>
Series<S> series_determinant(std::vector<std::vector<Series<S>>> a) {
  const std::size_t n = a.size();
  Series<S> det(S(1));
  std::vector<std::size_t> rows(n), cols(n);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  bool negate = false;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t bi = n, bj = n;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j) {
        const auto& e = a[rows[i]][cols[j]];
        if (e.is_zero()) continue;
        if (bi == n || e.valuation() < a[rows[bi]][cols[bj]].valuation()) bi = i, bj = j;
      }
    if (bi == n) {
      // Nothing visible is left: the determinant is zero or below every window.
      Exponent prec = Exponent::infinity();
      for (std::size_t i = k; i < n; ++i) {
        Exponent row = Exponent::infinity();
        for (std::size_t j = k; j < n; ++j) row = std::min(row, a[rows[i]][cols[j]].precision());
        prec = row.is_infinite() || prec.is_infinite() ? std::min(prec, row) : prec + row;
      }
      return det * Series<S>::big_o(prec);
    }
    if (bi != k) std::swap(rows[bi], rows[k]), negate = !negate;
    if (bj != k) std::swap(cols[bj], cols[k]), negate = !negate;
    const Series<S>& piv = a[rows[k]][cols[k]];
    det *= piv;
    Series<S> inv = inverse(piv, piv.is_exact() ? Exponent::whole(64) : Exponent::infinity());
    for (std::size_t i = k + 1; i < n; ++i) {
      auto& row = a[rows[i]];
      if (row[cols[k]].is_zero() && row[cols[k]].is_exact()) continue;
      Series<S> f = row[cols[k]] * inv;
      for (std::size_t j = k + 1; j < n; ++j) row[cols[j]] -= f * a[rows[k]][cols[j]];
    }
  }
  return negate ? -det : det;
}

template Series<Rational> series_determinant(std::vector<std::vector<Series<Rational>>>);
template Series<GaussRational> series_determinant(std::vector<std::vector<Series<GaussRational>>>);

namespace {

struct EdgeCounts {
  int n1 = 0, n2 = 0, n3 = 0;
};

EdgeCounts edge_counts(const std::vector<SpinorFactor>& chain) {
  EdgeCounts e;
  for (const auto& f : chain) (f.kind == FactorKind::U ? e.n1 : f.kind == FactorKind::V ? e.n2 : e.n3) += 1;
  return e;
}

MSeries det_mod(const Field& F, std::vector<std::vector<MSeries>> a, std::int64_t W) {
  const std::size_t n = a.size();
  MSeries det = MSeries::constant(1);
  bool negate = false;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t bi = n, bj = n;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j) {
        if (a[i][j].empty()) continue;
        if (bi == n || a[i][j].val < a[bi][bj].val) bi = i, bj = j;
      }
    if (bi == n) throw Error(ErrorKind::PrecisionExhausted, "determinant window exhausted");
    if (bi != k) std::swap(a[bi], a[k]), negate = !negate;
    if (bj != k) {
      for (auto& row : a) std::swap(row[bj], row[k]);
      negate = !negate;
    }
    det = mul(F, det, a[k][k]);
    const MSeries inv = inverse(F, a[k][k], W);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k].exact_zero()) continue;
      const MSeries f = mul(F, a[i][k], inv);
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = combine(F, a[i][j], mul(F, f, a[k][j]), true);
    }
  }
  if (negate) det = scaled(F, det, F.p - 1);
  return det;
}

struct RunSpec {
  std::array<int, 3> w{1, 1, 1};
  std::array<u64, 3> c{1, 1, 1};  // z_i = c_i t^{w_i}
  int degree = 0;
};

// Z-hat mod p as coefficients of t^0..t^degree, or nullopt when the relative
// window W was too narrow for the cancellations in det Q.
std::optional<std::vector<u64>> run_mod(const Field& F, int N, const std::vector<SpinorFactor>& chain,
                                        const EdgeCounts& ec, const RunSpec& rs, std::int64_t W) {
  const u64 half = F.inv(2);
  std::vector<std::vector<MSeries>> X(static_cast<std::size_t>(2 * N),
                                      std::vector<MSeries>(static_cast<std::size_t>(N)));
  for (int j = 0; j < N; ++j) {
    X[2 * j][j] = MSeries::constant(1);
    X[2 * j + 1][j] = MSeries::constant(1);
  }
  std::array<u64, 3> cinv{F.inv(rs.c[0]), F.inv(rs.c[1]), F.inv(rs.c[2])};
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const int kind = static_cast<int>(it->kind);
    // 0-based spinor rows of the active block
    const std::size_t ra = it->kind == FactorKind::V ? 2 * it->m - 2 : 2 * it->m - 1, rb = ra + 1;
    for (int j = 0; j < N; ++j) {
      MSeries& xa = X[ra][j];
      MSeries& xb = X[rb][j];
      if (xa.exact_zero() && xb.exact_zero()) continue;
      MSeries s = combine(F, xa, xb, false), d = combine(F, xa, xb, true);
      MSeries hs, hd;
      if (it->kind == FactorKind::V) {
        hs = mobius(F, s, rs.c[kind], rs.w[kind], true, W);
        hd = mobius(F, d, rs.c[kind], rs.w[kind], false, W);
      } else {
        hs = shifted(scaled(F, s, rs.c[kind]), rs.w[kind]);
        hd = shifted(scaled(F, d, cinv[kind]), -rs.w[kind]);
      }
      xa = scaled(F, combine(F, hs, hd, false), half);
      xb = scaled(F, combine(F, hs, hd, true), half);
      normalize(xa, W);
      normalize(xb, W);
    }
  }
  std::vector<std::vector<MSeries>> Q(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) Q[i].push_back(combine(F, X[2 * i][j], X[2 * i + 1][j], false));
  MSeries det;
  try {
    det = det_mod(F, std::move(Q), W);
  } catch (const Error&) {
    return std::nullopt;
  }
  // 2^{N-2} z1^{N1} z3^{N3} (1 - z2^2)^{N2}
  MSeries pre = MSeries::constant(F.mul(F.pow(2, static_cast<u64>(N)), F.inv(4)));
  pre = scaled(F, pre, F.mul(F.pow(rs.c[0], static_cast<u64>(ec.n1)), F.pow(rs.c[2], static_cast<u64>(ec.n3))));
  pre = shifted(pre, static_cast<std::int64_t>(rs.w[0]) * ec.n1 + static_cast<std::int64_t>(rs.w[2]) * ec.n3);
  MSeries one_minus;
  one_minus.val = 0;
  one_minus.c.assign(static_cast<std::size_t>(2 * rs.w[1] + 1), 0);
  one_minus.c[0] = 1;
  one_minus.c.back() = F.neg(F.mul(rs.c[1], rs.c[1]));
  for (int k = 0; k < ec.n2; ++k) {
    pre = mul(F, pre, one_minus);
    if (pre.c.size() > static_cast<std::size_t>(rs.degree + 1)) {
      pre.c.resize(static_cast<std::size_t>(rs.degree + 1));
      pre.prec = pre.val + rs.degree + 1;
    }
  }
  MSeries z2 = mul(F, pre, det);
  if (z2.prec <= rs.degree) return std::nullopt;
  if (z2.empty() || z2.val != 0 || z2.c[0] != 1)
    throw Error(ErrorKind::Consistency, "Z-hat squared does not start with 1 (leading exponent " +
                                            std::to_string(z2.val) + ")");
  std::vector<u64> f(static_cast<std::size_t>(rs.degree + 1)), h(f.size());
  for (int k = 0; k <= rs.degree; ++k) f[k] = z2.at(k);
  h[0] = 1;
  for (std::size_t n = 1; n < f.size(); ++n) {
    u128 acc = 0;
    for (std::size_t k = 1; k < n; ++k) acc += static_cast<u128>(h[k]) * h[n - k];
    h[n] = F.mul(F.sub(f[n], static_cast<u64>(acc % F.p)), half);
  }
  return h;
}

// Interpolating polynomial through (x_k, y_k), monomial coefficients.
std::vector<u64> interpolate(const Field& F, const std::vector<u64>& xs, std::vector<u64> ys) {
  const std::size_t n = xs.size();
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      ys[i] = F.mul(F.sub(ys[i], ys[i - 1]), F.inv(F.sub(xs[i], xs[i - j])));
      if (i == j) break;
    }
  std::vector<u64> poly{ys[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    std::vector<u64> next(poly.size() + 1, 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] = F.add(next[i + 1], poly[i]);
      next[i] = F.sub(next[i], F.mul(poly[i], xs[k]));
    }
    next[0] = F.add(next[0], ys[k]);
    poly = std::move(next);
  }
  return poly;
}

Integer symmetric(const Integer& x, const Integer& M) { return x > M / 2 ? x - M : x; }

// Incremental CRT over a growing prime list; done once an extra prime no
// longer changes the lifted integers.
class Lifter {
 public:
  bool add(u64 p, const std::vector<u64>& residues) {
    if (M_ == 0) {
      M_ = Integer(p);
      values_.assign(residues.begin(), residues.end());
    } else {
      Field F{p};
      const u64 minv = F.inv(Integer(M_ % p).convert_to<u64>());
      for (std::size_t k = 0; k < residues.size(); ++k) {
        const u64 xm = Integer(values_[k] % p).convert_to<u64>();
        const u64 t = F.mul(F.sub(residues[k], xm), minv);
        if (t != 0) values_[k] += M_ * t;
      }
      M_ *= p;
    }
    std::vector<Integer> now = values();
    const bool same = now == last_;
    last_ = std::move(now);
    return same;
  }
  std::vector<Integer> values() const {
    std::vector<Integer> out;
    for (const auto& v : values_) out.push_back(symmetric(v, M_));
    return out;
  }

 private:
  Integer M_ = 0;
  std::vector<Integer> values_, last_;
};

template <class Collect>
void for_each_prime(Collect&& collect, std::size_t count_hint, SpinorStats* stats) {
  for (std::size_t k = 1;; ++k) {
    u64 p = primes(k).back();
    if (collect(Field{p})) {
      if (stats) stats->primes = static_cast<int>(k);
      return;
    }
    if (k > 64 + count_hint) throw Error(ErrorKind::Consistency, "CRT lift did not stabilise");
  }
}

}  // namespace

std::vector<Integer> zhat_isotropic(const Shape& s, int degree, SpinorStats* stats) {
  if (degree < 0) return {};
  const auto chain = transfer_chain(s);
  const EdgeCounts ec = edge_counts(chain);
  RunSpec rs;
  rs.degree = degree;
  std::int64_t W = degree + 8;
  Lifter lift;
  int runs = 0;
  for_each_prime(
      [&](const Field& F) {
        for (;;) {
          ++runs;
          if (auto h = run_mod(F, s.cols(), chain, ec, rs, W)) {
            return lift.add(F.p, *h);
          }
          W += std::max<std::int64_t>(8, W / 2);
        }
      },
      0, stats);
  if (stats) stats->runs = runs, stats->window = static_cast<int>(W);
  return lift.values();
}

TrivariatePoly zhat_polynomial(const Shape& s, std::array<int, 3> w, int degree, SpinorStats* stats) {
  for (int x : w)
    if (x <= 0) throw Error(ErrorKind::Domain, "weights must be positive");
  const auto chain = transfer_chain(s);
  const EdgeCounts ec = edge_counts(chain);
  const int d2 = ec.n2 ? degree / w[1] : 0, d3 = ec.n3 ? degree / w[2] : 0;
  // Monomial slots in a fixed order: (d, b, c) for each t-degree d.
  std::vector<std::array<int, 3>> slots;
  for (int d = 0; d <= degree; ++d)
    for (int b = 0; b <= d2; ++b)
      for (int c = 0; c <= d3; ++c) slots.push_back({d, b, c});
  std::int64_t W = degree + 8;
  Lifter lift;
  int runs = 0;
  for_each_prime(
      [&](const Field& F) {
        // values[i][j][d] at c2 = i+1, c3 = j+1
        std::vector<std::vector<std::vector<u64>>> values(
            static_cast<std::size_t>(d2 + 1), std::vector<std::vector<u64>>(static_cast<std::size_t>(d3 + 1)));
        for (int i = 0; i <= d2; ++i)
          for (int j = 0; j <= d3; ++j) {
            RunSpec rs;
            rs.w = w;
            rs.c = {1, static_cast<u64>(i + 1), static_cast<u64>(j + 1)};
            rs.degree = degree;
            for (;;) {
              ++runs;
              if (auto h = run_mod(F, s.cols(), chain, ec, rs, W)) {
                values[i][j] = std::move(*h);
                break;
              }
              W += std::max<std::int64_t>(8, W / 2);
            }
          }
        std::vector<u64> xs2(static_cast<std::size_t>(d2 + 1)), xs3(static_cast<std::size_t>(d3 + 1));
        std::iota(xs2.begin(), xs2.end(), 1);
        std::iota(xs3.begin(), xs3.end(), 1);
        std::vector<u64> residues;
        residues.reserve(slots.size());
        for (int d = 0; d <= degree; ++d) {
          // interpolate in c3 for each c2, then in c2 for each power of c3
          std::vector<std::vector<u64>> inner(static_cast<std::size_t>(d2 + 1));
          for (int i = 0; i <= d2; ++i) {
            std::vector<u64> ys;
            for (int j = 0; j <= d3; ++j) ys.push_back(values[i][j][d]);
            inner[i] = interpolate(F, xs3, ys);
          }
          std::vector<std::vector<u64>> coef(static_cast<std::size_t>(d3 + 1));
          for (int c = 0; c <= d3; ++c) {
            std::vector<u64> ys;
            for (int i = 0; i <= d2; ++i) ys.push_back(inner[i][c]);
            coef[c] = interpolate(F, xs2, ys);
          }
          for (int b = 0; b <= d2; ++b)
            for (int c = 0; c <= d3; ++c) residues.push_back(coef[c][b]);
        }
        return lift.add(F.p, residues);
      },
      0, stats);
  if (stats) stats->runs = runs, stats->window = static_cast<int>(W);
  const auto vals = lift.values();
  TrivariatePoly out;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (vals[k] == 0) continue;
    const auto [d, b, c] = slots[k];
    const int rest = d - b * w[1] - c * w[2];
    if (rest < 0 || rest % w[0] != 0)
      throw Error(ErrorKind::Consistency, "Z-hat has a term off the weight lattice at t^" + std::to_string(d));
    out.coeffs[{rest / w[0], b, c}] = vals[k];
  }
  return out;
}

RSeries zhat_spinor(const Shape& s, const BoltzmannPoint& bp, Exponent D, SpinorStats* stats) {
  if (D <= Exponent()) return RSeries::big_o(D);
  std::array<std::int64_t, 3> v{};
  for (int i = 0; i < 3; ++i) {
    if (bp.z[i].is_zero() || bp.z[i].valuation() <= Exponent())
      throw Error(ErrorKind::Domain, "Boltzmann weight z" + std::to_string(i + 1) + " must vanish at p = 0");
    v[i] = bp.z[i].valuation().quarters();
  }
  const bool iso = !first_difference(bp.z[0], bp.z[1]) && !first_difference(bp.z[0], bp.z[2]);
  if (iso) {
    const int degree = static_cast<int>((D.quarters() - 1) / v[0]);
    auto coeffs = zhat_isotropic(s, degree, stats);
    TrivariatePoly poly;
    for (int k = 0; k <= degree; ++k)
      if (coeffs[k] != 0) poly.coeffs[{k, 0, 0}] = coeffs[k];
    return evaluate(poly, {bp.z[0], bp.z[0], bp.z[0]}, D);
  }
  const std::int64_t u = std::gcd(std::gcd(v[0], v[1]), v[2]);
  const std::array<int, 3> w{static_cast<int>(v[0] / u), static_cast<int>(v[1] / u), static_cast<int>(v[2] / u)};
  const int degree = static_cast<int>((D.quarters() - 1) / u);
  return evaluate(zhat_polynomial(s, w, degree, stats), bp.z, D);
}

Series<GaussRational> zhat_squared_complex_gauge(const Shape& s, const BoltzmannPoint& bp, Exponent D) {
  using GS = Series<GaussRational>;
  const int N = s.cols();
  const auto chain = transfer_chain(s);
  const EdgeCounts ec = edge_counts(chain);
  Exponent slack = Exponent::whole(4);
  for (const auto& f : chain)
    if (f.kind != FactorKind::V) slack += bp.z[static_cast<int>(f.kind)].valuation();
  const Exponent prec = D + slack;
  std::vector<std::vector<GS>> X(static_cast<std::size_t>(2 * N), std::vector<GS>(static_cast<std::size_t>(N)));
  for (int j = 0; j < N; ++j) {
    X[2 * j][j] = GS(GaussRational(1));
    X[2 * j + 1][j] = GS(GaussRational::i());
  }
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const auto blk = spinor_block(*it, bp, prec);
    const std::size_t ra = it->kind == FactorKind::V ? 2 * it->m - 2 : 2 * it->m - 1, rb = ra + 1;
    for (int j = 0; j < N; ++j) {
      GS a = blk[0][0] * X[ra][j] + blk[0][1] * X[rb][j];
      GS b = blk[1][0] * X[ra][j] + blk[1][1] * X[rb][j];
      X[ra][j] = a;
      X[rb][j] = b;
    }
  }
  std::vector<std::vector<GS>> Q(static_cast<std::size_t>(N), std::vector<GS>(static_cast<std::size_t>(N)));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) Q[i][j] = X[2 * i][j] - X[2 * i + 1][j] * GaussRational::i();
  GS det = series_determinant(std::move(Q));
  RSeries pre = pow_int(bp.z[0], ec.n1) * pow_int(bp.z[2], ec.n3) *
                pow_int(RSeries(1L) - bp.z[1] * bp.z[1], ec.n2) * (Rational(Integer(1) << N) / 4);
  GS out = (to_gauss(pre) * det).truncated(D);
  if (out.precision() < D)
    throw Error(ErrorKind::PrecisionExhausted, "complex-gauge window reached only p^" + out.precision().str());
  for (const auto& t : out.terms())
    if (!t.c.is_real())
      throw Error(ErrorKind::Consistency, "Z-hat squared has an imaginary part at p^" +
                                              Exponent::quarters(t.q).str());
  return out;
}

// ---------------------------------------------------------------------------
// Brute force

TrivariatePoly zhat_bruteforce(const Shape& s, int maxdeg) {
  const int n = s.spin_count();
  if (n > 24) {
    std::ostringstream os;
    os << s.name() << " has " << n << " spins; brute force would visit 2^" << n - 1
       << " configurations (limit 2^23)";
    throw Error(ErrorKind::Budget, os.str());
  }
  struct Edge {
    int a, b, type;
  };
  std::vector<std::vector<Edge>> incident(static_cast<std::size_t>(n));
  for (const auto& f : kept_factors(s)) {
    int ra = f.row, ja = f.col, rb = f.row, jb = f.col;
    if (f.kind == FactorKind::U) jb += 1;
    if (f.kind == FactorKind::V) rb += 1;
    if (f.kind == FactorKind::W) ra += 1, jb += 1;
    Edge e{s.spin_of(ra, ja), s.spin_of(rb, jb), static_cast<int>(f.kind)};
    incident[e.a].push_back(e);
    incident[e.b].push_back(e);
  }
  const int D = maxdeg + 1;
  std::vector<std::int64_t> hist(static_cast<std::size_t>(D * D * D), 0);
  std::vector<int> spin(static_cast<std::size_t>(n), 1);
  std::array<int, 3> unlike{0, 0, 0};
  auto record = [&] {
    if (unlike[0] + unlike[1] + unlike[2] <= maxdeg) ++hist[(unlike[0] * D + unlike[1]) * D + unlike[2]];
  };
  record();
  // Gray code over spins 1..n-1; spin 0 stays up.
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  for (std::uint64_t g = 1; g < total; ++g) {
    const int k = 1 + __builtin_ctzll(g);
    for (const auto& e : incident[k]) {
      const int other = e.a == k ? e.b : e.a;
      unlike[e.type] += spin[k] == spin[other] ? 1 : -1;
    }
    spin[k] = -spin[k];
    record();
  }
  TrivariatePoly out;
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c)
        if (auto v = hist[(a * D + b) * D + c]) out.coeffs[{a, b, c}] = Integer(v);
  return out;
}

}  // namespace trilat
