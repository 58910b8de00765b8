#pragma once

// Truncated Laurent series over Z/p with explicit O(t^prec) bookkeeping.  Used
// by the spinor engine, which runs the determinant modulo a few primes and
// lifts the integer result back by CRT.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace trilat::modp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  return (a >= kInf || b >= kInf) ? kInf : a + b;
}

struct Field {
  u64 p;

  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= p ? s - p : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
  u64 neg(u64 a) const { return a == 0 ? 0 : p - a; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    for (; e; e >>= 1, a = mul(a, a))
      if (e & 1) r = mul(r, a);
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p - 2); }
  u64 from_int(std::int64_t v) const {
    std::int64_t m = v % static_cast<std::int64_t>(p);
    return static_cast<u64>(m < 0 ? m + static_cast<std::int64_t>(p) : m);
  }
};

// Primes below 2^56 so that 2^16 products fit in an unsigned 128-bit sum.
std::vector<u64> primes(std::size_t count);

struct MSeries {
  std::int64_t val = kInf;   // exponent of c[0]; equals prec when c is empty
  std::int64_t prec = kInf;  // known modulo t^prec
  std::vector<u64> c;

  bool exact_zero() const { return c.empty() && prec >= kInf; }
  bool empty() const { return c.empty(); }
  std::int64_t width() const { return prec >= kInf ? kInf : prec - val; }

  static MSeries constant(u64 v) {
    MSeries s;
    if (v) {
      s.val = 0;
      s.c = {v};
    }
    return s;
  }
  static MSeries big_o(std::int64_t prec) {
    MSeries s;
    s.val = s.prec = prec;
    return s;
  }
  u64 at(std::int64_t e) const {
    if (e < val || e >= val + static_cast<std::int64_t>(c.size())) return 0;
    return c[static_cast<std::size_t>(e - val)];
  }
};

// Strips leading zeros, caps the relative width at W and drops terms past prec.
inline void normalize(MSeries& s, std::int64_t W = kInf) {
  std::size_t i = 0;
  while (i < s.c.size() && s.c[i] == 0) ++i;
  if (i == s.c.size()) {
    s.c.clear();
    s.val = s.prec;
    return;
  }
  s.val += static_cast<std::int64_t>(i);
  s.c.erase(s.c.begin(), s.c.begin() + static_cast<std::ptrdiff_t>(i));
  if (W < kInf) s.prec = std::min(s.prec, s.val + W);
  if (s.prec < kInf && static_cast<std::int64_t>(s.c.size()) > s.prec - s.val)
    s.c.resize(static_cast<std::size_t>(s.prec - s.val));
  while (!s.c.empty() && s.c.back() == 0) s.c.pop_back();
}

inline MSeries shifted(MSeries s, std::int64_t k) {
  if (s.val < kInf) s.val += k;
  if (s.prec < kInf) s.prec += k;
  return s;
}

inline MSeries scaled(const Field& F, MSeries s, u64 x) {
  if (x == 0) return MSeries{};
  for (auto& v : s.c) v = F.mul(v, x);
  return s;
}

// a + sign*b
inline MSeries combine(const Field& F, const MSeries& a, const MSeries& b, bool subtract) {
  MSeries r;
  r.prec = std::min(a.prec, b.prec);
  std::int64_t lo = std::min(a.val, b.val);
  if (lo >= kInf) return r;
  std::int64_t hi = std::max(a.val + static_cast<std::int64_t>(a.c.size()),
                             b.val + static_cast<std::int64_t>(b.c.size()));
  if (a.c.empty()) hi = b.val + static_cast<std::int64_t>(b.c.size());
  if (b.c.empty()) hi = a.val + static_cast<std::int64_t>(a.c.size());
  hi = std::min(hi, r.prec);
  r.val = lo;
  if (hi > lo) {
    r.c.assign(static_cast<std::size_t>(hi - lo), 0);
    for (std::size_t k = 0; k < a.c.size(); ++k) {
      std::int64_t e = a.val + static_cast<std::int64_t>(k) - lo;
      if (e < hi - lo) r.c[static_cast<std::size_t>(e)] = a.c[k];
    }
    for (std::size_t k = 0; k < b.c.size(); ++k) {
      std::int64_t e = b.val + static_cast<std::int64_t>(k) - lo;
      if (e >= hi - lo) break;
      auto& t = r.c[static_cast<std::size_t>(e)];
      t = subtract ? F.sub(t, b.c[k]) : F.add(t, b.c[k]);
    }
  }
  normalize(r);
  return r;
}

inline MSeries mul(const Field& F, const MSeries& a, const MSeries& b) {
  if (a.exact_zero() || b.exact_zero()) return MSeries{};
  MSeries r;
  r.prec = std::min(sat_add(a.prec, b.val), sat_add(b.prec, a.val));
  r.val = a.val + b.val;
  if (a.c.empty() || b.c.empty()) {
    r.val = r.prec;
    return r;
  }
  std::int64_t n = static_cast<std::int64_t>(a.c.size() + b.c.size() - 1);
  if (r.prec < kInf) n = std::min(n, r.prec - r.val);
  if (n <= 0) {
    r.c.clear();
    r.val = r.prec;
    return r;
  }
  r.c.assign(static_cast<std::size_t>(n), 0);
  const std::int64_t na = static_cast<std::int64_t>(a.c.size()), nb = static_cast<std::int64_t>(b.c.size());
  for (std::int64_t k = 0; k < n; ++k) {
    u128 acc = 0;
    std::int64_t i0 = std::max<std::int64_t>(0, k - nb + 1), i1 = std::min(k, na - 1);
    int pending = 0;
    for (std::int64_t i = i0; i <= i1; ++i) {
      acc += static_cast<u128>(a.c[static_cast<std::size_t>(i)]) * b.c[static_cast<std::size_t>(k - i)];
      if (++pending == 1 << 15) {
        acc %= F.p;
        pending = 0;
      }
    }
    r.c[static_cast<std::size_t>(k)] = static_cast<u64>(acc % F.p);
  }
  normalize(r);
  return r;
}

// 1/b for b with a nonzero leading term; relative width is preserved.  An
// exact non-monomial b gets the relative width cap.
inline MSeries inverse(const Field& F, const MSeries& b, std::int64_t cap) {
  MSeries r;
  r.val = -b.val;
  if (b.prec >= kInf && b.c.size() == 1) {
    r.c = {F.inv(b.c[0])};
    return r;
  }
  const std::int64_t n = std::min(b.width(), cap);
  r.prec = r.val + n;
  r.c.assign(static_cast<std::size_t>(n), 0);
  const u64 inv0 = F.inv(b.c[0]);
  for (std::int64_t k = 0; k < n; ++k) {
    u128 acc = 0;
    for (std::int64_t i = 1; i <= k && i < static_cast<std::int64_t>(b.c.size()); ++i)
      acc += static_cast<u128>(b.c[static_cast<std::size_t>(i)]) * r.c[static_cast<std::size_t>(k - i)];
    u64 s = static_cast<u64>(acc % F.p);
    r.c[static_cast<std::size_t>(k)] = F.mul(k == 0 ? 1 : F.neg(s), inv0);
  }
  normalize(r);
  return r;
}

// x * (1 + s c t^w) / (1 - s c t^w), s = +1 or -1, truncated at relative width W.
inline MSeries mobius(const Field& F, const MSeries& x, u64 cw, std::int64_t w, bool plus, std::int64_t W) {
  if (x.empty()) return x;
  MSeries r;
  r.val = x.val;
  r.prec = std::min(x.prec, x.val + W);
  const std::size_t n = static_cast<std::size_t>(r.prec - r.val);
  r.c.assign(n, 0);
  const u64 k = plus ? cw : F.neg(cw);
  const std::size_t ws = static_cast<std::size_t>(w);
  for (std::size_t i = 0; i < n; ++i) {
    u64 v = i < x.c.size() ? x.c[i] : 0;
    if (i >= ws && i - ws < x.c.size()) v = F.add(v, F.mul(k, x.c[i - ws]));
    if (i >= ws) v = F.add(v, F.mul(k, r.c[i - ws]));
    r.c[i] = v;
  }
  normalize(r);
  return r;
}

}  // namespace trilat::modp
