#include "trilat/extract.hpp"
#include "trilat/error.hpp"

#include <sstream>

namespace trilat {

std::vector<std::pair<std::string, RSeries>> KappaSet::fields() const {
  std::vector<std::pair<std::string, RSeries>> f;
  f.emplace_back("log_kb", log_kb);
  if (isotropic) {
    f.emplace_back("log_ks", log_ks[0]);
    f.emplace_back("log_kc", log_kc);
    f.emplace_back("log_kct", log_kct);
    return f;
  }
  for (int i = 0; i < 3; ++i) f.emplace_back("log_ks" + std::to_string(i + 1), log_ks[i]);
  for (int i = 0; i < 3; ++i) f.emplace_back("log_kc_kct" + std::to_string(i + 1), log_kc_kct[i]);
  f.emplace_back("log_prod_kc", log_prod_kc);
  f.emplace_back("log_prod_kct", log_prod_kct);
  return f;
}

std::vector<Rational> count_row(const CountVector& c, bool isotropic) {
  if (!c.boundary_known) throw Error(ErrorKind::Configuration, "shape without boundary counts");
  if (isotropic) {
    auto t = c.isotropic();
    return {t[0], t[1], t[2], t[3]};
  }
  const int d = c.n_c[0] - c.nt_c[0];
  if (c.n_c[1] - c.nt_c[1] != d || c.n_c[2] - c.nt_c[2] != d)
    throw Error(ErrorKind::Configuration, "corner counts violate n_i - nt_i = const");
  return {c.n_b, c.n_s[0], c.n_s[1], c.n_s[2], c.nt_c[0], c.nt_c[1], c.nt_c[2], d};
}

namespace {

KappaSet solve(const std::vector<ShapeLog>& shapes, Exponent D, bool iso, bool strict) {
  const std::size_t u = iso ? 4 : 8;
  if (shapes.size() < u) {
    std::ostringstream os;
    os << "unknowns exceed equations: " << u << " unknowns, " << shapes.size() << " shapes";
    throw Error(ErrorKind::Configuration, os.str());
  }
  std::vector<std::vector<Rational>> A;
  std::vector<RSeries> b;
  for (const auto& s : shapes) {
    A.push_back(count_row(counts(s.shape), iso));
    b.push_back(s.log_zhat.truncated(D));
  }
  // Reduced row echelon form, carrying the series right-hand sides along.
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < u && rank < A.size(); ++c) {
    std::size_t r = rank;
    while (r < A.size() && A[r][c] == 0) ++r;
    if (r == A.size()) continue;
    std::swap(A[r], A[rank]);
    std::swap(b[r], b[rank]);
    const Rational inv = Rational(1) / A[rank][c];
    for (auto& x : A[rank]) x *= inv;
    b[rank] *= inv;
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (i == rank || A[i][c] == 0) continue;
      const Rational f = A[i][c];
      for (std::size_t j = 0; j < u; ++j) A[i][j] -= f * A[rank][j];
      b[i] -= b[rank] * f;
    }
    pivot_col.push_back(c);
    ++rank;
  }
  if (rank < u) {
    std::ostringstream os;
    os << "count matrix has rank " << rank << " < " << u << "; add shapes that separate the unknowns";
    throw Error(ErrorKind::Configuration, os.str());
  }
  KappaSet k;
  k.isotropic = iso;
  Exponent prec = D;
  for (std::size_t i = 0; i < rank; ++i) prec = std::min(prec, b[i].precision());
  k.residual_order = prec;
  for (std::size_t i = rank; i < A.size(); ++i) {
    const RSeries r = b[i].truncated(prec);
    if (!r.is_zero()) k.residual_order = std::min(k.residual_order, r.valuation());
  }
  if (strict && k.residual_order < prec) {
    std::ostringstream os;
    os << "finite-size contamination or model error: residual of the overdetermined system is nonzero at p^"
       << k.residual_order.str();
    throw Error(ErrorKind::Contamination, os.str());
  }
  k.trusted_order = std::min(prec, k.residual_order);
  auto x = [&](std::size_t c) { return b[c].truncated(k.trusted_order); };
  k.log_kb = x(0);
  if (iso) {
    for (auto& s : k.log_ks) s = x(1);
    k.log_kc = x(2);
    k.log_kct = x(3);
    for (auto& s : k.log_kc_kct) s = k.log_kc + k.log_kct;
    k.log_prod_kc = k.log_kc * Rational(3);
    k.log_prod_kct = k.log_kct * Rational(3);
    k.gauge_note = "isotropic: corners determined individually";
  } else {
    for (int i = 0; i < 3; ++i) k.log_ks[i] = x(1 + i);
    for (int i = 0; i < 3; ++i) k.log_kc_kct[i] = x(4 + i);
    k.log_prod_kc = x(7);
    k.log_prod_kct = k.log_kc_kct[0] + k.log_kc_kct[1] + k.log_kc_kct[2] - k.log_prod_kc;
    k.gauge_note = "invariants only: k_c,i -> rho_i k_c,i, kt_c,i -> kt_c,i / rho_i, rho_1 rho_2 rho_3 = 1";
  }
  return k;
}

}  // namespace

KappaSet extract(const std::vector<ShapeLog>& shapes, Exponent D, bool isotropic) {
  return solve(shapes, D, isotropic, true);
}

KappaSet extract_lenient(const std::vector<ShapeLog>& shapes, Exponent D, bool isotropic) {
  return solve(shapes, D, isotropic, false);
}

Exponent trusted_order(const std::vector<std::vector<ShapeLog>>& levels, bool isotropic) {
  if (levels.size() < 2) throw Error(ErrorKind::Configuration, "trusted order needs at least two sizes");
  Exponent D = Exponent::infinity();
  for (const auto& lv : levels)
    for (const auto& s : lv) D = std::min(D, s.log_zhat.precision());
  std::vector<KappaSet> ks;
  for (const auto& lv : levels) ks.push_back(extract_lenient(lv, D, isotropic));
  Exponent t = D;
  for (const auto& k : ks) t = std::min(t, k.trusted_order);
  for (std::size_t i = 1; i < ks.size(); ++i) {
    auto a = ks[i - 1].fields(), b = ks[i].fields();
    for (std::size_t f = 0; f < a.size(); ++f)
      if (auto d = first_difference(a[f].second, b[f].second)) t = std::min(t, *d);
  }
  if (t <= Exponent()) throw Error(ErrorKind::Contamination, "extractions agree at no order");
  return t;
}

ShapeLog log_zhat(const Shape& s, const BoltzmannPoint& z, Exponent D) {
  return {s, log(zhat_spinor(s, z, D))};
}

int min_side(Exponent D, int w_min) {
  // A finite-size term needs a chain of flipped bonds across the shape, of
  // weight about 2 w_min per site of the shortest side; the first one sits at
  // 2 w_min L - 1 and must lie beyond the last order kept.
  const std::int64_t d = D.integer_ceiling() + 2;
  return static_cast<int>(std::max<std::int64_t>(4, (d + 2 * w_min - 1) / (2 * w_min)));
}

std::vector<Shape> schedule_level(bool isotropic, int L) {
  std::vector<Shape> out;
  if (isotropic) {
    out.push_back(make_shape("parallelogram", L, L));
    out.push_back(make_shape("parallelogram", L + 1, L));
    out.push_back(make_shape("triangle", L, L));
    out.push_back(make_shape("triangle", L + 1, L + 1));
    out.push_back(make_shape("hexagon", 2 * L - 1, 2 * L - 1));
    return out;
  }
  // The bulk term is bilinear in (M, N): four sizes of one family pin it.
  for (auto [m, n] : {std::pair{L, L}, {L + 1, L}, {L, L + 1}, {L + 1, L + 1}})
    out.push_back(make_shape("parallelogram", m, n));
  for (auto [m, n] : {std::pair{L, L}, {L + 1, L}}) {
    out.push_back(make_shape("parallelogram13", m, n));
    out.push_back(make_shape("parallelogram23", m, n));
  }
  out.push_back(make_shape("triangle", L, L));
  return out;
}

std::vector<std::vector<Shape>> default_levels(bool isotropic, Exponent D, int w_min) {
  const int L = min_side(D, w_min);
  return {schedule_level(isotropic, L), schedule_level(isotropic, L + 1)};
}

}  // namespace trilat
