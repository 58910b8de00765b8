#include "trilat/lattice.hpp"
#include "trilat/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace trilat {

namespace {

std::pair<Site, Site> endpoints(const FactorSlot& f) {
  switch (f.kind) {
    case FactorKind::U: return {{f.row, f.col}, {f.row, f.col + 1}};
    case FactorKind::V: return {{f.row, f.col}, {f.row + 1, f.col}};
    case FactorKind::W: return {{f.row + 1, f.col}, {f.row, f.col + 1}};
  }
  return {};
}

struct SideInfo {
  int type;
  int length;
};

std::array<SideInfo, 6> sides_of(const HexBounds& b) {
  auto len = [](int lo, int hi) { return hi - lo; };
  return {{
      {1, len(std::max(b.j_lo, b.s_lo - b.r_lo), std::min(b.j_hi, b.s_hi - b.r_lo))},
      {2, len(std::max(b.r_lo, b.s_lo - b.j_hi), std::min(b.r_hi, b.s_hi - b.j_hi))},
      {3, len(std::max(b.r_lo, b.s_hi - b.j_hi), std::min(b.r_hi, b.s_hi - b.j_lo))},
      {1, len(std::max(b.j_lo, b.s_lo - b.r_hi), std::min(b.j_hi, b.s_hi - b.r_hi))},
      {2, len(std::max(b.r_lo, b.s_lo - b.j_lo), std::min(b.r_hi, b.s_hi - b.j_lo))},
      {3, len(std::max(b.r_lo, b.s_lo - b.j_hi), std::min(b.r_hi, b.s_lo - b.j_lo))},
  }};
}

void need(bool ok, const std::string& why) {
  if (!ok) throw Error(ErrorKind::InvalidShape, why);
}

}  // namespace

std::string to_string(const FactorSlot& f) {
  const char* k = f.kind == FactorKind::U ? "U" : f.kind == FactorKind::V ? "V" : "W";
  return std::string(k) + "(" + std::to_string(f.row) + "," + std::to_string(f.col) + ")";
}

HexBounds HexBounds::tightened() const {
  HexBounds b = *this;
  for (;;) {
    HexBounds o = b;
    b.r_lo = std::max(b.r_lo, b.s_lo - b.j_hi);
    b.r_hi = std::min(b.r_hi, b.s_hi - b.j_lo);
    b.j_lo = std::max(b.j_lo, b.s_lo - b.r_hi);
    b.j_hi = std::min(b.j_hi, b.s_hi - b.r_lo);
    b.s_lo = std::max(b.s_lo, b.r_lo + b.j_lo);
    b.s_hi = std::min(b.s_hi, b.r_hi + b.j_hi);
    if (b.r_lo == o.r_lo && b.r_hi == o.r_hi && b.j_lo == o.j_lo && b.j_hi == o.j_hi &&
        b.s_lo == o.s_lo && b.s_hi == o.s_hi)
      return b;
  }
}

std::array<int, 4> CountVector::isotropic() const {
  auto sum = [](const std::array<int, 3>& a) { return a[0] + a[1] + a[2]; };
  return {n_b, sum(n_s), sum(n_c), sum(nt_c)};
}

bool Shape::is_deleted(const FactorSlot& f) const {
  return std::binary_search(deletions_.begin(), deletions_.end(), f);
}

std::vector<Site> Shape::sites() const {
  if (!bounds_) throw Error(ErrorKind::InvalidShape, name_ + " has no checked site list");
  std::vector<Site> out;
  for (int r = 1; r <= M_; ++r)
    for (int j = 1; j <= N_; ++j)
      if (bounds_->contains(r, j)) out.push_back({r, j});
  return out;
}

void Shape::finish() {
  std::sort(deletions_.begin(), deletions_.end());
  deletions_.erase(std::unique(deletions_.begin(), deletions_.end()), deletions_.end());
  std::vector<int> parent(static_cast<std::size_t>(M_ * N_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& f : deletions_) {
    if (f.kind != FactorKind::V) continue;
    auto [a, b] = endpoints(f);
    parent[find((a.row - 1) * N_ + a.col - 1)] = find((b.row - 1) * N_ + b.col - 1);
  }
  spin_index_.assign(parent.size(), -1);
  std::vector<int> label(parent.size(), -1);
  spins_ = 0;
  for (std::size_t i = 0; i < parent.size(); ++i) {
    int root = find(static_cast<int>(i));
    if (label[root] < 0) label[root] = spins_++;
    spin_index_[i] = label[root];
  }
  for (const auto& f : kept_factors(*this)) {
    auto [a, b] = endpoints(f);
    need(spin_of(a.row, a.col) != spin_of(b.row, b.col),
         name_ + ": factor " + to_string(f) + " joins a spin to itself");
  }
}

std::vector<FactorSlot> full_chain(int M, int N) {
  std::vector<FactorSlot> chain;
  for (int t = 1; t < M; ++t)
    for (int m = 1; m <= N; ++m) {
      if (m < N) chain.push_back({FactorKind::U, t, m});
      chain.push_back({FactorKind::V, t, m});
      if (m < N) chain.push_back({FactorKind::W, t, m});
    }
  for (int m = 1; m < N; ++m) chain.push_back({FactorKind::U, M, m});
  return chain;
}

std::vector<FactorSlot> kept_factors(const Shape& s) {
  std::vector<FactorSlot> out;
  for (const auto& f : full_chain(s.rows(), s.cols()))
    if (!s.is_deleted(f)) out.push_back(f);
  return out;
}

Shape shape_from_bounds(const std::string& name, int M, int N, const HexBounds& hb) {
  need(M >= 1 && N >= 2, name + ": base must have N >= 2");
  HexBounds b = HexBounds{std::max(hb.r_lo, 1), std::min(hb.r_hi, M), std::max(hb.j_lo, 1),
                          std::min(hb.j_hi, N), hb.s_lo, hb.s_hi}
                    .tightened();
  need(b.j_lo == 1 && b.j_hi == N, name + ": every column of the base must hold a site");
  need(b.r_lo <= b.r_hi && b.s_lo <= b.s_hi, name + ": empty shape");
  Shape s;
  s.name_ = name;
  s.M_ = M;
  s.N_ = N;
  s.bounds_ = b;
  for (const auto& f : full_chain(M, N)) {
    auto [x, y] = endpoints(f);
    if (!(b.contains(x.row, x.col) && b.contains(y.row, y.col))) s.deletions_.push_back(f);
  }
  s.finish();
  int nonzero = 0;
  for (const auto& side : sides_of(b)) nonzero += side.length > 0;
  need(nonzero >= 3, name + ": degenerate polygon");
  return s;
}

Shape make_shape(const std::string& kind, int a, int b) {
  const std::string name = kind + ":" + std::to_string(a) + ":" + std::to_string(b);
  auto admissible = [&](bool ok, const std::string& why) {
    if (!ok) throw Error(ErrorKind::InvalidShape, name + " is not admissible: " + why);
  };
  if (kind == "parallelogram") {
    admissible(a >= 2 && b >= 2, "needs M, N >= 2");
    return shape_from_bounds(name, a, b, {1, a, 1, b, 2, a + b});
  }
  if (kind == "clipped") {
    admissible(a >= 4 && b >= 4, "needs M, N >= 4 so every side keeps two sites");
    return shape_from_bounds(name, a, b, {1, a, 1, b, 2, a + b - 2});
  }
  if (kind == "triangle") {
    admissible(a == b && a >= 2, "needs M = N = L >= 2");
    return shape_from_bounds(name, a, a, {1, a, 1, a, 2, a + 1});
  }
  if (kind == "hexagon") {
    admissible(a == b && a >= 3 && a % 2 == 1, "needs M = N = 2L - 1 >= 3");
    const int L = (a + 1) / 2;
    return shape_from_bounds(name, a, a, {1, a, 1, a, L + 1, 3 * L - 1});
  }
  if (kind == "parallelogram13") {
    admissible(a >= 2 && b >= 2, "needs M, N >= 2");
    const int n = a + b - 1;
    return shape_from_bounds(name, a, n, {1, a, 1, n, a + 1, a + b});
  }
  if (kind == "parallelogram23") {
    admissible(a >= 2 && b >= 2, "needs M, N >= 2");
    const int m = a + b - 1;
    return shape_from_bounds(name, m, b, {1, m, 1, b, b + 1, b + a});
  }
  throw Error(ErrorKind::InvalidShape, "unknown shape kind '" + kind + "'");
}

Shape parse_shape(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw Error(ErrorKind::Parse, "shape spec must be name:M:N, got '" + spec + "'");
  try {
    return make_shape(parts[0], std::stoi(parts[1]), std::stoi(parts[2]));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::Parse, "shape spec must be name:M:N, got '" + spec + "'");
  }
}

Shape shape_from_deletions(int M, int N, std::vector<FactorSlot> deletions, bool unchecked) {
  const std::string name = "custom:" + std::to_string(M) + ":" + std::to_string(N);
  need(M >= 1 && N >= 2, name + ": base must have N >= 2");
  std::set<FactorSlot> dset(deletions.begin(), deletions.end());
  const auto chain = full_chain(M, N);
  for (const auto& f : dset)
    need(std::find(chain.begin(), chain.end(), f) != chain.end(),
         name + ": " + to_string(f) + " is not a factor of the chain");
  // Present sites are the endpoints of kept factors; their hexagonal hull is
  // the only convex candidate.
  HexBounds hull{M + 1, 0, N + 1, 0, M + N + 1, 0};
  bool any = false;
  for (const auto& f : chain) {
    if (dset.count(f)) continue;
    auto [x, y] = endpoints(f);
    for (const Site& st : {x, y}) {
      any = true;
      hull.r_lo = std::min(hull.r_lo, st.row);
      hull.r_hi = std::max(hull.r_hi, st.row);
      hull.j_lo = std::min(hull.j_lo, st.col);
      hull.j_hi = std::max(hull.j_hi, st.col);
      hull.s_lo = std::min(hull.s_lo, st.row + st.col);
      hull.s_hi = std::max(hull.s_hi, st.row + st.col);
    }
  }
  need(any, name + ": every factor deleted");
  try {
    Shape candidate = shape_from_bounds(name, M, N, hull);
    if (std::equal(candidate.deletions_.begin(), candidate.deletions_.end(), dset.begin(), dset.end()))
      return candidate;
  } catch (const Error&) {
    if (!unchecked) throw;
  }
  need(unchecked, name + ": deletion list is not a convex catalog-style polygon (pass unchecked to force)");
  Shape s;
  s.name_ = name + ":unchecked";
  s.M_ = M;
  s.N_ = N;
  s.deletions_.assign(dset.begin(), dset.end());
  s.finish();
  return s;
}

CountVector counts(const Shape& s) {
  CountVector cv;
  cv.n_b = s.spin_count();
  for (const auto& f : kept_factors(s)) cv.edges[static_cast<int>(f.kind)] += 1;
  if (!s.checked()) return cv;
  const HexBounds& b = *s.bounds();
  const auto sides = sides_of(b);
  for (const auto& side : sides)
    if (side.length > 0) cv.n_s[side.type - 1] += side.length + 1;
  for (int i = 0; i < 6; ++i) {
    if (sides[i].length <= 0) continue;
    int k = (i + 1) % 6, gap = 0;
    while (sides[k].length <= 0) {
      k = (k + 1) % 6;
      ++gap;
    }
    if (gap > 1) throw Error(ErrorKind::InvalidShape, s.name() + ": polygon has a zero-angle corner");
    const int type = 6 - sides[i].type - sides[k].type;
    (gap == 0 ? cv.nt_c : cv.n_c)[type - 1] += 1;
    cv.vertices += 1;
  }
  for (const Site& st : s.sites()) {
    int nb = 0;
    for (auto [dr, dj] : {std::pair{0, 1}, {0, -1}, {1, 0}, {-1, 0}, {1, -1}, {-1, 1}})
      nb += b.contains(st.row + dr, st.col + dj);
    cv.boundary_sites += nb < 6;
  }
  cv.boundary_known = true;
  return cv;
}

}  // namespace trilat
