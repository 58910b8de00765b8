#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace trilat {

// Sites (r, j) of the M x N base parallelogram, 1 <= r <= M, 1 <= j <= N.
// Rows are numbered from the left (J-dagger) end of the transfer chain, so the
// trailing U's of the chain belong to row M.  Nearest neighbours:
//   type 1 (U): (r, j) - (r, j+1)
//   type 2 (V): (r, j) - (r+1, j)
//   type 3 (W): (r+1, j) - (r, j+1)
// so lines of constant j carry type-2 edges and lines of constant s = r + j
// carry type-3 edges.
enum class FactorKind { U, V, W };

struct FactorSlot {
  FactorKind kind;
  int row;
  int col;

  friend bool operator==(const FactorSlot&, const FactorSlot&) = default;
  friend auto operator<=>(const FactorSlot&, const FactorSlot&) = default;
};

std::string to_string(const FactorSlot& f);

struct Site {
  int row;
  int col;
};

// r in [r_lo, r_hi], j in [j_lo, j_hi], r + j in [s_lo, s_hi]; always tight.
struct HexBounds {
  int r_lo, r_hi, j_lo, j_hi, s_lo, s_hi;

  HexBounds tightened() const;
  bool contains(int r, int j) const {
    return r >= r_lo && r <= r_hi && j >= j_lo && j <= j_hi && r + j >= s_lo && r + j <= s_hi;
  }
};

struct CountVector {
  int n_b = 0;
  std::array<int, 3> n_s{};   // surface sites per edge type
  std::array<int, 3> n_c{};   // 60-degree corners per type
  std::array<int, 3> nt_c{};  // 120-degree corners per type
  std::array<int, 3> edges{};
  int vertices = 0;
  int boundary_sites = 0;
  bool boundary_known = false;

  // {n_b, n_s, n_c, nt_c} summed over types
  std::array<int, 4> isotropic() const;
};

class Shape {
 public:
  const std::string& name() const { return name_; }
  int rows() const { return M_; }
  int cols() const { return N_; }
  // Factors removed from the full parallelogram chain, sorted.
  const std::vector<FactorSlot>& deletions() const { return deletions_; }
  bool checked() const { return bounds_.has_value(); }
  const std::optional<HexBounds>& bounds() const { return bounds_; }
  bool is_deleted(const FactorSlot& f) const;

  // Spins after merging across deleted V factors.  For a checked shape these
  // are exactly the polygon's sites; site_of maps every base slot to its spin.
  int spin_count() const { return spins_; }
  int spin_of(int r, int j) const { return spin_index_[static_cast<std::size_t>((r - 1) * N_ + (j - 1))]; }
  std::vector<Site> sites() const;  // checked shapes only

  friend Shape make_shape(const std::string& kind, int a, int b);
  friend Shape shape_from_bounds(const std::string& name, int M, int N, const HexBounds& hb);
  friend Shape shape_from_deletions(int M, int N, std::vector<FactorSlot> deletions, bool unchecked);

 private:
  void finish();

  std::string name_;
  int M_ = 0, N_ = 0;
  std::vector<FactorSlot> deletions_;
  std::optional<HexBounds> bounds_;
  std::vector<int> spin_index_;
  int spins_ = 0;
};

// Catalog: parallelogram:M:N, clipped:M:N, triangle:L:L, hexagon:M:M (M = 2L-1),
// parallelogram13:M:N (M rows of N sites between type-3 sides),
// parallelogram23:M:N (N columns of M sites between type-3 sides).
Shape make_shape(const std::string& kind, int a, int b);
Shape parse_shape(const std::string& spec);  // "name:M:N"
Shape shape_from_bounds(const std::string& name, int M, int N, const HexBounds& hb);
// Deletion lists are accepted when they describe a convex polygon; otherwise
// only with unchecked = true (then no boundary counts are available).
Shape shape_from_deletions(int M, int N, std::vector<FactorSlot> deletions, bool unchecked = false);

// The full factor sequence of the parallelogram chain, left to right.
std::vector<FactorSlot> full_chain(int M, int N);
// Factor slots joining two distinct spins of the shape (the kept factors).
std::vector<FactorSlot> kept_factors(const Shape& s);

CountVector counts(const Shape& s);

}  // namespace trilat
