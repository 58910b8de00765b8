#pragma once

#include "trilat/lattice.hpp"
#include "trilat/series.hpp"
#include "trilat/spinor.hpp"

#include <array>
#include <string>
#include <vector>

namespace trilat {

struct ShapeLog {
  Shape shape;
  RSeries log_zhat;
};

// Gauge-invariant content of log Z-hat = n_b log k_b + sum_i n_s,i log k_s,i
//   + sum_i n_c,i log k_c,i + sum_i nt_c,i log kt_c,i.
struct KappaSet {
  bool isotropic = false;
  RSeries log_kb;
  std::array<RSeries, 3> log_ks;
  std::array<RSeries, 3> log_kc_kct;  // log(k_c,i kt_c,i)
  RSeries log_prod_kc;                // log(k_c,1 k_c,2 k_c,3)
  RSeries log_prod_kct;
  // Isotropic extraction pins the corners individually.
  RSeries log_kc, log_kct;
  Exponent trusted_order;
  Exponent residual_order;  // first order at which the overdetermined system fails
  std::string gauge_note;

  // name -> series, in a fixed order
  std::vector<std::pair<std::string, RSeries>> fields() const;
};

// Rows of the count matrix in the unknowns used by extract():
//   isotropic:   [n_b, sum n_s, sum n_c, sum nt_c]
//   anisotropic: [n_b, n_s1, n_s2, n_s3, nt_1, nt_2, nt_3, n_i - nt_i]
std::vector<Rational> count_row(const CountVector& c, bool isotropic);

// Exact solve per series coefficient.  Throws Configuration when the shapes
// cannot separate the unknowns and Contamination when the overdetermined part
// fails below D (the message names the first offending order).
KappaSet extract(const std::vector<ShapeLog>& shapes, Exponent D, bool isotropic);
// Same solve, but a failing residual only lowers trusted_order.
KappaSet extract_lenient(const std::vector<ShapeLog>& shapes, Exponent D, bool isotropic);

// Largest order to which consecutive extractions agree (and each is
// residual-free).
Exponent trusted_order(const std::vector<std::vector<ShapeLog>>& levels, bool isotropic);

ShapeLog log_zhat(const Shape& s, const BoltzmannPoint& z, Exponent D);

// Shortest side for which finite-size terms stay at or beyond p^D, given the
// smallest p-exponent among z1, z2, z3.
int min_side(Exponent D, int w_min);
// Shapes of side about L that separate all unknowns on their own (the
// hexagon of the isotropic level has side L).
std::vector<Shape> schedule_level(bool isotropic, int L);
// Two consecutive levels starting at min_side(D, w_min).
std::vector<std::vector<Shape>> default_levels(bool isotropic, Exponent D, int w_min = 1);

}  // namespace trilat
