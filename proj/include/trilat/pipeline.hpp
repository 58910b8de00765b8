#pragma once

#include "trilat/conjectures.hpp"
#include "trilat/extract.hpp"
#include "trilat/spinor.hpp"

#include <functional>
#include <string>
#include <vector>

namespace trilat {

struct Parametrization {
  bool isotropic = true;
  EllipticParams ep;  // (2,2,2)/6 when isotropic

  static Parametrization iso() { return {}; }
  static Parametrization elliptic(std::array<int, 3> alpha, int sigma) {
    return {false, EllipticParams::make(alpha, sigma)};
  }
  BoltzmannPoint point(Exponent D) const;
  // Smallest p-exponent among z1, z2, z3.
  int w_min() const;
  std::string str() const;
};

// Rough single-core wall time of zhat_spinor, from measured runs.
double estimate_seconds(const Shape& s, const Parametrization& par, Exponent D);

std::string cache_key(const Shape& s, const Parametrization& par, Exponent D);

// Z-hat, read from or written to cache_dir when it is non-empty.
RSeries cached_zhat(const Shape& s, const Parametrization& par, Exponent D, const std::string& cache_dir);

struct ExtractionRun {
  std::vector<std::vector<ShapeLog>> levels;
  Exponent levels_agree_to;  // trusted_order over the levels
  KappaSet kappas;           // strict solve on the union of the levels
};

using Progress = std::function<void(const std::string&)>;

// Shapes default to default_levels(); trusted order is the smaller of the
// level agreement and the strict solve.
ExtractionRun run_extraction(const Parametrization& par, Exponent D, const std::string& cache_dir = "",
                             std::vector<std::vector<Shape>> levels = {}, const Progress& progress = {});

}  // namespace trilat
