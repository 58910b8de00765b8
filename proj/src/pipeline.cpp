#include "trilat/pipeline.hpp"
#include "trilat/error.hpp"
#include "trilat/series_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace trilat {

BoltzmannPoint Parametrization::point(Exponent D) const {
  if (isotropic) return BoltzmannPoint::isotropic(D);
  return BoltzmannPoint::elliptic(ep.alpha, ep.sigma, D);
}

int Parametrization::w_min() const {
  if (isotropic) return 1;
  // z_j = a_j^{1/2} (1 + ...)
  return std::max(1, std::min({ep.alpha[0], ep.alpha[1], ep.alpha[2]}) / 2);
}

std::string Parametrization::str() const { return isotropic ? "isotropic" : ep.str(); }

double estimate_seconds(const Shape& s, const Parametrization& par, Exponent D) {
  // Measured on one core: parallelogram:30:30 to p^24 in 1.2 s isotropic,
  // parallelogram:13:13 in 4.5 s at alpha = (2,4,6), sigma = 12.
  const double area = double(s.rows()) * s.cols(), d = static_cast<double>(D.integer_ceiling());
  return (par.isotropic ? 1.6e-7 : 1.6e-5) * area * area * std::pow(d, 0.7);
}

std::string cache_key(const Shape& s, const Parametrization& par, Exponent D) {
  std::ostringstream text;
  text << s.name() << '|' << s.rows() << 'x' << s.cols() << '|';
  for (const auto& f : s.deletions()) text << to_string(f) << ',';
  text << '|' << par.str() << "|D=" << D.str();
  // FNV-1a, stable across builds
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

RSeries cached_zhat(const Shape& s, const Parametrization& par, Exponent D, const std::string& cache_dir) {
  namespace fs = std::filesystem;
  fs::path file;
  if (!cache_dir.empty()) {
    file = fs::path(cache_dir) / (cache_key(s, par, D) + ".zhat");
    if (fs::exists(file)) {
      std::ifstream in(file);
      return read_series(in);
    }
  }
  // Below p^1 there is nothing to compute, and no point to build.
  RSeries z = D <= Exponent::whole(1) ? RSeries(Rational(1)).truncated(D) : zhat_spinor(s, par.point(D), D);
  if (!file.empty()) {
    fs::create_directories(file.parent_path());
    std::ofstream out(file);
    write_series(out, z);
  }
  return z;
}

ExtractionRun run_extraction(const Parametrization& par, Exponent D, const std::string& cache_dir,
                             std::vector<std::vector<Shape>> levels, const Progress& progress) {
  if (levels.empty()) levels = default_levels(par.isotropic, D, par.w_min());
  ExtractionRun run;
  std::vector<ShapeLog> all;
  for (const auto& lv : levels) {
    run.levels.emplace_back();
    for (const auto& s : lv) {
      const auto t0 = std::chrono::steady_clock::now();
      ShapeLog sl{s, log(cached_zhat(s, par, D, cache_dir))};
      if (progress) {
        std::ostringstream os;
        os << s.name() << " "
           << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s";
        progress(os.str());
      }
      run.levels.back().push_back(sl);
      all.push_back(std::move(sl));
    }
  }
  run.levels_agree_to = trusted_order(run.levels, par.isotropic);
  run.kappas = extract(all, D, par.isotropic);
  run.kappas.trusted_order = std::min(run.kappas.trusted_order, run.levels_agree_to);
  return run;
}

}  // namespace trilat
