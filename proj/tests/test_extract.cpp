#include "doctest.h"
#include "trilat/conjectures.hpp"
#include "trilat/error.hpp"
#include "trilat/pipeline.hpp"

using namespace trilat;

namespace {

Exponent W(long n) { return Exponent::whole(n); }

std::vector<ShapeLog> logs(const std::vector<Shape>& shapes, const BoltzmannPoint& z, Exponent D) {
  std::vector<ShapeLog> out;
  for (const auto& s : shapes) out.push_back(log_zhat(s, z, D));
  return out;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Consistency;
}

}  // namespace

TEST_CASE("too few or degenerate shapes are a configuration error") {
  const auto z = BoltzmannPoint::isotropic(W(8));
  auto one = logs({make_shape("parallelogram", 5, 5)}, z, W(8));
  CHECK(kind_of([&] { extract(one, W(8), true); }) == ErrorKind::Configuration);
  std::vector<ShapeLog> same(5, one[0]);
  try {
    extract(same, W(8), true);
    FAIL("expected a rank error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Configuration);
    CHECK(std::string(e.what()).find("rank 1") != std::string::npos);
  }
  CHECK(kind_of([&] { trusted_order({one}, true); }) == ErrorKind::Configuration);
}

TEST_CASE("corner gauge direction is invisible to the counts") {
  bool some_corner = false;
  for (const char* kind : {"parallelogram", "parallelogram13", "parallelogram23", "triangle", "hexagon", "clipped"})
    for (int a : {4, 5, 7}) {
      const int b = std::string(kind) == "triangle" ? a : std::string(kind) == "hexagon" ? a : a + 1;
      const int m = std::string(kind) == "hexagon" ? 2 * a - 1 : a;
      const Shape s = make_shape(kind, m, std::string(kind) == "hexagon" ? m : b);
      const CountVector c = counts(s);
      CAPTURE(s.name());
      // log k_c,i -> log k_c,i + t_i, log kt_c,i -> log kt_c,i - t_i, sum t_i = 0
      const std::array<int, 3> t{1, 2, -3};
      int shift = 0;
      for (int i = 0; i < 3; ++i) shift += t[i] * (c.n_c[i] - c.nt_c[i]);
      CHECK(shift == 0);
      if (c.n_c[0] != c.nt_c[0]) some_corner = true;
      CHECK(count_row(c, false).size() == 8);
    }
  CHECK(some_corner);
}

TEST_CASE("isotropic extraction at low order") {
  const auto run = run_extraction(Parametrization::iso(), W(12));
  const KappaSet& k = run.kappas;
  CHECK(k.trusted_order == W(12));
  CHECK(!first_difference(k.log_ks[0], k.log_ks[1]));
  CHECK(!first_difference(k.log_ks[1], k.log_ks[2]));
  for (const auto& c : verify_against_extraction(k, EllipticParams::isotropic())) {
    CAPTURE(c.name);
    CHECK(c.pass());
  }
  CHECK(k.fields().size() == 4);
}

TEST_CASE("anisotropic solve at the symmetric point") {
  Parametrization par{false, EllipticParams::isotropic()};
  const auto run = run_extraction(par, W(8));
  const KappaSet& k = run.kappas;
  CHECK(k.trusted_order == W(8));
  CHECK(!first_difference(k.log_ks[0], k.log_ks[1]));
  CHECK(!first_difference(k.log_ks[0], k.log_ks[2]));
  CHECK(!first_difference(k.log_kc_kct[0], k.log_kc_kct[2]));
  for (const auto& c : verify_against_extraction(k, par.ep)) {
    CAPTURE(c.name);
    CHECK(c.pass());
  }
}

TEST_CASE("trusted order grows with shape size and is capped by the window") {
  const Exponent D = W(24);
  const auto z = BoltzmannPoint::isotropic(D);
  const auto small = trusted_order({logs(schedule_level(true, 4), z, D), logs(schedule_level(true, 5), z, D)}, true);
  const auto large = trusted_order({logs(schedule_level(true, 6), z, D), logs(schedule_level(true, 7), z, D)}, true);
  CHECK(small < large);
  CHECK(large <= D);

  const auto lv = logs(schedule_level(true, 7), z, W(12));
  CHECK(trusted_order({lv, lv}, true) == W(12));

  // too small for the window: the strict solve names the failing order
  auto both = logs(schedule_level(true, 4), z, D);
  for (auto& s : logs(schedule_level(true, 5), z, D)) both.push_back(s);
  try {
    extract(both, D, true);
    FAIL("expected contamination");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Contamination);
    CHECK(std::string(e.what()).find("p^") != std::string::npos);
  }
  CHECK(extract_lenient(both, D, true).trusted_order < D);
}

TEST_CASE("shape schedule") {
  CHECK(min_side(W(3), 1) == 4);
  CHECK(min_side(W(12), 1) == 7);
  CHECK(min_side(W(25), 1) == 13);
  CHECK(min_side(W(21), 1) == 11);
  CHECK(schedule_level(true, 5).size() == 5);
  CHECK(schedule_level(false, 5).size() == 9);
  CHECK(default_levels(false, W(21)).size() == 2);
}
