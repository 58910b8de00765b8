#include "CLI11.hpp"
#include "json.hpp"

#include "trilat/conjectures.hpp"
#include "trilat/critical.hpp"
#include "trilat/error.hpp"
#include "trilat/pipeline.hpp"
#include "trilat/series_io.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace trilat;
using nlohmann::json;

namespace {

const char* kHelp = R"(Series orders: --order D keeps every coefficient through p^D.

CSV written by `critical --out FILE` has the columns
  kind                kb, ks, kc, kct or sq (square-lattice corner)
  ratio1,ratio2,ratio3  u_j / lambda
  qprime              conjugate nome q'
  free_energy         log kappa at that q' (sq: mean of the two corners)
  fitted_coefficient  least-squares coefficient of the singular term
  closed_form         the closed-form coefficient)";

struct Config {
  std::vector<std::string> shapes;
  std::vector<int> alpha;
  int sigma = 0;
  bool isotropic = false;
  int order = 24;
  int degree = 10;
  int order_q = 20;
  double tol = 1e-10;
  std::string out, cache;
  bool as_json = false;
  std::string fault;
  double budget = 3600;
  std::vector<double> grid;
  double q = 0.1, w = 0.7;
};

Parametrization parametrization(const Config& c) {
  if (c.isotropic || c.alpha.empty()) {
    if (!c.alpha.empty()) throw Error(ErrorKind::Configuration, "--isotropic and --alpha exclude each other");
    return Parametrization::iso();
  }
  if (c.alpha.size() != 3) throw Error(ErrorKind::Configuration, "--alpha takes three integers a1,a2,a3");
  return Parametrization::elliptic({c.alpha[0], c.alpha[1], c.alpha[2]}, c.sigma);
}

Exponent window(const Config& c) {
  if (c.order < 0) throw Error(ErrorKind::Configuration, "--order must be >= 0");
  return Exponent::whole(c.order + 1);
}

json series_json(const RSeries& s) {
  json terms = json::array();
  for (const auto& t : s.terms())
    terms.push_back({Exponent::quarters(t.q).str(), to_fraction_string(t.c)});
  return {{"precision", s.precision().str()}, {"terms", terms}};
}

void emit(const Config& c, const json& report, const std::string& text) {
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    f << report.dump(2) << "\n";
  }
  if (c.as_json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << text;
}

json check(const std::string& name, const char* cls, bool pass, const std::string& detail) {
  return {{"name", name}, {"class", cls}, {"pass", pass}, {"detail", detail}};
}

std::string line(const json& c) {
  return std::string(c["pass"].get<bool>() ? "PASS " : "FAIL ") + c["name"].get<std::string>() + "  " +
         c["detail"].get<std::string>() + "\n";
}

int cmd_expand(const Config& c) {
  if (c.shapes.empty()) throw Error(ErrorKind::Configuration, "expand needs at least one --shape");
  const std::string cache = c.cache.empty() ? ".trilat-cache" : c.cache;
  const auto par = parametrization(c);
  const Exponent D = window(c);
  json files = json::array();
  std::ostringstream text;
  for (const auto& spec : c.shapes) {
    const Shape s = parse_shape(spec);
    const double est = estimate_seconds(s, par, D);
    if (est > c.budget) {
      std::ostringstream os;
      os << s.name() << " to p^" << c.order << " would take about " << est << " s (budget " << c.budget
         << " s); raise --budget to proceed";
      throw Error(ErrorKind::Budget, os.str());
    }
    const RSeries z = cached_zhat(s, par, D, cache);
    const auto base = std::filesystem::path(cache) / cache_key(s, par, D);
    {
      std::ofstream f(base.string() + ".log");
      write_series(f, log(z));
    }
    files.push_back({{"shape", s.name()}, {"zhat", base.string() + ".zhat"}, {"log_zhat", base.string() + ".log"}});
    text << s.name() << ": " << base.string() << ".zhat, .log\n";
  }
  emit(c, {{"command", "expand"}, {"parametrization", par.str()}, {"order", c.order}, {"files", files}},
       text.str());
  return 0;
}

int cmd_oracle(const Config& c) {
  std::vector<std::string> specs = c.shapes;
  if (specs.empty()) specs = {"parallelogram:3:3", "parallelogram:3:4", "parallelogram:4:4", "clipped:4:4"};
  const int deg = c.degree;
  json checks = json::array();
  std::string text;
  bool ok = true;
  for (const auto& spec : specs) {
    const Shape s = parse_shape(spec);
    const auto a = zhat_polynomial(s, {1, 1, 1}, deg);
    const auto b = zhat_bruteforce(s, deg).truncated(deg);
    const bool pass = a == b;
    ok &= pass;
    checks.push_back(check(s.name() + " spinor = enumeration", "derived", pass,
                           "total degree <= " + std::to_string(deg) + ", " + std::to_string(a.coeffs.size()) +
                               " monomials"));
    text += line(checks.back());
  }
  emit(c, {{"command", "oracle-check"}, {"checks", checks}, {"pass", ok}}, text);
  return ok ? 0 : 1;
}

json kappas_json(const KappaSet& k) {
  json f = json::object();
  for (const auto& [name, s] : k.fields()) f[name] = series_json(s);
  return {{"isotropic", k.isotropic},
          {"trusted_order", k.trusted_order.str()},
          {"residual_order", k.residual_order.str()},
          {"gauge", k.gauge_note},
          {"series", f}};
}

ExtractionRun extraction(const Config& c, const Parametrization& par) {
  const Exponent D = window(c);
  const Progress progress = [&](const std::string& s) {
    if (!c.as_json) std::cerr << "  " << s << "\n";
  };
  if (c.shapes.empty()) return run_extraction(par, D, c.cache, {}, progress);
  // Explicit shapes: one strict solve, no comparison between levels.
  ExtractionRun run;
  std::vector<ShapeLog> all;
  for (const auto& spec : c.shapes) {
    const Shape s = parse_shape(spec);
    all.push_back({s, log(cached_zhat(s, par, D, c.cache))});
    progress(s.name());
  }
  run.levels = {all};
  run.kappas = extract(all, D, par.isotropic);
  run.levels_agree_to = run.kappas.trusted_order;
  return run;
}

int cmd_extract(const Config& c) {
  const auto par = parametrization(c);
  const auto run = extraction(c, par);
  std::ostringstream text;
  text << "trusted through p^" << (run.kappas.trusted_order - Exponent::whole(1)).str() << "\n";
  for (const auto& [name, s] : run.kappas.fields()) text << name << " = " << s.str() << "\n";
  emit(c, {{"command", "extract"}, {"parametrization", par.str()}, {"kappas", kappas_json(run.kappas)}},
       text.str());
  return 0;
}

std::optional<Fault> parse_fault(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::Parse, "--inject-fault takes kappa:n, e.g. kc:7");
  return Fault{parse_kappa(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

int cmd_verify(const Config& c) {
  const auto par = parametrization(c);
  const auto run = extraction(c, par);
  json checks = json::array();
  std::string text;
  bool ok = true;
  const Exponent need = window(c);
  {
    const bool pass = run.kappas.trusted_order >= need;
    ok &= pass;
    checks.push_back(check("trusted order", "derived", pass,
                           "through p^" + (run.kappas.trusted_order - Exponent::whole(1)).str()));
    text += line(checks.back());
  }
  for (const auto& q : verify_against_extraction(run.kappas, par.ep, parse_fault(c.fault))) {
    ok &= q.pass();
    json j = check(q.name + " = product", "published", q.pass(),
                   q.first_mismatch ? "first mismatch at p^" + q.first_mismatch->str()
                                    : "agree below p^" + q.agrees_to.str());
    j["agrees_to"] = q.agrees_to.str();
    j["first_mismatch"] = q.first_mismatch ? json(q.first_mismatch->str()) : json(nullptr);
    checks.push_back(j);
    text += line(j);
  }
  for (const auto& r : identity_suite()) {
    ok &= r.pass;
    checks.push_back(check(r.name, "published", r.pass, r.detail));
    text += line(checks.back());
  }
  for (const auto& r : antisymmetry_suite()) {
    ok &= r.pass;
    checks.push_back(check(r.name, "published", r.pass, r.detail));
    text += line(checks.back());
  }
  text += ok ? "all checks pass\n" : "FAILURES\n";
  emit(c, {{"command", "verify"}, {"parametrization", par.str()}, {"checks", checks}, {"pass", ok},
           {"kappas", kappas_json(run.kappas)}},
       text);
  return ok ? 0 : 1;
}

json numcheck(const NumCheck& n, const char* cls) {
  json j = check(n.name, cls, n.pass(), "lhs " + str(n.lhs, 20) + ", rhs " + str(n.rhs, 20));
  return j;
}

int cmd_critical(const Config& c) {
  std::vector<Real> grid;
  for (double g : c.grid) grid.push_back(Real(g));
  if (grid.empty()) throw Error(ErrorKind::Configuration, "empty q' grid");
  const Real tol(c.tol);
  json checks = json::array();
  std::string text;
  bool ok = true;
  int conflicts = 0;
  auto add = [&](json j) {
    if (!j["pass"].get<bool>()) {
      if (j.contains("known_conflict")) ++conflicts;
      else ok = false;
    }
    text += line(j);
    checks.push_back(std::move(j));
  };

  const std::vector<Real> lams{Real("0.3"), Real("0.5"), Real(1), Real(2), Real(3)};
  const std::vector<Real> ratios{Real(0), Real("0.25"), Real(1) / 3, Real("0.5"), Real("0.75")};
  for (const auto& n : conjugate_suite(lams, ratios, tol)) add(numcheck(n, "derived"));

  const auto iso = CriticalPoint::isotropic_ratio();
  const std::array<Real, 3> sq{Real("0.5"), Real("0.5"), Real(0)};
  std::vector<SingularFit> fits;
  for (auto [s, r] : {std::pair{Singularity::Corner60, iso}, {Singularity::Corner120, iso},
                      {Singularity::SquareCorner, sq}, {Singularity::Bulk, iso}, {Singularity::Surface, iso}}) {
    fits.push_back(fit_singularity(s, r, grid));
    const auto& f = fits.back();
    json j = check(std::string("fit ") + to_string(s) + " at u/lambda = " + str(r[0], 4),
                   s == Singularity::Bulk ? "derived" : "published", f.relative_error() < Real("1e-3"),
                   "fitted " + str(f.coefficient, 10) + ", closed form " + str(f.closed_form, 10) +
                       ", condition " + str(f.condition, 3));
    if (s == Singularity::Surface) j["known_conflict"] = "fitted coefficient is -2 times the printed one";
    add(j);
  }
  for (auto [g, want] : {std::pair{Rational(1, 3), Rational(-1, 18)},
                         {Rational(2, 3), Rational(-5, 288)},
                         {Rational(1, 2), Rational(-1, 32)}}) {
    const Rational cp = cardy_peschel(g, Rational(1, 2));
    add(check("Cardy-Peschel at gamma = " + to_fraction_string(g) + " pi", "published", cp == want,
              to_fraction_string(cp) + " vs corner coefficient " + to_fraction_string(want)));
  }
  const auto pt = CriticalPoint::make(Real("0.7"), {Real("0.2"), Real("0.3"), Real("0.5")});
  for (const auto& n : modularity_suite(pt)) add(numcheck(n, "published"));
  const auto rep = square_reduction(Real(c.q), Real(c.w));
  for (const auto& r : rep.rational) add(check(r.name, "published", r.pass, r.detail));
  for (const auto& r : rep.series) add(check(r.name, "published", r.pass, r.detail));
  for (const auto& n : rep.numeric) add(numcheck(n, "published"));

  if (!c.out.empty()) {
    std::ofstream f(c.out);
    write_fit_csv(f, fits);
  }
  text += ok ? "all checks pass" : "FAILURES";
  if (conflicts) text += " (" + std::to_string(conflicts) + " known conflict with the printed formulas)";
  text += "\n";
  json report{{"command", "critical"}, {"checks", checks}, {"pass", ok}, {"known_conflicts", conflicts}};
  if (c.as_json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << text;
  return ok ? 0 : 1;
}

int cmd_square(const Config& c) {
  const auto rep = square_reduction(Real(c.q), Real(c.w), Exponent::whole(c.order_q));
  json checks = json::array();
  std::string text;
  for (const auto& r : rep.rational) checks.push_back(check(r.name, "published", r.pass, r.detail));
  for (const auto& r : rep.series) checks.push_back(check(r.name, "published", r.pass, r.detail));
  for (const auto& n : rep.numeric) checks.push_back(numcheck(n, "published"));
  for (const auto& j : checks) text += line(j);
  emit(c, {{"command", "square-check"}, {"checks", checks}, {"pass", rep.pass()}}, text);
  return rep.pass() ? 0 : 1;
}

void add_param_options(CLI::App* sub, Config& c) {
  sub->add_option("--shape", c.shapes, "name:M:N, repeatable");
  sub->add_option("--alpha", c.alpha, "a1,a2,a3 with a_j = p^alpha_j")->delimiter(',');
  sub->add_option("--sigma", c.sigma, "q = p^sigma");
  sub->add_flag("--isotropic", c.isotropic, "z1 = z2 = z3 (default when --alpha is absent)");
  sub->add_option("--cache", c.cache, "directory for Z-hat series");
  sub->add_option("--out", c.out, "write the JSON report here");
  sub->add_flag("--json", c.as_json, "print the JSON report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact series and critical-limit checks for the triangular Ising model with boundaries"};
  app.footer(kHelp);
  app.require_subcommand(1);
  Config c;
  c.grid = {1e-3, 3.16227766016838e-4, 1e-4, 3.16227766016838e-5, 1e-5,
            3.16227766016838e-6, 1e-6, 3.16227766016838e-7, 1e-7};

  auto* expand = app.add_subcommand("expand", "compute Z-hat and log Z-hat for shapes into the cache");
  add_param_options(expand, c);
  expand->add_option("--order", c.order, "keep terms through p^D")->check(CLI::NonNegativeNumber);
  expand->add_option("--budget", c.budget, "refuse shapes estimated above this many seconds");

  auto* oracle = app.add_subcommand("oracle-check", "spinor polynomial against spin enumeration");
  oracle->add_option("--shape", c.shapes, "name:M:N, repeatable (default: the small catalog)");
  oracle->add_option("--order", c.degree, "total degree in z1, z2, z3")->check(CLI::NonNegativeNumber);
  oracle->add_option("--out", c.out, "write the JSON report here");
  oracle->add_flag("--json", c.as_json, "print the JSON report");

  auto* ext = app.add_subcommand("extract", "extract the kappa series from a shape schedule");
  add_param_options(ext, c);
  ext->add_option("--order", c.order, "keep terms through p^D")->check(CLI::NonNegativeNumber);

  auto* ver = app.add_subcommand("verify", "extract, compare with the products, run the identity suites");
  add_param_options(ver, c);
  ver->add_option("--order", c.order, "keep terms through p^D")->check(CLI::NonNegativeNumber);
  ver->add_option("--inject-fault", c.fault, "kappa:n adds 1 to the exponent of (1 - p^n), e.g. kc:7");

  auto* crit = app.add_subcommand("critical", "conjugate forms, singular coefficients, square lattice");
  crit->add_option("--grid", c.grid, "q' values, comma separated")->delimiter(',');
  crit->add_option("--tol", c.tol, "tolerance of the conjugate-form comparison")->check(CLI::PositiveNumber);
  crit->add_option("--out", c.out, "write the fit table as CSV here");
  crit->add_flag("--json", c.as_json, "print the JSON report");

  auto* sq = app.add_subcommand("square-check", "square-lattice reduction a3 = 1");
  sq->add_option("--q", c.q, "numeric nome");
  sq->add_option("--w", c.w, "numeric w = a2^(1/2)");
  sq->add_option("--order", c.order_q, "series identities through q^D")->check(CLI::PositiveNumber);
  sq->add_option("--out", c.out, "write the JSON report here");
  sq->add_flag("--json", c.as_json, "print the JSON report");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*expand) return cmd_expand(c);
    if (*oracle) return cmd_oracle(c);
    if (*ext) return cmd_extract(c);
    if (*ver) return cmd_verify(c);
    if (*crit) return cmd_critical(c);
    if (*sq) return cmd_square(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Configuration || e.kind() == ErrorKind::Parse ? 2 : 3;
  }
  return 0;
}
