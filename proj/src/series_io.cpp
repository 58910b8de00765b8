#include "trilat/series_io.hpp"

#include <sstream>

namespace trilat {

namespace {

std::string quarters_or_inf(Exponent e) {
  return e.is_infinite() ? std::string("inf") : std::to_string(e.quarters());
}

template <class S>
void write_impl(std::ostream& os, const Series<S>& s) {
  os << "prec=" << quarters_or_inf(s.precision()) << " minexp=" << quarters_or_inf(s.valuation())
     << "\n";
  for (const auto& t : s.terms()) os << ScalarTraits<S>::format(t.c) << "\t" << t.q << "\n";
}

Exponent parse_quarters(const std::string& v) {
  if (v == "inf") return Exponent::infinity();
  try {
    return Exponent::quarters(std::stoll(v));
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "bad exponent field '" + v + "'");
  }
}

GaussRational parse_coefficient(const std::string& field) {
  // "a/b" or "a/b + i*c/d" (also accepts the middle-dot spelling).
  std::string f = field;
  for (const std::string dot : {"i\xC2\xB7", "i*"}) {
    auto pos = f.find(dot);
    if (pos == std::string::npos) continue;
    std::string re = f.substr(0, pos), im = f.substr(pos + dot.size());
    auto plus = re.rfind('+');
    if (plus == std::string::npos) throw Error(ErrorKind::Parse, "bad coefficient '" + field + "'");
    re = re.substr(0, plus);
    return {parse_rational(re), parse_rational(im)};
  }
  return GaussRational(parse_rational(f));
}

template <class S>
Series<S> read_impl(std::istream& is, bool gauss) {
  std::string header;
  if (!std::getline(is, header)) throw Error(ErrorKind::Parse, "missing series header");
  std::istringstream hs(header);
  std::string a, b;
  hs >> a >> b;
  if (a.rfind("prec=", 0) != 0 || b.rfind("minexp=", 0) != 0)
    throw Error(ErrorKind::Parse, "bad series header '" + header + "'");
  const Exponent prec = parse_quarters(a.substr(5));
  const Exponent minexp = parse_quarters(b.substr(7));
  std::vector<typename Series<S>::Term> terms;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) break;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(ErrorKind::Parse, "term line without tab: '" + line + "'");
    GaussRational c = parse_coefficient(line.substr(0, tab));
    Exponent e = parse_quarters(line.substr(tab + 1));
    if (!gauss && !c.is_real())
      throw Error(ErrorKind::Parse, "imaginary coefficient in a real series");
    if constexpr (std::is_same_v<S, Rational>) {
      terms.push_back({e.quarters(), c.re});
    } else {
      terms.push_back({e.quarters(), c});
    }
  }
  Series<S> s = Series<S>::from_terms(std::move(terms), prec);
  if (s.valuation() != minexp)
    throw Error(ErrorKind::Parse, "header minexp does not match the terms");
  return s;
}

}  // namespace

void write_series(std::ostream& os, const Series<Rational>& s) { write_impl(os, s); }
void write_series(std::ostream& os, const Series<GaussRational>& s) { write_impl(os, s); }
Series<Rational> read_series(std::istream& is) { return read_impl<Rational>(is, false); }
Series<GaussRational> read_gauss_series(std::istream& is) { return read_impl<GaussRational>(is, true); }

std::string to_text(const Series<Rational>& s) {
  std::ostringstream os;
  write_series(os, s);
  return os.str();
}

Series<Rational> from_text(const std::string& text) {
  std::istringstream is(text);
  return read_series(is);
}

}  // namespace trilat
