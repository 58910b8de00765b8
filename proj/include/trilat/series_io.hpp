#pragma once

#include "trilat/series.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace trilat {

// Text form: a header "prec=<P> minexp=<M>" followed by one line per term,
// "<num>/<den>[ + i*<num>/<den>]\t<exponent times 4>".  P is "inf" for an
// exact series; M equals P for a series that vanishes in its window.
void write_series(std::ostream& os, const Series<Rational>& s);
void write_series(std::ostream& os, const Series<GaussRational>& s);
Series<Rational> read_series(std::istream& is);
Series<GaussRational> read_gauss_series(std::istream& is);

std::string to_text(const Series<Rational>& s);
Series<Rational> from_text(const std::string& text);

}  // namespace trilat
