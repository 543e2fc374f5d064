#pragma once

#include <span>
#include <string>

#include "crlab/polynomial.hpp"

namespace crlab {

/// Parse a polynomial expression over the named variables, e.g.
/// "z^2*w + 3" over {"z", "w"} or "(1+2i)*z1*w - z2^3" over {"z1","z2","w"}.
/// Grammar: sums/differences of products of powers of variables, numeric
/// literals (with optional trailing i), and parenthesized subexpressions.
HoloPolynomial parse_polynomial(const std::string& text, std::span<const std::string> var_names);

}  // namespace crlab
