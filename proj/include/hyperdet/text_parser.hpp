#pragma once

#include <string_view>

#include "hyperdet/ternary_form.hpp"

namespace hyperdet {

/// Parses a polynomial written in t, x, y, e.g. "t^2 - x^2 - y^2" or
/// "1/19*(19*t^4 - 31*x^2*t^2 + ...)".
///
/// Accepts integer, decimal and a/b coefficients, +, -, *, /, ^ with
/// integer exponents, parentheses, and juxtaposition as multiplication
/// ("-36 x^6"). Division is only allowed by constants. Throws ParseError
/// (message carries the offset) or InhomogeneousInput.
TernaryForm parse_polynomial_text(std::string_view src);

}  // namespace hyperdet
