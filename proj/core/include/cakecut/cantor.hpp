#pragma once

#include "cakecut/rational.hpp"

namespace cakecut {

inline constexpr int kDefaultCantorDepth = 40;

// Cantor function value at x in [0,1], computed from the first `depth`
// ternary digits. The result is exact (lo == hi) whenever the expansion
// resolves within `depth` digits: at every point of a removed middle third
// and at every triadic rational of that depth. Otherwise the enclosure has
// width 2^-depth.
Mass cantor_cdf(const Rational& x, int depth = kDefaultCantorDepth);

// Leftmost x with cantor_cdf(x) >= p. Rational p have eventually periodic
// binary digits, so the matching ternary point is recovered exactly once the
// cycle is detected (dyadic p exit at a plateau's left end). Only when the
// cycle exceeds 4096 digits does the result degrade to an enclosure of width
// 3^-(depth-1).
Mass cantor_quantile(const Rational& p, int depth = kDefaultCantorDepth);

} // namespace cakecut
