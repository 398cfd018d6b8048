#pragma once

#include "cakecut/valuation.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cakecut {

// Built-in valuations. Names follow the constructor grammar below so that a
// built fixture and its parsed spelling compare equal.

Valuation make_uniform();

// Content with phantom jumps of mass (1-lambda)/2 on both sides of 1/2 and
// slope lambda elsewhere. Requires 0 < lambda < 1.
Valuation make_exF(const Rational& lambda);

// Content with a right phantom of mass eps at 0, a left phantom of mass eps
// at 1, and slope 1-2eps between. Requires 0 < eps < 1/2.
Valuation make_exG(const Rational& eps);

// Singular measure whose cdf is the Cantor function.
Valuation make_cantor(int depth = kDefaultCantorDepth);

// Point mass at x in [0,1].
Valuation make_dirac(const Rational& x);

// Piecewise-linear interpolation of x^2 on a uniform grid of `knots` panels.
Valuation make_sq(int knots);

// Weighted combination sum w_i * v_i. All parts must share one convention;
// weights must be positive. A part's cantor segment may not be split by
// another part's breakpoint, and no other part may carry continuous mass
// across it (the segment grammar has no hybrid shape).
Valuation make_mix(const std::vector<std::pair<Rational, Valuation>>& parts);

// Constructor grammar: uniform | cantor | dirac(x) | exF(l) | exG(e) | sq(n)
// | mix(w1*expr + w2*expr + ...), rationals as p/q or finite decimals.
Valuation parse_fixture(const std::string& spec);

// Record grammar, one named valuation per block:
//   fixture <name> [stieltjes|content]
//   bp <x> <left> <at> <right>
//   seg linear <slope> | seg cantor <mass>
//   end
// or the one-line form `fixture <name> = <constructor expr>`. Blank lines
// and # comments allowed. Errors carry 1-based line numbers.
std::map<std::string, Valuation> parse_fixture_file(const std::string& text);

// Block form of the record grammar; parse_fixture_file inverts it.
std::string serialize_fixture(const Valuation& v);

// Resolves spec against named fixtures first, then the constructor grammar.
Valuation resolve_fixture(const std::string& spec,
                          const std::map<std::string, Valuation>& named);

} // namespace cakecut
