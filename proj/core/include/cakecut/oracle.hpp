#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cakecut/interval_set.hpp"
#include "cakecut/rational.hpp"
#include "cakecut/valuation.hpp"

namespace cakecut {

enum class TokenSide { Left, Right };

std::string to_string(TokenSide s);

// Indivisible jump mass bound to one side of x: taking it requires including
// a span abutting x from that side. `forced` marks tokens whose capture cell
// carries continuous mass, so any capturing piece weighs strictly more than
// the token. Atoms are left tokens whose capture includes the point itself
// and never force.
struct SideToken {
    Rational x;
    TokenSide side;
    Rational mass;
    int cell = 0;
    bool forced = false;
};

struct GridCell {
    Interval span;
    Mass continuous_mass;
};

// Finite brute-force model: mesh cells of arbitrarily divisible continuous
// mass plus side tokens. Cell spans partition [0,1] even when the model is
// restricted to a piece; cells outside the piece just hold no mass.
struct GridModel {
    Rational mesh;
    std::vector<GridCell> cells;
    std::vector<SideToken> tokens;
    Mass continuous_total;
};

GridModel discretize(const Valuation& v, const Rational& mesh);

// Restriction to a piece with mesh-aligned endpoints.
GridModel discretize(const Valuation& v, const Rational& mesh, const IntervalSet& piece);

bool oracle_achievable(const GridModel& m, const Rational& target);

// Leftmost point where the cumulative grid mass reaches p; interpolates
// inside cells.
Rational oracle_quantile(const GridModel& m, const Rational& p);

bool oracle_sliceable(const GridModel& m, const Rational& eps);

// Mesh-aligned partition of [0,1] into consecutive pieces of mass in
// (0, eps], or nullopt when none exists.
std::optional<std::vector<IntervalSet>> oracle_partition_search(const GridModel& m,
                                                                const Rational& eps);

} // namespace cakecut
