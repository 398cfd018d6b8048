#pragma once

#include "cakecut/valuation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cakecut {

// Values reachable by subsets capturing exactly the jumps in `jump_mask`:
// jump_mass plus a continuous range [lo, hi] with openness bookkeeping.
struct AchievableComponent {
    std::uint32_t jump_mask = 0;
    Rational jump_mass;
    Rational lo, hi;
    bool lo_closed = true;
    bool hi_closed = true;

    bool contains(const Rational& t) const;
    bool empty() const;
};

struct AchievableSet {
    std::vector<Jump> jumps;   // jumps capturable inside the reference piece
    std::vector<bool> forced;  // capture drags in continuous mass
    Rational continuous_cap;   // continuous mass of the piece
    std::vector<AchievableComponent> components;

    bool achievable(const Rational& t) const;
    // Attainable as the sup of an increasing sequence of subsets: each
    // component keeps its lower openness but its upper end closes.
    bool dd_achievable(const Rational& t) const;
    std::optional<Rational> sup_below(const Rational& t) const;
    std::optional<Rational> inf_above(const Rational& t) const;
};

AchievableSet achievable_set(const Valuation& v, const IntervalSet& piece);

struct Decision {
    enum class Mode { ExactSet, IncreasingSequenceSup };

    bool achievable = false;
    Mode mode = Mode::ExactSet;
    Rational alpha;
    Rational piece_mass;
    Rational target;  // alpha * piece_mass
    std::optional<IntervalSet> witness;
    Mass witness_value{Rational(0), Rational(0)};
    std::optional<Rational> gap_below, gap_above;
    std::string sequence;                       // symbolic description of B_n
    std::vector<IntervalSet> sequence_samples;  // first few members of B_n
    std::string anchor;
};

Decision check_d(const Valuation& v, const IntervalSet& piece, const Rational& alpha);
Decision check_dd_target(const Valuation& v, const IntervalSet& piece, const Rational& alpha);

// Sub-piece of the given piece whose mass is exactly target, or nullopt when
// target is not in the achievable set. Deterministic: leftmost fill.
std::optional<IntervalSet> achievable_witness(const Valuation& v, const IntervalSet& piece,
                                              const Rational& target);

// Prefix set b ∩ [0, x_alpha] of the conditional cdf on b; exact on
// piecewise-linear cdfs, within the cantor enclosure otherwise.
IntervalSet exact_divide(const Valuation& v, const IntervalSet& b, const Rational& alpha);

// The staged mesh construction: B_k takes a maximal sub-ε-slicing prefix,
// later sets top up the deficit at finer meshes. Masses land in
// (α·μ(a) − 1/(k+i), α·μ(a)] with k = entier(1/α)+1.
struct DDConstruction {
    int k = 0;
    Rational target;
    std::vector<IntervalSet> sets;
    std::vector<Mass> masses;
};

DDConstruction construct_dd(const Valuation& v, const IntervalSet& a, const Rational& alpha,
                            int steps);

// Smallest number of intervals whose union hits target_mass exactly.
std::optional<int> min_interval_count(const Valuation& v, const Rational& target_mass,
                                      int max_parts = 4);

} // namespace cakecut
