#pragma once

#include "cakecut/generalized_cdf.hpp"
#include "cakecut/interval_set.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cakecut {

enum class Convention { Stieltjes, ContentSingletonZero };

std::string to_string(Convention c);

// A cdf plus the rule that turns it into interval masses. Stieltjes realizes
// a measure and demands right-continuity; the content convention assigns
// every singleton mass 0 and tolerates two-sided jumps.
struct Valuation {
    GeneralizedCdf cdf;
    Convention convention = Convention::Stieltjes;
    std::string name;

    const Rational& total_mass() const { return cdf.total_mass(); }
};

Valuation make_valuation(GeneralizedCdf cdf, Convention convention, std::string name);

struct Jump {
    enum class Kind { Atom, LeftPhantom, RightPhantom };
    Rational x;
    Rational mass;
    Kind kind = Kind::Atom;
};

std::string to_string(Jump::Kind k);

// Jumps a set can pick up, keyed by the convention: atoms under stieltjes,
// side phantoms under the content rule.
std::vector<Jump> jumps_of(const Valuation& v);

// Whether evaluating s picks up j's mass. Atoms need the point itself; a
// left phantom at x rides on any part with lo < x <= hi, a right phantom on
// any part with lo <= x < hi, endpoint flags ignored.
bool captures(const IntervalSet& s, const Jump& j);

// Capturing j necessarily drags in continuous mass when the cdf rises on the
// capture side. Atoms never force.
bool capture_forces_continuous_mass(const Valuation& v, const Jump& j);

Mass eval_interval(const Valuation& v, const Interval& part);
Mass eval_set(const Valuation& v, const IntervalSet& s);
Mass continuous_mass(const Valuation& v, const IntervalSet& s);

struct MassReport {
    std::vector<Jump> jumps;
    Rational jump_mass;
    Rational continuous_mass;
    Rational total;
};

MassReport mass_report(const Valuation& v);

// Conditional cumulative mass and quantile relative to a base set.
Mass cumulative_within(const Valuation& v, const IntervalSet& base, const Rational& x);

// Leftmost x with cumulative_within(v, base, x) >= p. The sweep must be
// continuous, so base may not capture any jump of v.
Rational quantile_within(const Valuation& v, const IntervalSet& base, const Rational& p);

// Endpoint of the n-th set in a chain: c0 + c1/n.
struct ChainEndpoint {
    Rational c0;
    Rational c1;
};

struct ChainPart {
    ChainEndpoint lo, hi;
    bool lo_closed = true;
    bool hi_closed = true;
};

struct ChainSpec {
    std::vector<ChainPart> parts;
    long start_n = 1;
    std::optional<IntervalSet> declared_union;
};

// The n-th set; parts that are empty at this n are dropped.
IntervalSet instantiate(const ChainSpec& chain, long n);

// Union over all n of an increasing chain, in closed form.
IntervalSet chain_union(const ChainSpec& chain);

struct ChainCheckResult {
    Mass limit_value;
    IntervalSet union_set;
    Mass union_value;
    bool equal = false;
};

// Validates that the chain increases, then compares the limit of the values
// (computed from one-sided cdf limits) against the value of the union.
ChainCheckResult chain_continuity_check(const Valuation& v, const ChainSpec& chain,
                                        int sample_window = 6);

} // namespace cakecut
