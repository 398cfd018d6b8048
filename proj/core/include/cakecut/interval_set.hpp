#pragma once

#include "cakecut/rational.hpp"

#include <string>
#include <vector>

namespace cakecut {

// One interval inside the unit cake [0,1]. Degenerate intervals (lo == hi)
// are singletons and must be closed on both ends.
struct Interval {
    Rational lo;
    Rational hi;
    bool lo_closed = true;
    bool hi_closed = true;

    bool is_singleton() const { return lo == hi; }
    bool contains(const Rational& x) const;
    std::string str() const;

    friend bool operator==(const Interval& a, const Interval& b) = default;
};

// Validates bounds and flags, throws ValidationError otherwise.
Interval make_interval(Rational lo, Rational hi, bool lo_closed, bool hi_closed);
Interval singleton(Rational x);

// A finite union of intervals in canonical form: parts pairwise disjoint,
// non-adjacent (no two parts merge or touch into one), sorted by lower
// endpoint. Equality of canonical sets is componentwise equality.
class IntervalSet {
public:
    IntervalSet() = default;

    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    size_t part_count() const { return parts_.size(); }

    bool contains(const Rational& x) const;
    // True when the whole of [lo,hi] with the given flags lies inside.
    bool covers(const Interval& iv) const;

    std::string str() const;

    friend bool operator==(const IntervalSet& a, const IntervalSet& b) = default;

private:
    friend IntervalSet normalize(const std::vector<Interval>& raw);
    friend IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);
    friend IntervalSet set_intersect(const IntervalSet& a, const IntervalSet& b);
    friend IntervalSet set_difference(const IntervalSet& a, const IntervalSet& b);
    std::vector<Interval> parts_;
};

// Union-normalizes an arbitrary list of intervals into canonical form.
IntervalSet normalize(const std::vector<Interval>& raw);

IntervalSet full_cake();
IntervalSet set_from(const Interval& iv);

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_difference(const IntervalSet& a, const IntervalSet& b);
// Complement relative to [0,1].
IntervalSet set_complement(const IntervalSet& a);

bool subset_of(const IntervalSet& inner, const IntervalSet& outer);
bool disjoint(const IntervalSet& a, const IntervalSet& b);

// Textual set grammar, e.g. "(0,1/2] u {3/4} u (7/8,1)". The empty set
// prints and parses as "{}".
IntervalSet parse_interval_set(const std::string& text);

} // namespace cakecut
