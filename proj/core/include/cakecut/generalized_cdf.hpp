#pragma once

#include "cakecut/cantor.hpp"
#include "cakecut/interval_set.hpp"
#include "cakecut/rational.hpp"

#include <string>
#include <vector>

namespace cakecut {

// One-sided values of a distribution function at a point. The middle value
// may sit strictly between the limits, which models functions that are
// neither left- nor right-continuous at x.
struct Breakpoint {
    Rational x;
    Rational left_val;  // limit from below
    Rational at_val;    // value at x
    Rational right_val; // limit from above

    Rational left_gap() const { return at_val - left_val; }
    Rational right_gap() const { return right_val - at_val; }
};

enum class SegmentShape { Linear, Cantor };

// Behaviour of the function strictly between two consecutive breakpoints:
// affine with the given slope, or an affinely rescaled Cantor function
// carrying `mass` of increase across the gap.
struct Segment {
    SegmentShape shape = SegmentShape::Linear;
    Rational slope;  // Linear only
    Rational mass;   // Cantor only: total increase across the segment

    static Segment linear(Rational slope);
    static Segment cantor(Rational mass);
};

enum class Side { Left, At, Right };

// A nondecreasing function on [0,1] described by breakpoints at 0 and 1
// (and optionally between) and a segment per gap. Total mass is the value
// at 1. Validated on construction.
class GeneralizedCdf {
public:
    static GeneralizedCdf make(std::vector<Breakpoint> breakpoints, std::vector<Segment> segments,
                               int cantor_depth = kDefaultCantorDepth);

    const std::vector<Breakpoint>& breakpoints() const { return bps_; }
    const std::vector<Segment>& segments() const { return segs_; }
    const Rational& total_mass() const { return bps_.back().at_val; }
    int cantor_depth() const { return depth_; }

    bool has_cantor_segment() const;

    // Index of the breakpoint at x, or -1.
    int breakpoint_index(const Rational& x) const;
    // Index of the segment whose open span contains x; x must not be a
    // breakpoint.
    int segment_index(const Rational& x) const;

    Mass eval_at(const Rational& x, Side side) const;

    // Value of the continuous part (all breakpoint gaps removed) at x,
    // i.e. the sum of segment increases up to x.
    Mass continuous_value(const Rational& x) const;
    // Continuous mass carried strictly between a and b.
    Mass continuous_between(const Rational& a, const Rational& b) const;
    const Rational& continuous_total() const { return continuous_total_; }

    // True when the continuous part is strictly increasing on every left
    // neighbourhood of x (x must not be 0).
    bool increasing_left_of(const Rational& x) const;
    // Same for right neighbourhoods (x must not be 1).
    bool increasing_right_of(const Rational& x) const;

private:
    std::vector<Breakpoint> bps_;
    std::vector<Segment> segs_;
    std::vector<Rational> cont_at_bp_; // continuous value at each breakpoint
    Rational continuous_total_;
    int depth_ = kDefaultCantorDepth;
};

struct JumpInfo {
    Rational x;
    Rational left_gap;
    Rational right_gap;
};

struct CdfClassification {
    bool is_right_continuous = true;
    bool is_continuous = true;
    std::vector<JumpInfo> jumps;
};

CdfClassification classify(const GeneralizedCdf& f);

// Leftmost x with f(x) >= p, for continuous f. Exact across linear
// segments; within tol across Cantor segments. Throws PreconditionError
// when f has a jump (naming it) and DomainError when p is outside
// [0, total mass].
Rational quantile_leftmost(const GeneralizedCdf& f, const Rational& p,
                           const Rational& tol = Rational(1, BigInt(1) << 40));

} // namespace cakecut
