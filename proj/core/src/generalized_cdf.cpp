#include "cakecut/generalized_cdf.hpp"

#include "cakecut/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cakecut {

Segment Segment::linear(Rational slope) {
    Segment s;
    s.shape = SegmentShape::Linear;
    s.slope = std::move(slope);
    return s;
}

Segment Segment::cantor(Rational mass) {
    Segment s;
    s.shape = SegmentShape::Cantor;
    s.mass = std::move(mass);
    return s;
}

GeneralizedCdf GeneralizedCdf::make(std::vector<Breakpoint> breakpoints,
                                    std::vector<Segment> segments, int cantor_depth) {
    if (breakpoints.size() < 2) throw ValidationError("a cdf needs breakpoints at 0 and 1");
    if (segments.size() != breakpoints.size() - 1)
        throw ValidationError("segment count must be one less than breakpoint count");
    if (breakpoints.front().x != 0 || breakpoints.back().x != 1)
        throw ValidationError("first breakpoint must sit at 0 and last at 1");
    if (cantor_depth < 1) throw ValidationError("cantor depth must be positive");

    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i].x < breakpoints[i + 1].x))
            throw ValidationError("breakpoints must be strictly increasing in x");

    for (const auto& bp : breakpoints) {
        if (bp.left_val > bp.at_val || bp.at_val > bp.right_val)
            throw ValidationError("breakpoint at " + to_string(bp.x) +
                                  " violates left <= at <= right");
        if (bp.left_val < 0) throw ValidationError("cdf values must be nonnegative");
    }
    if (breakpoints.front().left_val != 0)
        throw ValidationError("left limit at 0 must be 0");
    if (breakpoints.back().right_val != breakpoints.back().at_val)
        throw ValidationError("right limit at 1 must equal the value at 1");

    for (size_t i = 0; i < segments.size(); ++i) {
        const auto& a = breakpoints[i];
        const auto& b = breakpoints[i + 1];
        Rational rise = b.left_val - a.right_val;
        if (rise < 0)
            throw ValidationError("cdf decreases across segment starting at " + to_string(a.x));
        Rational len = b.x - a.x;
        auto& seg = segments[i];
        switch (seg.shape) {
        case SegmentShape::Linear:
            if (seg.slope * len != rise)
                throw ValidationError("linear segment starting at " + to_string(a.x) +
                                      " does not meet its breakpoint values");
            if (seg.slope < 0) throw ValidationError("negative slope in segment");
            break;
        case SegmentShape::Cantor:
            if (seg.mass != rise)
                throw ValidationError("cantor segment starting at " + to_string(a.x) +
                                      " does not meet its breakpoint values");
            if (seg.mass < 0) throw ValidationError("negative mass in segment");
            break;
        }
    }

    GeneralizedCdf f;
    f.bps_ = std::move(breakpoints);
    f.segs_ = std::move(segments);
    f.depth_ = cantor_depth;
    f.cont_at_bp_.resize(f.bps_.size());
    Rational cum = 0;
    f.cont_at_bp_[0] = cum;
    for (size_t i = 0; i < f.segs_.size(); ++i) {
        cum += f.bps_[i + 1].left_val - f.bps_[i].right_val;
        f.cont_at_bp_[i + 1] = cum;
    }
    f.continuous_total_ = cum;
    return f;
}

bool GeneralizedCdf::has_cantor_segment() const {
    return std::any_of(segs_.begin(), segs_.end(), [](const Segment& s) {
        return s.shape == SegmentShape::Cantor && s.mass > 0;
    });
}

int GeneralizedCdf::breakpoint_index(const Rational& x) const {
    auto it = std::lower_bound(bps_.begin(), bps_.end(), x,
                               [](const Breakpoint& bp, const Rational& v) { return bp.x < v; });
    if (it != bps_.end() && it->x == x) return static_cast<int>(it - bps_.begin());
    return -1;
}

int GeneralizedCdf::segment_index(const Rational& x) const {
    auto it = std::upper_bound(bps_.begin(), bps_.end(), x,
                               [](const Rational& v, const Breakpoint& bp) { return v < bp.x; });
    return static_cast<int>(it - bps_.begin()) - 1;
}

Mass GeneralizedCdf::eval_at(const Rational& x, Side side) const {
    if (x < 0 || x > 1) throw DomainError("cdf argument " + to_string(x) + " outside [0,1]");
    int bi = breakpoint_index(x);
    if (bi >= 0) {
        switch (side) {
        case Side::Left: return Mass(bps_[bi].left_val);
        case Side::At: return Mass(bps_[bi].at_val);
        case Side::Right: return Mass(bps_[bi].right_val);
        }
    }
    int si = segment_index(x);
    const auto& a = bps_[si];
    const auto& b = bps_[si + 1];
    const auto& seg = segs_[si];
    // Interior of a segment: the function is continuous there, so the side
    // does not matter.
    if (seg.shape == SegmentShape::Linear)
        return Mass(a.right_val + seg.slope * (x - a.x));
    Mass scaled = cantor_cdf((x - a.x) / (b.x - a.x), depth_);
    return Mass(a.right_val) + seg.mass * scaled;
}

Mass GeneralizedCdf::continuous_value(const Rational& x) const {
    if (x < 0 || x > 1) throw DomainError("cdf argument " + to_string(x) + " outside [0,1]");
    int bi = breakpoint_index(x);
    if (bi >= 0) return Mass(cont_at_bp_[bi]);
    int si = segment_index(x);
    const auto& a = bps_[si];
    const auto& b = bps_[si + 1];
    const auto& seg = segs_[si];
    if (seg.shape == SegmentShape::Linear)
        return Mass(cont_at_bp_[si] + seg.slope * (x - a.x));
    Mass scaled = cantor_cdf((x - a.x) / (b.x - a.x), depth_);
    return Mass(cont_at_bp_[si]) + seg.mass * scaled;
}

Mass GeneralizedCdf::continuous_between(const Rational& a, const Rational& b) const {
    if (a > b) throw ValidationError("continuous_between needs a <= b");
    return continuous_value(b) - continuous_value(a);
}

bool GeneralizedCdf::increasing_left_of(const Rational& x) const {
    int bi = breakpoint_index(x);
    int si = bi >= 0 ? bi - 1 : segment_index(x);
    if (si < 0) throw ValidationError("no left neighbourhood below 0");
    const auto& seg = segs_[si];
    if (seg.shape == SegmentShape::Linear) return seg.slope > 0;
    // The Cantor function increases on every neighbourhood of its span
    // endpoints; an interior x can sit on a plateau, but capture analysis
    // only asks at breakpoints, which are span endpoints.
    return seg.mass > 0;
}

bool GeneralizedCdf::increasing_right_of(const Rational& x) const {
    int bi = breakpoint_index(x);
    int si = bi >= 0 ? bi : segment_index(x);
    if (si >= static_cast<int>(segs_.size()))
        throw ValidationError("no right neighbourhood above 1");
    const auto& seg = segs_[si];
    if (seg.shape == SegmentShape::Linear) return seg.slope > 0;
    return seg.mass > 0;
}

CdfClassification classify(const GeneralizedCdf& f) {
    CdfClassification c;
    for (const auto& bp : f.breakpoints()) {
        Rational lg = bp.left_gap();
        Rational rg = bp.right_gap();
        if (lg > 0 || rg > 0) {
            c.jumps.push_back({bp.x, lg, rg});
            c.is_continuous = false;
            if (rg > 0) c.is_right_continuous = false;
        }
    }
    return c;
}

namespace {

int depth_for_tol(const Rational& tol) {
    // 2^-d <= tol implies 3^-d <= tol as well.
    int d = 1;
    Rational w(1, 2);
    while (w > tol && d < 4096) {
        w /= 2;
        ++d;
    }
    return std::max(d, kDefaultCantorDepth);
}

} // namespace

Rational quantile_leftmost(const GeneralizedCdf& f, const Rational& p, const Rational& tol) {
    auto cls = classify(f);
    if (!cls.is_continuous)
        throw PreconditionError("quantile needs a continuous cdf; jump at " +
                                to_string(cls.jumps.front().x));
    if (p < 0 || p > f.total_mass())
        throw DomainError("quantile level " + to_string(p) + " outside [0, " +
                          to_string(f.total_mass()) + "]");
    if (tol <= 0) throw ValidationError("tolerance must be positive");

    const auto& bps = f.breakpoints();
    if (p <= bps.front().at_val) return 0;
    for (size_t i = 0; i + 1 < bps.size(); ++i) {
        const Rational& hi_val = bps[i + 1].at_val;
        if (p > hi_val) continue;
        const auto& a = bps[i];
        const auto& b = bps[i + 1];
        const auto& seg = f.segments()[i];
        // Continuity gives p > F(a) here, so the segment rises.
        if (seg.shape == SegmentShape::Linear)
            return a.x + (p - a.at_val) / seg.slope;
        Mass u = cantor_quantile((p - a.at_val) / seg.mass, depth_for_tol(tol / (b.x - a.x)));
        return a.x + u.lo * (b.x - a.x);
    }
    return 1;
}

} // namespace cakecut
