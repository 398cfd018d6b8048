#include "cakecut/valuation.hpp"

#include "cakecut/errors.hpp"

#include <algorithm>

namespace cakecut {

std::string to_string(Convention c) {
    return c == Convention::Stieltjes ? "stieltjes" : "content";
}

std::string to_string(Jump::Kind k) {
    switch (k) {
    case Jump::Kind::Atom: return "atom";
    case Jump::Kind::LeftPhantom: return "left-phantom";
    case Jump::Kind::RightPhantom: return "right-phantom";
    }
    return "";
}

Valuation make_valuation(GeneralizedCdf cdf, Convention convention, std::string name) {
    auto cls = classify(cdf);
    if (convention == Convention::Stieltjes) {
        if (!cls.is_right_continuous) {
            for (const auto& j : cls.jumps)
                if (j.right_gap > 0)
                    throw ValidationError("stieltjes valuation \"" + name +
                                          "\" needs a right-continuous cdf; right gap of " +
                                          to_string(j.right_gap) + " at " + to_string(j.x));
        }
    } else {
        const auto& b0 = cdf.breakpoints().front();
        if (b0.at_val != 0)
            throw ValidationError("content valuation \"" + name +
                                  "\" needs cdf value 0 at x = 0; got " + to_string(b0.at_val));
    }
    Valuation v;
    v.cdf = std::move(cdf);
    v.convention = convention;
    v.name = std::move(name);
    return v;
}

std::vector<Jump> jumps_of(const Valuation& v) {
    std::vector<Jump> out;
    for (const auto& bp : v.cdf.breakpoints()) {
        Rational lg = bp.left_gap();
        Rational rg = bp.right_gap();
        if (v.convention == Convention::Stieltjes) {
            if (lg > 0) out.push_back({bp.x, lg, Jump::Kind::Atom});
        } else {
            if (lg > 0) out.push_back({bp.x, lg, Jump::Kind::LeftPhantom});
            if (rg > 0) out.push_back({bp.x, rg, Jump::Kind::RightPhantom});
        }
    }
    return out;
}

bool captures(const IntervalSet& s, const Jump& j) {
    switch (j.kind) {
    case Jump::Kind::Atom: return s.contains(j.x);
    case Jump::Kind::LeftPhantom:
        return std::any_of(s.parts().begin(), s.parts().end(), [&](const Interval& p) {
            return p.lo < j.x && j.x <= p.hi;
        });
    case Jump::Kind::RightPhantom:
        return std::any_of(s.parts().begin(), s.parts().end(), [&](const Interval& p) {
            return p.lo <= j.x && j.x < p.hi;
        });
    }
    return false;
}

bool capture_forces_continuous_mass(const Valuation& v, const Jump& j) {
    switch (j.kind) {
    case Jump::Kind::Atom: return false;
    case Jump::Kind::LeftPhantom: return v.cdf.increasing_left_of(j.x);
    case Jump::Kind::RightPhantom: return v.cdf.increasing_right_of(j.x);
    }
    return false;
}

Mass eval_interval(const Valuation& v, const Interval& part) {
    if (v.convention == Convention::ContentSingletonZero) {
        if (part.is_singleton()) return Mass(Rational(0));
        return v.cdf.eval_at(part.hi, Side::At) - v.cdf.eval_at(part.lo, Side::At);
    }
    Mass upper = v.cdf.eval_at(part.hi, part.hi_closed ? Side::At : Side::Left);
    Mass lower = v.cdf.eval_at(part.lo, part.lo_closed ? Side::Left : Side::At);
    return upper - lower;
}

Mass eval_set(const Valuation& v, const IntervalSet& s) {
    Mass total{Rational(0), Rational(0)};
    for (const auto& part : s.parts()) total += eval_interval(v, part);
    return total;
}

Mass continuous_mass(const Valuation& v, const IntervalSet& s) {
    Mass total{Rational(0), Rational(0)};
    for (const auto& part : s.parts()) total += v.cdf.continuous_between(part.lo, part.hi);
    return total;
}

MassReport mass_report(const Valuation& v) {
    MassReport r;
    r.jumps = jumps_of(v);
    r.jump_mass = 0;
    for (const auto& j : r.jumps) r.jump_mass += j.mass;
    r.total = v.total_mass();
    r.continuous_mass = v.cdf.continuous_total();
    return r;
}

Mass cumulative_within(const Valuation& v, const IntervalSet& base, const Rational& x) {
    return eval_set(v, set_intersect(base, set_from(make_interval(0, x, true, true))));
}

namespace {

// Leftmost point of [a, b] where the cdf's continuous part reaches target.
// The caller guarantees the target is reached by b, up to enclosure width.
Rational invert_continuous(const GeneralizedCdf& f, const Rational& a, const Rational& b,
                           const Rational& target) {
    std::vector<Rational> cuts{a};
    for (const auto& bp : f.breakpoints())
        if (bp.x > a && bp.x < b) cuts.push_back(bp.x);
    cuts.push_back(b);

    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational& u = cuts[i];
        const Rational& w = cuts[i + 1];
        Mass vw = f.continuous_value(w);
        if (vw.hi < target) continue;
        Mass vu = f.continuous_value(u);
        if (vu.lo >= target) return u;
        int si = f.segment_index((u + w) / 2);
        const auto& seg = f.segments()[si];
        if (seg.shape == SegmentShape::Linear) {
            if (seg.slope == 0) return w;
            Rational x = u + (target - vu.lo) / seg.slope;
            return std::min(std::max(x, u), w);
        }
        const auto& span_lo = f.breakpoints()[si];
        const auto& span_hi = f.breakpoints()[si + 1];
        Rational base = f.continuous_value(span_lo.x).value();
        Rational q = (target - base) / seg.mass;
        q = std::min(std::max(q, Rational(0)), Rational(1));
        Mass t = cantor_quantile(q, f.cantor_depth());
        Rational x = span_lo.x + t.lo * (span_hi.x - span_lo.x);
        return std::min(std::max(x, u), w);
    }
    return b;
}

} // namespace

Rational quantile_within(const Valuation& v, const IntervalSet& base, const Rational& p) {
    for (const auto& j : jumps_of(v))
        if (captures(base, j))
            throw PreconditionError("conditional quantile needs a continuous sweep; " +
                                    to_string(j.kind) + " of mass " + to_string(j.mass) +
                                    " at " + to_string(j.x) + " lies inside the base set");
    if (p < 0) throw DomainError("quantile level " + to_string(p) + " is negative");
    Mass total = continuous_mass(v, base);
    if (p > total.hi)
        throw DomainError("quantile level " + to_string(p) + " exceeds the base mass " +
                          to_string(total.hi));
    if (base.parts().empty()) return 0;

    Mass cum{Rational(0), Rational(0)};
    for (const auto& part : base.parts()) {
        Mass m = v.cdf.continuous_between(part.lo, part.hi);
        Mass next = cum + m;
        if (next.hi < p) {
            cum = next;
            continue;
        }
        Rational target = v.cdf.continuous_value(part.lo).lo + (p - cum.lo);
        return invert_continuous(v.cdf, part.lo, part.hi, target);
    }
    return base.parts().back().hi;
}

IntervalSet instantiate(const ChainSpec& chain, long n) {
    std::vector<Interval> parts;
    for (const auto& part : chain.parts) {
        Rational lo = part.lo.c0 + part.lo.c1 / n;
        Rational hi = part.hi.c0 + part.hi.c1 / n;
        if (lo > hi) continue;
        if (lo == hi && !(part.lo_closed && part.hi_closed)) continue;
        parts.push_back(make_interval(lo, hi, part.lo_closed, part.hi_closed));
    }
    return normalize(std::move(parts));
}

IntervalSet chain_union(const ChainSpec& chain) {
    std::vector<Interval> parts;
    for (const auto& part : chain.parts) {
        bool lo_moving = part.lo.c1 != 0;
        bool hi_moving = part.hi.c1 != 0;
        Rational lo = part.lo.c0;
        Rational hi = part.hi.c0;
        bool lo_closed = lo_moving ? false : part.lo_closed;
        bool hi_closed = hi_moving ? false : part.hi_closed;
        if (lo > hi) continue;
        if (lo == hi && !(lo_closed && hi_closed)) continue;
        parts.push_back(make_interval(lo, hi, lo_closed, hi_closed));
    }
    return normalize(std::move(parts));
}

namespace {

Mass chain_limit_value(const Valuation& v, const ChainPart& part) {
    const Rational& lo = part.lo.c0;
    const Rational& hi = part.hi.c0;
    if (lo > hi) return Mass(Rational(0));
    if (lo == hi) {
        bool still = part.lo.c1 == 0 && part.hi.c1 == 0;
        if (!(still && part.lo_closed && part.hi_closed)) return Mass(Rational(0));
        if (v.convention == Convention::ContentSingletonZero) return Mass(Rational(0));
        return v.cdf.eval_at(lo, Side::At) - v.cdf.eval_at(lo, Side::Left);
    }

    Mass upper = [&] {
        if (part.hi.c1 != 0) return v.cdf.eval_at(hi, Side::Left);
        if (v.convention == Convention::ContentSingletonZero)
            return v.cdf.eval_at(hi, Side::At);
        return v.cdf.eval_at(hi, part.hi_closed ? Side::At : Side::Left);
    }();
    Mass lower = [&] {
        if (part.lo.c1 != 0) return v.cdf.eval_at(lo, Side::Right);
        if (v.convention == Convention::ContentSingletonZero)
            return v.cdf.eval_at(lo, Side::At);
        return v.cdf.eval_at(lo, part.lo_closed ? Side::Left : Side::At);
    }();
    return upper - lower;
}

bool raw_parts_disjoint(const ChainSpec& chain, long n) {
    // Canonical sets merge overlap away, so test pairwise on the raw parts.
    std::vector<Interval> raw;
    for (const auto& part : chain.parts) {
        Rational lo = part.lo.c0 + part.lo.c1 / n;
        Rational hi = part.hi.c0 + part.hi.c1 / n;
        if (lo > hi) continue;
        if (lo == hi && !(part.lo_closed && part.hi_closed)) continue;
        raw.push_back(make_interval(lo, hi, part.lo_closed, part.hi_closed));
    }
    std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    for (size_t i = 0; i + 1 < raw.size(); ++i) {
        const auto& a = raw[i];
        const auto& b = raw[i + 1];
        if (b.lo < a.hi) return false;
        if (b.lo == a.hi && a.hi_closed && b.lo_closed) return false;
    }
    return true;
}

} // namespace

ChainCheckResult chain_continuity_check(const Valuation& v, const ChainSpec& chain,
                                        int sample_window) {
    if (chain.parts.empty()) throw ValidationError("chain has no parts");
    if (chain.start_n < 1) throw ValidationError("chain start index must be at least 1");
    for (const auto& part : chain.parts) {
        if (part.lo.c1 < 0)
            throw ValidationError("chain is not increasing: lower endpoint " +
                                  to_string(part.lo.c0) + " + (" + to_string(part.lo.c1) +
                                  ")/n moves downward-outward");
        if (part.hi.c1 > 0)
            throw ValidationError("chain is not increasing: upper endpoint " +
                                  to_string(part.hi.c0) + " + (" + to_string(part.hi.c1) +
                                  ")/n moves upward-outward");
        for (const auto& e : {part.lo, part.hi}) {
            Rational first = e.c0 + e.c1 / chain.start_n;
            if (e.c0 < 0 || e.c0 > 1 || first < 0 || first > 1)
                throw DomainError("chain endpoint leaves [0,1]: " + to_string(e.c0) + " + (" +
                                  to_string(e.c1) + ")/n");
        }
    }

    IntervalSet union_set = chain_union(chain);
    if (chain.declared_union && !(*chain.declared_union == union_set))
        throw ValidationError("declared union " + chain.declared_union->str() +
                              " does not match the chain's union " + union_set.str());

    IntervalSet prev = instantiate(chain, chain.start_n);
    if (!raw_parts_disjoint(chain, chain.start_n))
        throw ValidationError("chain parts overlap at n = " + std::to_string(chain.start_n));
    for (int i = 1; i <= sample_window; ++i) {
        long n = chain.start_n + i;
        IntervalSet cur = instantiate(chain, n);
        if (!raw_parts_disjoint(chain, n))
            throw ValidationError("chain parts overlap at n = " + std::to_string(n));
        if (!subset_of(prev, cur))
            throw ValidationError("chain is not increasing between n = " +
                                  std::to_string(n - 1) + " and n = " + std::to_string(n));
        if (!subset_of(cur, union_set))
            throw ValidationError("chain member at n = " + std::to_string(n) +
                                  " escapes the union");
        prev = std::move(cur);
    }

    ChainCheckResult r;
    Mass limit{Rational(0), Rational(0)};
    for (const auto& part : chain.parts) limit += chain_limit_value(v, part);
    r.limit_value = limit;
    r.union_set = union_set;
    r.union_value = eval_set(v, union_set);
    r.equal = r.limit_value.lo <= r.union_value.hi && r.union_value.lo <= r.limit_value.hi;
    return r;
}

} // namespace cakecut
