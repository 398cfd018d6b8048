#include "cakecut/divisibility.hpp"

#include "cakecut/errors.hpp"

#include <algorithm>
#include <sstream>

namespace cakecut {

bool AchievableComponent::contains(const Rational& t) const {
    bool above = t > lo || (t == lo && lo_closed);
    bool below = t < hi || (t == hi && hi_closed);
    return above && below;
}

bool AchievableComponent::empty() const {
    return lo > hi || (lo == hi && !(lo_closed && hi_closed));
}

bool AchievableSet::achievable(const Rational& t) const {
    return std::any_of(components.begin(), components.end(),
                       [&](const AchievableComponent& c) { return c.contains(t); });
}

bool AchievableSet::dd_achievable(const Rational& t) const {
    return std::any_of(components.begin(), components.end(), [&](const AchievableComponent& c) {
        AchievableComponent closed = c;
        closed.hi_closed = true;
        return !c.empty() && closed.contains(t);
    });
}

std::optional<Rational> AchievableSet::sup_below(const Rational& t) const {
    std::optional<Rational> best;
    for (const auto& c : components) {
        if (c.empty()) continue;
        if (c.hi > t) continue;
        if (!best || c.hi > *best) best = c.hi;
    }
    return best;
}

std::optional<Rational> AchievableSet::inf_above(const Rational& t) const {
    std::optional<Rational> best;
    for (const auto& c : components) {
        if (c.empty()) continue;
        if (c.lo < t) continue;
        if (!best || c.lo < *best) best = c.lo;
    }
    return best;
}

AchievableSet achievable_set(const Valuation& v, const IntervalSet& piece) {
    AchievableSet a;
    for (const auto& j : jumps_of(v))
        if (captures(piece, j)) a.jumps.push_back(j);
    if (a.jumps.size() > 30)
        throw CapacityError("achievable-set enumeration limited to 30 jumps; piece holds " +
                            std::to_string(a.jumps.size()));
    for (const auto& j : a.jumps) a.forced.push_back(capture_forces_continuous_mass(v, j));
    a.continuous_cap = continuous_mass(v, piece).value();

    size_t n = a.jumps.size();
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
        AchievableComponent c;
        c.jump_mask = mask;
        c.jump_mass = 0;
        bool captured_forced = false;
        bool avoided_forced = false;
        for (size_t i = 0; i < n; ++i) {
            if (mask & (std::uint32_t(1) << i)) {
                c.jump_mass += a.jumps[i].mass;
                captured_forced = captured_forced || a.forced[i];
            } else {
                avoided_forced = avoided_forced || a.forced[i];
            }
        }
        c.lo = c.jump_mass;
        c.hi = c.jump_mass + a.continuous_cap;
        c.lo_closed = !captured_forced;
        c.hi_closed = !avoided_forced;
        a.components.push_back(std::move(c));
    }
    return a;
}

namespace {

// Half the smallest distance between consecutive cdf breakpoints; capture
// neighbourhoods and blockers stay below it so they never swallow another
// jump position.
Rational breakpoint_spacing(const GeneralizedCdf& f) {
    const auto& bps = f.breakpoints();
    Rational best = 1;
    for (size_t i = 0; i + 1 < bps.size(); ++i)
        best = std::min(best, Rational(bps[i + 1].x - bps[i].x));
    return best / 2;
}

// A small one-sided neighbourhood of j inside the piece whose inclusion
// captures j. Radius gets refined by the caller; this bounds it so the
// neighbourhood stays inside a single piece part and a single segment.
Rational capture_radius(const IntervalSet& piece, const Jump& j, const Rational& spacing) {
    Rational r = spacing;
    for (const auto& p : piece.parts()) {
        if (j.kind == Jump::Kind::LeftPhantom && p.lo < j.x && j.x <= p.hi)
            return std::min(r, Rational((j.x - p.lo) / 2));
        if (j.kind == Jump::Kind::RightPhantom && p.lo <= j.x && j.x < p.hi)
            return std::min(r, Rational((p.hi - j.x) / 2));
    }
    return r;
}

Interval capture_interval(const Jump& j, const Rational& radius) {
    if (j.kind == Jump::Kind::LeftPhantom)
        return make_interval(j.x - radius, j.x, false, true);
    if (j.kind == Jump::Kind::RightPhantom)
        return make_interval(j.x, j.x + radius, true, false);
    return singleton(j.x);
}

Interval blocker_interval(const Jump& j, const Rational& radius) {
    if (j.kind == Jump::Kind::Atom) return singleton(j.x);
    Rational lo = j.kind == Jump::Kind::LeftPhantom ? j.x - radius : j.x;
    Rational hi = j.kind == Jump::Kind::LeftPhantom ? j.x : j.x + radius;
    return make_interval(lo, hi, true, true);
}

Mass capture_overhead(const Valuation& v, const std::vector<Interval>& parts) {
    Mass m{Rational(0), Rational(0)};
    for (const auto& p : parts) m += v.cdf.continuous_between(p.lo, p.hi);
    return m;
}

struct WitnessPlan {
    IntervalSet witness;
    IntervalSet core;      // captures plus fill, blockers held out
    IntervalSet blockers;  // removed neighbourhoods of avoided forced jumps
};

// Builds a subset of `piece` capturing exactly the jumps in comp.jump_mask
// with total mass t. Preconditions: comp.contains(t).
WitnessPlan build_witness(const Valuation& v, const IntervalSet& piece,
                          const AchievableSet& a, const AchievableComponent& comp,
                          const Rational& t) {
    Rational spacing = breakpoint_spacing(v.cdf);

    std::vector<Interval> capture_parts;
    std::vector<size_t> captured_idx;
    for (size_t i = 0; i < a.jumps.size(); ++i)
        if (comp.jump_mask & (std::uint32_t(1) << i)) captured_idx.push_back(i);

    Rational fill_budget = t - comp.jump_mass;
    std::vector<Rational> radii;
    for (size_t i : captured_idx)
        radii.push_back(capture_radius(piece, a.jumps[i], spacing));
    Mass overhead{Rational(0), Rational(0)};
    for (int rounds = 0;; ++rounds) {
        capture_parts.clear();
        for (size_t k = 0; k < captured_idx.size(); ++k)
            if (a.jumps[captured_idx[k]].kind != Jump::Kind::Atom)
                capture_parts.push_back(capture_interval(a.jumps[captured_idx[k]], radii[k]));
        overhead = capture_overhead(v, capture_parts);
        if (overhead.hi * 2 <= fill_budget || overhead.hi == 0) break;
        if (rounds > 200)
            throw Error("internal: capture neighbourhoods failed to shrink below budget");
        // Jump straight toward the budget; exact in one round on linear
        // segments, geometric progress on cantor ones.
        Rational shrink = fill_budget / (4 * overhead.hi);
        if (shrink > Rational(1, 2)) shrink = Rational(1, 2);
        for (auto& r : radii) r *= shrink;
    }
    for (size_t i : captured_idx)
        if (a.jumps[i].kind == Jump::Kind::Atom) capture_parts.push_back(singleton(a.jumps[i].x));

    std::vector<Interval> blocker_parts;
    std::vector<size_t> avoided_idx;
    for (size_t i = 0; i < a.jumps.size(); ++i)
        if (!(comp.jump_mask & (std::uint32_t(1) << i))) avoided_idx.push_back(i);
    Rational slack = comp.jump_mass + a.continuous_cap - t;
    std::vector<Rational> brad;
    for (size_t k = 0; k < avoided_idx.size(); ++k) brad.push_back(spacing / 2);
    for (int rounds = 0;; ++rounds) {
        blocker_parts.clear();
        for (size_t k = 0; k < avoided_idx.size(); ++k)
            blocker_parts.push_back(blocker_interval(a.jumps[avoided_idx[k]], brad[k]));
        Mass cost = capture_overhead(v, blocker_parts);
        if (cost.hi == 0 || cost.hi * 2 <= slack) break;
        if (rounds > 200)
            throw Error("internal: blockers failed to shrink below the slack");
        Rational shrink = slack / (4 * cost.hi);
        if (shrink > Rational(1, 2)) shrink = Rational(1, 2);
        for (auto& r : brad) r *= shrink;
    }

    IntervalSet captures_set = normalize(std::vector<Interval>(capture_parts));
    IntervalSet blockers_set = normalize(std::vector<Interval>(blocker_parts));
    IntervalSet free_region = set_difference(set_difference(piece, captures_set), blockers_set);

    Rational r = fill_budget - overhead.lo;
    Mass free_mass = continuous_mass(v, free_region);
    IntervalSet fill;
    if (r > 0) {
        if (r >= free_mass.lo && free_mass.hi <= r) {
            fill = free_region;
        } else {
            Rational q = quantile_within(v, free_region, r);
            fill = set_intersect(free_region, set_from(make_interval(0, q, true, true)));
        }
    }

    WitnessPlan plan;
    plan.core = set_union(captures_set, fill);
    plan.blockers = blockers_set;
    plan.witness = plan.core;
    return plan;
}

std::string describe_gap(const AchievableSet& a, const Rational& t) {
    std::ostringstream os;
    os << "target " << to_string(t) << " falls in an achievability gap";
    if (auto b = a.sup_below(t)) os << "; nearest boundary below: " << to_string(*b);
    if (auto u = a.inf_above(t)) os << "; nearest boundary above: " << to_string(*u);
    return os.str();
}

} // namespace

Decision check_d(const Valuation& v, const IntervalSet& piece, const Rational& alpha) {
    if (alpha < 0 || alpha > 1)
        throw DomainError("alpha " + to_string(alpha) + " outside [0,1]");
    AchievableSet a = achievable_set(v, piece);
    Decision d;
    d.alpha = alpha;
    d.piece_mass = eval_set(v, piece).value();
    d.target = alpha * d.piece_mass;
    d.mode = Decision::Mode::ExactSet;

    for (const auto& comp : a.components) {
        if (comp.empty() || !comp.contains(d.target)) continue;
        WitnessPlan plan = build_witness(v, piece, a, comp, d.target);
        d.achievable = true;
        d.witness = plan.witness;
        d.witness_value = eval_set(v, *d.witness);
        if (!d.witness_value.contains(d.target))
            throw Error("internal: witness mass " + to_string(d.witness_value.lo) +
                        " misses target " + to_string(d.target));
        d.anchor = "(D) witness: exact sub-piece of mass " + to_string(d.target);
        return d;
    }

    d.achievable = false;
    d.gap_below = a.sup_below(d.target);
    d.gap_above = a.inf_above(d.target);
    d.anchor = "(D) gap: " + describe_gap(a, d.target);
    return d;
}

std::optional<IntervalSet> achievable_witness(const Valuation& v, const IntervalSet& piece,
                                              const Rational& target) {
    AchievableSet a = achievable_set(v, piece);
    for (const auto& comp : a.components) {
        if (comp.empty() || !comp.contains(target)) continue;
        WitnessPlan plan = build_witness(v, piece, a, comp, target);
        Mass got = eval_set(v, plan.witness);
        if (!got.contains(target))
            throw Error("internal: witness mass " + to_string(got.lo) +
                        " misses target " + to_string(target));
        return plan.witness;
    }
    return std::nullopt;
}

Decision check_dd_target(const Valuation& v, const IntervalSet& piece, const Rational& alpha) {
    if (alpha < 0 || alpha > 1)
        throw DomainError("alpha " + to_string(alpha) + " outside [0,1]");
    AchievableSet a = achievable_set(v, piece);
    Decision d;
    d.alpha = alpha;
    d.piece_mass = eval_set(v, piece).value();
    d.target = alpha * d.piece_mass;

    if (a.achievable(d.target)) {
        d = check_d(v, piece, alpha);
        d.sequence = "constant sequence: B_n = witness for every n";
        d.sequence_samples = {*d.witness, *d.witness, *d.witness};
        d.anchor = "(DD) via (D): " + d.anchor;
        return d;
    }

    for (const auto& comp : a.components) {
        if (comp.empty()) continue;
        AchievableComponent closed = comp;
        closed.hi_closed = true;
        if (!closed.contains(d.target) || d.target != comp.hi) continue;

        // The target is the open upper end of this component: all of the
        // continuous mass while avoiding a forced jump. Fix the captures and
        // take the whole remaining free region, then grow back the blocked
        // neighbourhoods from the far side, leaving an ever smaller margin
        // around each avoided jump. The values sup to the target without
        // any member ever capturing an avoided jump.
        Rational spacing = breakpoint_spacing(v.cdf);
        std::vector<Interval> capture_parts;
        for (size_t i = 0; i < a.jumps.size(); ++i) {
            if (!(comp.jump_mask & (std::uint32_t(1) << i))) continue;
            const Jump& j = a.jumps[i];
            if (j.kind == Jump::Kind::Atom)
                capture_parts.push_back(singleton(j.x));
            else
                capture_parts.push_back(capture_interval(j, capture_radius(piece, j, spacing)));
        }
        std::vector<Interval> blocker_parts;
        for (size_t i = 0; i < a.jumps.size(); ++i)
            if (!(comp.jump_mask & (std::uint32_t(1) << i)))
                blocker_parts.push_back(blocker_interval(a.jumps[i], spacing / 2));
        IntervalSet captures_set = normalize(std::move(capture_parts));
        IntervalSet blockers_set = normalize(std::move(blocker_parts));
        IntervalSet core = set_union(
            captures_set,
            set_difference(set_difference(piece, captures_set), blockers_set));

        d.achievable = true;
        d.mode = Decision::Mode::IncreasingSequenceSup;
        std::ostringstream os;
        os << "B_n = core u (blocked neighbourhoods shrunk by a factor 2^-n toward "
              "the avoided jumps); core = "
           << core.str() << ", blocked = " << blockers_set.str();
        d.sequence = os.str();

        for (int k = 1; k <= 3; ++k) {
            Rational margin = spacing / (BigInt(2) << k);
            std::vector<Interval> restored;
            for (size_t i = 0; i < a.jumps.size(); ++i) {
                if (comp.jump_mask & (std::uint32_t(1) << i)) continue;
                const Jump& j = a.jumps[i];
                if (j.kind == Jump::Kind::Atom) continue;  // the point stays excluded
                if (j.kind == Jump::Kind::LeftPhantom)
                    restored.push_back(
                        make_interval(j.x - spacing / 2, j.x - margin, true, false));
                else
                    restored.push_back(
                        make_interval(j.x + margin, j.x + spacing / 2, false, true));
            }
            d.sequence_samples.push_back(
                set_intersect(set_union(core, normalize(std::move(restored))), piece));
        }
        d.anchor = "(DD) sup: target reached along an increasing sequence";
        return d;
    }

    d.achievable = false;
    d.gap_below = a.sup_below(d.target);
    d.gap_above = a.inf_above(d.target);
    d.mode = Decision::Mode::IncreasingSequenceSup;
    d.anchor = "(DD) gap: " + describe_gap(a, d.target);
    return d;
}

IntervalSet exact_divide(const Valuation& v, const IntervalSet& b, const Rational& alpha) {
    if (alpha < 0 || alpha > 1)
        throw DomainError("alpha " + to_string(alpha) + " outside [0,1]");
    auto cls = classify(v.cdf);
    if (!cls.is_continuous) {
        const auto& j = cls.jumps.front();
        throw PreconditionError("exact division needs a continuous cdf; jump of mass " +
                                to_string(j.left_gap + j.right_gap) + " at " + to_string(j.x));
    }
    if (v.convention != Convention::Stieltjes)
        throw PreconditionError("exact division is defined for measures");
    Mass total = eval_set(v, b);
    if (total.hi == 0) throw PreconditionError("piece has mass 0; conditional cdf is undefined");

    Rational p = alpha * total.lo;
    Rational x = quantile_within(v, b, p);
    return set_intersect(b, set_from(make_interval(0, x, true, true)));
}

DDConstruction construct_dd(const Valuation& v, const IntervalSet& a, const Rational& alpha,
                            int steps) {
    if (alpha <= 0 || alpha >= 1)
        throw DomainError("alpha " + to_string(alpha) + " outside (0,1)");
    if (steps < 0) throw ValidationError("step count must be nonnegative");
    for (const auto& j : jumps_of(v))
        if (captures(a, j))
            throw PreconditionError("staged construction needs the piece sliceable; " +
                                    to_string(j.kind) + " of mass " + to_string(j.mass) +
                                    " at " + to_string(j.x) + " obstructs it");

    DDConstruction out;
    out.k = static_cast<int>(entier(1 / alpha)) + 1;
    Mass total = continuous_mass(v, a);
    out.target = alpha * total.lo;
    if (total.hi == 0) {
        out.sets.assign(steps, IntervalSet{});
        out.masses.assign(steps, Mass(Rational(0)));
        return out;
    }

    // Stage 0: slice into k+1 equal-mass pieces (each below 1/k) and keep
    // the maximal prefix whose mass stays at or under the target.
    int k = out.k;
    if (k > 10000) throw CapacityError("alpha too small: initial mesh would need " +
                                       std::to_string(k + 1) + " pieces");
    IntervalSet current;
    Mass mass{Rational(0), Rational(0)};
    {
        int pieces = k + 1;
        Rational prev_cut = 0;
        for (int i = 1; i <= pieces; ++i) {
            Rational level = total.lo * i / pieces;
            Rational cut = i == pieces ? Rational(1) : quantile_within(v, a, level);
            if (cut <= prev_cut) continue;
            IntervalSet slab =
                set_intersect(a, set_from(make_interval(prev_cut, cut, i == 1, true)));
            Mass m = eval_set(v, slab);
            if (!((mass + m).hi <= out.target)) break;
            current = set_union(current, slab);
            mass += m;
            prev_cut = cut;
        }
    }
    if (steps > 0) {
        out.sets.push_back(current);
        out.masses.push_back(mass);
    }

    // Later stages: tile the remaining deficit with equal sub-mesh pieces.
    for (int i = 1; i < steps; ++i) {
        Rational deficit = out.target - mass.lo;
        if (deficit > 0) {
            long level = k + i;
            BigInt j = entier(deficit * level) + 1;
            Rational chunk = deficit / Rational(j);
            IntervalSet rest = set_difference(a, current);
            Mass rest_mass = continuous_mass(v, rest);
            Rational take = std::min(deficit, rest_mass.lo);
            if (take > 0) {
                Rational cum = 0;
                Rational lo_cut = quantile_within(v, rest, Rational(0));
                IntervalSet addition;
                while (cum < take) {
                    Rational step_mass = std::min(chunk, Rational(take - cum));
                    cum += step_mass;
                    Rational hi_cut = quantile_within(v, rest, cum);
                    if (hi_cut > lo_cut)
                        addition = set_union(addition,
                                             set_intersect(rest, set_from(make_interval(
                                                                     lo_cut, hi_cut, true, true))));
                    lo_cut = hi_cut;
                }
                current = set_union(current, addition);
                mass = eval_set(v, current);
            }
        }
        out.sets.push_back(current);
        out.masses.push_back(mass);
    }
    return out;
}

namespace {

// Slot model for exact-search over interval unions: even slots sit at cdf
// breakpoints, odd slots float strictly inside the segment to their left.
struct SlotPart {
    int lo_slot = 0, hi_slot = 0;
    bool lo_closed = true, hi_closed = true;
};

struct SlotConfigValue {
    Rational fixed;
    Rational pool;  // open-interval slack from partially used segments
};

class SlotSearch {
  public:
    SlotSearch(const Valuation& v, const Rational& target, int max_parts)
        : v_(v), target_(target), max_parts_(max_parts) {
        const auto& bps = v.cdf.breakpoints();
        anchor_count_ = static_cast<int>(bps.size());
        if (anchor_count_ > 9)
            throw CapacityError("interval-count search limited to 9 breakpoints");
        for (const auto& seg : v.cdf.segments())
            if (seg.shape == SegmentShape::Cantor)
                throw PreconditionError(
                    "interval-count search needs a piecewise-linear cdf");
        jumps_ = jumps_of(v);
    }

    std::optional<int> run() {
        if (target_ == 0) return 0;
        for (int k = 1; k <= max_parts_; ++k) {
            parts_.clear();
            if (search(k, 0)) return k;
        }
        return std::nullopt;
    }

  private:
    int slot_count() const { return 2 * anchor_count_ - 1; }

    bool search(int remaining, int min_slot) {
        if (remaining == 0) return evaluate();
        for (int lo = min_slot; lo < slot_count(); ++lo) {
            bool lo_anchor = lo % 2 == 0;
            for (int hi = lo; hi < slot_count(); ++hi) {
                bool hi_anchor = hi % 2 == 0;
                if (lo == hi && lo_anchor) {
                    // singleton at an anchor
                    if (!compatible_with_last(lo, true)) continue;
                    parts_.push_back({lo, hi, true, true});
                    if (search(remaining - 1, lo) ) return true;
                    parts_.pop_back();
                    continue;
                }
                for (bool lc : lo_anchor ? std::vector<bool>{true, false}
                                         : std::vector<bool>{true}) {
                    if (!compatible_with_last(lo, lc)) continue;
                    for (bool hc : hi_anchor ? std::vector<bool>{true, false}
                                             : std::vector<bool>{true}) {
                        if (lo == hi && !lo_anchor) {
                            // float island: lo < hi implicitly, flags moot
                            if (!(lc && hc)) continue;
                        }
                        parts_.push_back({lo, hi, lc, hc});
                        if (search(remaining - 1, hi)) return true;
                        parts_.pop_back();
                    }
                }
            }
        }
        return false;
    }

    bool compatible_with_last(int lo_slot, bool lo_closed) const {
        if (parts_.empty()) return true;
        const auto& prev = parts_.back();
        if (prev.hi_slot > lo_slot) return false;
        if (prev.hi_slot < lo_slot) return true;
        if (lo_slot % 2 == 1) return true;  // same segment, floats ordered freely
        return !(prev.hi_closed && lo_closed);
    }

    bool anchor_covered(int i) const {
        for (const auto& p : parts_) {
            if (p.lo_slot < 2 * i && p.hi_slot > 2 * i) return true;
            if (p.lo_slot == 2 * i && p.hi_slot == 2 * i) return true;
            if (p.lo_slot == 2 * i && p.hi_slot > 2 * i && p.lo_closed) return true;
            if (p.hi_slot == 2 * i && p.lo_slot < 2 * i && p.hi_closed) return true;
        }
        return false;
    }

    bool reaches_from_below(int i) const {
        for (const auto& p : parts_)
            if (p.lo_slot < 2 * i && p.hi_slot >= 2 * i) return true;
        return false;
    }

    bool reaches_from_above(int i) const {
        for (const auto& p : parts_)
            if (p.lo_slot <= 2 * i && p.hi_slot > 2 * i) return true;
        return false;
    }

    bool segment_full(int j) const {
        for (const auto& p : parts_)
            if (p.lo_slot <= 2 * j && p.hi_slot >= 2 * j + 2) return true;
        return false;
    }

    bool segment_touched(int j) const {
        for (const auto& p : parts_)
            if (p.lo_slot <= 2 * j + 1 && p.hi_slot >= 2 * j + 1) return true;
        return false;
    }

    bool evaluate() const {
        Rational fixed = 0;
        const auto& bps = v_.cdf.breakpoints();
        for (const auto& jump : jumps_) {
            int i = v_.cdf.breakpoint_index(jump.x);
            bool captured = false;
            switch (jump.kind) {
            case Jump::Kind::Atom: captured = anchor_covered(i); break;
            case Jump::Kind::LeftPhantom: captured = reaches_from_below(i); break;
            case Jump::Kind::RightPhantom: captured = reaches_from_above(i); break;
            }
            if (captured) fixed += jump.mass;
        }
        Rational pool = 0;
        for (int j = 0; j + 1 < static_cast<int>(bps.size()); ++j) {
            Rational mass = bps[j + 1].left_val - bps[j].right_val;
            if (segment_full(j)) {
                fixed += mass;
            } else if (segment_touched(j) && mass > 0) {
                pool += mass;
            }
        }
        if (pool == 0) return target_ == fixed;
        return target_ > fixed && target_ < fixed + pool;
    }

    const Valuation& v_;
    Rational target_;
    int max_parts_;
    int anchor_count_ = 0;
    std::vector<Jump> jumps_;
    std::vector<SlotPart> parts_;
};

} // namespace

std::optional<int> min_interval_count(const Valuation& v, const Rational& target_mass,
                                      int max_parts) {
    if (max_parts < 0 || max_parts > 4)
        throw ValidationError("part bound must lie in [0,4]");
    if (target_mass < 0 || target_mass > v.total_mass())
        throw DomainError("target mass " + to_string(target_mass) + " outside [0, " +
                          to_string(v.total_mass()) + "]");
    SlotSearch search(v, target_mass, max_parts);
    return search.run();
}

} // namespace cakecut
