#include "cakecut/slicing.hpp"

#include "cakecut/divisibility.hpp"
#include "cakecut/errors.hpp"
#include "cakecut/generalized_cdf.hpp"

#include <algorithm>
#include <random>

namespace cakecut {

namespace {

std::string jump_str(const Jump& j) {
    return to_string(j.kind) + " at " + to_string(j.x) + " (mass " + to_string(j.mass) + ")";
}

IntervalSet whole_space() {
    return normalize({make_interval(0, 1, true, true)});
}

} // namespace

NotSliceableError::NotSliceableError(const Jump& j)
    : PreconditionError("not sliceable: every finite interval partition has a part carrying the " +
                        jump_str(j)),
      obstruction_(j) {}

SliceabilityReport is_sliceable(const Valuation& v) {
    SliceabilityReport r;
    auto js = jumps_of(v);
    if (js.empty()) {
        r.sliceable = true;
        return r;
    }
    const Jump* worst = &js.front();
    for (const auto& j : js)
        if (j.mass > worst->mass) worst = &j;
    r.obstruction = *worst;
    return r;
}

Slicing slice(const Valuation& v, const Rational& epsilon) {
    if (epsilon <= 0) throw DomainError("epsilon must be positive, got " + to_string(epsilon));
    SliceabilityReport rep = is_sliceable(v);
    if (!rep.sliceable) throw NotSliceableError(*rep.obstruction);
    const Rational& total = v.total_mass();
    if (total == 0) throw DomainError("zero total mass admits no piece of positive mass");

    Rational q = total / epsilon;
    BigInt count_b = entier(q);
    if (Rational(count_b) < q) ++count_b;
    if (count_b > 1000000)
        throw CapacityError("epsilon " + to_string(epsilon) + " would produce " +
                            count_b.str() + " pieces");
    std::size_t count = count_b.convert_to<std::size_t>();

    std::vector<Rational> cuts;
    for (std::size_t i = 1; i < count; ++i) {
        Rational x = quantile_leftmost(v.cdf, Rational(i) * epsilon);
        if (!cuts.empty() && x <= cuts.back())
            throw Error("internal: quantile cuts collide at " + to_string(x) +
                        "; epsilon below cantor resolution");
        cuts.push_back(x);
    }

    Slicing s;
    s.epsilon = epsilon;
    for (std::size_t i = 0; i < count; ++i) {
        Rational lo = i == 0 ? Rational(0) : cuts[i - 1];
        Rational hi = i + 1 == count ? Rational(1) : cuts[i];
        s.pieces.push_back(normalize({make_interval(lo, hi, i == 0, true)}));
        s.masses.push_back(eval_set(v, s.pieces.back()));
    }
    return s;
}

namespace {

// Sup of the achievable masses in (0, eps], with attainment and, when the sup
// is an open upper end, the lower end of the component that approaches it.
struct AdmissibleSup {
    Rational c;
    bool attained = false;
    Rational comp_lo;
};

AdmissibleSup admissible_sup(const AchievableSet& a, const Rational& eps) {
    AdmissibleSup best;
    best.c = 0;
    for (const auto& comp : a.components) {
        if (comp.empty()) continue;
        Rational u;
        bool uc;
        if (comp.hi <= eps) {
            u = comp.hi;
            uc = comp.hi_closed;
        } else {
            u = eps;
            uc = eps > comp.lo || (eps == comp.lo && comp.lo_closed);
        }
        Rational l = comp.lo;
        bool lc = comp.lo_closed && l > 0;
        if (u <= 0) continue;
        if (l > u || (l == u && !(lc && uc))) continue;
        if (u > best.c) {
            best.c = u;
            best.attained = uc;
            best.comp_lo = l;
        } else if (u == best.c && uc) {
            best.attained = true;
        }
    }
    return best;
}

// A jump is permanently out of reach when any set capturing it weighs more
// than eps: outright for mass > eps, and at mass == eps for phantoms whose
// one-sided neighbourhoods carry continuous mass.
Rational uncapturable_jump_mass(const Valuation& v, const Rational& eps) {
    Rational total = 0;
    for (const auto& j : jumps_of(v)) {
        bool capturable =
            j.mass < eps ||
            (j.mass == eps &&
             (j.kind == Jump::Kind::Atom || !capture_forces_continuous_mass(v, j)));
        if (!capturable) total += j.mass;
    }
    return total;
}

} // namespace

GreedyTrace greedy_slicing(const Valuation& v, const Rational& epsilon, std::size_t max_iter) {
    if (epsilon <= 0) throw DomainError("epsilon must be positive, got " + to_string(epsilon));
    GreedyTrace t;
    t.remainder_limit = uncapturable_jump_mass(v, epsilon);
    t.limit_is_zero = t.remainder_limit == 0;

    IntervalSet remainder = whole_space();
    Mass rmass = eval_set(v, remainder);
    for (std::size_t it = 0; it < max_iter; ++it) {
        if (rmass.certainly_le(epsilon)) break;
        AdmissibleSup cs = admissible_sup(achievable_set(v, remainder), epsilon);
        if (cs.c == 0) break;
        Rational m = cs.attained
                         ? cs.c
                         : std::max(Rational(3 * cs.c / 4), Rational((cs.comp_lo + cs.c) / 2));
        auto piece = achievable_witness(v, remainder, m);
        if (!piece)
            throw Error("internal: greedy pick " + to_string(m) + " is not realizable");
        Mass pm = eval_set(v, *piece);
        remainder = set_difference(remainder, *piece);
        rmass = eval_set(v, remainder);
        t.steps.push_back({*piece, pm, rmass, cs.c});
    }
    t.final_remainder_mass = rmass;
    t.terminated = rmass.certainly_le(epsilon);
    return t;
}

Decomposition decompose(const Valuation& v) {
    if (v.convention == Convention::ContentSingletonZero)
        throw PreconditionError(
            "decomposition needs a measure; a content places no mass at single points");

    Decomposition d;
    std::vector<Breakpoint> bps;
    Rational atom_total = 0;
    for (const auto& b : v.cdf.breakpoints()) {
        if (b.left_gap() != 0) {
            d.atoms.push_back({b.x, b.left_gap()});
            atom_total += b.left_gap();
        }
        Rational c = v.cdf.continuous_value(b.x).value();
        bps.push_back({b.x, c, c, c});
    }
    GeneralizedCdf cont =
        GeneralizedCdf::make(std::move(bps), v.cdf.segments(), v.cdf.cantor_depth());
    d.remainder = make_valuation(std::move(cont), Convention::Stieltjes, v.name + ":continuous");
    if (atom_total + d.remainder.total_mass() != v.total_mass())
        throw Error("internal: decomposition loses mass");
    return d;
}

namespace {

Rational min_breakpoint_gap(const GeneralizedCdf& f) {
    const auto& bps = f.breakpoints();
    Rational best = 1;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i)
        best = std::min(best, Rational(bps[i + 1].x - bps[i].x));
    return best;
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

// Grid 81 keeps endpoints triadic so cantor cdf values stay exact.
IntervalSet random_piece(std::mt19937_64& rng, int grid) {
    std::vector<Interval> parts;
    std::uint64_t a = bounded(rng, grid);
    std::uint64_t b = a + 1 + bounded(rng, grid - a);
    parts.push_back(make_interval(Rational(a, grid), Rational(b, grid), bounded(rng, 2) == 0,
                                  bounded(rng, 2) == 0));
    if (b + 2 <= std::uint64_t(grid) && bounded(rng, 10) < 3) {
        std::uint64_t c = b + 1 + bounded(rng, grid - b - 1);
        std::uint64_t e = c + 1 + bounded(rng, grid - c);
        parts.push_back(make_interval(Rational(c, grid), Rational(e, grid), bounded(rng, 2) == 0,
                                      bounded(rng, 2) == 0));
    }
    return normalize(std::move(parts));
}

// Piece and ratio around the largest jump for which both (D) and (DD) must
// fail: half the jump plus at most half of it in continuous mass lands in the
// achievability gap below the jump.
void run_constructed_gap_probe(const Valuation& v, const Jump& j) {
    IntervalSet piece;
    if (j.kind == Jump::Kind::Atom) {
        piece = normalize({singleton(j.x)});
    } else {
        Rational delta = min_breakpoint_gap(v.cdf) / 2;
        for (int rounds = 0;; ++rounds) {
            Interval side = j.kind == Jump::Kind::LeftPhantom
                                ? make_interval(j.x - delta, j.x, true, true)
                                : make_interval(j.x, j.x + delta, true, true);
            piece = normalize({side});
            if (continuous_mass(v, piece).hi * 2 <= j.mass) break;
            if (rounds > 200)
                throw Error("internal: gap probe neighbourhood failed to shrink");
            delta /= 2;
        }
    }
    Rational half(1, 2);
    if (check_d(v, piece, half).achievable || check_dd_target(v, piece, half).achievable)
        throw Error("internal: constructed gap probe is unexpectedly achievable for " + v.name);
}

} // namespace

std::vector<TruthRow> truth_table(const std::vector<Valuation>& fixtures, int sample_count,
                                  std::uint64_t seed) {
    std::vector<TruthRow> rows;
    for (const auto& v : fixtures) {
        TruthRow row;
        row.fixture = v.name;
        row.convention = v.convention;
        auto js = jumps_of(v);
        row.atom_free = std::none_of(js.begin(), js.end(), [](const Jump& j) {
            return j.kind == Jump::Kind::Atom;
        });
        SliceabilityReport rep = is_sliceable(v);
        row.sliceable = rep.sliceable;
        bool continuous = classify(v.cdf).is_continuous;
        row.d_universal = continuous;
        row.dd_universal = continuous;
        row.theorem_consistent = row.d_universal == (row.sliceable && row.atom_free);

        std::mt19937_64 rng(seed + rows.size());
        int grid = v.cdf.has_cantor_segment() ? 81 : 64;
        for (int p = 0; p < sample_count; ++p) {
            IntervalSet piece = random_piece(rng, grid);
            Rational alpha(1 + bounded(rng, 31), 32);
            Decision d = check_d(v, piece, alpha);
            Decision dd = check_dd_target(v, piece, alpha);
            if (d.achievable && !dd.achievable)
                throw Error("internal: (D) holds but (DD) fails on a probe for " + v.name);
            if (continuous && (!d.achievable || !dd.achievable))
                throw Error("internal: continuous cdf but a probe fails for " + v.name);
        }
        if (!continuous) run_constructed_gap_probe(v, *rep.obstruction);

        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace cakecut
