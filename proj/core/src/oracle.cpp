#include "cakecut/oracle.hpp"

#include "cakecut/errors.hpp"

#include <algorithm>

namespace cakecut {

std::string to_string(TokenSide s) {
    return s == TokenSide::Left ? "left" : "right";
}

namespace {

BigInt aligned_index(const Rational& x, const Rational& mesh, const std::string& what) {
    Rational q = x / mesh;
    BigInt n = entier(q);
    if (Rational(n) != q)
        throw ValidationError(what + " at " + to_string(x) + " is not mesh-aligned; refine " +
                              to_string(mesh) + " to a multiple of its denominator");
    return n;
}

} // namespace

GridModel discretize(const Valuation& v, const Rational& mesh) {
    return discretize(v, mesh, normalize({make_interval(0, 1, true, true)}));
}

GridModel discretize(const Valuation& v, const Rational& mesh, const IntervalSet& piece) {
    if (mesh <= 0 || mesh > 1) throw ValidationError("mesh must lie in (0,1]");
    Rational inv = 1 / mesh;
    BigInt m_count = entier(inv);
    if (Rational(m_count) != inv)
        throw ValidationError("mesh " + to_string(mesh) + " does not divide 1");
    if (m_count > 65536)
        throw CapacityError("mesh " + to_string(mesh) + " needs " + m_count.str() + " cells");
    int cell_count = m_count.convert_to<int>();

    for (const auto& part : piece.parts()) {
        aligned_index(part.lo, mesh, "piece endpoint");
        aligned_index(part.hi, mesh, "piece endpoint");
    }

    GridModel g;
    g.mesh = mesh;
    g.continuous_total = Mass(Rational(0));
    for (int i = 0; i < cell_count; ++i) {
        GridCell c;
        c.span = make_interval(Rational(i) * mesh, Rational(i + 1) * mesh, i == 0, true);
        c.continuous_mass = continuous_mass(v, set_intersect(piece, normalize({c.span})));
        g.continuous_total += c.continuous_mass;
        g.cells.push_back(std::move(c));
    }

    Mass token_total(Rational(0));
    for (const auto& j : jumps_of(v)) {
        BigInt pos = aligned_index(j.x, mesh, "jump");
        if (!captures(piece, j)) continue;
        SideToken t;
        t.x = j.x;
        t.mass = j.mass;
        if (j.kind == Jump::Kind::RightPhantom) {
            t.side = TokenSide::Right;
            t.cell = pos.convert_to<int>();
        } else {
            t.side = TokenSide::Left;
            t.cell = j.x == 0 ? 0 : pos.convert_to<int>() - 1;
        }
        t.forced = j.kind != Jump::Kind::Atom && g.cells[t.cell].continuous_mass.hi > 0;
        token_total += Mass(t.mass);
        g.tokens.push_back(std::move(t));
    }

    Mass model_total = g.continuous_total + token_total;
    Mass piece_total = eval_set(v, piece);
    if (model_total.hi < piece_total.lo || piece_total.hi < model_total.lo)
        throw Error("internal: grid model mass " + to_string(model_total.lo) +
                    " disagrees with the piece mass " + to_string(piece_total.lo));
    return g;
}

namespace {

void require_token_capacity(const GridModel& m) {
    if (m.tokens.size() > 20)
        throw CapacityError("oracle enumeration limited to 20 tokens; model holds " +
                            std::to_string(m.tokens.size()));
}

} // namespace

bool oracle_achievable(const GridModel& m, const Rational& target) {
    require_token_capacity(m);
    std::size_t n = m.tokens.size();
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
        Rational base = 0;
        bool lo_strict = false, hi_strict = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint32_t(1) << i)) {
                base += m.tokens[i].mass;
                lo_strict = lo_strict || m.tokens[i].forced;
            } else {
                hi_strict = hi_strict || m.tokens[i].forced;
            }
        }
        Rational excess = target - base;
        bool above = lo_strict ? excess > 0 : excess >= 0;
        bool below = hi_strict ? excess < m.continuous_total.hi : excess <= m.continuous_total.hi;
        if (above && below) return true;
    }
    return false;
}

Rational oracle_quantile(const GridModel& m, const Rational& p) {
    require_token_capacity(m);
    if (p < 0) throw DomainError("quantile level " + to_string(p) + " is negative");
    if (p <= 0) return 0;

    Rational cum = 0;
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
        const GridCell& c = m.cells[i];
        for (const auto& t : m.tokens) {
            if (t.cell != static_cast<int>(i) || t.x != c.span.lo) continue;
            cum += t.mass;
            if (cum >= p) return t.x;
        }
        Rational cm = c.continuous_mass.midpoint();
        if (cm > 0 && cum + cm >= p)
            return c.span.lo + (p - cum) / cm * (c.span.hi - c.span.lo);
        cum += cm;
        for (const auto& t : m.tokens) {
            if (t.cell != static_cast<int>(i) || t.x != c.span.hi) continue;
            cum += t.mass;
            if (cum >= p) return t.x;
        }
    }
    if (cum < p) throw DomainError("quantile level " + to_string(p) + " exceeds the total mass");
    return 1;
}

std::optional<std::vector<IntervalSet>> oracle_partition_search(const GridModel& m,
                                                                const Rational& eps) {
    require_token_capacity(m);
    if (eps <= 0) throw DomainError("epsilon must be positive, got " + to_string(eps));

    // Mass a piece must absorb when it holds cell i: the cell's continuous
    // mass plus every token whose capture cell is i.
    std::vector<Rational> bundle(m.cells.size(), Rational(0));
    for (std::size_t i = 0; i < m.cells.size(); ++i)
        bundle[i] = m.cells[i].continuous_mass.midpoint();
    for (const auto& t : m.tokens) bundle[t.cell] += t.mass;

    for (const auto& b : bundle)
        if (b > eps) return std::nullopt;

    struct Run {
        std::size_t first, last;
        Rational mass;
    };
    std::vector<Run> runs;
    Rational cur = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
        if (cur + bundle[i] > eps) {
            runs.push_back({start, i - 1, cur});
            start = i;
            cur = 0;
        }
        cur += bundle[i];
    }
    runs.push_back({start, m.cells.size() - 1, cur});

    // Zero-mass runs cannot stand alone; fold them into a neighbour.
    std::vector<Run> merged;
    for (const auto& r : runs) {
        if (!merged.empty() && (r.mass == 0 || merged.back().mass == 0) &&
            merged.back().mass + r.mass <= eps) {
            merged.back().last = r.last;
            merged.back().mass += r.mass;
        } else {
            merged.push_back(r);
        }
    }
    if (merged.size() == 1 && merged.front().mass == 0) return std::nullopt;

    std::vector<IntervalSet> pieces;
    for (const auto& r : merged) {
        Rational lo = m.cells[r.first].span.lo;
        Rational hi = m.cells[r.last].span.hi;
        pieces.push_back(normalize({make_interval(lo, hi, r.first == 0, true)}));
    }
    return pieces;
}

bool oracle_sliceable(const GridModel& m, const Rational& eps) {
    return oracle_partition_search(m, eps).has_value();
}

} // namespace cakecut
