#include "cakecut/interval_set.hpp"

#include "cakecut/errors.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace cakecut {

namespace {

// An atom of the endpoint subdivision: either a single endpoint value or
// the open gap between two consecutive ones.
struct Atom {
    Rational lo;
    Rational hi;
    bool is_point() const { return lo == hi; }
    Rational probe() const { return is_point() ? lo : (lo + hi) / 2; }
};

std::vector<Rational> endpoint_values(const std::vector<Interval>& parts) {
    std::vector<Rational> xs;
    for (const auto& iv : parts) {
        xs.push_back(iv.lo);
        xs.push_back(iv.hi);
    }
    return xs;
}

std::vector<Atom> subdivide(std::vector<Rational> xs) {
    xs.push_back(Rational(0));
    xs.push_back(Rational(1));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Atom> atoms;
    for (size_t i = 0; i < xs.size(); ++i) {
        atoms.push_back({xs[i], xs[i]});
        if (i + 1 < xs.size()) atoms.push_back({xs[i], xs[i + 1]});
    }
    return atoms;
}

// Reassembles a covered-atom bitmap into canonical intervals. Adjacent
// covered atoms join; an uncovered point between two covered gaps keeps
// them apart, which is exactly the boundary arithmetic open/closed ends
// need.
std::vector<Interval> assemble(const std::vector<Atom>& atoms, const std::vector<bool>& covered) {
    std::vector<Interval> parts;
    size_t i = 0;
    while (i < atoms.size()) {
        if (!covered[i]) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j + 1 < atoms.size() && covered[j + 1]) ++j;
        Interval iv;
        iv.lo = atoms[i].lo;
        iv.lo_closed = atoms[i].is_point();
        iv.hi = atoms[j].hi;
        iv.hi_closed = atoms[j].is_point();
        parts.push_back(iv);
        i = j + 1;
    }
    return parts;
}

bool raw_contains(const std::vector<Interval>& parts, const Rational& x) {
    for (const auto& iv : parts)
        if (iv.contains(x)) return true;
    return false;
}

// A boundary of a canonical part, ordered along the line without any
// arithmetic. rank places an open start just right of x (+1) and an open
// end just left of it (-1); closed boundaries sit at x itself (0).
struct Bound {
    const Rational* x;
    int rank;
};

int cmp(const Bound& a, const Bound& b) {
    if (*a.x < *b.x) return -1;
    if (*b.x < *a.x) return 1;
    return a.rank < b.rank ? -1 : (a.rank > b.rank ? 1 : 0);
}

Bound start_of(const Interval& iv) { return {&iv.lo, iv.lo_closed ? 0 : 1}; }
Bound end_of(const Interval& iv) { return {&iv.hi, iv.hi_closed ? 0 : -1}; }

// First position after an end, and last position before a start.
Bound after(const Bound& e) { return {e.x, e.rank + 1}; }
Bound before(const Bound& s) { return {s.x, s.rank - 1}; }

// True when a part starting at s overlaps or touches a region ending at e,
// so that both fuse into one interval.
bool joins(const Bound& s, const Bound& e) {
    if (*s.x != *e.x) return *s.x < *e.x;
    return s.rank <= e.rank + 1;
}

Interval span(const Bound& s, const Bound& e) {
    return Interval{*s.x, *e.x, s.rank == 0, e.rank == 0};
}

} // namespace

bool Interval::contains(const Rational& x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
}

std::string Interval::str() const {
    if (is_singleton()) return "{" + to_string(lo) + "}";
    std::ostringstream out;
    out << (lo_closed ? '[' : '(') << to_string(lo) << ',' << to_string(hi)
        << (hi_closed ? ']' : ')');
    return out.str();
}

Interval make_interval(Rational lo, Rational hi, bool lo_closed, bool hi_closed) {
    if (lo < 0 || hi > 1) throw DomainError("interval endpoints must lie in [0,1]");
    if (lo > hi) throw ValidationError("interval lower endpoint exceeds upper endpoint");
    if (lo == hi && !(lo_closed && hi_closed))
        throw ValidationError("degenerate interval must be a closed singleton");
    return Interval{std::move(lo), std::move(hi), lo_closed, hi_closed};
}

Interval singleton(Rational x) {
    return make_interval(x, x, true, true);
}

bool IntervalSet::contains(const Rational& x) const {
    if (x < 0 || x > 1) throw DomainError("point " + to_string(x) + " is outside [0,1]");
    return raw_contains(parts_, x);
}

bool IntervalSet::covers(const Interval& iv) const {
    return subset_of(set_from(iv), *this);
}

std::string IntervalSet::str() const {
    if (parts_.empty()) return "{}";
    std::string out;
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (i) out += " u ";
        out += parts_[i].str();
    }
    return out;
}

IntervalSet normalize(const std::vector<Interval>& raw) {
    for (const auto& iv : raw) {
        // Revalidate: callers may build Interval structs directly.
        make_interval(iv.lo, iv.hi, iv.lo_closed, iv.hi_closed);
    }
    auto atoms = subdivide(endpoint_values(raw));
    std::vector<bool> covered(atoms.size());
    for (size_t i = 0; i < atoms.size(); ++i) covered[i] = raw_contains(raw, atoms[i].probe());
    IntervalSet out;
    out.parts_ = assemble(atoms, covered);
    return out;
}

IntervalSet full_cake() {
    return set_from(make_interval(0, 1, true, true));
}

IntervalSet set_from(const Interval& iv) {
    return normalize({iv});
}

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
    const auto& pa = a.parts_;
    const auto& pb = b.parts_;
    std::vector<Interval> out;
    size_t i = 0, j = 0;
    while (i < pa.size() || j < pb.size()) {
        const Interval* next;
        if (j >= pb.size() || (i < pa.size() && cmp(start_of(pa[i]), start_of(pb[j])) <= 0))
            next = &pa[i++];
        else
            next = &pb[j++];
        if (!out.empty() && joins(start_of(*next), end_of(out.back()))) {
            if (cmp(end_of(*next), end_of(out.back())) > 0) {
                out.back().hi = next->hi;
                out.back().hi_closed = next->hi_closed;
            }
        } else {
            out.push_back(*next);
        }
    }
    IntervalSet r;
    r.parts_ = std::move(out);
    return r;
}

IntervalSet set_intersect(const IntervalSet& a, const IntervalSet& b) {
    const auto& pa = a.parts_;
    const auto& pb = b.parts_;
    std::vector<Interval> out;
    size_t i = 0, j = 0;
    while (i < pa.size() && j < pb.size()) {
        Bound s = std::max(start_of(pa[i]), start_of(pb[j]),
                           [](const Bound& x, const Bound& y) { return cmp(x, y) < 0; });
        int ends = cmp(end_of(pa[i]), end_of(pb[j]));
        Bound e = ends <= 0 ? end_of(pa[i]) : end_of(pb[j]);
        if (cmp(s, e) <= 0) out.push_back(span(s, e));
        if (ends <= 0)
            ++i;
        else
            ++j;
    }
    IntervalSet r;
    r.parts_ = std::move(out);
    return r;
}

IntervalSet set_difference(const IntervalSet& a, const IntervalSet& b) {
    const auto& pa = a.parts_;
    const auto& pb = b.parts_;
    std::vector<Interval> out;
    size_t j = 0;
    for (const auto& ap : pa) {
        Bound cur = start_of(ap);
        Bound stop = end_of(ap);
        while (j < pb.size() && cmp(end_of(pb[j]), cur) < 0) ++j;
        size_t k = j;
        while (k < pb.size() && cmp(start_of(pb[k]), stop) <= 0) {
            if (cmp(cur, before(start_of(pb[k]))) <= 0)
                out.push_back(span(cur, before(start_of(pb[k]))));
            if (cmp(after(end_of(pb[k])), cur) > 0) cur = after(end_of(pb[k]));
            if (cmp(end_of(pb[k]), stop) > 0) break;
            ++k;
        }
        if (cmp(cur, stop) <= 0) out.push_back(span(cur, stop));
    }
    IntervalSet r;
    r.parts_ = std::move(out);
    return r;
}

IntervalSet set_complement(const IntervalSet& a) {
    return set_difference(full_cake(), a);
}

bool subset_of(const IntervalSet& inner, const IntervalSet& outer) {
    const auto& po = outer.parts();
    size_t k = 0;
    for (const auto& p : inner.parts()) {
        while (k < po.size() && cmp(end_of(po[k]), start_of(p)) < 0) ++k;
        if (k >= po.size()) return false;
        if (cmp(start_of(po[k]), start_of(p)) > 0 || cmp(end_of(p), end_of(po[k])) > 0)
            return false;
    }
    return true;
}

bool disjoint(const IntervalSet& a, const IntervalSet& b) {
    const auto& pa = a.parts();
    const auto& pb = b.parts();
    size_t i = 0, j = 0;
    while (i < pa.size() && j < pb.size()) {
        Bound s = std::max(start_of(pa[i]), start_of(pb[j]),
                           [](const Bound& x, const Bound& y) { return cmp(x, y) < 0; });
        int ends = cmp(end_of(pa[i]), end_of(pb[j]));
        const Bound e = ends <= 0 ? end_of(pa[i]) : end_of(pb[j]);
        if (cmp(s, e) <= 0) return false;
        if (ends <= 0)
            ++i;
        else
            ++j;
    }
    return true;
}

namespace {

struct SetParser {
    const std::string& text;
    size_t pos = 0;

    explicit SetParser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        if (pos >= text.size()) throw ValidationError("unexpected end of set expression '" + text + "'");
        return text[pos];
    }

    void expect(char c) {
        if (peek() != c)
            throw ValidationError(std::string("expected '") + c + "' at position " +
                                  std::to_string(pos) + " in '" + text + "'");
        ++pos;
    }

    Rational number() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/' ||
                text[pos] == '.' || text[pos] == '-' || text[pos] == '+'))
            ++pos;
        if (start == pos)
            throw ValidationError("expected a number at position " + std::to_string(start) +
                                  " in '" + text + "'");
        return parse_rational(text.substr(start, pos - start));
    }

    Interval part() {
        char open = peek();
        if (open == '{') {
            ++pos;
            skip_ws();
            if (pos < text.size() && text[pos] == '}') {
                // "{}" denotes the empty set; signalled by a sentinel that
                // the caller filters out.
                ++pos;
                return Interval{Rational(1), Rational(0), true, true};
            }
            Rational x = number();
            expect('}');
            return singleton(std::move(x));
        }
        if (open != '(' && open != '[')
            throw ValidationError(std::string("expected '(', '[' or '{' at position ") +
                                  std::to_string(pos) + " in '" + text + "'");
        ++pos;
        Rational lo = number();
        expect(',');
        Rational hi = number();
        char close = peek();
        if (close != ')' && close != ']')
            throw ValidationError(std::string("expected ')' or ']' at position ") +
                                  std::to_string(pos) + " in '" + text + "'");
        ++pos;
        return make_interval(std::move(lo), std::move(hi), open == '[', close == ']');
    }
};

} // namespace

IntervalSet parse_interval_set(const std::string& text) {
    SetParser p(text);
    std::vector<Interval> parts;
    if (p.at_end()) throw ValidationError("empty set expression");
    while (true) {
        Interval iv = p.part();
        if (!(iv.lo == 1 && iv.hi == 0)) parts.push_back(std::move(iv));
        if (p.at_end()) break;
        char c = p.peek();
        if (c == 'u' || c == 'U') {
            ++p.pos;
        } else {
            throw ValidationError(std::string("expected 'u' between parts at position ") +
                                  std::to_string(p.pos) + " in '" + text + "'");
        }
    }
    return normalize(parts);
}

} // namespace cakecut
