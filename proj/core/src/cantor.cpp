#include "cakecut/cantor.hpp"

#include "cakecut/errors.hpp"

#include <map>

namespace cakecut {

Mass cantor_cdf(const Rational& x, int depth) {
    if (x < 0 || x > 1) throw DomainError("cantor cdf argument " + to_string(x) + " outside [0,1]");
    if (depth < 1) throw ValidationError("cantor depth must be positive");
    if (x == 1) return Mass(Rational(1));

    Rational rest = x;
    Rational acc = 0;
    Rational bit(1, 2);
    for (int n = 0; n < depth; ++n) {
        if (rest == 0) return Mass(acc);
        rest *= 3;
        if (rest < 1) {
            // digit 0: no contribution
        } else if (rest <= 2) {
            if (rest == 2) {
                // x = prefix + 2*3^-(n+1) exactly: all later digits 0
                return Mass(acc + bit);
            }
            // digit 1: x lies in (or at the left edge of) a removed middle
            // third, where the function equals the plateau value exactly.
            return Mass(acc + bit);
        } else {
            acc += bit;
            rest -= 2;
        }
        bit /= 2;
    }
    return Mass(acc, acc + 2 * bit);
}

Mass cantor_quantile(const Rational& p, int depth) {
    if (p < 0 || p > 1) throw DomainError("quantile level " + to_string(p) + " outside [0,1]");
    if (depth < 1) throw ValidationError("cantor depth must be positive");
    if (p == 0) return Mass(Rational(0));
    if (p == 1) return Mass(Rational(1));

    // The binary digits of a rational p are eventually periodic, so the
    // leftmost preimage is the 0/2-ternary number with the same digit stream:
    // exact once the cycle is known. Dyadic p ends on a plateau whose left
    // endpoint replaces the terminating expansion.
    struct Snapshot {
        int index;
        Rational x;
        Rational scale;
    };
    std::map<Rational, Snapshot> seen;
    const int cycle_limit = 4096;

    Rational rest = p;
    Rational x = 0;
    Rational scale(1, 3);
    Rational half(1, 2);
    Rational trunc_x = 0, trunc_scale = 0;
    for (int n = 0; n < cycle_limit; ++n) {
        if (n == depth) {
            trunc_x = x;
            trunc_scale = scale;
        }
        if (rest == half) return Mass(x + scale);
        auto [it, fresh] = seen.emplace(rest, Snapshot{n, x, scale});
        if (!fresh) {
            const Snapshot& s = it->second;
            Rational period_pow = 1;
            for (int k = s.index; k < n; ++k) period_pow *= 3;
            return Mass(s.x + (x - s.x) * period_pow / (period_pow - 1));
        }
        if (rest < half) {
            rest *= 2;
        } else {
            x += 2 * scale;
            rest = 2 * rest - 1;
        }
        scale /= 3;
    }
    if (trunc_scale == 0) {
        trunc_x = x;
        trunc_scale = scale;
    }
    return Mass(trunc_x, trunc_x + 3 * trunc_scale);
}

} // namespace cakecut
