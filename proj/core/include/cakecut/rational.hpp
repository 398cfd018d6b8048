#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>

namespace cakecut {

// GMP-backed: exact arithmetic stays usable when endpoint denominators reach
// tens of thousands of bits, as in long greedy runs.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Parses "p/q", an integer, or a finite decimal such as "0.05" or "-1.25".
// Throws ValidationError on anything else.
Rational parse_rational(const std::string& text);

// Canonical form: "p/q" for non-integers, plain digits otherwise.
std::string to_string(const Rational& r);

// Shortest exact decimal when the denominator is of the form 2^a*5^b,
// otherwise a 17-significant-digit approximation.
std::string to_decimal_string(const Rational& r);

double to_double(const Rational& r);

// Largest integer <= r.
BigInt entier(const Rational& r);

// A closed rational interval certifying lo <= true value <= hi. Arithmetic
// involving Cantor segments carries these enclosures; piecewise-linear
// arithmetic keeps lo == hi throughout.
struct Mass {
    Rational lo;
    Rational hi;

    Mass() = default;
    Mass(Rational exact) : lo(exact), hi(std::move(exact)) {}
    Mass(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {}

    bool exact() const { return lo == hi; }
    Rational width() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }

    // The exact value; call only when exact() holds.
    const Rational& value() const;

    bool certainly_le(const Rational& r) const { return hi <= r; }
    bool certainly_lt(const Rational& r) const { return hi < r; }
    bool certainly_ge(const Rational& r) const { return lo >= r; }
    bool certainly_gt(const Rational& r) const { return lo > r; }
    bool contains(const Rational& r) const { return lo <= r && r <= hi; }
    bool within(const Rational& r, const Rational& tol) const;

    Mass& operator+=(const Mass& o);
    Mass& operator-=(const Mass& o);
    friend Mass operator+(Mass a, const Mass& b) { return a += b; }
    friend Mass operator-(Mass a, const Mass& b) { return a -= b; }
    friend Mass operator*(const Rational& k, const Mass& m);
};

} // namespace cakecut
