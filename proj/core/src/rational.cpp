#include "cakecut/rational.hpp"

#include "cakecut/errors.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <sstream>

namespace cakecut {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// The bignum string constructor treats a leading 0 as an octal prefix.
BigInt digits_to_int(const std::string& s) {
    auto nz = s.find_first_not_of('0');
    if (nz == std::string::npos) return BigInt(0);
    return BigInt(s.substr(nz));
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty()) throw ValidationError("empty number in '" + text + "'");

    Rational value;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ValidationError("malformed fraction '" + text + "'");
        BigInt d = digits_to_int(den);
        if (d == 0) throw ValidationError("zero denominator in '" + text + "'");
        value = Rational(digits_to_int(num), d);
    } else if (dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
            throw ValidationError("malformed decimal '" + text + "'");
        BigInt scale = 1;
        for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
        value = Rational(digits_to_int(whole) * scale + digits_to_int(frac), scale);
    } else {
        if (!all_digits(s)) throw ValidationError("malformed number '" + text + "'");
        value = Rational(digits_to_int(s));
    }
    return negative ? -value : value;
}

std::string to_string(const Rational& r) {
    std::ostringstream out;
    out << r;
    return out.str();
}

std::string to_decimal_string(const Rational& r) {
    BigInt num = numerator(r);
    BigInt den = denominator(r);
    bool negative = num < 0;
    if (negative) num = -num;

    BigInt d = den;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d == 1) {
        int digits = std::max(twos, fives);
        BigInt scale = 1;
        for (int i = 0; i < digits; ++i) scale *= 10;
        BigInt scaled = num * scale / den;
        std::string body = scaled.str();
        std::string result;
        if (digits == 0) {
            result = body;
        } else {
            while (static_cast<int>(body.size()) <= digits) body.insert(body.begin(), '0');
            result = body.substr(0, body.size() - digits) + "." + body.substr(body.size() - digits);
            while (result.back() == '0') result.pop_back();
            if (result.back() == '.') result.pop_back();
        }
        return negative ? "-" + result : result;
    }

    std::ostringstream out;
    out.precision(17);
    out << to_double(r);
    return out.str();
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

BigInt entier(const Rational& r) {
    BigInt num = numerator(r);
    BigInt den = denominator(r);
    BigInt q = num / den;
    if (num < 0 && q * den != num) --q;
    return q;
}

const Rational& Mass::value() const {
    if (!exact()) throw PreconditionError("enclosure is not exact: [" + cakecut::to_string(lo) + ", " + cakecut::to_string(hi) + "]");
    return lo;
}

bool Mass::within(const Rational& r, const Rational& tol) const {
    return lo >= r - tol && hi <= r + tol;
}

Mass& Mass::operator+=(const Mass& o) {
    lo += o.lo;
    hi += o.hi;
    return *this;
}

Mass& Mass::operator-=(const Mass& o) {
    lo -= o.hi;
    hi -= o.lo;
    return *this;
}

Mass operator*(const Rational& k, const Mass& m) {
    if (k >= 0) return Mass(k * m.lo, k * m.hi);
    return Mass(k * m.hi, k * m.lo);
}

} // namespace cakecut
