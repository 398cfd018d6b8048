#include "cakecut/fixtures.hpp"

#include "cakecut/errors.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace cakecut {

Valuation make_uniform() {
    std::vector<Breakpoint> bps{{0, 0, 0, 0}, {1, 1, 1, 1}};
    std::vector<Segment> segs{Segment::linear(1)};
    return make_valuation(GeneralizedCdf::make(std::move(bps), std::move(segs)),
                          Convention::Stieltjes, "uniform");
}

Valuation make_exF(const Rational& lambda) {
    if (lambda <= 0 || lambda >= 1)
        throw ValidationError("exF needs lambda in (0,1), got " + to_string(lambda));
    Rational half(1, 2);
    std::vector<Breakpoint> bps{
        {0, 0, 0, 0},
        {half, lambda / 2, half, 1 - lambda / 2},
        {1, 1, 1, 1},
    };
    std::vector<Segment> segs{Segment::linear(lambda), Segment::linear(lambda)};
    return make_valuation(GeneralizedCdf::make(std::move(bps), std::move(segs)),
                          Convention::ContentSingletonZero, "exF(" + to_string(lambda) + ")");
}

Valuation make_exG(const Rational& eps) {
    if (eps <= 0 || eps >= Rational(1, 2))
        throw ValidationError("exG needs eps in (0,1/2), got " + to_string(eps));
    std::vector<Breakpoint> bps{
        {0, 0, 0, eps},
        {1, 1 - eps, 1, 1},
    };
    std::vector<Segment> segs{Segment::linear(1 - 2 * eps)};
    return make_valuation(GeneralizedCdf::make(std::move(bps), std::move(segs)),
                          Convention::ContentSingletonZero, "exG(" + to_string(eps) + ")");
}

Valuation make_cantor(int depth) {
    std::vector<Breakpoint> bps{{0, 0, 0, 0}, {1, 1, 1, 1}};
    std::vector<Segment> segs{Segment::cantor(1)};
    return make_valuation(GeneralizedCdf::make(std::move(bps), std::move(segs), depth),
                          Convention::Stieltjes, "cantor");
}

Valuation make_dirac(const Rational& x) {
    if (x < 0 || x > 1) throw ValidationError("dirac point " + to_string(x) + " outside [0,1]");
    std::vector<Breakpoint> bps;
    std::vector<Segment> segs;
    if (x == 0) {
        bps = {{0, 0, 1, 1}, {1, 1, 1, 1}};
        segs = {Segment::linear(0)};
    } else if (x == 1) {
        bps = {{0, 0, 0, 0}, {1, 0, 1, 1}};
        segs = {Segment::linear(0)};
    } else {
        bps = {{0, 0, 0, 0}, {x, 0, 1, 1}, {1, 1, 1, 1}};
        segs = {Segment::linear(0), Segment::linear(0)};
    }
    return make_valuation(GeneralizedCdf::make(std::move(bps), std::move(segs)),
                          Convention::Stieltjes, "dirac(" + to_string(x) + ")");
}

Valuation make_sq(int knots) {
    if (knots < 1) throw ValidationError("sq needs at least one panel");
    if (knots > 10000) throw CapacityError("sq grid of " + std::to_string(knots) + " panels");
    std::vector<Breakpoint> bps;
    std::vector<Segment> segs;
    Rational k(knots);
    for (int i = 0; i <= knots; ++i) {
        Rational v = Rational(i) * Rational(i) / (k * k);
        bps.push_back({Rational(i) / k, v, v, v});
        if (i < knots) segs.push_back(Segment::linear(Rational(2 * i + 1) / k));
    }
    return make_valuation(GeneralizedCdf::make(std::move(bps), std::move(segs)),
                          Convention::Stieltjes, "sq(" + std::to_string(knots) + ")");
}

Valuation make_mix(const std::vector<std::pair<Rational, Valuation>>& parts) {
    if (parts.empty()) throw ValidationError("mix needs at least one part");
    Convention conv = parts.front().second.convention;
    int depth = kDefaultCantorDepth;
    for (const auto& [w, v] : parts) {
        if (w <= 0) throw ValidationError("mix weight " + to_string(w) + " must be positive");
        if (v.convention != conv)
            throw ValidationError("mix parts use different conventions (" + v.name + ")");
        depth = std::max(depth, v.cdf.cantor_depth());
    }

    std::vector<Rational> xs;
    for (const auto& [w, v] : parts)
        for (const auto& b : v.cdf.breakpoints()) xs.push_back(b.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    for (const auto& [w, v] : parts) {
        const auto& bps = v.cdf.breakpoints();
        const auto& segs = v.cdf.segments();
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (segs[i].shape != SegmentShape::Cantor || segs[i].mass == 0) continue;
            for (const auto& x : xs)
                if (bps[i].x < x && x < bps[i + 1].x)
                    throw ValidationError("a breakpoint at " + to_string(x) +
                                          " splits a cantor segment of " + v.name);
        }
    }

    std::vector<Breakpoint> out_bps;
    for (const auto& x : xs) {
        Breakpoint b{x, 0, 0, 0};
        for (const auto& [w, v] : parts) {
            b.left_val += w * v.cdf.eval_at(x, Side::Left).value();
            b.at_val += w * v.cdf.eval_at(x, Side::At).value();
            b.right_val += w * v.cdf.eval_at(x, Side::Right).value();
        }
        out_bps.push_back(std::move(b));
    }

    std::vector<Segment> out_segs;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        Rational mid = (xs[i] + xs[i + 1]) / 2;
        Rational slope = 0, cantor_mass = 0;
        for (const auto& [w, v] : parts) {
            const Segment& s = v.cdf.segments()[v.cdf.segment_index(mid)];
            if (s.shape == SegmentShape::Linear)
                slope += w * s.slope;
            else
                cantor_mass += w * s.mass;
        }
        if (cantor_mass > 0 && slope != 0)
            throw ValidationError("cantor and linear mass overlap on (" + to_string(xs[i]) + "," +
                                  to_string(xs[i + 1]) +
                                  "); the segment grammar has no hybrid shape");
        out_segs.push_back(cantor_mass > 0 ? Segment::cantor(cantor_mass)
                                           : Segment::linear(slope));
    }

    std::string name = "mix(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) name += "+";
        name += to_string(parts[i].first) + "*" + parts[i].second.name;
    }
    name += ")";
    return make_valuation(GeneralizedCdf::make(std::move(out_bps), std::move(out_segs), depth),
                          conv, std::move(name));
}

namespace {

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    Valuation parse() {
        Valuation v = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw ValidationError("trailing input after fixture expression: '" + s_.substr(pos_) +
                                  "'");
        return v;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const std::string& where) {
        if (!eat(c))
            throw ValidationError(std::string("expected '") + c + "' " + where + " in fixture '" +
                                  s_ + "'");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_)
            throw ValidationError("expected a fixture name at '" + s_.substr(start) + "'");
        return s_.substr(start, pos_ - start);
    }

    Rational rational() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/' ||
                s_[pos_] == '.' || s_[pos_] == '-'))
            ++pos_;
        if (start == pos_)
            throw ValidationError("expected a number at '" + s_.substr(start) + "'");
        return parse_rational(s_.substr(start, pos_ - start));
    }

    int integer(const std::string& what) {
        Rational r = rational();
        BigInt n = entier(r);
        if (Rational(n) != r || n < 0 || n > 1000000)
            throw ValidationError(what + " must be a small nonnegative integer, got " +
                                  to_string(r));
        return n.convert_to<int>();
    }

    Valuation expr() {
        std::string name = ident();
        if (name == "uniform") return make_uniform();
        if (name == "cantor") return make_cantor();
        if (name == "dirac") {
            expect('(', "after dirac");
            Rational x = rational();
            expect(')', "after the dirac point");
            return make_dirac(x);
        }
        if (name == "exF") {
            expect('(', "after exF");
            Rational l = rational();
            expect(')', "after the exF parameter");
            return make_exF(l);
        }
        if (name == "exG") {
            expect('(', "after exG");
            Rational e = rational();
            expect(')', "after the exG parameter");
            return make_exG(e);
        }
        if (name == "sq") {
            expect('(', "after sq");
            int k = integer("sq panel count");
            expect(')', "after the sq panel count");
            return make_sq(k);
        }
        if (name == "mix") {
            expect('(', "after mix");
            std::vector<std::pair<Rational, Valuation>> parts;
            do {
                Rational w = rational();
                expect('*', "between a mix weight and its fixture");
                parts.emplace_back(w, expr());
            } while (eat('+'));
            expect(')', "closing mix");
            return make_mix(parts);
        }
        throw ValidationError("unknown fixture '" + name + "'");
    }
};

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

[[noreturn]] void fail_line(int n, const std::string& msg) {
    throw ValidationError("fixture file line " + std::to_string(n) + ": " + msg);
}

} // namespace

Valuation parse_fixture(const std::string& spec) {
    return ExprParser(spec).parse();
}

std::map<std::string, Valuation> parse_fixture_file(const std::string& text) {
    std::map<std::string, Valuation> out;
    std::istringstream in(text);
    std::string line;
    int n = 0;

    std::string cur_name;
    Convention cur_conv = Convention::Stieltjes;
    bool cur_probability = false;
    int cur_header_line = 0;
    bool in_block = false;
    std::vector<Breakpoint> bps;
    std::vector<Segment> segs;

    auto insert = [&](int at, const std::string& name, Valuation v) {
        if (out.count(name)) fail_line(at, "duplicate fixture name '" + name + "'");
        out.emplace(name, std::move(v));
    };

    while (std::getline(in, line)) {
        ++n;
        auto tokens = tokenize(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;

        if (!in_block) {
            if (tokens[0] != "fixture")
                fail_line(n, "expected 'fixture', got '" + tokens[0] + "'");
            if (tokens.size() < 2) fail_line(n, "fixture needs a name");
            cur_name = tokens[1];
            if (tokens.size() >= 3 && tokens[2] == "=") {
                std::string expr;
                for (std::size_t i = 3; i < tokens.size(); ++i) expr += tokens[i];
                if (expr.empty()) fail_line(n, "nothing after '='");
                std::optional<Valuation> v;
                try {
                    v = parse_fixture(expr);
                } catch (const ValidationError& e) {
                    fail_line(n, e.what());
                }
                v->name = cur_name;
                insert(n, cur_name, std::move(*v));
                continue;
            }
            cur_conv = Convention::Stieltjes;
            cur_probability = false;
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                if (tokens[i] == "stieltjes")
                    cur_conv = Convention::Stieltjes;
                else if (tokens[i] == "content")
                    cur_conv = Convention::ContentSingletonZero;
                else if (tokens[i] == "probability")
                    cur_probability = true;
                else
                    fail_line(n, "unknown fixture attribute '" + tokens[i] + "'");
            }
            cur_header_line = n;
            in_block = true;
            bps.clear();
            segs.clear();
            continue;
        }

        if (tokens[0] == "bp") {
            if (tokens.size() != 5) fail_line(n, "bp needs: x left at right");
            try {
                bps.push_back({parse_rational(tokens[1]), parse_rational(tokens[2]),
                               parse_rational(tokens[3]), parse_rational(tokens[4])});
            } catch (const ValidationError& e) {
                fail_line(n, e.what());
            }
        } else if (tokens[0] == "seg") {
            if (tokens.size() != 3) fail_line(n, "seg needs: linear slope | cantor mass");
            if (tokens[1] != "linear" && tokens[1] != "cantor")
                fail_line(n, "unknown segment shape '" + tokens[1] + "'");
            try {
                segs.push_back(tokens[1] == "linear" ? Segment::linear(parse_rational(tokens[2]))
                                                     : Segment::cantor(parse_rational(tokens[2])));
            } catch (const ValidationError& e) {
                fail_line(n, e.what());
            }
        } else if (tokens[0] == "end") {
            std::optional<Valuation> v;
            try {
                v = make_valuation(GeneralizedCdf::make(std::move(bps), std::move(segs)),
                                   cur_conv, cur_name);
            } catch (const ValidationError& e) {
                fail_line(n, std::string("fixture '") + cur_name + "': " + e.what());
            }
            if (cur_probability && v->total_mass() != 1)
                fail_line(n, "fixture '" + cur_name + "' declared probability but has mass " +
                                 to_string(v->total_mass()));
            insert(n, cur_name, std::move(*v));
            in_block = false;
        } else {
            fail_line(n, "expected bp, seg or end, got '" + tokens[0] + "'");
        }
    }
    if (in_block)
        fail_line(cur_header_line, "fixture '" + cur_name + "' not closed with 'end'");
    return out;
}

std::string serialize_fixture(const Valuation& v) {
    std::string out = "fixture " + (v.name.empty() ? std::string("unnamed") : v.name) + " " +
                      to_string(v.convention) + "\n";
    const auto& bps = v.cdf.breakpoints();
    const auto& segs = v.cdf.segments();
    for (std::size_t i = 0; i < bps.size(); ++i) {
        out += "bp " + to_string(bps[i].x) + " " + to_string(bps[i].left_val) + " " +
               to_string(bps[i].at_val) + " " + to_string(bps[i].right_val) + "\n";
        if (i < segs.size()) {
            if (segs[i].shape == SegmentShape::Linear)
                out += "seg linear " + to_string(segs[i].slope) + "\n";
            else
                out += "seg cantor " + to_string(segs[i].mass) + "\n";
        }
    }
    out += "end\n";
    return out;
}

Valuation resolve_fixture(const std::string& spec,
                          const std::map<std::string, Valuation>& named) {
    auto it = named.find(spec);
    if (it != named.end()) return it->second;
    return parse_fixture(spec);
}

} // namespace cakecut
