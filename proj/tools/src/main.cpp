#include "cakecut/divisibility.hpp"
#include "cakecut/fixtures.hpp"
#include "cakecut/oracle.hpp"
#include "cakecut/slicing.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace cakecut;

namespace {

json jr(const Rational& r) {
    return to_string(r);
}

json jmass(const Mass& m) {
    json j;
    j["lo"] = jr(m.lo);
    j["hi"] = jr(m.hi);
    j["exact"] = m.exact();
    j["approx"] = to_double(m.midpoint());
    return j;
}

json jjump(const Jump& j) {
    return json{{"x", jr(j.x)}, {"mass", jr(j.mass)}, {"kind", to_string(j.kind)}};
}

json jdecision(const Decision& d) {
    json j;
    j["achievable"] = d.achievable;
    j["mode"] = d.mode == Decision::Mode::ExactSet ? "exactSet" : "increasingSequenceSup";
    j["alpha"] = jr(d.alpha);
    j["pieceMass"] = jr(d.piece_mass);
    j["target"] = jr(d.target);
    if (d.witness) {
        j["witness"] = d.witness->str();
        j["witnessValue"] = jmass(d.witness_value);
    }
    j["gapBelow"] = d.gap_below ? jr(*d.gap_below) : json(nullptr);
    j["gapAbove"] = d.gap_above ? jr(*d.gap_above) : json(nullptr);
    if (!d.sequence.empty()) {
        j["sequence"] = d.sequence;
        json samples = json::array();
        for (const auto& s : d.sequence_samples) samples.push_back(s.str());
        j["sequenceSamples"] = samples;
    }
    j["anchor"] = d.anchor;
    return j;
}

void emit(const json& j) {
    std::cout << j.dump(2) << "\n";
}

struct Options {
    std::vector<std::string> fixtures;
    std::string file;
    std::string set_text;
    std::string piece_text = "[0,1]";
    std::string alpha, target, epsilon, quantile, mesh, tol;
    std::size_t max_iter = 100;
    int samples = 50;
    int max_parts = 4;
    std::uint64_t seed = 0;
};

std::map<std::string, Valuation> load_named(const Options& o) {
    if (o.file.empty()) return {};
    std::ifstream in(o.file);
    if (!in) throw ValidationError("cannot open fixture file '" + o.file + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_fixture_file(buf.str());
}

Valuation one_fixture(const Options& o) {
    if (o.fixtures.size() != 1)
        throw ValidationError("expected exactly one --fixture, got " +
                              std::to_string(o.fixtures.size()));
    return resolve_fixture(o.fixtures.front(), load_named(o));
}

IntervalSet piece_of(const Options& o) {
    return parse_interval_set(o.piece_text);
}

void run_classify(const Options& o) {
    Valuation v = one_fixture(o);
    CdfClassification c = classify(v.cdf);
    MassReport mr = mass_report(v);
    json j;
    j["command"] = "classify";
    j["fixture"] = v.name;
    j["convention"] = to_string(v.convention);
    j["totalMass"] = jr(v.total_mass());
    j["rightContinuous"] = c.is_right_continuous;
    j["continuous"] = c.is_continuous;
    json jumps = json::array();
    for (const auto& ji : c.jumps)
        jumps.push_back(json{
            {"x", jr(ji.x)}, {"leftGap", jr(ji.left_gap)}, {"rightGap", jr(ji.right_gap)}});
    j["cdfJumps"] = jumps;
    json report;
    json mj = json::array();
    for (const auto& jp : mr.jumps) mj.push_back(jjump(jp));
    report["jumps"] = mj;
    report["jumpMass"] = jr(mr.jump_mass);
    report["continuousMass"] = jr(mr.continuous_mass);
    report["total"] = jr(mr.total);
    j["massReport"] = report;
    j["anchor"] = "one-sided limits and jump inventory";
    emit(j);
}

void run_eval(const Options& o) {
    Valuation v = one_fixture(o);
    IntervalSet s = parse_interval_set(o.set_text);
    json j;
    j["command"] = "eval";
    j["fixture"] = v.name;
    j["convention"] = to_string(v.convention);
    j["set"] = s.str();
    j["value"] = jmass(eval_set(v, s));
    j["anchor"] = "interval-sum evaluation under the " + to_string(v.convention) + " convention";
    emit(j);
}

void run_divide(const Options& o) {
    Valuation v = one_fixture(o);
    IntervalSet piece = piece_of(o);
    Rational alpha = parse_rational(o.alpha);
    IntervalSet result = exact_divide(v, piece, alpha);
    json j;
    j["command"] = "divide";
    j["fixture"] = v.name;
    j["piece"] = piece.str();
    j["alpha"] = jr(alpha);
    j["pieceValue"] = jmass(eval_set(v, piece));
    j["result"] = result.str();
    j["resultValue"] = jmass(eval_set(v, result));
    j["anchor"] = "exact proportional sub-piece by leftmost quantile";
    emit(j);
}

void run_check(const Options& o, bool dd) {
    Valuation v = one_fixture(o);
    IntervalSet piece = piece_of(o);
    Rational alpha = parse_rational(o.alpha);
    Decision d = dd ? check_dd_target(v, piece, alpha) : check_d(v, piece, alpha);
    json j;
    j["command"] = dd ? "check-dd" : "check-d";
    j["fixture"] = v.name;
    j["piece"] = piece.str();
    json dj = jdecision(d);
    j.update(dj);
    emit(j);
}

void run_min_parts(const Options& o) {
    Valuation v = one_fixture(o);
    Rational target = parse_rational(o.target);
    std::optional<int> n = min_interval_count(v, target, o.max_parts);
    json j;
    j["command"] = "min-parts";
    j["fixture"] = v.name;
    j["target"] = jr(target);
    j["maxParts"] = o.max_parts;
    j["minIntervalCount"] = n ? json(*n) : json(nullptr);
    j["anchor"] = "fewest intervals whose union hits the target exactly";
    emit(j);
}

void run_slice(const Options& o) {
    Valuation v = one_fixture(o);
    Slicing s = slice(v, parse_rational(o.epsilon));
    json j;
    j["command"] = "slice";
    j["fixture"] = v.name;
    j["epsilon"] = jr(s.epsilon);
    j["count"] = s.pieces.size();
    json pieces = json::array(), masses = json::array();
    for (const auto& p : s.pieces) pieces.push_back(p.str());
    for (const auto& m : s.masses) masses.push_back(jmass(m));
    j["pieces"] = pieces;
    j["masses"] = masses;
    j["anchor"] = "equal-mass slicing below epsilon";
    emit(j);
}

void run_greedy(const Options& o) {
    Valuation v = one_fixture(o);
    Rational eps = parse_rational(o.epsilon);
    GreedyTrace t = greedy_slicing(v, eps, o.max_iter);
    json j;
    j["command"] = "greedy";
    j["fixture"] = v.name;
    j["epsilon"] = jr(eps);
    j["maxIter"] = o.max_iter;
    json steps = json::array();
    for (const auto& s : t.steps)
        steps.push_back(json{{"pieceChosen", s.piece_chosen.str()},
                             {"pieceMass", jmass(s.piece_mass)},
                             {"remainderMass", jmass(s.remainder_mass)},
                             {"cOfRemainder", jr(s.c_of_remainder)}});
    j["steps"] = steps;
    j["terminated"] = t.terminated;
    j["finalRemainderMass"] = jmass(t.final_remainder_mass);
    j["remainderLimit"] = jr(t.remainder_limit);
    j["limitIsZero"] = t.limit_is_zero;
    j["anchor"] = "greedy extraction of admissible sub-pieces";
    emit(j);
}

void run_decompose(const Options& o) {
    Valuation v = one_fixture(o);
    Decomposition d = decompose(v);
    json j;
    j["command"] = "decompose";
    j["fixture"] = v.name;
    json atoms = json::array();
    for (const auto& a : d.atoms) atoms.push_back(json{{"x", jr(a.x)}, {"mass", jr(a.mass)}});
    j["atoms"] = atoms;
    j["sliceableRemainder"] = json{{"mass", jr(d.remainder.total_mass())},
                                   {"fixture", serialize_fixture(d.remainder)}};
    j["anchor"] = "atoms split from the sliceable continuous part";
    emit(j);
}

void run_table(const Options& o) {
    auto named = load_named(o);
    std::vector<std::string> specs = o.fixtures;
    if (specs.empty())
        specs = {"uniform",
                 "cantor",
                 "dirac(1/2)",
                 "mix(1/2*dirac(1/2)+1/2*uniform)",
                 "mix(3/10*dirac(1/4)+1/5*dirac(3/4)+1/2*uniform)",
                 "exF(1/10)",
                 "exG(1/20)"};
    std::vector<Valuation> vs;
    for (const auto& s : specs) vs.push_back(resolve_fixture(s, named));
    std::vector<TruthRow> rows = truth_table(vs, o.samples, o.seed);

    json j;
    j["command"] = "table";
    j["samples"] = o.samples;
    j["seed"] = o.seed;
    json rj = json::array();
    for (const auto& r : rows)
        rj.push_back(json{{"fixture", r.fixture},
                          {"convention", to_string(r.convention)},
                          {"atomFree", r.atom_free},
                          {"sliceable", r.sliceable},
                          {"dUniversal", r.d_universal},
                          {"ddUniversal", r.dd_universal},
                          {"theoremConsistent", r.theorem_consistent}});
    j["rows"] = rj;
    j["anchor"] = "divisibility truth table";
    emit(j);

    std::size_t w = 7;
    for (const auto& r : rows) w = std::max(w, r.fixture.size());
    auto cell = [](bool b) { return std::string(b ? "T" : "F"); };
    std::ostringstream t;
    t << std::string(w - 7, ' ') << "fixture  conv        atomFree  sliceable  dUniv  ddUniv  ok\n";
    for (const auto& r : rows)
        t << std::string(w - r.fixture.size(), ' ') << r.fixture << "  "
          << (r.convention == Convention::Stieltjes ? "stieltjes " : "content   ") << " "
          << cell(r.atom_free) << "         " << cell(r.sliceable) << "          "
          << cell(r.d_universal) << "      " << cell(r.dd_universal) << "       "
          << cell(r.theorem_consistent) << "\n";
    std::cerr << t.str();
}

void run_oracle(const Options& o) {
    Valuation v = one_fixture(o);
    Rational mesh = parse_rational(o.mesh.empty() ? "1/1024" : o.mesh);
    IntervalSet piece = piece_of(o);
    GridModel g = discretize(v, mesh, piece);

    json j;
    j["command"] = "oracle";
    j["fixture"] = v.name;
    j["mesh"] = jr(mesh);
    j["piece"] = piece.str();
    j["cells"] = g.cells.size();
    json toks = json::array();
    for (const auto& t : g.tokens)
        toks.push_back(json{{"x", jr(t.x)},
                            {"side", to_string(t.side)},
                            {"mass", jr(t.mass)},
                            {"cell", t.cell},
                            {"forced", t.forced}});
    j["tokens"] = toks;
    j["continuousTotal"] = jmass(g.continuous_total);

    bool asked = false;
    if (!o.target.empty()) {
        asked = true;
        Rational t = parse_rational(o.target);
        bool oracle = oracle_achievable(g, t);
        bool analytic = achievable_set(v, piece).achievable(t);
        j["target"] = jr(t);
        j["oracleAchievable"] = oracle;
        j["analyticAchievable"] = analytic;
        j["achievableAgree"] = oracle == analytic;
    }
    if (!o.epsilon.empty()) {
        asked = true;
        Rational e = parse_rational(o.epsilon);
        bool oracle = oracle_sliceable(g, e);
        bool analytic = is_sliceable(v).sliceable && v.total_mass() > 0;
        j["epsilon"] = jr(e);
        j["oracleSliceable"] = oracle;
        j["analyticSliceable"] = analytic;
    }
    if (!o.quantile.empty()) {
        asked = true;
        Rational p = parse_rational(o.quantile);
        Rational oracle = oracle_quantile(g, p);
        j["quantileLevel"] = jr(p);
        j["oracleQuantile"] = jr(oracle);
        if (classify(v.cdf).is_continuous) {
            Rational analytic = quantile_leftmost(v.cdf, p);
            j["analyticQuantile"] = jr(analytic);
            Rational diff = oracle > analytic ? oracle - analytic : analytic - oracle;
            j["quantileAgree"] = diff <= mesh;
        }
    }
    if (!asked)
        throw ValidationError("oracle needs at least one of --target, --epsilon, --quantile");
    j["anchor"] = "grid oracle cross-check";
    emit(j);
}

void run_plot(const Options& o) {
    Valuation v = one_fixture(o);
    Rational mesh = parse_rational(o.mesh.empty() ? "1/512" : o.mesh);
    if (mesh <= 0 || mesh > 1) throw ValidationError("plot mesh must lie in (0,1]");
    if (mesh < Rational(1, 65536))
        throw CapacityError("plot mesh " + to_string(mesh) + " is finer than 1/65536");
    std::vector<Rational> xs;
    for (Rational x = 0; x <= 1; x += mesh) xs.push_back(x);
    if (xs.back() != 1) xs.push_back(1);
    for (const auto& b : v.cdf.breakpoints()) xs.push_back(b.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::cout << "x,left,at,right\n";
    for (const auto& x : xs) {
        std::cout << to_decimal_string(x) << ","
                  << to_decimal_string(v.cdf.eval_at(x, Side::Left).midpoint()) << ","
                  << to_decimal_string(v.cdf.eval_at(x, Side::At).midpoint()) << ","
                  << to_decimal_string(v.cdf.eval_at(x, Side::Right).midpoint()) << "\n";
    }
}

void run_demo(const Options& o) {
    auto named = load_named(o);
    if (o.fixtures.size() < 2)
        throw ValidationError("demo-proportional needs at least two --fixture valuations");
    std::vector<Valuation> vs;
    for (const auto& s : o.fixtures) vs.push_back(resolve_fixture(s, named));
    for (const auto& v : vs) {
        SliceabilityReport rep = is_sliceable(v);
        if (!rep.sliceable)
            throw PreconditionError("valuation " + v.name + " carries a jump at " +
                                    to_string(rep.obstruction->x) + " (" +
                                    to_string(rep.obstruction->kind) + ", mass " +
                                    to_string(rep.obstruction->mass) +
                                    "); exact division needs an atom-free continuous measure");
        if (v.convention != Convention::Stieltjes)
            throw PreconditionError("valuation " + v.name +
                                    " is a content; the protocol needs measures");
        if (v.total_mass() != 1)
            throw ValidationError("valuation " + v.name + " has total mass " +
                                  to_string(v.total_mass()) + ", expected a probability measure");
    }

    std::size_t n = vs.size();
    std::vector<IntervalSet> alloc(n);
    std::function<void(std::vector<std::size_t>, const IntervalSet&)> go =
        [&](std::vector<std::size_t> agents, const IntervalSet& piece) {
            if (agents.size() == 1) {
                alloc[agents.front()] = piece;
                return;
            }
            std::size_t k = agents.size() / 2;
            Rational share(BigInt(k), BigInt(agents.size()));
            std::vector<std::pair<Rational, std::size_t>> cuts;
            for (std::size_t i : agents) {
                Rational pv = eval_set(vs[i], piece).midpoint();
                cuts.emplace_back(quantile_within(vs[i], piece, share * pv), i);
            }
            std::sort(cuts.begin(), cuts.end());
            Rational cut = cuts[k - 1].first;
            IntervalSet left = set_intersect(piece, normalize({make_interval(0, cut, true, true)}));
            IntervalSet right = set_difference(piece, left);
            std::vector<std::size_t> lo, hi;
            for (std::size_t i = 0; i < cuts.size(); ++i)
                (i < k ? lo : hi).push_back(cuts[i].second);
            go(std::move(lo), left);
            go(std::move(hi), right);
        };
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    go(std::move(all), normalize({make_interval(0, 1, true, true)}));

    Rational tol = o.tol.empty() ? Rational(1, BigInt(1) << 30) : parse_rational(o.tol);
    Rational floor = Rational(1, BigInt(n)) - tol;
    json j;
    j["command"] = "demo-proportional";
    j["agents"] = n;
    j["proportionalShare"] = jr(Rational(1, BigInt(n)));
    j["tol"] = jr(tol);
    json rows = json::array();
    bool all_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        Mass own = eval_set(vs[i], alloc[i]);
        bool ok = own.lo >= floor;
        all_ok = all_ok && ok;
        rows.push_back(json{{"agent", i},
                            {"fixture", vs[i].name},
                            {"piece", alloc[i].str()},
                            {"ownValue", jmass(own)},
                            {"proportional", ok}});
    }
    j["allocation"] = rows;
    j["proportional"] = all_ok;
    j["anchor"] = "proportional division by recursive halving";
    emit(j);
}

int run(int argc, char** argv) {
    CLI::App app{"finitely additive valuations on [0,1]: evaluation, divisibility, slicing"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd, bool many_fixtures = false) {
        auto* opt = cmd->add_option("--fixture", o.fixtures,
                                    "fixture expression or name from --file");
        if (!many_fixtures) opt->expected(1);
        cmd->add_option("--file", o.file, "fixture file with named valuations");
        return cmd;
    };

    auto* classify_cmd = add_common(app.add_subcommand("classify", "continuity and jump report"));
    auto* eval_cmd = add_common(app.add_subcommand("eval", "value of an interval set"));
    eval_cmd->add_option("--set", o.set_text, "interval set, e.g. \"(0,1/2] u {3/4}\"")
        ->required();
    auto* divide_cmd = add_common(app.add_subcommand("divide", "exact alpha sub-piece"));
    divide_cmd->add_option("--piece", o.piece_text, "base piece (default [0,1])");
    divide_cmd->add_option("--alpha", o.alpha, "share in [0,1]")->required();
    auto* checkd_cmd = add_common(app.add_subcommand("check-d", "exact-subset divisibility"));
    checkd_cmd->add_option("--piece", o.piece_text, "base piece (default [0,1])");
    checkd_cmd->add_option("--alpha", o.alpha, "share in [0,1]")->required();
    auto* checkdd_cmd =
        add_common(app.add_subcommand("check-dd", "divisibility along increasing sequences"));
    checkdd_cmd->add_option("--piece", o.piece_text, "base piece (default [0,1])");
    checkdd_cmd->add_option("--alpha", o.alpha, "share in [0,1]")->required();
    auto* minparts_cmd =
        add_common(app.add_subcommand("min-parts", "fewest intervals reaching a mass"));
    minparts_cmd->add_option("--target", o.target, "mass to hit exactly")->required();
    minparts_cmd->add_option("--max-parts", o.max_parts, "search bound (default 4)");
    auto* slice_cmd = add_common(app.add_subcommand("slice", "partition into sub-epsilon pieces"));
    slice_cmd->add_option("--epsilon", o.epsilon, "piece mass bound")->required();
    auto* greedy_cmd = add_common(app.add_subcommand("greedy", "instrumented greedy extraction"));
    greedy_cmd->add_option("--epsilon", o.epsilon, "target remainder mass")->required();
    greedy_cmd->add_option("--max-iter", o.max_iter, "step bound (default 100)");
    auto* decompose_cmd =
        add_common(app.add_subcommand("decompose", "atoms plus sliceable remainder"));
    auto* table_cmd = add_common(
        app.add_subcommand("table", "divisibility truth table (default fixture set)"), true);
    table_cmd->add_option("--samples", o.samples, "random probes per row (default 50)");
    table_cmd->add_option("--seed", o.seed, "probe seed (default 0)");
    auto* oracle_cmd = add_common(app.add_subcommand("oracle", "grid oracle cross-check"));
    oracle_cmd->add_option("--piece", o.piece_text, "base piece (default [0,1])");
    oracle_cmd->add_option("--mesh", o.mesh, "grid mesh (default 1/1024)");
    oracle_cmd->add_option("--target", o.target, "absolute mass to test");
    oracle_cmd->add_option("--epsilon", o.epsilon, "sliceability bound to test");
    oracle_cmd->add_option("--quantile", o.quantile, "cumulative level to invert");
    auto* plot_cmd = add_common(app.add_subcommand("plot", "CSV of one-sided cdf values"));
    plot_cmd->add_option("--mesh", o.mesh, "sample spacing (default 1/512)");
    auto* demo_cmd = add_common(
        app.add_subcommand("demo-proportional", "recursive-halving fair division"), true);
    demo_cmd->add_option("--tol", o.tol, "share tolerance (default 2^-30)");
    demo_cmd->add_option("--seed", o.seed, "unused; accepted for uniformity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (classify_cmd->parsed()) run_classify(o);
    if (eval_cmd->parsed()) run_eval(o);
    if (divide_cmd->parsed()) run_divide(o);
    if (checkd_cmd->parsed()) run_check(o, false);
    if (checkdd_cmd->parsed()) run_check(o, true);
    if (minparts_cmd->parsed()) run_min_parts(o);
    if (slice_cmd->parsed()) run_slice(o);
    if (greedy_cmd->parsed()) run_greedy(o);
    if (decompose_cmd->parsed()) run_decompose(o);
    if (table_cmd->parsed()) run_table(o);
    if (oracle_cmd->parsed()) run_oracle(o);
    if (plot_cmd->parsed()) run_plot(o);
    if (demo_cmd->parsed()) run_demo(o);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CapacityError& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return 4;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return 5;
    } catch (const ValidationError& e) {
        std::cerr << "validation: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "internal: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected: " << e.what() << "\n";
        return 1;
    }
}
