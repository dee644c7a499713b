#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>

#include "cs4kit/cs4kit.hpp"
#include "test_util.hpp"

using namespace cs4kit;

namespace {

CheckResult check_sample(Logic l, const std::string& name) {
    return check_proof(l, parse_proof_text(testutil::read_sample(name)));
}

}  // namespace

TEST_CASE("the axiom catalog matches instances one-sidedly") {
    auto subst_of = [](const char* axiom, const char* instance) {
        return match_axiom(axiom, parse(instance));
    };

    auto a1 = subst_of("A1", "p -> (q -> p)");
    REQUIRE(a1.has_value());
    CHECK(a1->at("phi") == parse("p"));
    CHECK(a1->at("psi") == parse("q"));

    CHECK(subst_of("A1", "(p & q) -> (false -> (p & q))").has_value());
    CHECK_FALSE(subst_of("A1", "p -> (q -> q)").has_value());
    CHECK_FALSE(subst_of("A1", "p -> q").has_value());

    auto tbox = subst_of("TBOX", "[](p & q) -> (p & q)");
    REQUIRE(tbox.has_value());
    CHECK(tbox->at("phi") == parse("p & q"));
    CHECK_FALSE(subst_of("TBOX", "[]p -> q").has_value());

    CHECK(subst_of("4DIA", "<><>(p | q) -> <>(p | q)").has_value());
    CHECK_FALSE(subst_of("4DIA", "<><>p -> <>q").has_value());
    CHECK(subst_of("KBOX", "[](p -> q) -> ([]p -> []q)").has_value());
    CHECK_FALSE(subst_of("KBOX", "[](p -> q) -> ([]q -> []p)").has_value());
    CHECK(subst_of("N", "<>false -> false").has_value());
    CHECK_FALSE(subst_of("N", "<>p -> false").has_value());
    CHECK(subst_of("FS", "(<>p -> []q) -> [](p -> q)").has_value());
    CHECK(subst_of("CD", "[](p | q) -> ([]p | <>q)").has_value());
    CHECK(subst_of("GD", "(p -> q) | (q -> p)").has_value());
    CHECK_FALSE(subst_of("GD", "(p -> q) | (p -> q)").has_value());

    CHECK_THROWS_AS(match_axiom("A0", parse("p")), std::invalid_argument);
    CHECK(find_schema("KDIA") != nullptr);
    CHECK(find_schema("B") == nullptr);
    CHECK(axiom_catalog().size() == 20);
}

TEST_CASE("substitute then match recovers the substitution") {
    std::mt19937_64 rng(606);
    for (const AxiomSchema& schema : axiom_catalog()) {
        for (int it = 0; it < 10; ++it) {
            Substitution subst;
            for (const std::string& mv : variables_of(schema.pattern))
                subst[mv] = random_formula(rng, 3, 3);
            Formula instance = substitute(schema.pattern, subst);
            auto back = match_axiom(schema.name, instance);
            CAPTURE(schema.name, render(instance));
            REQUIRE(back.has_value());
            // matching scans left to right, so equal instances can induce a
            // merged substitution; re-substituting must reproduce the instance
            CHECK(substitute(schema.pattern, *back) == instance);
        }
    }
}

TEST_CASE("axiom availability per logic") {
    auto names = [](Logic l) {
        auto v = axioms_of(l);
        return std::set<std::string>(v.begin(), v.end());
    };
    std::set<std::string> cs4 = names(Logic::CS4), is4 = names(Logic::IS4),
                          s4i = names(Logic::S4I), gs4 = names(Logic::GS4);

    CHECK(cs4.size() == 15);
    CHECK_FALSE(cs4.count("FS"));
    CHECK_FALSE(cs4.count("DP"));
    CHECK_FALSE(cs4.count("N"));
    CHECK_FALSE(cs4.count("CD"));
    CHECK_FALSE(cs4.count("GD"));

    CHECK(std::includes(is4.begin(), is4.end(), cs4.begin(), cs4.end()));
    CHECK(std::includes(s4i.begin(), s4i.end(), cs4.begin(), cs4.end()));
    CHECK(std::includes(gs4.begin(), gs4.end(), is4.begin(), is4.end()));

    CHECK(is4.count("FS"));
    CHECK(is4.count("DP"));
    CHECK(is4.count("N"));
    CHECK_FALSE(is4.count("CD"));
    CHECK_FALSE(is4.count("GD"));

    CHECK(s4i.count("CD"));
    CHECK(s4i.count("DP"));
    CHECK(s4i.count("N"));
    CHECK_FALSE(s4i.count("FS"));
    CHECK_FALSE(s4i.count("GD"));

    CHECK(gs4.count("GD"));
    CHECK(gs4.count("FS"));
    CHECK_FALSE(gs4.count("CD"));
}

TEST_CASE("the bundled sample proofs check out") {
    for (Logic l : {Logic::CS4, Logic::IS4, Logic::S4I, Logic::GS4}) {
        CAPTURE(to_string(l));
        CHECK(check_sample(l, "nec_chain.pf").accepted);
        CHECK(check_sample(l, "tbox.pf").accepted);
        CHECK(check_sample(l, "fourdia.pf").accepted);
        CHECK(check_sample(l, "mp_chain.pf").accepted);
    }
    CHECK(check_sample(Logic::IS4, "is4_fs.pf").accepted);
    CHECK(check_sample(Logic::GS4, "is4_fs.pf").accepted);

    CheckResult cs4 = check_sample(Logic::CS4, "is4_fs.pf");
    CHECK_FALSE(cs4.accepted);
    CHECK(cs4.line == 1);
    CHECK(cs4.reason.find("not available in CS4") != std::string::npos);
    CHECK_FALSE(check_sample(Logic::S4I, "is4_fs.pf").accepted);
}

TEST_CASE("rejection reasons pinpoint the offending line") {
    SECTION("not an instance") {
        Proof p = parse_proof_text("1. []p -> [][]q ; axiom 4BOX\n");
        CheckResult r = check_proof(Logic::CS4, p);
        CHECK_FALSE(r.accepted);
        CHECK(r.line == 1);
        CHECK(r.reason == "not an instance of 4BOX");
    }
    SECTION("unknown axiom") {
        Proof p = parse_proof_text("1. p -> p ; axiom ZZ\n");
        CheckResult r = check_proof(Logic::CS4, p);
        CHECK_FALSE(r.accepted);
        CHECK(r.reason.find("unknown axiom") != std::string::npos);
    }
    SECTION("modus ponens must cite earlier lines") {
        Proof p = parse_proof_text(
            "1. []p -> [][]p ; axiom 4BOX\n"
            "2. p -> p ; mp 1 1\n");
        CheckResult r = check_proof(Logic::CS4, p);
        CHECK_FALSE(r.accepted);
        CHECK(r.line == 2);  // line 1 does not match its own antecedent
        CHECK(r.reason.find("antecedent") != std::string::npos);

        Proof fwd = parse_proof_text("1. p -> p ; mp 1 1\n");
        CheckResult rf = check_proof(Logic::CS4, fwd);
        CHECK_FALSE(rf.accepted);
        CHECK(rf.reason.find("earlier lines") != std::string::npos);
    }
    SECTION("modus ponens shape errors") {
        Proof p = parse_proof_text(
            "1. p -> (q -> p) ; axiom A1\n"
            "2. p -> (q -> p) ; axiom A1\n"
            "3. q -> p ; mp 1 2\n");
        CheckResult r = check_proof(Logic::CS4, p);
        CHECK_FALSE(r.accepted);
        CHECK(r.line == 3);
        CHECK(r.reason.find("does not match the antecedent") != std::string::npos);

        Proof wrongconc = parse_proof_text(
            "1. p -> (q -> p) ; axiom A1\n"
            "2. (p -> (q -> p)) -> (r -> (p -> (q -> p))) ; axiom A1\n"
            "3. p -> (q -> p) ; mp 2 1\n");
        CheckResult rc = check_proof(Logic::CS4, wrongconc);
        CHECK_FALSE(rc.accepted);
        CHECK(rc.line == 3);
        CHECK(rc.reason.find("consequent") != std::string::npos);

        Proof notimp = parse_proof_text(
            "1. p -> (p | q) ; axiom A6\n"
            "2. (p & q) -> p ; axiom A4\n"
            "3. p ; mp 3 1\n");
        CheckResult rn = check_proof(Logic::CS4, notimp);
        CHECK_FALSE(rn.accepted);
        CHECK(rn.reason.find("earlier lines") != std::string::npos);
    }
    SECTION("necessitation") {
        Proof p = parse_proof_text(
            "1. p -> (q -> p) ; axiom A1\n"
            "2. [](q -> p) ; nec 1\n");
        CheckResult r = check_proof(Logic::CS4, p);
        CHECK_FALSE(r.accepted);
        CHECK(r.line == 2);
        CHECK(r.reason.find("not [] of line 1") != std::string::npos);

        Proof fwd = parse_proof_text("1. []p ; nec 1\n");
        CHECK_FALSE(check_proof(Logic::CS4, fwd).accepted);
    }
    SECTION("logic gating") {
        Proof gd = parse_proof_text("1. (p -> q) | (q -> p) ; axiom GD\n");
        CHECK_FALSE(check_proof(Logic::IS4, gd).accepted);
        CHECK(check_proof(Logic::GS4, gd).accepted);

        Proof cd = parse_proof_text("1. [](p | q) -> ([]p | <>q) ; axiom CD\n");
        CHECK_FALSE(check_proof(Logic::IS4, cd).accepted);
        CHECK(check_proof(Logic::S4I, cd).accepted);

        Proof dp = parse_proof_text("1. <>(p | q) -> (<>p | <>q) ; axiom DP\n");
        CHECK_FALSE(check_proof(Logic::CS4, dp).accepted);
        CHECK(check_proof(Logic::IS4, dp).accepted);
        CHECK(check_proof(Logic::S4I, dp).accepted);
        CHECK(check_proof(Logic::GS4, dp).accepted);
    }
    SECTION("the empty proof is accepted") {
        CHECK(check_proof(Logic::CS4, Proof{}).accepted);
    }
}

TEST_CASE("proof text parsing") {
    Proof p = parse_proof_text(testutil::read_sample("mp_chain.pf"));
    REQUIRE(p.lines.size() == 3);
    CHECK(p.lines[0].just.kind == Justification::Kind::Axiom);
    CHECK(p.lines[0].just.axiom == "A1");
    CHECK(p.lines[2].just.kind == Justification::Kind::MP);
    CHECK(p.lines[2].just.i == 2);
    CHECK(p.lines[2].just.j == 1);
    CHECK(p.lines[2].formula == parse("r -> (p -> (q -> p))"));

    // print and reparse is the identity
    Proof back = parse_proof_text(print_proof_text(p));
    REQUIRE(back.lines.size() == p.lines.size());
    for (std::size_t i = 0; i < p.lines.size(); ++i) {
        CHECK(back.lines[i].formula == p.lines[i].formula);
        CHECK(back.lines[i].just.kind == p.lines[i].just.kind);
        CHECK(back.lines[i].just.axiom == p.lines[i].just.axiom);
        CHECK(back.lines[i].just.i == p.lines[i].just.i);
        CHECK(back.lines[i].just.j == p.lines[i].just.j);
    }

    SECTION("format errors") {
        CHECK_THROWS_AS(parse_proof_text("2. p -> p ; axiom A1\n"), ParseError);
        CHECK_THROWS_AS(parse_proof_text("1. p -> p axiom A1\n"), ParseError);
        CHECK_THROWS_AS(parse_proof_text("1. p -> ; axiom A1\n"), ParseError);
        CHECK_THROWS_AS(parse_proof_text("1. p -> p ; lemma A1\n"), ParseError);
        CHECK_THROWS_AS(parse_proof_text("1. p -> p ; mp 1\n"), ParseError);
        CHECK_THROWS_AS(parse_proof_text("1. p -> p ; nec\n"), ParseError);
        CHECK_THROWS_AS(parse_proof_text("1. p -> p ; axiom A1 junk\n"), ParseError);
        CHECK_THROWS_AS(parse_proof_text("x. p -> p ; axiom A1\n"), ParseError);
        try {
            parse_proof_text("1. p -> (q -> p) ; axiom A1\n3. p ; nec 1\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.pos == 2);  // reported by input line
            CHECK(std::string(e.what()).find("consecutive") != std::string::npos);
        }
    }
}

TEST_CASE("single mutations of axiom lines never slip through") {
    // mutate one node of an axiom instance inside each bundled proof; the
    // mutated proof must be rejected, either by the schema match itself or by
    // a later line consuming the original formula
    auto mutants = [](const Formula& f) {
        std::vector<Formula> out;
        struct Walk {
            static Formula rebuild(const Formula& g, int target, int& counter,
                                   const Formula& replacement) {
                if (counter++ == target) return replacement;
                switch (g.kind()) {
                    case Conn::Var:
                    case Conn::Falsum: return g;
                    case Conn::Dia: return Formula::dia(rebuild(g.body(), target, counter, replacement));
                    case Conn::Box: return Formula::box(rebuild(g.body(), target, counter, replacement));
                    case Conn::And:
                        return Formula::conj(rebuild(g.lhs(), target, counter, replacement),
                                             rebuild(g.rhs(), target, counter, replacement));
                    case Conn::Or:
                        return Formula::disj(rebuild(g.lhs(), target, counter, replacement),
                                             rebuild(g.rhs(), target, counter, replacement));
                    case Conn::Implies:
                        return Formula::implies(rebuild(g.lhs(), target, counter, replacement),
                                                rebuild(g.rhs(), target, counter, replacement));
                }
                return g;
            }
        };
        // collect each node position with a type-changing replacement
        std::vector<Formula> nodes;
        struct Collect {
            static void go(const Formula& g, std::vector<Formula>& nodes) {
                nodes.push_back(g);
                if (g.is_binary()) {
                    go(g.lhs(), nodes);
                    go(g.rhs(), nodes);
                } else if (g.is_unary()) {
                    go(g.body(), nodes);
                }
            }
        };
        Collect::go(f, nodes);
        for (int pos = 0; pos < static_cast<int>(nodes.size()); ++pos) {
            const Formula& n = nodes[pos];
            std::vector<Formula> repl;
            switch (n.kind()) {
                case Conn::Var:
                    repl.push_back(Formula::var(n.var_name() + "x"));
                    repl.push_back(Formula::falsum());
                    break;
                case Conn::Falsum:
                    repl.push_back(Formula::var("zz"));
                    break;
                case Conn::And: repl.push_back(Formula::disj(n.lhs(), n.rhs())); break;
                case Conn::Or: repl.push_back(Formula::implies(n.lhs(), n.rhs())); break;
                case Conn::Implies: repl.push_back(Formula::conj(n.lhs(), n.rhs())); break;
                case Conn::Dia: repl.push_back(Formula::box(n.body())); break;
                case Conn::Box: repl.push_back(Formula::dia(n.body())); break;
            }
            for (const Formula& r : repl) {
                int counter = 0;
                out.push_back(Walk::rebuild(f, pos, counter, r));
            }
        }
        return out;
    };

    for (const char* name :
         {"nec_chain.pf", "tbox.pf", "fourdia.pf", "is4_fs.pf", "mp_chain.pf"}) {
        Proof proof = parse_proof_text(testutil::read_sample(name));
        Logic logic = (std::string(name) == "is4_fs.pf") ? Logic::IS4 : Logic::CS4;
        REQUIRE(check_proof(logic, proof).accepted);
        int mutated = 0;
        for (std::size_t ln = 0; ln < proof.lines.size(); ++ln) {
            if (proof.lines[ln].just.kind != Justification::Kind::Axiom) continue;
            for (const Formula& mut : mutants(proof.lines[ln].formula)) {
                if (mut == proof.lines[ln].formula) continue;
                Proof copy = proof;
                copy.lines[ln].formula = mut;
                ++mutated;
                CAPTURE(name, ln, render(mut));
                CHECK_FALSE(check_proof(logic, copy).accepted);
            }
        }
        CHECK(mutated > 0);
    }
}
