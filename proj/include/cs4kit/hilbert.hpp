#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "formula.hpp"
#include "model.hpp"

namespace cs4kit {

// Variables in a schema pattern are metavariables; instances substitute
// arbitrary formulas for them.
struct AxiomSchema {
    std::string name;
    Formula pattern;
};

inline const std::vector<AxiomSchema>& axiom_catalog() {
    static const std::vector<AxiomSchema> catalog = [] {
        Formula f = Formula::var("phi");
        Formula g = Formula::var("psi");
        Formula h = Formula::var("chi");
        using F = Formula;
        std::vector<AxiomSchema> c;
        c.push_back({"A1", F::implies(f, F::implies(g, f))});
        c.push_back({"A2", F::implies(F::implies(f, F::implies(g, h)),
                                      F::implies(F::implies(f, g), F::implies(f, h)))});
        c.push_back({"A3", F::implies(f, F::implies(g, F::conj(f, g)))});
        c.push_back({"A4", F::implies(F::conj(f, g), f)});
        c.push_back({"A5", F::implies(F::conj(f, g), g)});
        c.push_back({"A6", F::implies(f, F::disj(f, g))});
        c.push_back({"A7", F::implies(g, F::disj(f, g))});
        c.push_back({"A8", F::implies(F::implies(f, h),
                                      F::implies(F::implies(g, h),
                                                 F::implies(F::disj(f, g), h)))});
        c.push_back({"A9", F::implies(F::falsum(), f)});
        c.push_back({"KBOX", F::implies(F::box(F::implies(f, g)),
                                        F::implies(F::box(f), F::box(g)))});
        c.push_back({"KDIA", F::implies(F::box(F::implies(f, g)),
                                        F::implies(F::dia(f), F::dia(g)))});
        c.push_back({"TBOX", F::implies(F::box(f), f)});
        c.push_back({"TDIA", F::implies(f, F::dia(f))});
        c.push_back({"4BOX", F::implies(F::box(f), F::box(F::box(f)))});
        c.push_back({"4DIA", F::implies(F::dia(F::dia(f)), F::dia(f))});
        c.push_back({"DP", F::implies(F::dia(F::disj(f, g)),
                                      F::disj(F::dia(f), F::dia(g)))});
        c.push_back({"N", F::implies(F::dia(F::falsum()), F::falsum())});
        c.push_back({"FS", F::implies(F::implies(F::dia(f), F::box(g)),
                                      F::box(F::implies(f, g)))});
        c.push_back({"CD", F::implies(F::box(F::disj(f, g)),
                                      F::disj(F::box(f), F::dia(g)))});
        c.push_back({"GD", F::disj(F::implies(f, g), F::implies(g, f))});
        return c;
    }();
    return catalog;
}

inline const AxiomSchema* find_schema(const std::string& name) {
    for (const auto& s : axiom_catalog())
        if (s.name == name) return &s;
    return nullptr;
}

// Axioms available per logic. CS4 is the base; IS4 and S4I extend it
// incomparably and GS4 extends IS4.
inline std::vector<std::string> axioms_of(Logic l) {
    std::vector<std::string> names = {"A1",   "A2",   "A3",   "A4",   "A5",
                                      "A6",   "A7",   "A8",   "A9",   "KBOX",
                                      "KDIA", "TBOX", "TDIA", "4BOX", "4DIA"};
    switch (l) {
        case Logic::CS4: break;
        case Logic::IS4:
            names.insert(names.end(), {"FS", "DP", "N"});
            break;
        case Logic::S4I:
            names.insert(names.end(), {"DP", "N", "CD"});
            break;
        case Logic::GS4:
            names.insert(names.end(), {"FS", "DP", "N", "GD"});
            break;
    }
    return names;
}

using Substitution = std::map<std::string, Formula>;

namespace detail {

inline bool match_pattern(const Formula& pattern, const Formula& f, Substitution& subst) {
    switch (pattern.kind()) {
        case Conn::Var: {
            auto [it, fresh] = subst.emplace(pattern.var_name(), f);
            return fresh || it->second == f;
        }
        case Conn::Falsum:
            return f.kind() == Conn::Falsum;
        case Conn::Dia:
        case Conn::Box:
            return f.kind() == pattern.kind() && match_pattern(pattern.body(), f.body(), subst);
        default:
            return f.kind() == pattern.kind() &&
                   match_pattern(pattern.lhs(), f.lhs(), subst) &&
                   match_pattern(pattern.rhs(), f.rhs(), subst);
    }
}

}  // namespace detail

// Matches f against the named schema; the substitution on success.
inline std::optional<Substitution> match_axiom(const std::string& name, const Formula& f) {
    const AxiomSchema* s = find_schema(name);
    if (!s) throw std::invalid_argument("unknown axiom schema '" + name + "'");
    Substitution subst;
    if (detail::match_pattern(s->pattern, f, subst)) return subst;
    return std::nullopt;
}

// Replaces every metavariable of pattern by its image; used to build
// instances. Metavariables without an image are kept as variables.
inline Formula substitute(const Formula& pattern, const Substitution& subst) {
    switch (pattern.kind()) {
        case Conn::Var: {
            auto it = subst.find(pattern.var_name());
            return it != subst.end() ? it->second : pattern;
        }
        case Conn::Falsum: return pattern;
        case Conn::Dia: return Formula::dia(substitute(pattern.body(), subst));
        case Conn::Box: return Formula::box(substitute(pattern.body(), subst));
        case Conn::And:
            return Formula::conj(substitute(pattern.lhs(), subst),
                                 substitute(pattern.rhs(), subst));
        case Conn::Or:
            return Formula::disj(substitute(pattern.lhs(), subst),
                                 substitute(pattern.rhs(), subst));
        case Conn::Implies:
            return Formula::implies(substitute(pattern.lhs(), subst),
                                    substitute(pattern.rhs(), subst));
    }
    return pattern;
}

struct Justification {
    enum class Kind { Axiom, MP, Nec } kind = Kind::Axiom;
    std::string axiom;  // Kind::Axiom
    int i = 0, j = 0;   // 1-based line references; MP uses both, Nec uses i
};

struct ProofLine {
    Formula formula;
    Justification just;
};

struct Proof {
    std::vector<ProofLine> lines;
};

struct CheckResult {
    bool accepted = false;
    int line = 0;  // 1-based offending line when rejected
    std::string reason;
};

// Checks a hypothesis-free Hilbert proof: every line is an instance of an
// axiom available in the logic, or follows from strictly earlier lines by
// modus ponens (i: a -> b, j: a) or necessitation (i: a gives []a).
inline CheckResult check_proof(Logic logic, const Proof& proof) {
    auto available = axioms_of(logic);
    auto reject = [](int line, std::string reason) {
        return CheckResult{false, line, std::move(reason)};
    };
    for (int k = 0; k < static_cast<int>(proof.lines.size()); ++k) {
        const ProofLine& ln = proof.lines[k];
        const Justification& j = ln.just;
        int lineno = k + 1;
        switch (j.kind) {
            case Justification::Kind::Axiom: {
                if (!find_schema(j.axiom))
                    return reject(lineno, "unknown axiom '" + j.axiom + "'");
                if (std::find(available.begin(), available.end(), j.axiom) ==
                    available.end())
                    return reject(lineno, "axiom " + j.axiom + " is not available in " +
                                              to_string(logic));
                if (!match_axiom(j.axiom, ln.formula))
                    return reject(lineno, "not an instance of " + j.axiom);
                break;
            }
            case Justification::Kind::MP: {
                if (j.i < 1 || j.i >= lineno || j.j < 1 || j.j >= lineno)
                    return reject(lineno, "modus ponens must reference earlier lines");
                const Formula& imp = proof.lines[j.i - 1].formula;
                const Formula& ante = proof.lines[j.j - 1].formula;
                if (imp.kind() != Conn::Implies)
                    return reject(lineno, "line " + std::to_string(j.i) +
                                              " is not an implication");
                if (!(imp.lhs() == ante))
                    return reject(lineno, "line " + std::to_string(j.j) +
                                              " does not match the antecedent of line " +
                                              std::to_string(j.i));
                if (!(imp.rhs() == ln.formula))
                    return reject(lineno, "conclusion differs from the consequent of line " +
                                              std::to_string(j.i));
                break;
            }
            case Justification::Kind::Nec: {
                if (j.i < 1 || j.i >= lineno)
                    return reject(lineno, "necessitation must reference an earlier line");
                if (!(ln.formula == Formula::box(proof.lines[j.i - 1].formula)))
                    return reject(lineno, "conclusion is not [] of line " +
                                              std::to_string(j.i));
                break;
            }
        }
    }
    return CheckResult{true, 0, ""};
}

// ---- text format ----------------------------------------------------------
//
//   1. p -> (q -> p) ; axiom A1
//   2. [](p -> (q -> p)) ; nec 1
//   3. <formula> ; mp <i> <j>
//
// Line numbers must run 1..k consecutively. '#' starts a comment line.

inline Proof parse_proof_text(const std::string& text) {
    Proof proof;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    int expected = 1;

    auto fail = [&](const std::string& what) -> void {
        throw ParseError(what, lineno, "line");
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::size_t nonspace = line.find_first_not_of(" \t\r");
        if (nonspace == std::string::npos || line[nonspace] == '#') continue;

        std::size_t dot = line.find('.');
        if (dot == std::string::npos) fail("expected '<n>. <formula> ; <justification>'");
        int num = 0;
        try {
            num = std::stoi(line.substr(0, dot));
        } catch (const std::exception&) {
            fail("bad line number");
        }
        if (num != expected)
            fail("line numbers must be consecutive from 1 (expected " +
                 std::to_string(expected) + ")");
        ++expected;

        std::size_t semi = line.find(';', dot + 1);
        if (semi == std::string::npos) fail("missing ';' before the justification");

        ProofLine pl;
        try {
            pl.formula = parse(line.substr(dot + 1, semi - dot - 1));
        } catch (const ParseError& e) {
            fail(std::string("bad formula: ") + e.what());
        }

        std::istringstream js(line.substr(semi + 1));
        std::string kind;
        if (!(js >> kind)) fail("missing justification");
        if (kind == "axiom") {
            pl.just.kind = Justification::Kind::Axiom;
            if (!(js >> pl.just.axiom)) fail("missing axiom name");
        } else if (kind == "mp") {
            pl.just.kind = Justification::Kind::MP;
            if (!(js >> pl.just.i >> pl.just.j)) fail("mp needs two line numbers");
        } else if (kind == "nec") {
            pl.just.kind = Justification::Kind::Nec;
            if (!(js >> pl.just.i)) fail("nec needs one line number");
        } else {
            fail("unknown justification '" + kind + "'");
        }
        std::string extra;
        if (js >> extra) fail("trailing input '" + extra + "'");
        proof.lines.push_back(std::move(pl));
    }
    return proof;
}

inline std::string print_proof_text(const Proof& proof) {
    std::ostringstream out;
    for (std::size_t k = 0; k < proof.lines.size(); ++k) {
        const ProofLine& ln = proof.lines[k];
        out << (k + 1) << ". " << render(ln.formula) << " ; ";
        switch (ln.just.kind) {
            case Justification::Kind::Axiom: out << "axiom " << ln.just.axiom; break;
            case Justification::Kind::MP: out << "mp " << ln.just.i << ' ' << ln.just.j; break;
            case Justification::Kind::Nec: out << "nec " << ln.just.i; break;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace cs4kit
