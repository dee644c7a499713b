#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "formula.hpp"
#include "relation.hpp"

namespace cs4kit {

enum class Logic { CS4, IS4, S4I, GS4 };

inline const char* to_string(Logic l) {
    switch (l) {
        case Logic::CS4: return "CS4";
        case Logic::IS4: return "IS4";
        case Logic::S4I: return "S4I";
        case Logic::GS4: return "GS4";
    }
    return "?";
}

inline std::optional<Logic> parse_logic(const std::string& s) {
    if (s == "CS4") return Logic::CS4;
    if (s == "IS4") return Logic::IS4;
    if (s == "S4I") return Logic::S4I;
    if (s == "GS4") return Logic::GS4;
    return std::nullopt;
}

// Unvalidated model data as read from text or built by a generator.
// Relation edges are raw: validation adds the reflexive-transitive closure.
struct RawModel {
    std::vector<std::string> worlds;
    std::vector<int> fallible;
    std::vector<std::pair<int, int>> intuit_edges;
    std::vector<std::pair<int, int>> modal_edges;
    std::map<std::string, std::vector<int>> valuation;
};

// Validated bi-relational model: both relations are preorders, the fallible
// set is upward closed under both, and every valuation entry is monotone
// along intuit and contains the fallible set.
struct Model {
    std::vector<std::string> worlds;
    Bitset fallible;
    Relation intuit;
    Relation modal;
    std::map<std::string, Bitset> valuation;

    int size() const { return static_cast<int>(worlds.size()); }

    std::optional<int> world_index(const std::string& name) const {
        for (int i = 0; i < size(); ++i)
            if (worlds[i] == name) return i;
        return std::nullopt;
    }

    RawModel to_raw() const {
        RawModel r;
        r.worlds = worlds;
        r.fallible = fallible.to_indices();
        intuit.for_each_pair([&](int a, int b) { r.intuit_edges.emplace_back(a, b); });
        modal.for_each_pair([&](int a, int b) { r.modal_edges.emplace_back(a, b); });
        for (auto& [p, ws] : valuation) r.valuation[p] = ws.to_indices();
        return r;
    }
};

struct Diagnostic {
    std::string constraint;
    std::string witness;
};

struct ValidateResult {
    std::optional<Model> model;  // engaged iff diagnostics empty
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return model.has_value(); }
};

// Closes both relations reflexively-transitively, then checks fallible
// upward closure, valuation monotonicity, and fallible <= V(p).
inline ValidateResult validate(const RawModel& raw) {
    ValidateResult res;
    int n = static_cast<int>(raw.worlds.size());

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (raw.worlds[i] == raw.worlds[j])
                res.diagnostics.push_back({"duplicate world name", raw.worlds[i]});

    auto in_range = [&](int w) { return w >= 0 && w < n; };
    auto name = [&](int w) { return raw.worlds[w]; };

    Model m;
    m.worlds = raw.worlds;
    Relation intuit(n), modal(n);
    for (auto [a, b] : raw.intuit_edges) {
        if (!in_range(a) || !in_range(b)) {
            res.diagnostics.push_back({"world index out of range", "intuit edge"});
            continue;
        }
        intuit.add(a, b);
    }
    for (auto [a, b] : raw.modal_edges) {
        if (!in_range(a) || !in_range(b)) {
            res.diagnostics.push_back({"world index out of range", "modal edge"});
            continue;
        }
        modal.add(a, b);
    }
    m.intuit = intuit.reflexive_transitive_closure();
    m.modal = modal.reflexive_transitive_closure();

    m.fallible = Bitset(n);
    for (int w : raw.fallible) {
        if (!in_range(w)) {
            res.diagnostics.push_back({"world index out of range", "fallible"});
            continue;
        }
        m.fallible.set(w);
    }

    for (auto& [p, ws] : raw.valuation) {
        Bitset v(n);
        for (int w : ws) {
            if (!in_range(w)) {
                res.diagnostics.push_back({"world index out of range", "val " + p});
                continue;
            }
            v.set(w);
        }
        m.valuation[p] = v;
    }

    if (!res.diagnostics.empty()) return res;  // indices unusable below

    m.fallible.for_each([&](int w) {
        m.intuit.row(w).for_each([&](int v) {
            if (!m.fallible.test(v))
                res.diagnostics.push_back(
                    {"fallible not upward closed",
                     "(" + name(w) + "," + name(v) + ") under intuit"});
        });
        m.modal.row(w).for_each([&](int v) {
            if (!m.fallible.test(v))
                res.diagnostics.push_back(
                    {"fallible not upward closed",
                     "(" + name(w) + "," + name(v) + ") under modal"});
        });
    });

    for (auto& [p, v] : m.valuation) {
        v.for_each([&](int w) {
            m.intuit.row(w).for_each([&](int u) {
                if (!v.test(u))
                    res.diagnostics.push_back(
                        {"valuation not monotone",
                         "valuation not monotone at (" + name(w) + "," + name(u) +
                             "): " + p});
            });
        });
        if (!m.fallible.is_subset_of(v)) {
            Bitset missing = m.fallible & v.complement();
            res.diagnostics.push_back(
                {"fallible must satisfy every variable",
                 p + " missing at " + name(missing.first())});
        }
    }

    if (res.diagnostics.empty()) res.model = std::move(m);
    return res;
}

enum class FrameCondition {
    Forward,
    Backward,
    Downward,
    LocallyLinear,
    ForestLike,
    Infallible
};

struct ConditionResult {
    bool holds = false;
    std::vector<std::string> witness;  // empty when the condition holds
};

inline ConditionResult check_condition(const Model& m, FrameCondition c) {
    auto named = [&](const std::optional<RelTriple>& t) {
        ConditionResult r;
        r.holds = !t.has_value();
        if (t) r.witness = {m.worlds[t->a], m.worlds[t->b], m.worlds[t->c]};
        return r;
    };
    switch (c) {
        case FrameCondition::Forward: return named(forward_violation(m.intuit, m.modal));
        case FrameCondition::Backward: return named(backward_violation(m.intuit, m.modal));
        case FrameCondition::Downward: return named(downward_violation(m.intuit, m.modal));
        case FrameCondition::LocallyLinear:
            return named(local_linearity_violation(m.intuit));
        case FrameCondition::ForestLike: return named(forest_violation(m.intuit));
        case FrameCondition::Infallible: {
            ConditionResult r;
            r.holds = m.fallible.none();
            if (!r.holds) r.witness = {m.worlds[m.fallible.first()]};
            return r;
        }
    }
    return {};
}

struct FrameReport {
    bool forward_confluent = false;
    bool backward_confluent = false;
    bool downward_confluent = false;
    bool locally_linear = false;
    bool forest_like = false;
    bool infallible = false;

    bool in(Logic l) const {
        switch (l) {
            case Logic::CS4: return backward_confluent;
            case Logic::IS4: return backward_confluent && forward_confluent && infallible;
            case Logic::S4I: return forward_confluent && downward_confluent && infallible;
            case Logic::GS4:
                return backward_confluent && forward_confluent && infallible &&
                       locally_linear;
        }
        return false;
    }

    std::vector<Logic> classes() const {
        std::vector<Logic> out;
        for (Logic l : {Logic::CS4, Logic::IS4, Logic::S4I, Logic::GS4})
            if (in(l)) out.push_back(l);
        return out;
    }
};

inline FrameReport classify(const Model& m) {
    FrameReport r;
    r.forward_confluent = is_forward_confluent(m.intuit, m.modal);
    r.backward_confluent = is_backward_confluent(m.intuit, m.modal);
    r.downward_confluent = is_downward_confluent(m.intuit, m.modal);
    r.locally_linear = is_locally_linear(m.intuit);
    r.forest_like = is_forest_like(m.intuit);
    r.infallible = m.fallible.none();
    return r;
}

namespace detail {

// Condensation of the intuit preorder: cluster ids plus, per cluster, the
// longest strictly ascending path length (in edges) starting there.
struct Condensation {
    std::vector<int> cluster_of;
    std::vector<int> path_len;  // per cluster
};

inline Condensation condense(const Relation& pre) {
    int n = pre.size();
    Condensation c;
    c.cluster_of.assign(n, -1);
    int k = 0;
    for (int w = 0; w < n; ++w) {
        if (c.cluster_of[w] >= 0) continue;
        for (int v = 0; v < n; ++v)
            if (pre.contains(w, v) && pre.contains(v, w)) c.cluster_of[v] = k;
        ++k;
    }
    // strict successor clusters via any strict edge
    std::vector<std::vector<int>> succ(k);
    pre.for_each_pair([&](int a, int b) {
        if (!pre.contains(b, a)) succ[c.cluster_of[a]].push_back(c.cluster_of[b]);
    });
    c.path_len.assign(k, -1);
    // DAG longest path; clusters are numbered in a discovery order, recurse
    struct Rec {
        std::vector<std::vector<int>>& succ;
        std::vector<int>& len;
        int go(int u) {
            if (len[u] >= 0) return len[u];
            int best = 0;
            for (int v : succ[u]) best = std::max(best, 1 + go(v));
            return len[u] = best;
        }
    } rec{succ, c.path_len};
    for (int u = 0; u < k; ++u) rec.go(u);
    return c;
}

}  // namespace detail

// Longest strictly ascending intuit chain (in steps) starting at w.
inline int world_height(const Model& m, int w) {
    auto c = detail::condense(m.intuit);
    return c.path_len[c.cluster_of[w]];
}

// Longest strictly ascending intuit chain in the model; 0 if no strict step.
inline int height(const Model& m) {
    if (m.size() == 0) return 0;
    auto c = detail::condense(m.intuit);
    int best = 0;
    for (int len : c.path_len) best = std::max(best, len);
    return best;
}

// ---- text format ----------------------------------------------------------
//
//   # comment
//   worlds: x y z t w
//   fallible:
//   intuit: x<=y z<=t
//   modal: y<=z t<=w
//   val p: x y z t
//
// Worlds must be declared before use; unknown keys are rejected. Edge lists
// are raw: reading back a printed model re-closes them.

inline RawModel parse_model_text(const std::string& text) {
    RawModel raw;
    std::map<std::string, int> index;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;

    auto fail = [&](const std::string& what) -> void {
        throw ParseError(what, lineno, "line");
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key.back() != ':') {
            // "val p:" carries the variable in the second token
            if (key != "val") fail("expected 'key:' but got '" + key + "'");
        }

        auto lookup = [&](const std::string& w) {
            auto it = index.find(w);
            if (it == index.end()) fail("world '" + w + "' used before declaration");
            return it->second;
        };

        std::string tok;
        if (key == "worlds:") {
            while (ls >> tok) {
                if (index.count(tok)) fail("duplicate world name '" + tok + "'");
                index[tok] = static_cast<int>(raw.worlds.size());
                raw.worlds.push_back(tok);
            }
        } else if (key == "fallible:") {
            while (ls >> tok) raw.fallible.push_back(lookup(tok));
        } else if (key == "intuit:" || key == "modal:") {
            auto& edges = (key == "intuit:") ? raw.intuit_edges : raw.modal_edges;
            while (ls >> tok) {
                std::size_t p = tok.find("<=");
                if (p == std::string::npos || p == 0 || p + 2 >= tok.size())
                    fail("expected edge 'a<=b' but got '" + tok + "'");
                edges.emplace_back(lookup(tok.substr(0, p)), lookup(tok.substr(p + 2)));
            }
        } else if (key == "val") {
            std::string var;
            if (!(ls >> var) || var.size() < 2 || var.back() != ':')
                fail("expected 'val <name>:'");
            var.pop_back();
            auto& ws = raw.valuation[var];  // repeated lines accumulate
            while (ls >> tok) ws.push_back(lookup(tok));
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    return raw;
}

inline std::string print_model_text(const Model& m) {
    std::ostringstream out;
    out << "worlds:";
    for (auto& w : m.worlds) out << ' ' << w;
    out << "\nfallible:";
    m.fallible.for_each([&](int w) { out << ' ' << m.worlds[w]; });
    auto edges = [&](const char* key, const Relation& r) {
        out << '\n' << key << ':';
        r.for_each_pair([&](int a, int b) {
            if (a != b) out << ' ' << m.worlds[a] << "<=" << m.worlds[b];
        });
    };
    edges("intuit", m.intuit);
    edges("modal", m.modal);
    for (auto& [p, ws] : m.valuation) {
        out << "\nval " << p << ':';
        ws.for_each([&](int w) { out << ' ' << m.worlds[w]; });
    }
    out << '\n';
    return out.str();
}

}  // namespace cs4kit
