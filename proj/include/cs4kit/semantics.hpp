#pragma once

#include <optional>
#include <vector>

#include "formula.hpp"
#include "model.hpp"

namespace cs4kit {

// Per-connective switches for the one-step modal clauses. Each switch is only
// sound on models with the matching confluence property.
struct EvalOptions {
    bool one_step_dia = false;  // requires forward confluence
    bool one_step_box = false;  // requires downward confluence
};

// Computes satisfaction sets bottom-up over a subformula-closed set, one
// bitset per subformula; every (world, subformula) pair is decided once.
class Evaluator {
public:
    Evaluator(const Model& m, SubformulaSet subs, EvalOptions opt = {})
        : m_(m), subs_(std::move(subs)), opt_(opt) {
        sat_.reserve(subs_.size());
        for (int i = 0; i < subs_.size(); ++i) sat_.push_back(compute(subs_.at(i)));
    }

    const Model& model() const { return m_; }
    const SubformulaSet& subformulas() const { return subs_; }

    const Bitset& sat(int sub_index) const { return sat_[sub_index]; }

    const Bitset& sat(const Formula& f) const {
        auto i = subs_.index_of(f);
        if (!i) throw std::invalid_argument("formula outside the evaluator's closure");
        return sat_[*i];
    }

    bool eval(int world, const Formula& f) const { return sat(f).test(world); }

private:
    Bitset compute(const Formula& f) const {
        int n = m_.size();
        Bitset out(n);
        switch (f.kind()) {
            case Conn::Var: {
                auto it = m_.valuation.find(f.var_name());
                // unmentioned variables hold exactly at fallible worlds
                return it != m_.valuation.end() ? it->second : m_.fallible;
            }
            case Conn::Falsum:
                return m_.fallible;
            case Conn::And:
                return sat(f.lhs()) & sat(f.rhs());
            case Conn::Or:
                return sat(f.lhs()) | sat(f.rhs());
            case Conn::Implies: {
                // w |= a -> b  iff  no intuit successor satisfies a but not b
                Bitset bad = sat(f.lhs()) & sat(f.rhs()).complement();
                for (int w = 0; w < n; ++w)
                    if (!m_.intuit.row(w).intersects(bad)) out.set(w);
                return out;
            }
            case Conn::Dia: {
                const Bitset& a = sat(f.body());
                Bitset step(n);  // worlds with a modal successor in a
                for (int w = 0; w < n; ++w)
                    if (m_.modal.row(w).intersects(a)) step.set(w);
                if (opt_.one_step_dia) return step;
                for (int w = 0; w < n; ++w)
                    if (m_.intuit.row(w).is_subset_of(step)) out.set(w);
                return out;
            }
            case Conn::Box: {
                const Bitset& a = sat(f.body());
                Bitset step(n);  // worlds whose modal successors all satisfy a
                for (int w = 0; w < n; ++w)
                    if (m_.modal.row(w).is_subset_of(a)) step.set(w);
                if (opt_.one_step_box) return step;
                for (int w = 0; w < n; ++w)
                    if (m_.intuit.row(w).is_subset_of(step)) out.set(w);
                return out;
            }
        }
        return out;
    }

    const Model& m_;
    SubformulaSet subs_;
    EvalOptions opt_;
    std::vector<Bitset> sat_;
};

inline bool eval(const Model& m, int world, const Formula& f) {
    return Evaluator(m, SubformulaSet::closure(f)).eval(world, f);
}

inline bool eval(const Model& m, const std::string& world, const Formula& f) {
    auto w = m.world_index(world);
    if (!w) throw std::invalid_argument("unknown world '" + world + "'");
    return eval(m, *w, f);
}

// Switches each modal clause to its one-step form when the corresponding
// confluence holds on m; otherwise keeps the general clause.
inline EvalOptions fast_options(const Model& m) {
    return {is_forward_confluent(m.intuit, m.modal),
            is_downward_confluent(m.intuit, m.modal)};
}

inline bool eval_fast(const Model& m, int world, const Formula& f) {
    return Evaluator(m, SubformulaSet::closure(f), fast_options(m)).eval(world, f);
}

// True when every non-fallible world satisfies f; otherwise the lowest-index
// falsifying world.
inline std::optional<int> falsifying_world(const Model& m, const Formula& f) {
    Evaluator e(m, SubformulaSet::closure(f));
    const Bitset& sat = e.sat(f);
    for (int w = 0; w < m.size(); ++w)
        if (!m.fallible.test(w) && !sat.test(w)) return w;
    return std::nullopt;
}

inline bool model_valid(const Model& m, const Formula& f) {
    return !falsifying_world(m, f).has_value();
}

// Sigma-indexed label of a world: pos holds the sigma members true there,
// dia_blocked those false at every modal successor.
struct SigmaLabel {
    Bitset pos;
    Bitset dia_blocked;
    bool operator==(const SigmaLabel&) const = default;
};

inline std::vector<SigmaLabel> labels(const Model& m, const SubformulaSet& sigma) {
    Evaluator e(m, sigma);
    int n = m.size();
    std::vector<SigmaLabel> out(n, SigmaLabel{Bitset(sigma.size()), Bitset(sigma.size())});
    for (int i = 0; i < sigma.size(); ++i) {
        const Bitset& sat = e.sat(i);
        for (int w = 0; w < n; ++w) {
            if (sat.test(w)) out[w].pos.set(i);
            if (!m.modal.row(w).intersects(sat)) out[w].dia_blocked.set(i);
        }
    }
    return out;
}

inline SigmaLabel label(const Model& m, const SubformulaSet& sigma, int world) {
    return labels(m, sigma)[world];
}

}  // namespace cs4kit
