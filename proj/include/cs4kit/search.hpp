#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bisim.hpp"
#include "hilbert.hpp"
#include "semantics.hpp"

namespace cs4kit {

struct SearchBudget {
    int max_worlds = 3;
    long max_candidates = -1;            // < 0: unlimited
    std::optional<int> height_cap;       // unset: |sub(f)| + 1
    std::optional<bool> symmetry_pruning;  // unset: on for sizes >= 3
};

struct SearchStats {
    long candidates = 0;   // models evaluated
    bool complete = false; // the whole bounded space was swept
};

struct CountermodelResult {
    enum class Status { Found, NoneFound, BudgetExhausted } status =
        Status::NoneFound;
    std::optional<Model> model;
    std::optional<int> world;  // falsifying world in model
    SearchStats stats;
};

namespace detail {

// All preorders on n points, as closed relations, in bitmask order of their
// strict parts. Feasible for the small sizes bounded search uses.
inline std::vector<Relation> all_preorders(int n) {
    std::vector<std::pair<int, int>> offdiag;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) offdiag.emplace_back(a, b);
    if (offdiag.size() > 24)
        throw std::invalid_argument("model enumeration capped at 5 worlds");
    std::vector<Relation> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << offdiag.size()); ++mask) {
        Relation r = Relation::identity(n);
        for (std::size_t i = 0; i < offdiag.size(); ++i)
            if ((mask >> i) & 1) r.add(offdiag[i].first, offdiag[i].second);
        if (r.is_transitive()) out.push_back(r);
    }
    return out;
}

// Subsets of 0..n-1 upward closed under r, in ascending bitmask order.
inline std::vector<Bitset> up_closed_sets(const Relation& r) {
    int n = r.size();
    std::vector<Bitset> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        Bitset s(n);
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1) s.set(i);
        bool closed = true;
        s.for_each([&](int w) {
            if (closed && !r.row(w).is_subset_of(s)) closed = false;
        });
        if (closed) out.push_back(s);
    }
    return out;
}

// Lexicographic word encoding of a frame for the symmetry check.
inline std::vector<std::uint64_t> frame_code(const Relation& intuit,
                                             const Relation& modal,
                                             const Bitset& fallible,
                                             const std::vector<int>& perm) {
    int n = intuit.size();
    std::vector<std::uint64_t> code;
    code.reserve(2 * n + 1);
    for (int a = 0; a < n; ++a) {
        std::uint64_t w = 0;
        for (int b = 0; b < n; ++b)
            if (intuit.contains(perm[a], perm[b])) w |= std::uint64_t{1} << b;
        code.push_back(w);
    }
    for (int a = 0; a < n; ++a) {
        std::uint64_t w = 0;
        for (int b = 0; b < n; ++b)
            if (modal.contains(perm[a], perm[b])) w |= std::uint64_t{1} << b;
        code.push_back(w);
    }
    std::uint64_t w = 0;
    for (int b = 0; b < n; ++b)
        if (fallible.test(perm[b])) w |= std::uint64_t{1} << b;
    code.push_back(w);
    return code;
}

// True when the frame is lexicographically minimal among its relabelings.
inline bool frame_is_canonical(const Relation& intuit, const Relation& modal,
                               const Bitset& fallible) {
    int n = intuit.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    auto base = frame_code(intuit, modal, fallible, perm);
    while (std::next_permutation(perm.begin(), perm.end()))
        if (frame_code(intuit, modal, fallible, perm) < base) return false;
    return true;
}

inline bool frame_in_class(const Relation& intuit, const Relation& modal,
                           bool fallible_empty, Logic logic) {
    switch (logic) {
        case Logic::CS4:
            return is_backward_confluent(intuit, modal);
        case Logic::IS4:
            return fallible_empty && is_backward_confluent(intuit, modal) &&
                   is_forward_confluent(intuit, modal);
        case Logic::S4I:
            return fallible_empty && is_forward_confluent(intuit, modal) &&
                   is_downward_confluent(intuit, modal);
        case Logic::GS4:
            return fallible_empty && is_backward_confluent(intuit, modal) &&
                   is_forward_confluent(intuit, modal) && is_locally_linear(intuit);
    }
    return false;
}

inline int preorder_height(const Relation& pre) {
    Model tmp;  // height only reads the intuit relation
    tmp.worlds.resize(pre.size());
    tmp.intuit = pre;
    return height(tmp);
}

// Enumerates every model of the class with 1..max_worlds worlds and
// valuations over vars, ascending by size then frame then valuation.
// Stops early when fn returns false or the candidate budget runs out.
template <class F>
SearchStats enumerate_class_models(const std::vector<std::string>& vars, Logic logic,
                                   const SearchBudget& budget,
                                   std::optional<int> height_cap, F&& fn) {
    SearchStats stats;
    for (int n = 1; n <= budget.max_worlds; ++n) {
        bool canonical = budget.symmetry_pruning.value_or(n >= 3);
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
        auto preorders = all_preorders(n);
        for (const Relation& intuit : preorders) {
            if (height_cap && preorder_height(intuit) > *height_cap) continue;
            auto val_choices = up_closed_sets(intuit);
            for (const Relation& modal : preorders) {
                // fallible sets must be closed under both relations
                std::vector<Bitset> fallible_choices;
                if (logic == Logic::CS4)
                    fallible_choices =
                        up_closed_sets(intuit.united(modal).transitive_closure());
                else
                    fallible_choices = {Bitset(n)};
                for (const Bitset& fallible : fallible_choices) {
                    if (!frame_in_class(intuit, modal, fallible.none(), logic)) continue;
                    if (canonical && !frame_is_canonical(intuit, modal, fallible))
                        continue;
                    // valuation odometer over up-closed sets containing fallible
                    std::vector<const Bitset*> admissible;
                    for (const Bitset& s : val_choices)
                        if (fallible.is_subset_of(s)) admissible.push_back(&s);
                    std::vector<std::size_t> pick(vars.size(), 0);
                    while (true) {
                        Model m;
                        m.worlds = names;
                        m.fallible = fallible;
                        m.intuit = intuit;
                        m.modal = modal;
                        for (std::size_t v = 0; v < vars.size(); ++v)
                            m.valuation[vars[v]] = *admissible[pick[v]];
                        ++stats.candidates;
                        if (!fn(m)) return stats;
                        if (budget.max_candidates >= 0 &&
                            stats.candidates >= budget.max_candidates)
                            return stats;
                        // advance odometer
                        std::size_t d = 0;
                        while (d < pick.size() && ++pick[d] == admissible.size())
                            pick[d++] = 0;
                        if (d == pick.size() && !pick.empty()) break;
                        if (pick.empty()) break;  // no variables: single valuation
                    }
                }
            }
        }
    }
    stats.complete = true;
    return stats;
}

}  // namespace detail

// Sound, budget-bounded countermodel search: any returned model is
// re-validated and re-classified; exhausting the budget is reported apart
// from completing the sweep without a find.
inline CountermodelResult find_countermodel(const Formula& f, Logic logic,
                                            const SearchBudget& budget) {
    CountermodelResult res;
    SubformulaSet sigma = SubformulaSet::closure(f);
    int cap = budget.height_cap.value_or(sigma.size() + 1);
    std::vector<std::string> vars = variables_of(f);

    res.stats = detail::enumerate_class_models(
        vars, logic, budget, cap, [&](const Model& m) {
            auto w = falsifying_world(m, f);
            if (!w) return true;
            ValidateResult recheck = validate(m.to_raw());
            if (!recheck.ok() || !classify(*recheck.model).in(logic))
                throw std::logic_error("enumerated model failed re-validation");
            res.model = *std::move(recheck.model);
            res.world = w;
            return false;
        });
    if (res.model)
        res.status = CountermodelResult::Status::Found;
    else if (res.stats.complete)
        res.status = CountermodelResult::Status::NoneFound;
    else
        res.status = CountermodelResult::Status::BudgetExhausted;
    return res;
}

// Exhaustive bounded validity: true iff f holds in every model of the class
// with at most max_worlds worlds over f's variables (isomorphs pruned).
inline bool check_validity_upto(const Formula& f, Logic logic, int max_worlds) {
    SearchBudget budget;
    budget.max_worlds = max_worlds;
    budget.max_candidates = -1;
    budget.height_cap = std::numeric_limits<int>::max();  // no cap: stay exhaustive
    CountermodelResult r = find_countermodel(f, logic, budget);
    return r.status == CountermodelResult::Status::NoneFound;
}

// ---- random generation ------------------------------------------------

struct GenParams {
    int size = 4;
    double edge_density = 0.3;
    int variable_count = 2;
    Logic logic = Logic::CS4;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::string gen_var_name(int i) {
    static const char* base[] = {"p", "q", "r"};
    if (i < 3) return base[i];
    return "p" + std::to_string(i + 1);
}

inline Relation random_preorder(std::mt19937_64& rng, int n, double density) {
    std::bernoulli_distribution edge(density);
    Relation r(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && edge(rng)) r.add(a, b);
    return r.reflexive_transitive_closure();
}

// Disjoint chains of clusters: every point's successor set is totally
// ordered, so the result is locally linear (and forest-like).
inline Relation random_locally_linear(std::mt19937_64& rng, int n, double density) {
    int chains = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> chain_of(n), cluster_of(n);
    std::bernoulli_distribution new_cluster(std::max(0.2, 1.0 - density));
    std::vector<int> next_cluster(chains, 0);
    std::vector<int> last_assigned(chains, -1);
    for (int w : order) {
        int c = static_cast<int>(rng() % static_cast<std::uint64_t>(chains));
        if (last_assigned[c] >= 0 && !new_cluster(rng))
            cluster_of[w] = last_assigned[c];
        else
            cluster_of[w] = last_assigned[c] = next_cluster[c]++;
        chain_of[w] = c;
    }
    Relation r = Relation::identity(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && chain_of[a] == chain_of[b] && cluster_of[a] <= cluster_of[b])
                r.add(a, b);
    return r;
}

// Adds modal edges until the class conditions hold. Each repair fixes its
// pattern by a direct edge, and the full relation satisfies all three
// confluences, so the loop terminates in class.
inline Relation repair_modal(const Relation& intuit, Relation modal, Logic logic) {
    bool need_forward = logic != Logic::CS4;
    bool need_backward = logic == Logic::CS4 || logic == Logic::IS4 || logic == Logic::GS4;
    bool need_downward = logic == Logic::S4I;
    for (;;) {
        modal = modal.transitive_closure();
        if (need_backward)
            if (auto v = backward_violation(intuit, modal)) {
                modal.add(v->a, v->c);  // a [= b <= c: close with a [= c
                continue;
            }
        if (need_forward)
            if (auto v = forward_violation(intuit, modal)) {
                modal.add(v->b, v->c);  // a <= b, a [= c: close with b [= c
                continue;
            }
        if (need_downward)
            if (auto v = downward_violation(intuit, modal)) {
                modal.add(v->a, v->c);  // a <= b [= c: close with a [= c
                continue;
            }
        return modal;
    }
}

}  // namespace detail

// Seed-deterministic random model in the requested class. The intuitionistic
// order is sampled (structurally for GS4), the modal order is sampled and
// repaired into the class by edge additions, and the result is re-validated
// and re-classified before being returned.
inline Model random_model(const GenParams& gp) {
    if (gp.size < 1) throw std::invalid_argument("random_model requires size >= 1");
    if (gp.edge_density < 0.0 || gp.edge_density > 1.0)
        throw std::invalid_argument("edge_density must lie in [0,1]");
    std::mt19937_64 rng(gp.seed);
    int n = gp.size;

    Relation intuit = (gp.logic == Logic::GS4)
                          ? detail::random_locally_linear(rng, n, gp.edge_density)
                          : detail::random_preorder(rng, n, gp.edge_density);
    std::bernoulli_distribution edge(gp.edge_density);
    Relation modal(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && edge(rng)) modal.add(a, b);
    modal = detail::repair_modal(intuit, modal.reflexive_transitive_closure(), gp.logic);

    RawModel raw;
    for (int i = 0; i < n; ++i) raw.worlds.push_back("w" + std::to_string(i));
    intuit.for_each_pair([&](int a, int b) { raw.intuit_edges.emplace_back(a, b); });
    modal.for_each_pair([&](int a, int b) { raw.modal_edges.emplace_back(a, b); });

    Bitset fallible(n);
    if (gp.logic == Logic::CS4) {
        std::bernoulli_distribution pick(0.15);
        for (int w = 0; w < n; ++w)
            if (pick(rng)) fallible.set(w);
        // close upward under both relations
        Relation both = intuit.united(modal).transitive_closure();
        Bitset closed(n);
        fallible.for_each([&](int w) { closed |= both.row(w); });
        fallible = closed;
    }
    raw.fallible = fallible.to_indices();

    std::bernoulli_distribution holds(0.4);
    for (int v = 0; v < gp.variable_count; ++v) {
        Bitset val = fallible;
        for (int w = 0; w < n; ++w)
            if (holds(rng)) val |= intuit.row(w);
        raw.valuation[detail::gen_var_name(v)] = val.to_indices();
    }

    ValidateResult res = validate(raw);
    if (!res.ok() || !classify(*res.model).in(gp.logic))
        throw std::logic_error("random_model produced an out-of-class model");
    return *std::move(res.model);
}

// Random bi-relational model with no class targeting; always validates.
inline Model random_bimodel(int size, double density, int variable_count,
                            std::uint64_t seed) {
    GenParams gp;
    gp.size = size;
    gp.edge_density = density;
    gp.variable_count = variable_count;
    gp.seed = seed;
    std::mt19937_64 rng(seed);
    int n = size;
    Relation intuit = detail::random_preorder(rng, n, density);
    Relation modal = detail::random_preorder(rng, n, density);

    RawModel raw;
    for (int i = 0; i < n; ++i) raw.worlds.push_back("w" + std::to_string(i));
    intuit.for_each_pair([&](int a, int b) { raw.intuit_edges.emplace_back(a, b); });
    modal.for_each_pair([&](int a, int b) { raw.modal_edges.emplace_back(a, b); });

    Bitset fallible(n);
    std::bernoulli_distribution pick(0.1);
    for (int w = 0; w < n; ++w)
        if (pick(rng)) fallible.set(w);
    Relation both = intuit.united(modal).transitive_closure();
    Bitset closed = fallible;
    fallible.for_each([&](int w) { closed |= both.row(w); });
    raw.fallible = closed.to_indices();

    std::bernoulli_distribution holds(0.4);
    for (int v = 0; v < variable_count; ++v) {
        Bitset val = closed;
        for (int w = 0; w < n; ++w)
            if (holds(rng)) val |= intuit.row(w);
        raw.valuation[detail::gen_var_name(v)] = val.to_indices();
    }
    ValidateResult res = validate(raw);
    if (!res.ok()) throw std::logic_error("random_bimodel failed validation");
    return *std::move(res.model);
}

// Random formula of the given maximum depth over variable_count variables.
inline Formula random_formula(std::mt19937_64& rng, int max_depth, int variable_count) {
    auto var = [&] {
        auto pool = static_cast<std::uint64_t>(std::max(1, variable_count));
        return Formula::var(detail::gen_var_name(static_cast<int>(rng() % pool)));
    };
    if (max_depth <= 0) {
        if (variable_count == 0 || rng() % 10 == 0) return Formula::falsum();
        return var();
    }
    switch (rng() % 12) {
        case 0: return variable_count ? var() : Formula::falsum();
        case 1: return Formula::falsum();
        case 2:
        case 3:
            return Formula::conj(random_formula(rng, max_depth - 1, variable_count),
                                 random_formula(rng, max_depth - 1, variable_count));
        case 4:
        case 5:
            return Formula::disj(random_formula(rng, max_depth - 1, variable_count),
                                 random_formula(rng, max_depth - 1, variable_count));
        case 6:
        case 7:
            return Formula::implies(random_formula(rng, max_depth - 1, variable_count),
                                    random_formula(rng, max_depth - 1, variable_count));
        case 8:
        case 9: return Formula::dia(random_formula(rng, max_depth - 1, variable_count));
        default: return Formula::box(random_formula(rng, max_depth - 1, variable_count));
    }
}

// ---- soundness suite ----------------------------------------------------

struct SoundnessParams {
    Logic logic = Logic::CS4;
    int models = 200;
    int instances_per_axiom = 5;
    std::uint64_t seed = 0;
    int max_size = 8;
    double edge_density = 0.3;
    int variables = 3;
};

struct SoundnessViolation {
    std::string axiom;
    Formula instance;
    int model_index = 0;
    Model model;
    int world = 0;
};

struct SoundnessReport {
    SoundnessParams params;
    long checks = 0;
    std::vector<SoundnessViolation> violations;

    // Line-oriented report; identical runs print identical bytes.
    std::string to_text() const {
        std::ostringstream out;
        out << "SUITE logic=" << to_string(params.logic) << " models=" << params.models
            << " instances=" << params.instances_per_axiom << " seed=" << params.seed
            << "\n";
        for (const auto& v : violations) {
            out << "VIOLATION axiom=" << v.axiom << " model=" << v.model_index
                << " world=" << v.model.worlds[v.world]
                << " instance=" << render(v.instance) << "\n";
            out << "MODEL\n" << print_model_text(v.model);
        }
        out << (violations.empty() ? "OK" : "VIOLATION")
            << " summary checks=" << checks << " violations=" << violations.size()
            << "\n";
        return out.str();
    }
};

// Evaluates random instances of every axiom of the logic's calculus on
// random models of the logic's class.
inline SoundnessReport soundness_suite(const SoundnessParams& sp) {
    SoundnessReport report;
    report.params = sp;
    std::mt19937_64 rng(sp.seed);
    auto axioms = axioms_of(sp.logic);

    for (int mi = 0; mi < sp.models; ++mi) {
        GenParams gp;
        gp.size = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(sp.max_size));
        gp.edge_density = sp.edge_density;
        gp.variable_count = sp.variables;
        gp.logic = sp.logic;
        gp.seed = rng();
        Model m = random_model(gp);
        for (const auto& name : axioms) {
            const AxiomSchema* schema = find_schema(name);
            for (int k = 0; k < sp.instances_per_axiom; ++k) {
                Substitution subst;
                for (const std::string& mv : variables_of(schema->pattern))
                    subst[mv] = random_formula(rng, 3, sp.variables);
                Formula instance = substitute(schema->pattern, subst);
                ++report.checks;
                if (auto w = falsifying_world(m, instance))
                    report.violations.push_back({name, instance, mi, m, *w});
            }
        }
    }
    return report;
}

}  // namespace cs4kit
