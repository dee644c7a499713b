#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "semantics.hpp"

namespace cs4kit {

// Equivalence classes over world indices; classes are ordered by their
// lowest member (the representative) and members are sorted.
struct Partition {
    std::vector<int> class_of;
    std::vector<std::vector<int>> classes;

    static Partition identity(int n) {
        Partition p;
        p.class_of.resize(n);
        p.classes.resize(n);
        for (int i = 0; i < n; ++i) {
            p.class_of[i] = i;
            p.classes[i] = {i};
        }
        return p;
    }

    static Partition from_class_of(std::vector<int> raw) {
        // renumber class ids by first occurrence
        Partition p;
        int n = static_cast<int>(raw.size());
        p.class_of.assign(n, -1);
        int max_id = n;
        for (int c : raw) max_id = std::max(max_id, c + 1);
        std::vector<int> remap(max_id, -1);
        for (int w = 0; w < n; ++w) {
            int c = raw[w];
            if (remap[c] < 0) {
                remap[c] = static_cast<int>(p.classes.size());
                p.classes.emplace_back();
            }
            p.class_of[w] = remap[c];
            p.classes[p.class_of[w]].push_back(w);
        }
        return p;
    }

    int size() const { return static_cast<int>(class_of.size()); }
    int num_classes() const { return static_cast<int>(classes.size()); }
    int representative(int c) const { return classes[c].front(); }

    bool same_class(int a, int b) const { return class_of[a] == class_of[b]; }

    // True when every class of this partition lies inside a class of coarser.
    bool refines(const Partition& coarser) const {
        for (auto& cls : classes)
            for (int w : cls)
                if (coarser.class_of[w] != coarser.class_of[cls.front()]) return false;
        return true;
    }

    bool operator==(const Partition&) const = default;
};

namespace detail {

// Greatest label-preserving relation that is forward and backward confluent
// w.r.t. intuit (and, when strong, downward confluent as well), computed by
// deleting violating pairs from the label-equality relation to a fixpoint.
inline Relation bisim_fixpoint(const Model& m, const SubformulaSet& sigma, bool strong) {
    int n = m.size();
    auto lab = labels(m, sigma);
    Relation z(n);
    for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
            if (lab[w] == lab[v]) z.add(w, v);

    Relation intuit_inv = m.intuit.inverse();
    bool changed = true;
    while (changed) {
        changed = false;
        for (int w = 0; w < n; ++w) {
            for (int v = 0; v < n; ++v) {
                if (!z.contains(w, v)) continue;
                bool bad = false;
                // forward: w <= w' needs some v' >= v with (w', v') in z;
                // by symmetry of z this also enforces the backward condition
                m.intuit.row(w).for_each([&](int wp) {
                    if (!bad && !z.row(wp).intersects(m.intuit.row(v))) bad = true;
                });
                if (!bad && strong) {
                    // downward: u <= w needs some v' <= v with (u, v') in z
                    intuit_inv.row(w).for_each([&](int u) {
                        if (!bad && !z.row(u).intersects(intuit_inv.row(v))) bad = true;
                    });
                }
                if (bad) {
                    z.remove(w, v);
                    z.remove(v, w);
                    changed = true;
                }
            }
        }
    }

    // the result must be an equivalence relation; verify rather than assume
    for (int w = 0; w < n; ++w)
        if (!z.contains(w, w))
            throw std::logic_error("bisimulation fixpoint lost reflexivity");
    for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
            if (z.contains(w, v) && z.row(w) != z.row(v))
                throw std::logic_error("bisimulation fixpoint is not transitive");
    return z;
}

inline Partition partition_of(const Relation& z) {
    int n = z.size();
    std::vector<int> class_of(n, -1);
    for (int w = 0; w < n; ++w) {
        if (class_of[w] >= 0) continue;
        z.row(w).for_each([&](int v) { class_of[v] = w; });
    }
    return Partition::from_class_of(std::move(class_of));
}

}  // namespace detail

inline Partition greatest_bisim(const Model& m, const SubformulaSet& sigma) {
    return detail::partition_of(detail::bisim_fixpoint(m, sigma, false));
}

inline Partition greatest_strong_bisim(const Model& m, const SubformulaSet& sigma) {
    return detail::partition_of(detail::bisim_fixpoint(m, sigma, true));
}

// Quotient model: classes become worlds named after their representatives,
// relations are the pairwise images (the modal one re-closed transitively,
// both re-closed reflexively), fallible and valuation are images. When sigma
// is given, partitions whose classes mix distinct labels are rejected.
inline Model quotient(const Model& m, const Partition& part,
                      const SubformulaSet* sigma = nullptr) {
    int n = m.size();
    if (part.size() != n) throw std::invalid_argument("partition size mismatch");

    if (sigma) {
        auto lab = labels(m, *sigma);
        for (auto& cls : part.classes)
            for (int w : cls)
                if (!(lab[w] == lab[cls.front()]))
                    throw std::invalid_argument(
                        "partition class mixes distinct labels: " + m.worlds[cls.front()] +
                        " vs " + m.worlds[w]);
    }

    RawModel raw;
    for (auto& cls : part.classes) raw.worlds.push_back(m.worlds[cls.front()]);
    m.fallible.for_each([&](int w) { raw.fallible.push_back(part.class_of[w]); });
    m.intuit.for_each_pair([&](int a, int b) {
        raw.intuit_edges.emplace_back(part.class_of[a], part.class_of[b]);
    });
    m.modal.for_each_pair([&](int a, int b) {
        raw.modal_edges.emplace_back(part.class_of[a], part.class_of[b]);
    });
    for (auto& [p, ws] : m.valuation) {
        auto& out = raw.valuation[p];
        ws.for_each([&](int w) { out.push_back(part.class_of[w]); });
    }

    ValidateResult res = validate(raw);
    if (!res.ok())
        throw std::logic_error("quotient by a non-bisimulation partition: " +
                               res.diagnostics.front().constraint + " (" +
                               res.diagnostics.front().witness + ")");
    return *std::move(res.model);
}

}  // namespace cs4kit
