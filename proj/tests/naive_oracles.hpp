// Test-only reference implementations: direct transliterations of the
// definitions, written without the bitset machinery of the library, used to
// cross-check the optimized code paths.
#pragma once

#include <vector>

#include "cs4kit/cs4kit.hpp"

namespace oracles {

using cs4kit::Formula;
using cs4kit::Model;
using cs4kit::Partition;
using cs4kit::Relation;

// Clause-by-clause recursive satisfaction, no memoization.
inline bool naive_eval(const Model& m, int w, const Formula& f) {
    using cs4kit::Conn;
    int n = m.size();
    switch (f.kind()) {
        case Conn::Var: {
            auto it = m.valuation.find(f.var_name());
            if (it == m.valuation.end()) return m.fallible.test(w);
            return it->second.test(w);
        }
        case Conn::Falsum: return m.fallible.test(w);
        case Conn::And: return naive_eval(m, w, f.lhs()) && naive_eval(m, w, f.rhs());
        case Conn::Or: return naive_eval(m, w, f.lhs()) || naive_eval(m, w, f.rhs());
        case Conn::Implies:
            for (int v = 0; v < n; ++v)
                if (m.intuit.contains(w, v) && naive_eval(m, v, f.lhs()) &&
                    !naive_eval(m, v, f.rhs()))
                    return false;
            return true;
        case Conn::Dia:
            for (int u = 0; u < n; ++u) {
                if (!m.intuit.contains(w, u)) continue;
                bool some = false;
                for (int v = 0; v < n && !some; ++v)
                    if (m.modal.contains(u, v) && naive_eval(m, v, f.body())) some = true;
                if (!some) return false;
            }
            return true;
        case Conn::Box:
            for (int u = 0; u < n; ++u) {
                if (!m.intuit.contains(w, u)) continue;
                for (int v = 0; v < n; ++v)
                    if (m.modal.contains(u, v) && !naive_eval(m, v, f.body()))
                        return false;
            }
            return true;
    }
    return false;
}

// All partitions of {0..n-1} as restricted growth strings.
inline std::vector<Partition> all_partitions(int n) {
    std::vector<Partition> out;
    std::vector<int> rgs(n, 0);
    for (;;) {
        out.push_back(Partition::from_class_of(rgs));
        // next restricted growth string
        int i = n - 1;
        for (; i > 0; --i) {
            int maxv = 0;
            for (int j = 0; j < i; ++j) maxv = std::max(maxv, rgs[j]);
            if (rgs[i] <= maxv) break;
        }
        if (i == 0) return out;
        ++rgs[i];
        for (int j = i + 1; j < n; ++j) rgs[j] = 0;
    }
}

// Equivalence relation of a partition.
inline Relation partition_relation(const Partition& p) {
    Relation z(p.size());
    for (int a = 0; a < p.size(); ++a)
        for (int b = 0; b < p.size(); ++b)
            if (p.same_class(a, b)) z.add(a, b);
    return z;
}

// Definition-level check that z is a (strong) sigma-bisimulation on m.
inline bool is_sigma_bisim(const Model& m, const cs4kit::SubformulaSet& sigma,
                           const Relation& z, bool strong) {
    int n = m.size();
    auto lab = cs4kit::labels(m, sigma);
    for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v) {
            if (!z.contains(w, v)) continue;
            if (!(lab[w] == lab[v])) return false;
            for (int wp = 0; wp < n; ++wp) {  // forward
                if (!m.intuit.contains(w, wp)) continue;
                bool ok = false;
                for (int vp = 0; vp < n && !ok; ++vp)
                    if (m.intuit.contains(v, vp) && z.contains(wp, vp)) ok = true;
                if (!ok) return false;
            }
            for (int vp = 0; vp < n; ++vp) {  // backward
                if (!m.intuit.contains(v, vp)) continue;
                bool ok = false;
                for (int wp = 0; wp < n && !ok; ++wp)
                    if (m.intuit.contains(w, wp) && z.contains(wp, vp)) ok = true;
                if (!ok) return false;
            }
            if (strong) {  // downward, for z and its inverse alike
                for (int u = 0; u < n; ++u) {
                    if (!m.intuit.contains(u, w)) continue;
                    bool ok = false;
                    for (int vp = 0; vp < n && !ok; ++vp)
                        if (z.contains(u, vp) && m.intuit.contains(vp, v)) ok = true;
                    if (!ok) return false;
                }
            }
        }
    return true;
}

// Coarsest partition that is a (strong) sigma-bisimulation equivalence,
// found by scanning every partition of the world set.
inline Partition coarsest_bisim_partition(const Model& m,
                                          const cs4kit::SubformulaSet& sigma,
                                          bool strong) {
    Partition best = Partition::identity(m.size());
    for (const Partition& p : all_partitions(m.size()))
        if (p.num_classes() < best.num_classes() &&
            is_sigma_bisim(m, sigma, partition_relation(p), strong))
            best = p;
    return best;
}

// Longest strict intuit chain from w by exhaustive recursion.
inline int naive_world_height(const Model& m, int w) {
    int best = 0;
    for (int v = 0; v < m.size(); ++v)
        if (v != w && m.intuit.contains(w, v) && !m.intuit.contains(v, w))
            best = std::max(best, 1 + naive_world_height(m, v));
    return best;
}

enum class ConfluenceKind { Forward, Backward, Downward };

// Adds r-edges until the requested confluence over pre holds; the full
// relation satisfies all three, so this terminates.
inline Relation repair_confluent(const Relation& pre, Relation r, ConfluenceKind kind) {
    for (;;) {
        std::optional<cs4kit::RelTriple> v;
        switch (kind) {
            case ConfluenceKind::Forward:
                v = cs4kit::forward_violation(pre, r);
                if (v) r.add(v->b, v->c);
                break;
            case ConfluenceKind::Backward:
                v = cs4kit::backward_violation(pre, r);
                if (v) r.add(v->a, v->c);
                break;
            case ConfluenceKind::Downward:
                v = cs4kit::downward_violation(pre, r);
                if (v) r.add(v->a, v->c);
                break;
        }
        if (!v) return r;
    }
}

}  // namespace oracles
