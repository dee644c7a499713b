#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cs4kit {

// Fixed-size bitset over world indices 0..size-1.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int size) : n_(size), w_((size + 63) / 64, 0) {}

    int size() const { return n_; }

    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    bool any() const {
        for (auto w : w_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    int count() const {
        int c = 0;
        for (auto w : w_) c += __builtin_popcountll(w);
        return c;
    }

    bool intersects(const Bitset& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }

    bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bitset& operator&=(const Bitset& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }

    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

    // Complement within the universe 0..size-1.
    Bitset complement() const {
        Bitset r(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
        r.trim();
        return r;
    }

    bool operator==(const Bitset&) const = default;

    // First set index, or -1.
    int first() const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return static_cast<int>(i * 64) + __builtin_ctzll(w_[i]);
        return -1;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < w_.size(); ++i) {
            std::uint64_t w = w_[i];
            while (w) {
                f(static_cast<int>(i * 64) + __builtin_ctzll(w));
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_indices() const {
        std::vector<int> v;
        for_each([&](int i) { v.push_back(i); });
        return v;
    }

    const std::vector<std::uint64_t>& words() const { return w_; }

private:
    void trim() {
        if (n_ & 63) w_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
    }

    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

// Binary relation over 0..size-1, stored as successor-row bitsets.
class Relation {
public:
    Relation() = default;
    explicit Relation(int n) : n_(n), rows_(n, Bitset(n)) {}

    static Relation identity(int n) {
        Relation r(n);
        for (int i = 0; i < n; ++i) r.add(i, i);
        return r;
    }

    static Relation full(int n) {
        Relation r(n);
        for (int i = 0; i < n; ++i) r.rows_[i] = Bitset(n).complement();
        return r;
    }

    int size() const { return n_; }

    bool contains(int a, int b) const { return rows_[a].test(b); }
    void add(int a, int b) { rows_[a].set(b); }
    void remove(int a, int b) { rows_[a].reset(b); }

    const Bitset& row(int a) const { return rows_[a]; }
    Bitset& row(int a) { return rows_[a]; }

    Relation inverse() const {
        Relation r(n_);
        for (int a = 0; a < n_; ++a)
            rows_[a].for_each([&](int b) { r.add(b, a); });
        return r;
    }

    // this ; s  (first this, then s).
    Relation composed(const Relation& s) const {
        Relation r(n_);
        for (int a = 0; a < n_; ++a)
            rows_[a].for_each([&](int z) { r.rows_[a] |= s.rows_[z]; });
        return r;
    }

    Relation united(const Relation& s) const {
        Relation r = *this;
        for (int a = 0; a < n_; ++a) r.rows_[a] |= s.rows_[a];
        return r;
    }

    Relation transitive_closure() const {
        Relation r = *this;
        for (int k = 0; k < n_; ++k)
            for (int i = 0; i < n_; ++i)
                if (r.rows_[i].test(k)) r.rows_[i] |= r.rows_[k];
        return r;
    }

    Relation reflexive_transitive_closure() const {
        return united(identity(n_)).transitive_closure();
    }

    bool is_reflexive() const {
        for (int i = 0; i < n_; ++i)
            if (!rows_[i].test(i)) return false;
        return true;
    }

    bool is_transitive() const { return *this == transitive_closure(); }

    bool is_preorder() const { return is_reflexive() && is_transitive(); }

    int edge_count() const {
        int c = 0;
        for (auto& r : rows_) c += r.count();
        return c;
    }

    template <class F>
    void for_each_pair(F&& f) const {
        for (int a = 0; a < n_; ++a) rows_[a].for_each([&](int b) { f(a, b); });
    }

    bool operator==(const Relation&) const = default;

private:
    int n_ = 0;
    std::vector<Bitset> rows_;
};

// Witness for a failed frame condition; field meaning depends on the check.
struct RelTriple {
    int a = -1, b = -1, c = -1;
    bool operator==(const RelTriple&) const = default;
};

// Forward confluence of r w.r.t. preorder pre:
//   a pre b and a r c  imply  some c' with c pre c' and b r c'.
// Witness (a, b, c) is the unrepaired pattern, scanned in ascending order.
inline std::optional<RelTriple> forward_violation(const Relation& pre, const Relation& r) {
    int n = pre.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!pre.contains(a, b)) continue;
            for (int c = 0; c < n; ++c)
                if (r.contains(a, c) && !r.row(b).intersects(pre.row(c)))
                    return RelTriple{a, b, c};
        }
    return std::nullopt;
}

// Backward confluence: a r b and b pre c  imply  some a' with a pre a' and a' r c.
// Witness (a, b, c).
inline std::optional<RelTriple> backward_violation(const Relation& pre, const Relation& r) {
    int n = pre.size();
    Relation rinv = r.inverse();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!r.contains(a, b)) continue;
            for (int c = 0; c < n; ++c)
                if (pre.contains(b, c) && !pre.row(a).intersects(rinv.row(c)))
                    return RelTriple{a, b, c};
        }
    return std::nullopt;
}

// Downward confluence: a pre b and b r c  imply  some a' with a r a' and a' pre c.
// Witness (a, b, c).
inline std::optional<RelTriple> downward_violation(const Relation& pre, const Relation& r) {
    int n = pre.size();
    Relation pinv = pre.inverse();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!pre.contains(a, b)) continue;
            for (int c = 0; c < n; ++c)
                if (r.contains(b, c) && !r.row(a).intersects(pinv.row(c)))
                    return RelTriple{a, b, c};
        }
    return std::nullopt;
}

// Local linearity of a preorder: successors of any point are pairwise comparable.
// Witness (a, b, c): b, c both above a yet incomparable.
inline std::optional<RelTriple> local_linearity_violation(const Relation& pre) {
    int n = pre.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!pre.contains(a, b)) continue;
            for (int c = b + 1; c < n; ++c)
                if (pre.contains(a, c) && !pre.contains(b, c) && !pre.contains(c, b))
                    return RelTriple{a, b, c};
        }
    return std::nullopt;
}

// Forest likeness of a preorder: predecessors of any point are totally ordered.
// Witness (a, b, c): b, c both below a yet incomparable.
inline std::optional<RelTriple> forest_violation(const Relation& pre) {
    Relation pinv = pre.inverse();
    int n = pre.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!pinv.contains(a, b)) continue;
            for (int c = b + 1; c < n; ++c)
                if (pinv.contains(a, c) && !pre.contains(b, c) && !pre.contains(c, b))
                    return RelTriple{a, b, c};
        }
    return std::nullopt;
}

inline bool is_forward_confluent(const Relation& pre, const Relation& r) {
    return !forward_violation(pre, r).has_value();
}
inline bool is_backward_confluent(const Relation& pre, const Relation& r) {
    return !backward_violation(pre, r).has_value();
}
inline bool is_downward_confluent(const Relation& pre, const Relation& r) {
    return !downward_violation(pre, r).has_value();
}
inline bool is_locally_linear(const Relation& pre) {
    return !local_linearity_violation(pre).has_value();
}
inline bool is_forest_like(const Relation& pre) {
    return !forest_violation(pre).has_value();
}

}  // namespace cs4kit
