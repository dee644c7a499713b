#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

#include "bisim.hpp"

namespace cs4kit {

using BigNat = boost::multiprecision::cpp_int;

// 2^x_y: height 0 is x itself, height y+1 is 2 raised to the previous stage.
struct Tower {
    BigNat base;
    unsigned height = 0;
    bool operator==(const Tower&) const = default;
};

inline Tower superexp(BigNat base, unsigned height) { return {std::move(base), height}; }

inline std::string to_string(const Tower& t) {
    return "2^{" + t.base.str() + "}_{" + std::to_string(t.height) + "}";
}

constexpr unsigned kDefaultMaterializeBits = 1u << 20;

// Unfolds the tower; refuses once an exponent would exceed max_bits bits.
inline std::optional<BigNat> materialize(const Tower& t,
                                         unsigned max_bits = kDefaultMaterializeBits) {
    BigNat v = t.base;
    for (unsigned i = 0; i < t.height; ++i) {
        if (v >= max_bits) return std::nullopt;  // 2^v needs v+1 bits
        v = BigNat(1) << v.convert_to<unsigned>();
    }
    return v;
}

namespace detail {

inline BigNat bit_length(const BigNat& n) {
    // bits needed for n >= 1; bit_length(0) = 0
    return n == 0 ? BigNat(0) : BigNat(boost::multiprecision::msb(n) + 1);
}

// 2^x_y <= n, decided by iterated bit-length descent.
inline bool tower_le_nat(const BigNat& x, unsigned y, const BigNat& n) {
    if (y == 0) return x <= n;
    if (n <= 0) return false;
    // with m = 2^x_{y-1}: 2^m <= n  iff  m <= bitlen(n) - 1
    return tower_le_nat(x, y - 1, bit_length(n) - 1);
}

}  // namespace detail

// n <= 2^base_height, exact, without materializing the tower.
inline bool le_tower(const BigNat& n, const Tower& t) {
    if (t.height == 0) return n <= t.base;
    if (n <= 1) return true;
    // with m = 2^base_{height-1}: n <= 2^m  iff  m >= ceil(log2 n)
    BigNat c = detail::bit_length(n - 1);
    return !detail::tower_le_nat(t.base, t.height - 1, c - 1);
}

// 2^m * 2_k^{(n-1)m} <= 2_k^{nm}, checked on materialized values.
// nullopt when either side exceeds the materialization threshold.
inline std::optional<bool> check_superexp_inequality(
    unsigned m, unsigned n, unsigned k, unsigned max_bits = kDefaultMaterializeBits) {
    if (m < 1 || n < 1 || k < 1)
        throw std::invalid_argument("check_superexp_inequality requires m, n, k >= 1");
    auto lhs_tower = materialize(superexp(BigNat((n - 1) * m), k), max_bits);
    auto rhs = materialize(superexp(BigNat(n * m), k), max_bits);
    if (!lhs_tower || !rhs) return std::nullopt;
    if (detail::bit_length(*lhs_tower) + m > max_bits) return std::nullopt;
    BigNat lhs = (BigNat(1) << m) * *lhs_tower;
    return lhs <= *rhs;
}

// Upper bound on the number of bisimulation classes of a model of the given
// height w.r.t. a sigma of the given size: 2^{2(h+1)s}_{h+2}.
inline Tower bisim_bound(unsigned height, unsigned sigma_size) {
    return superexp(BigNat(2) * (height + 1) * sigma_size, height + 2);
}

// Quotient that stays in the requested class: CS4, IS4 and GS4 quotient by
// the plain bisimulation, S4I by the strong one and only on forest-like
// models, where downward confluence survives the quotient.
inline Model finitize(const Model& m, const SubformulaSet& sigma, Logic logic) {
    if (logic == Logic::S4I) {
        if (!is_forest_like(m.intuit))
            throw std::invalid_argument(
                "finitize for S4I requires a forest-like intuitionistic order");
        return quotient(m, greatest_strong_bisim(m, sigma), &sigma);
    }
    return quotient(m, greatest_bisim(m, sigma), &sigma);
}

}  // namespace cs4kit
