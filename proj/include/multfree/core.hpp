#pragma once

/**
 * Chain algebra for the multiple graph on [n].
 *
 * For a reduced ratio r = b/a > 1 the arcs x -> r*x split [n] into disjoint
 * directed paths ("chains"). A chain starts at an integer s with b not
 * dividing s and continues while the current element is divisible by a and
 * the next element stays within n. The position of an element inside its
 * chain equals its b-adic valuation, so chain structure can be read off
 * arithmetically without materializing the graph.
 */

#include <cstdint>
#include <optional>
#include <ranges>
#include <string>
#include <vector>

namespace multfree {

using Int = std::uint64_t;

// Largest n for which the arithmetic is documented to be exact.
inline constexpr Int kMaxN = Int{1} << 50;

// Reduced ratio r = b/a with gcd(a, b) = 1 and a < b.
class Multiplier {
public:
    // Reduces numerator/denominator; throws RatioNotGreaterThanOne when the
    // reduced ratio is <= 1 and DomainError when either argument is zero.
    static Multiplier reduce(Int numerator, Int denominator);

    [[nodiscard]] Int a() const noexcept { return a_; }
    [[nodiscard]] Int b() const noexcept { return b_; }
    [[nodiscard]] double ratio() const noexcept { return double(b_) / double(a_); }
    [[nodiscard]] bool is_integral() const noexcept { return a_ == 1; }

    // "b/a"
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Multiplier&, const Multiplier&) = default;

private:
    Multiplier(Int a, Int b) : a_(a), b_(b) {}

    Int a_;
    Int b_;
};

inline Multiplier reduce_multiplier(Int numerator, Int denominator) {
    return Multiplier::reduce(numerator, denominator);
}

// Saturating integer power; returns nullopt when base^exp exceeds 2^64 - 1.
std::optional<Int> checked_pow(Int base, unsigned exp) noexcept;

// b*x/a when a | x and the result is <= n.
[[nodiscard]] inline std::optional<Int> successor(Int x, const Multiplier& m, Int n) noexcept {
    if (x % m.a() != 0) return std::nullopt;
    // divide first: x/a <= n/b  <=>  b*x/a <= n, and the product cannot overflow
    const Int q = x / m.a();
    if (q > n / m.b()) return std::nullopt;
    return q * m.b();
}

// a*x/b when b | x.
[[nodiscard]] inline std::optional<Int> predecessor(Int x, const Multiplier& m) noexcept {
    if (x % m.b() != 0) return std::nullopt;
    return x / m.b() * m.a();
}

// b-adic valuation of k (k >= 1, b >= 2).
[[nodiscard]] unsigned subpower_index(Int k, Int b);

// floor(log_b n) computed with integer arithmetic; n >= 1.
[[nodiscard]] unsigned max_level(Int n, Int b);

// Number of nonempty levels: 0 for n = 0, otherwise max_level(n, b) + 1.
[[nodiscard]] unsigned level_count(Int n, Int b);

// |T_i| = floor(n/b^i) - floor(n/b^(i+1)), the count of i-th subpowers of b in
// [n]. Throws LevelOutOfRange when b^i > n.
[[nodiscard]] Int level_size(Int n, Int b, unsigned i);

// Integers s in [n] with b not dividing s, in increasing order.
[[nodiscard]] inline auto chain_starts(Int n, const Multiplier& m) {
    const Int b = m.b();
    return std::views::iota(Int{1}, n + 1) |
           std::views::filter([b](Int s) { return s % b != 0; });
}

struct Chain {
    std::vector<Int> elements;

    [[nodiscard]] Int start() const { return elements.front(); }
    [[nodiscard]] std::size_t length() const noexcept { return elements.size(); }
};

// The maximal chain beginning at `start`. Throws NotAChainStart when b | start
// and DomainError when start is outside [1, n].
[[nodiscard]] Chain chain_from(Int start, const Multiplier& m, Int n);

struct ChainPosition {
    Chain chain;
    std::size_t position;
};

// The chain through v together with the index of v inside it.
[[nodiscard]] ChainPosition chain_containing(Int v, const Multiplier& m, Int n);

// Walks the chain beginning at `start` without allocating, calling
// fn(value, position) per element. Stops at the chain end or when fn
// returns false.
template <class ElementFn>
void walk_chain(Int start, const Multiplier& m, Int n, ElementFn&& fn) {
    const Int a = m.a();
    const Int b = m.b();
    const Int limit = n / b;
    Int v = start;
    for (unsigned pos = 0;; ++pos) {
        if (!fn(v, pos)) return;
        Int q = v;
        if (a != 1) {
            q = v / a;
            if (q * a != v) return;
        }
        if (q > limit) return;
        v = q * b;
    }
}

// Calls fn(s) for every chain start s in [lo, hi] in increasing order,
// tracking s mod b incrementally instead of dividing.
template <class StartFn>
void for_each_start(Int lo, Int hi, const Multiplier& m, StartFn&& fn) {
    if (lo > hi) return;
    const Int b = m.b();
    Int residue = lo % b;
    for (Int s = lo;; ++s) {
        if (residue != 0) fn(s);
        if (s == hi) return;
        if (++residue == b) residue = 0;
    }
}

}  // namespace multfree
