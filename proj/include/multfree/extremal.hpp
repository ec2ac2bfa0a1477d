#pragma once

/**
 * Maximum multiple-free subsets of the full interval [n].
 *
 * Every chain is a path, and on a path the alternate vertices starting from
 * the smallest one form a maximum independent set. The canonical extremal set
 * is therefore the union of even-position chain elements, and its size is
 * the number of integers in [n] whose b-adic valuation is even.
 */

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "multfree/core.hpp"

namespace multfree {

using Rational = boost::multiprecision::cpp_rational;

// Largest element count accepted by the brute-force oracles.
inline constexpr std::size_t kOracleLimit = 24;

struct ExtremalResult {
    Int size = 0;
    std::optional<std::vector<Int>> witness;  // sorted
    Rational residual;                        // size - b*n/(b+1)
};

// True iff no x, y in s satisfy b*x == a*y. `s` must be sorted ascending.
[[nodiscard]] bool is_multiple_free(std::span<const Int> s, const Multiplier& m);

// f_{b/a}(n): sum over chains of ceil(length / 2). Evaluated from the chain
// length census (the number of chains longer than j is level_size(n, b, j)),
// which takes O(log n) time.
[[nodiscard]] Int max_set_size(Int n, const Multiplier& m);

// Same quantity obtained by walking every chain, split into fixed blocks of
// chain starts and reduced by integer sum on `threads` workers.
[[nodiscard]] Int max_set_size_by_chains(Int n, const Multiplier& m, unsigned threads = 1);

// The canonical maximum set: every even-position chain element.
[[nodiscard]] ExtremalResult max_set(Int n, const Multiplier& m, bool with_witness = true);

// Exhaustive subset enumeration; independent of the chain decomposition.
// Throws TooLargeForOracle above kOracleLimit elements.
[[nodiscard]] Int brute_force_max(std::span<const Int> elements, const Multiplier& m);

// Second oracle: builds the induced graph from set lookups and runs an
// include/exclude dynamic program along each path component.
[[nodiscard]] Int brute_force_max_dp(std::span<const Int> elements, const Multiplier& m);

// f_{b/a}(n) - b*n/(b+1), exact. Requires n >= 1.
[[nodiscard]] Rational dense_residual(Int n, const Multiplier& m);

}  // namespace multfree
