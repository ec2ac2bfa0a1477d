#include "multfree/extremal.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>
#include <unordered_map>

#include "multfree/error.hpp"
#include "multfree/parallel.hpp"

namespace multfree {

namespace {

constexpr Int kStartBlock = Int{1} << 16;

std::vector<Int> sorted_unique(std::span<const Int> elements) {
    std::vector<Int> v(elements.begin(), elements.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (!v.empty() && v.front() == 0) throw DomainError("elements must be positive");
    return v;
}

}  // namespace

bool is_multiple_free(std::span<const Int> s, const Multiplier& m) {
    for (const Int x : s) {
        if (x % m.a() != 0) continue;
        Int y = 0;
        if (__builtin_mul_overflow(x / m.a(), m.b(), &y)) continue;
        if (std::binary_search(s.begin(), s.end(), y)) return false;
    }
    return true;
}

Int max_set_size(Int n, const Multiplier& m) {
    Int total = 0;
    const unsigned levels = level_count(n, m.b());
    for (unsigned j = 0; j < levels; j += 2) total += level_size(n, m.b(), j);
    return total;
}

Int max_set_size_by_chains(Int n, const Multiplier& m, unsigned threads) {
    const std::size_t blocks = (n + kStartBlock - 1) / kStartBlock;
    std::vector<Int> partial(blocks, 0);
    parallel_for(blocks, threads, [&](std::size_t k) {
        const Int lo = k * kStartBlock + 1;
        const Int hi = std::min(n, lo + kStartBlock - 1);
        Int sum = 0;
        for_each_start(lo, hi, m, [&](Int s) {
            Int length = 0;
            walk_chain(s, m, n, [&](Int, unsigned) {
                ++length;
                return true;
            });
            sum += (length + 1) / 2;
        });
        partial[k] = sum;
    });
    return std::accumulate(partial.begin(), partial.end(), Int{0});
}

ExtremalResult max_set(Int n, const Multiplier& m, bool with_witness) {
    ExtremalResult result;
    result.size = max_set_size(n, m);
    if (n > 0) result.residual = dense_residual(n, m);
    if (with_witness) {
        std::vector<Int> witness;
        witness.reserve(result.size);
        for (const Int s : chain_starts(n, m)) {
            walk_chain(s, m, n, [&](Int v, unsigned pos) {
                if (pos % 2 == 0) witness.push_back(v);
                return true;
            });
        }
        std::sort(witness.begin(), witness.end());
        result.witness = std::move(witness);
    }
    return result;
}

Int brute_force_max(std::span<const Int> elements, const Multiplier& m) {
    const auto v = sorted_unique(elements);
    if (v.size() > kOracleLimit)
        throw TooLargeForOracle(std::to_string(v.size()) + " elements exceed the oracle limit of " +
                                std::to_string(kOracleLimit));
    // Every forbidden pair (x, y) with b*x == a*y, as a bitmask over indices.
    std::vector<std::uint32_t> arcs;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (i != j && static_cast<unsigned __int128>(v[i]) * m.b() ==
                              static_cast<unsigned __int128>(v[j]) * m.a())
                arcs.push_back((std::uint32_t{1} << i) | (std::uint32_t{1} << j));

    const std::uint32_t limit = std::uint32_t{1} << v.size();
    int best = 0;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        const int size = std::popcount(mask);
        if (size <= best) continue;
        const bool ok = std::none_of(arcs.begin(), arcs.end(),
                                     [mask](std::uint32_t arc) { return (mask & arc) == arc; });
        if (ok) best = size;
    }
    return static_cast<Int>(best);
}

Int brute_force_max_dp(std::span<const Int> elements, const Multiplier& m) {
    const auto v = sorted_unique(elements);
    // next[x] = r*x when it is also in the set.
    std::unordered_map<Int, Int> next;
    std::unordered_map<Int, bool> has_prev;
    for (const Int x : v) {
        if (x % m.a() != 0) continue;
        const Int y = x / m.a() * m.b();
        if (std::binary_search(v.begin(), v.end(), y)) {
            next[x] = y;
            has_prev[y] = true;
        }
    }
    Int total = 0;
    for (const Int x : v) {
        if (has_prev.contains(x)) continue;
        // take / skip DP along the path starting at x
        Int take = 1, skip = 0;
        for (auto it = next.find(x); it != next.end(); it = next.find(it->second)) {
            const Int new_take = skip + 1;
            skip = std::max(take, skip);
            take = new_take;
        }
        total += std::max(take, skip);
    }
    return total;
}

Rational dense_residual(Int n, const Multiplier& m) {
    if (n == 0) throw DomainError("dense_residual needs n >= 1");
    return Rational(max_set_size(n, m)) - Rational(boost::multiprecision::cpp_int(m.b()) * n,
                                                   boost::multiprecision::cpp_int(m.b() + 1));
}

}  // namespace multfree
