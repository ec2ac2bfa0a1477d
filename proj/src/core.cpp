#include "multfree/core.hpp"

#include <numeric>

#include "multfree/error.hpp"

namespace multfree {

Multiplier Multiplier::reduce(Int numerator, Int denominator) {
    if (numerator == 0 || denominator == 0)
        throw DomainError("ratio terms must be positive");
    const Int g = std::gcd(numerator, denominator);
    const Int b = numerator / g;
    const Int a = denominator / g;
    if (b <= a)
        throw RatioNotGreaterThanOne(std::to_string(b) + "/" + std::to_string(a) +
                                     " is not greater than 1");
    return Multiplier(a, b);
}

std::string Multiplier::to_string() const {
    return std::to_string(b_) + "/" + std::to_string(a_);
}

std::optional<Int> checked_pow(Int base, unsigned exp) noexcept {
    Int result = 1;
    for (unsigned k = 0; k < exp; ++k) {
        if (__builtin_mul_overflow(result, base, &result)) return std::nullopt;
    }
    return result;
}

unsigned subpower_index(Int k, Int b) {
    if (k == 0 || b < 2) throw DomainError("subpower_index needs k >= 1 and b >= 2");
    unsigned i = 0;
    while (k % b == 0) {
        k /= b;
        ++i;
    }
    return i;
}

unsigned max_level(Int n, Int b) {
    if (n == 0 || b < 2) throw DomainError("max_level needs n >= 1 and b >= 2");
    unsigned i = 0;
    // invariant: b^i <= n
    for (Int q = n / b; q > 0; q /= b) ++i;
    return i;
}

unsigned level_count(Int n, Int b) {
    return n == 0 ? 0 : max_level(n, b) + 1;
}

Int level_size(Int n, Int b, unsigned i) {
    if (b < 2) throw DomainError("level_size needs b >= 2");
    const auto lo = checked_pow(b, i);
    if (!lo || *lo > n)
        throw LevelOutOfRange("level " + std::to_string(i) + " exceeds floor(log_" +
                              std::to_string(b) + " " + std::to_string(n) + ")");
    const Int upper = n / *lo;
    return upper - upper / b;
}

Chain chain_from(Int start, const Multiplier& m, Int n) {
    if (start == 0 || start > n)
        throw DomainError("chain start " + std::to_string(start) + " outside [1, " +
                          std::to_string(n) + "]");
    if (start % m.b() == 0)
        throw NotAChainStart(std::to_string(start) + " is divisible by " + std::to_string(m.b()));
    Chain chain;
    walk_chain(start, m, n, [&](Int v, unsigned) {
        chain.elements.push_back(v);
        return true;
    });
    return chain;
}

ChainPosition chain_containing(Int v, const Multiplier& m, Int n) {
    if (v == 0 || v > n)
        throw DomainError("element " + std::to_string(v) + " outside [1, " + std::to_string(n) +
                          "]");
    Int start = v;
    std::size_t position = 0;
    while (const auto prev = predecessor(start, m)) {
        start = *prev;
        ++position;
    }
    return {chain_from(start, m, n), position};
}

}  // namespace multfree
