#pragma once

/**
 * Maximum multiple-free subsets of the random set [n]_p.
 *
 * Each element of [n] is kept independently with probability p. Inside a
 * chain the kept elements form maximal runs; a run of length L contributes
 * ceil(L/2), realized by the run members at even distance from the run's
 * smallest element. Grouping those members by b-adic valuation gives the
 * per-level counts |T*_i|, whose expectations have closed forms.
 *
 * Sampling is stateless: membership of v is decided by a keyed
 * pseudorandom function of (seed, trial, v), so chains can be scanned in any
 * order, on any number of threads, without storing a bitmap.
 */

#include <algorithm>
#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "multfree/core.hpp"
#include "multfree/extremal.hpp"
#include "multfree/parallel.hpp"
#include "multfree/prf.hpp"

namespace multfree {

struct SampleSpec {
    Int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
};

// A realization of [n]_p backed by the keyed PRF.
class SubsetSample {
public:
    // Throws DomainError unless 0 <= p <= 1.
    explicit SubsetSample(const SampleSpec& spec);

    [[nodiscard]] const SampleSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] Int n() const noexcept { return spec_.n; }
    [[nodiscard]] double p() const noexcept { return spec_.p; }

    // u(v) < p, evaluated as bits53(v) < ceil(p * 2^53), which is exact.
    [[nodiscard]] bool contains(Int v) const noexcept {
        return v >= 1 && v <= spec_.n && prf::bits53(key_, v) < threshold_;
    }

private:
    SampleSpec spec_;
    std::uint64_t key_;
    std::uint64_t threshold_;
};

[[nodiscard]] inline SubsetSample sample_subset(const SampleSpec& spec) { return SubsetSample(spec); }

// An explicitly listed subset of [n]. `p` is the nominal inclusion
// probability used when reporting level probabilities.
class FixedSubset {
public:
    FixedSubset(Int n, std::vector<Int> elements, double p = 1.0);

    [[nodiscard]] Int n() const noexcept { return n_; }
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] std::span<const Int> elements() const noexcept { return elements_; }

    [[nodiscard]] bool contains(Int v) const noexcept {
        return std::binary_search(elements_.begin(), elements_.end(), v);
    }

private:
    Int n_;
    std::vector<Int> elements_;
    double p_;
};

template <class S>
concept Subset = requires(const S& s, Int v) {
    { s.n() } -> std::convertible_to<Int>;
    { s.p() } -> std::convertible_to<double>;
    { s.contains(v) } -> std::same_as<bool>;
};

// Levels are bounded by log_2(2^64).
inline constexpr unsigned kMaxLevels = 64;
using LevelArray = std::array<Int, kMaxLevels>;

struct ChainScan {
    Int size = 0;          // f_r of the subset
    LevelArray stars{};    // stars[i] = |T*_i|
};

namespace detail {

inline constexpr Int kScanBlock = Int{1} << 16;

inline Int scan_block_count(Int n) { return (n + kScanBlock - 1) / kScanBlock; }

// Scans the chains whose starts lie in block k, adding |T*_i| into `stars`.
template <Subset S>
void scan_block(const S& subset, const Multiplier& m, std::size_t k, LevelArray& stars) {
    const Int n = subset.n();
    const Int lo = k * kScanBlock + 1;
    const Int hi = std::min(n, lo + kScanBlock - 1);
    for_each_start(lo, hi, m, [&](Int s) {
        Int run = 0;  // consecutive present elements ending at the current one
        walk_chain(s, m, n, [&](Int v, unsigned pos) {
            // branch-free: membership is a coin flip and mispredicts badly
            run = (run + 1) * Int{subset.contains(v)};
            stars[pos] += run & 1;
            return true;
        });
    });
}

}  // namespace detail

// Single pass over every chain of [n]. Deterministic for any thread count.
template <Subset S>
[[nodiscard]] ChainScan scan_subset(const S& subset, const Multiplier& m, unsigned threads = 1) {
    const std::size_t blocks = detail::scan_block_count(subset.n());
    std::vector<LevelArray> partial(blocks, LevelArray{});
    parallel_for(blocks, threads,
                 [&](std::size_t k) { detail::scan_block(subset, m, k, partial[k]); });
    ChainScan out;
    for (const auto& block : partial)
        for (unsigned i = 0; i < kMaxLevels; ++i) out.stars[i] += block[i];
    for (const Int c : out.stars) out.size += c;
    return out;
}

template <Subset S>
[[nodiscard]] Int max_set_size_in_subset(const S& subset, const Multiplier& m,
                                         unsigned threads = 1) {
    return scan_subset(subset, m, threads).size;
}

struct LevelStats {
    unsigned i = 0;
    Int level_total = 0;  // |T_i|
    Int star_count = 0;   // |T*_i|
    double probability = 0.0;  // pi_i at the subset's p
    double expected = 0.0;     // E|T*_i|
};

// pi_i: probability that an element of T_i present in [n]_p lies at even
// distance from its run's smallest element.
[[nodiscard]] double level_probability(unsigned i, double p);

// E|T*_i| = |T_i| * pi_i. Throws LevelOutOfRange when b^i > n.
[[nodiscard]] double expected_level(Int n, const Multiplier& m, double p, unsigned i);

// The smooth approximation (b-1)/(b(1+p)) * p*n * (b^-i + (-p/b)^i * p),
// which differs from expected_level by at most 1.
[[nodiscard]] double expected_level_closed_form(Int n, Int b, double p, unsigned i);

// E f_r([n]_p) = sum over levels of expected_level.
[[nodiscard]] double expected_total(Int n, const Multiplier& m, double p);

// b*p*n / (b + p)
[[nodiscard]] double main_term(Int n, const Multiplier& m, double p);

std::vector<LevelStats> level_stats(const ChainScan& scan, Int n, const Multiplier& m, double p);

template <Subset S>
[[nodiscard]] std::vector<LevelStats> level_counts(const S& subset, const Multiplier& m,
                                                   unsigned threads = 1) {
    return level_stats(scan_subset(subset, m, threads), subset.n(), m, subset.p());
}

// Exact-arithmetic counterparts, evaluated as the explicit finite sums.
[[nodiscard]] Rational level_probability_exact(unsigned i, const Rational& p);
[[nodiscard]] Rational expected_total_exact(Int n, const Multiplier& m, const Rational& p);

enum class ExhaustiveMode {
    Flat,      // all 2^n subsets of [n]
    PerChain,  // sum over chains of the chain's own 2^length enumeration
};

inline constexpr Int kExhaustiveLimit = 20;

// Expectation of f_r([n]_p) by enumerating realizations. Throws
// TooLargeForOracle when n > 20.
[[nodiscard]] double exhaustive_expectation(Int n, const Multiplier& m, double p,
                                            ExhaustiveMode mode = ExhaustiveMode::Flat);
[[nodiscard]] Rational exhaustive_expectation_exact(Int n, const Multiplier& m, const Rational& p,
                                                    ExhaustiveMode mode = ExhaustiveMode::Flat);

// Chernoff tail bounds for a sum of independent indicators with mean `mean`.
[[nodiscard]] double chernoff_upper(double lambda, double mean);
[[nodiscard]] double chernoff_lower(double lambda, double mean);
// 2*exp(-lambda^2*mean/3), uncapped (may reach 2). Throws LambdaOutOfRange
// unless 0 <= lambda <= 1.
[[nodiscard]] double chernoff_two_sided(double lambda, double mean);
[[nodiscard]] inline double as_probability(double bound) { return std::min(bound, 1.0); }

struct TailBound {
    double lambda = 0.0;
    double mean = 0.0;
    double upper = 1.0;
    double lower = 1.0;
    std::optional<double> two_sided;  // absent when lambda > 1
};

[[nodiscard]] TailBound tail_bound(double lambda, double mean);

// c * sqrt(p*n) * ln n * ln ln n. Throws DomainError for n < 16.
[[nodiscard]] double concentration_envelope(Int n, double p, double c);

// Largest level i with i <= 0.9 * log_b n, decided with exact integer
// arithmetic (b^(10 i) <= n^9). Levels above it form the sparse regime.
[[nodiscard]] unsigned dense_regime_top(Int n, Int b);

struct TrialSummary {
    Int n = 0;
    Multiplier m = Multiplier::reduce(2, 1);
    double p = 0.0;
    std::uint64_t seed = 0;
    std::vector<Int> sizes;
    double mean = 0.0;
    double sample_stddev = 0.0;
    std::vector<double> per_level_means;
    std::vector<double> per_level_expected;
    double analytic_total = 0.0;
    std::optional<double> envelope;              // c = 1; needs n >= 16
    double max_abs_deviation = 0.0;              // max |size - mean|
    std::optional<double> fitted_envelope_constant;  // max deviation / envelope(c=1)
};

// Runs trials 0..trials-1 of [n]_p under `seed`. Output is a pure function of
// (n, m, p, trials, seed). Throws DomainError when trials == 0.
[[nodiscard]] TrialSummary monte_carlo(Int n, const Multiplier& m, double p, std::size_t trials,
                                       std::uint64_t seed, unsigned threads = 1);

}  // namespace multfree
