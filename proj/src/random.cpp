#include "multfree/random.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "multfree/error.hpp"

namespace multfree {

namespace {

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p = " + std::to_string(p) + " outside [0, 1]");
}

template <class T>
T power(const T& x, unsigned k) {
    T r = 1;
    for (unsigned t = 0; t < k; ++t) r *= x;
    return r;
}

// hist[k] = sum of f_r(S) over the subsets S of [n] with |S| = k, for every
// subset of the listed chains (elements of a chain are consecutive bits).
void enumerate_chains(const std::vector<std::vector<Int>>& chains, std::vector<Int>& hist) {
    std::size_t bits = 0;
    for (const auto& c : chains) bits += c.size();
    hist.assign(bits + 1, 0);
    const std::uint64_t limit = std::uint64_t{1} << bits;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        Int size = 0;
        std::size_t bit = 0;
        for (const auto& c : chains) {
            Int run = 0;
            for (std::size_t j = 0; j < c.size(); ++j, ++bit) {
                if (mask >> bit & 1U) {
                    if (++run % 2 == 1) ++size;
                } else {
                    run = 0;
                }
            }
        }
        hist[std::popcount(mask)] += size;
    }
}

std::vector<std::vector<Int>> all_chains(Int n, const Multiplier& m) {
    std::vector<std::vector<Int>> chains;
    for (const Int s : chain_starts(n, m)) chains.push_back(chain_from(s, m, n).elements);
    return chains;
}

// Expectation from a histogram over `bits` Bernoulli(p) indicators.
template <class T>
T weigh(const std::vector<Int>& hist, const T& p) {
    const std::size_t bits = hist.size() - 1;
    T total = 0;
    for (std::size_t k = 0; k <= bits; ++k) {
        if (hist[k] == 0) continue;
        total += T(hist[k]) * power(p, unsigned(k)) * power(T(1) - p, unsigned(bits - k));
    }
    return total;
}

template <class T>
T exhaustive(Int n, const Multiplier& m, const T& p, ExhaustiveMode mode) {
    if (n > kExhaustiveLimit)
        throw TooLargeForOracle("n = " + std::to_string(n) + " exceeds the exhaustive limit of " +
                                std::to_string(kExhaustiveLimit));
    const auto chains = all_chains(n, m);
    std::vector<Int> hist;
    if (mode == ExhaustiveMode::Flat) {
        enumerate_chains(chains, hist);
        return weigh(hist, p);
    }
    T total = 0;
    for (const auto& c : chains) {
        enumerate_chains({c}, hist);
        total += weigh(hist, p);
    }
    return total;
}

}  // namespace

SubsetSample::SubsetSample(const SampleSpec& spec)
    : spec_(spec), key_(prf::trial_key(spec.seed, spec.trial)), threshold_(0) {
    check_probability(spec.p);
    threshold_ = static_cast<std::uint64_t>(std::ceil(spec.p * 0x1p53));
}

FixedSubset::FixedSubset(Int n, std::vector<Int> elements, double p)
    : n_(n), elements_(std::move(elements)), p_(p) {
    check_probability(p);
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    if (!elements_.empty() && (elements_.front() == 0 || elements_.back() > n))
        throw DomainError("subset elements must lie in [1, n]");
}

double level_probability(unsigned i, double p) {
    check_probability(p);
    if (p == 1.0) return i % 2 == 0 ? 1.0 : 0.0;
    // (1-p)(1-p^k)/(1-p^2) == (1-p^k)/(1+p)
    if (i % 2 == 0) {
        const double pi = std::pow(p, i);
        return p * ((1.0 - pi) / (1.0 + p) + pi);
    }
    return p * (1.0 - std::pow(p, i + 1)) / (1.0 + p);
}

Rational level_probability_exact(unsigned i, const Rational& p) {
    if (p < 0 || p > 1) throw DomainError("p outside [0, 1]");
    // Runs of an even number k < i of present predecessors closed by an
    // absent one, plus (for even i) the fully present prefix.
    const Rational q = 1 - p;
    Rational sum = 0;
    for (unsigned k = 0; k < i; k += 2) sum += power(p, k) * q;
    if (i % 2 == 0) sum += power(p, i);
    return p * sum;
}

double expected_level(Int n, const Multiplier& m, double p, unsigned i) {
    return double(level_size(n, m.b(), i)) * level_probability(i, p);
}

double expected_level_closed_form(Int n, Int b, double p, unsigned i) {
    const double bd = double(b);
    return (bd - 1.0) / (bd * (1.0 + p)) * p * double(n) *
           (std::pow(bd, -double(i)) + std::pow(-p / bd, double(i)) * p);
}

double expected_total(Int n, const Multiplier& m, double p) {
    check_probability(p);
    double total = 0.0;
    const unsigned levels = level_count(n, m.b());
    for (unsigned i = 0; i < levels; ++i) total += expected_level(n, m, p, i);
    return total;
}

Rational expected_total_exact(Int n, const Multiplier& m, const Rational& p) {
    Rational total = 0;
    const unsigned levels = level_count(n, m.b());
    for (unsigned i = 0; i < levels; ++i)
        total += Rational(level_size(n, m.b(), i)) * level_probability_exact(i, p);
    return total;
}

double main_term(Int n, const Multiplier& m, double p) {
    const double b = double(m.b());
    return b * p * double(n) / (b + p);
}

std::vector<LevelStats> level_stats(const ChainScan& scan, Int n, const Multiplier& m, double p) {
    std::vector<LevelStats> out;
    const unsigned levels = level_count(n, m.b());
    out.reserve(levels);
    for (unsigned i = 0; i < levels; ++i) {
        LevelStats s;
        s.i = i;
        s.level_total = level_size(n, m.b(), i);
        s.star_count = scan.stars[i];
        s.probability = level_probability(i, p);
        s.expected = double(s.level_total) * s.probability;
        out.push_back(s);
    }
    return out;
}

double exhaustive_expectation(Int n, const Multiplier& m, double p, ExhaustiveMode mode) {
    check_probability(p);
    return exhaustive<double>(n, m, p, mode);
}

Rational exhaustive_expectation_exact(Int n, const Multiplier& m, const Rational& p,
                                      ExhaustiveMode mode) {
    if (p < 0 || p > 1) throw DomainError("p outside [0, 1]");
    return exhaustive<Rational>(n, m, p, mode);
}

double chernoff_upper(double lambda, double mean) {
    if (lambda < 0 || mean < 0) throw DomainError("chernoff bounds need lambda >= 0, mean >= 0");
    return std::exp(-lambda * lambda / (2.0 + lambda) * mean);
}

double chernoff_lower(double lambda, double mean) {
    if (lambda < 0 || mean < 0) throw DomainError("chernoff bounds need lambda >= 0, mean >= 0");
    return std::exp(-lambda * lambda / 2.0 * mean);
}

double chernoff_two_sided(double lambda, double mean) {
    if (lambda > 1.0) throw LambdaOutOfRange("lambda = " + std::to_string(lambda) + " > 1");
    if (lambda < 0 || mean < 0) throw DomainError("chernoff bounds need lambda >= 0, mean >= 0");
    return 2.0 * std::exp(-lambda * lambda / 3.0 * mean);
}

TailBound tail_bound(double lambda, double mean) {
    TailBound t;
    t.lambda = lambda;
    t.mean = mean;
    t.upper = chernoff_upper(lambda, mean);
    t.lower = chernoff_lower(lambda, mean);
    if (lambda <= 1.0) t.two_sided = chernoff_two_sided(lambda, mean);
    return t;
}

double concentration_envelope(Int n, double p, double c) {
    if (n < 16) throw DomainError("concentration envelope needs n >= 16");
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("concentration envelope needs 0 < p <= 1");
    if (!(c >= 0.0)) throw DomainError("concentration envelope needs c >= 0");
    const double ln = std::log(double(n));
    return c * std::sqrt(p * double(n)) * ln * std::log(ln);
}

unsigned dense_regime_top(Int n, Int b) {
    using boost::multiprecision::cpp_int;
    const cpp_int n9 = boost::multiprecision::pow(cpp_int(n), 9);
    const unsigned top = max_level(n, b);
    unsigned i = 0;
    while (i < top && boost::multiprecision::pow(cpp_int(b), 10 * (i + 1)) <= n9) ++i;
    return i;
}

TrialSummary monte_carlo(Int n, const Multiplier& m, double p, std::size_t trials,
                         std::uint64_t seed, unsigned threads) {
    check_probability(p);
    if (trials == 0) throw DomainError("monte_carlo needs at least one trial");

    const std::size_t blocks = detail::scan_block_count(n);
    const unsigned levels = level_count(n, m.b());
    // stars[t * levels + i]; integer sums commute, so claim order is irrelevant.
    std::vector<std::atomic<Int>> stars(trials * std::max(levels, 1u));
    parallel_for(trials * blocks, threads, [&](std::size_t unit) {
        const std::size_t t = unit / blocks;
        const SubsetSample sample({n, p, seed, t});
        LevelArray local{};
        detail::scan_block(sample, m, unit % blocks, local);
        for (unsigned i = 0; i < levels; ++i)
            if (local[i] != 0) stars[t * levels + i].fetch_add(local[i], std::memory_order_relaxed);
    });

    TrialSummary out;
    out.n = n;
    out.m = m;
    out.p = p;
    out.seed = seed;
    out.sizes.resize(trials, 0);
    out.per_level_means.assign(levels, 0.0);
    std::vector<Int> level_sums(levels, 0);
    Int total = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        for (unsigned i = 0; i < levels; ++i) {
            const Int c = stars[t * levels + i].load();
            out.sizes[t] += c;
            level_sums[i] += c;
        }
        total += out.sizes[t];
    }
    const double count = double(trials);
    out.mean = double(total) / count;
    for (unsigned i = 0; i < levels; ++i) out.per_level_means[i] = double(level_sums[i]) / count;

    double squares = 0.0;
    for (const Int s : out.sizes) {
        const double d = double(s) - out.mean;
        squares += d * d;
        out.max_abs_deviation = std::max(out.max_abs_deviation, std::abs(d));
    }
    out.sample_stddev = trials > 1 ? std::sqrt(squares / (count - 1.0)) : 0.0;

    out.per_level_expected.resize(levels);
    for (unsigned i = 0; i < levels; ++i) out.per_level_expected[i] = expected_level(n, m, p, i);
    out.analytic_total = expected_total(n, m, p);
    if (n >= 16 && p > 0.0) {
        out.envelope = concentration_envelope(n, p, 1.0);
        out.fitted_envelope_constant = out.max_abs_deviation / *out.envelope;
    }
    return out;
}

}  // namespace multfree
