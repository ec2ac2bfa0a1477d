#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "multfree/error.hpp"
#include "multfree/extremal.hpp"
#include "oracles.hpp"

using namespace multfree;

namespace {

const std::vector<Multiplier>& ratio_family() {
    static const std::vector<Multiplier> family{
        reduce_multiplier(2, 1), reduce_multiplier(3, 1), reduce_multiplier(3, 2),
        reduce_multiplier(4, 3), reduce_multiplier(5, 2), reduce_multiplier(5, 3),
        reduce_multiplier(7, 4)};
    return family;
}

Int alternating_sum(Int n, Int b) {
    Int plus = 0, minus = 0;
    bool even = true;
    for (Int q = n; q > 0; q /= b, even = !even) (even ? plus : minus) += q;
    return plus - minus;
}

}  // namespace

TEST_CASE("is_multiple_free") {
    CHECK(is_multiple_free(std::vector<Int>{1, 3, 5}, reduce_multiplier(2, 1)));
    CHECK_FALSE(is_multiple_free(std::vector<Int>{4, 6}, reduce_multiplier(3, 2)));
    CHECK(is_multiple_free(std::vector<Int>{}, reduce_multiplier(3, 2)));
    CHECK(is_multiple_free(std::vector<Int>{4, 9}, reduce_multiplier(3, 2)));
}

TEST_CASE("max_set_size examples") {
    // values frozen from oracle::max_free
    CHECK(oracle::max_free(oracle::interval(10), 1, 2) == 6);
    CHECK(oracle::max_free(oracle::interval(10), 2, 3) == 8);
    CHECK(max_set_size(10, reduce_multiplier(2, 1)) == 6);
    CHECK(max_set_size(10, reduce_multiplier(3, 2)) == 8);
    CHECK(max_set_size(0, reduce_multiplier(3, 2)) == 0);
    CHECK(max_set_size_by_chains(0, reduce_multiplier(3, 2)) == 0);
}

TEST_CASE("max_set witness") {
    const auto r3 = max_set(3, reduce_multiplier(2, 1));
    CHECK(r3.size == 2);
    CHECK(*r3.witness == std::vector<Int>{1, 3});

    const auto r10 = max_set(10, reduce_multiplier(3, 2));
    CHECK(r10.size == 8);
    const auto& w = *r10.witness;
    CHECK(std::binary_search(w.begin(), w.end(), Int{4}));
    CHECK(std::binary_search(w.begin(), w.end(), Int{9}));
    CHECK_FALSE(std::binary_search(w.begin(), w.end(), Int{6}));

    for (const auto& m : ratio_family()) {
        const auto r1 = max_set(1, m);
        CHECK(r1.size == 1);
        CHECK(*r1.witness == std::vector<Int>{1});
        for (Int n : {0, 7, 100, 1000, 12345}) {
            const auto r = max_set(n, m);
            CHECK(r.witness->size() == r.size);
            CHECK(is_multiple_free(*r.witness, m));
            if (n <= 100) CHECK(oracle::multiple_free(*r.witness, m.a(), m.b()));
        }
    }
    CHECK_FALSE(max_set(10, reduce_multiplier(2, 1), false).witness.has_value());
}

TEST_CASE("brute_force_max") {
    const auto two = reduce_multiplier(2, 1);
    CHECK(brute_force_max(std::vector<Int>{1, 2, 4, 8}, two) == 2);
    CHECK(brute_force_max(std::vector<Int>{3, 5, 7}, two) == 3);
    CHECK(brute_force_max(std::vector<Int>{}, two) == 0);
    CHECK(brute_force_max_dp(std::vector<Int>{1, 2, 4, 8}, two) == 2);
    CHECK(brute_force_max_dp(std::vector<Int>{}, two) == 0);
    CHECK_THROWS_AS((void)brute_force_max(oracle::interval(25), two), TooLargeForOracle);
    CHECK(brute_force_max(oracle::interval(24), two) == max_set_size(24, two));
}

TEST_CASE("oracle equivalence on [n], n <= 18") {
    for (const auto& m : ratio_family()) {
        for (Int n = 0; n <= 18; ++n) {
            CAPTURE(m.to_string());
            CAPTURE(n);
            const auto all = oracle::interval(n);
            const Int f = max_set_size(n, m);
            CHECK(f == brute_force_max(all, m));
            CHECK(f == brute_force_max_dp(all, m));
            CHECK(f == max_set_size_by_chains(n, m));
            if (n <= 12) CHECK(f == oracle::max_free(all, m.a(), m.b()));
        }
    }
}

TEST_CASE("chain walk agrees with the census for any thread count") {
    for (const auto& m : ratio_family()) {
        for (Int n : {Int{65'535}, Int{65'536}, Int{200'001}}) {
            const Int f = max_set_size(n, m);
            CHECK(max_set_size_by_chains(n, m, 1) == f);
            CHECK(max_set_size_by_chains(n, m, 3) == f);
        }
    }
}

TEST_CASE("known closed form for integer ratios") {
    for (Int b : {2, 3, 5}) {
        const auto m = reduce_multiplier(b, 1);
        for (Int n = 0; n <= 20'000; ++n) {
            if (max_set_size(n, m) != alternating_sum(n, b)) {
                FAIL("closed form mismatch at n=" << n << " b=" << b);
            }
        }
    }
}

TEST_CASE("monotone with unit steps") {
    for (const auto& m : ratio_family()) {
        Int prev = max_set_size(0, m);
        for (Int n = 1; n <= 5000; ++n) {
            const Int cur = max_set_size(n, m);
            REQUIRE((cur == prev || cur == prev + 1));
            prev = cur;
        }
    }
}

TEST_CASE("dense_residual") {
    CHECK(dense_residual(10, reduce_multiplier(2, 1)) == Rational(-2, 3));
    CHECK(dense_residual(10, reduce_multiplier(3, 2)) == Rational(1, 2));
    CHECK(dense_residual(3, reduce_multiplier(2, 1)) == 0);
    CHECK_THROWS_AS((void)dense_residual(0, reduce_multiplier(2, 1)), DomainError);
    // exact even when b*n exceeds 64 bits
    const auto huge = reduce_multiplier(1'000'003, 1);
    CHECK(dense_residual(kMaxN, huge) ==
          Rational(max_set_size(kMaxN, huge)) -
              Rational(boost::multiprecision::cpp_int(1'000'003) * kMaxN, 1'000'004));
}

TEST_CASE("residual grows at most logarithmically") {
    for (const auto& m : {reduce_multiplier(2, 1), reduce_multiplier(3, 2), reduce_multiplier(5, 3)}) {
        double c = 0.0;
        for (Int n = 1; n <= 1000; ++n) {
            const double r = std::abs(dense_residual(n, m).convert_to<double>());
            c = std::max(c, r / (std::log(double(n)) + 1.0));
        }
        for (Int n = 1001; n <= 10'000'000; n = n * 11 / 10 + 1) {
            const double r = std::abs(dense_residual(n, m).convert_to<double>());
            CHECK(r <= c * (std::log(double(n)) + 1.0));
        }
    }
}
