#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "multfree/core.hpp"
#include "multfree/error.hpp"
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

}  // namespace

TEST_CASE("reduce_multiplier") {
    const auto two = reduce_multiplier(2, 1);
    CHECK(two.a() == 1);
    CHECK(two.b() == 2);
    const auto three_halves = reduce_multiplier(6, 4);
    CHECK(three_halves.a() == 2);
    CHECK(three_halves.b() == 3);
    CHECK(three_halves.to_string() == "3/2");
    CHECK_THROWS_AS((void)reduce_multiplier(4, 6), RatioNotGreaterThanOne);
    CHECK_THROWS_AS((void)reduce_multiplier(5, 5), RatioNotGreaterThanOne);
    CHECK_THROWS_AS((void)reduce_multiplier(0, 1), DomainError);
}

TEST_CASE("successor and predecessor") {
    const auto m = reduce_multiplier(3, 2);
    CHECK(successor(4, m, 10) == Int{6});
    CHECK_FALSE(successor(5, m, 10));
    CHECK_FALSE(successor(8, m, 10));
    CHECK(predecessor(6, m) == Int{4});
    CHECK_FALSE(predecessor(4, m));
    CHECK(predecessor(8, reduce_multiplier(2, 1)) == Int{4});

    SUBCASE("no overflow near 2^64") {
        const auto big = reduce_multiplier(1'000'003, 1);
        CHECK_FALSE(successor(kMaxN, big, ~Int{0}));
        CHECK_FALSE(successor(~Int{0}, reduce_multiplier(2, 1), ~Int{0}));
        CHECK(successor(kMaxN / 2, reduce_multiplier(2, 1), kMaxN) == kMaxN);
    }
}

TEST_CASE("subpower_index") {
    CHECK(subpower_index(12, 2) == 2);
    CHECK(subpower_index(5, 3) == 0);
    CHECK(subpower_index(27, 3) == 3);
    CHECK(subpower_index(kMaxN, 2) == 50);
    CHECK_THROWS_AS((void)subpower_index(0, 2), DomainError);
}

TEST_CASE("max_level uses integer arithmetic at exact powers") {
    CHECK(max_level(1, 2) == 0);
    CHECK(max_level(8, 2) == 3);
    CHECK(max_level(7, 2) == 2);
    // floating log_3(243) evaluates to 4.999...
    CHECK(max_level(243, 3) == 5);
    CHECK(max_level(242, 3) == 4);
    CHECK(max_level(1'000'000, 10) == 6);
    CHECK(max_level(999'999, 10) == 5);
    CHECK(level_count(0, 2) == 0);
    CHECK(level_count(1, 2) == 1);
}

TEST_CASE("level_size") {
    CHECK(level_size(10, 2, 0) == oracle::count_valuation(10, 2, 0));
    CHECK(level_size(10, 2, 0) == 5);
    CHECK(level_size(10, 2, 1) == 3);
    CHECK(level_size(10, 2, 3) == 1);
    CHECK_THROWS_AS((void)level_size(10, 2, 4), LevelOutOfRange);
    CHECK_THROWS_AS((void)level_size(0, 2, 0), LevelOutOfRange);

    SUBCASE("matches direct counting and lies within 1 of (b-1)n/b^(i+1)") {
        for (Int b : {2, 3, 5, 7}) {
            for (Int n : {1, 2, 9, 10, 64, 100, 243, 1000, 4097}) {
                for (unsigned i = 0; i < level_count(n, b); ++i) {
                    const Int exact = level_size(n, b, i);
                    CHECK(exact == oracle::count_valuation(n, b, i));
                    const double smooth = double(b - 1) * double(n) / std::pow(double(b), i + 1);
                    CHECK(std::abs(double(exact) - smooth) <= 1.0);
                }
            }
        }
    }
}

TEST_CASE("chain_starts") {
    auto collect = [](Int n, const Multiplier& m) {
        std::vector<Int> v;
        for (Int s : chain_starts(n, m)) v.push_back(s);
        return v;
    };
    CHECK(collect(6, reduce_multiplier(2, 1)) == std::vector<Int>{1, 3, 5});
    CHECK(collect(6, reduce_multiplier(3, 1)) == std::vector<Int>{1, 2, 4, 5});
    CHECK(collect(1, reduce_multiplier(7, 4)) == std::vector<Int>{1});
    CHECK(collect(0, reduce_multiplier(2, 1)).empty());
    CHECK(collect(1000, reduce_multiplier(5, 3)).size() == level_size(1000, 5, 0));
}

TEST_CASE("chain_from") {
    CHECK(chain_from(4, reduce_multiplier(3, 2), 10).elements == std::vector<Int>{4, 6, 9});
    CHECK(chain_from(1, reduce_multiplier(2, 1), 10).elements == std::vector<Int>{1, 2, 4, 8});
    CHECK(chain_from(7, reduce_multiplier(3, 2), 10).elements == std::vector<Int>{7});
    CHECK_THROWS_AS((void)chain_from(6, reduce_multiplier(3, 2), 10), NotAChainStart);
    CHECK_THROWS_AS((void)chain_from(11, reduce_multiplier(3, 2), 10), DomainError);
}

TEST_CASE("chain_containing") {
    const auto m = reduce_multiplier(3, 2);
    auto [c6, pos6] = chain_containing(6, m, 10);
    CHECK(c6.elements == std::vector<Int>{4, 6, 9});
    CHECK(pos6 == 1);
    auto [c9, pos9] = chain_containing(9, m, 10);
    CHECK(c9.elements == std::vector<Int>{4, 6, 9});
    CHECK(pos9 == 2);
    for (const auto& r : ratio_family()) {
        auto [c1, pos1] = chain_containing(1, r, 5);
        CHECK(c1.start() == 1);
        CHECK(pos1 == 0);
    }
}

TEST_CASE("chain partition invariants") {
    for (const auto& m : ratio_family()) {
        for (Int n : {Int{1}, Int{2}, Int{17}, Int{360}, Int{5'000}, Int{100'000}}) {
            CAPTURE(m.to_string());
            CAPTURE(n);
            std::vector<char> seen(n + 1, 0);
            std::vector<Int> per_level(level_count(n, m.b()), 0);
            Int total = 0;
            const double log_r = std::log(double(n)) / std::log(m.ratio());
            bool disjoint = true, valuation_ok = true, length_ok = true, inverse_ok = true;
            for (Int s : chain_starts(n, m)) {
                const Chain c = chain_from(s, m, n);
                total += c.length();
                length_ok &= double(c.length()) <= std::floor(log_r + 1e-9) + 1.0;
                for (std::size_t j = 0; j < c.length(); ++j) {
                    const Int v = c.elements[j];
                    disjoint &= seen[v] == 0;
                    seen[v] = 1;
                    valuation_ok &= subpower_index(v, m.b()) == j;
                    ++per_level[j];
                    if (j + 1 < c.length()) {
                        inverse_ok &= successor(v, m, n) == c.elements[j + 1];
                        inverse_ok &= predecessor(c.elements[j + 1], m) == v;
                    } else {
                        inverse_ok &= !successor(v, m, n).has_value();
                    }
                }
            }
            CHECK(disjoint);
            CHECK(total == n);
            CHECK(std::all_of(seen.begin() + 1, seen.end(), [](char c) { return c == 1; }));
            CHECK(valuation_ok);
            CHECK(length_ok);
            CHECK(inverse_ok);
            for (unsigned i = 0; i < per_level.size(); ++i) CHECK(per_level[i] == level_size(n, m.b(), i));
        }
    }
}
