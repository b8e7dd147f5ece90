#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ergonum/oracle.hpp"

using namespace ergonum;
using namespace ergonum::oracle;

TEST_CASE("brute_factor") {
    CHECK(brute_factor(12) == arith::Factorization{{{2, 2}, {3, 1}}});
    CHECK(brute_factor(1) == arith::Factorization{});
    CHECK(brute_factor(999'983) == arith::Factorization{{{999'983, 1}}});
    CHECK_THROWS_AS(brute_factor(200'000'000), ValidationError);
}

TEST_CASE("brute_kfull_list") {
    auto two_full = brute_kfull_list(100, 2);
    CHECK(two_full == std::vector<std::uint64_t>{1, 4, 8, 9, 16, 25, 27, 32, 36,
                                                 49, 64, 72, 81, 100});
    CHECK(brute_kfull_list(100, 3) ==
          std::vector<std::uint64_t>{1, 8, 16, 27, 32, 64, 81});
    CHECK(brute_kfull_list(1, 2) == std::vector<std::uint64_t>{1});
    CHECK(brute_kfull_list(7, 3) == std::vector<std::uint64_t>{1});
}

TEST_CASE("brute_mertens") {
    CHECK(brute_mertens(1) == 1);
    CHECK(brute_mertens(2) == 0);
    CHECK(brute_mertens(100) == 1);
}

TEST_CASE("brute prime count") {
    CHECK(brute_prime_count(10) == 4);
    CHECK(brute_prime_count(1000) == 168);
}

TEST_CASE("decomposition sides vanish for a == 0") {
    auto zero = [](std::uint64_t) { return std::complex<double>(0.0, 0.0); };
    auto [lhs, rhs] = brute_decomposition_lhs_rhs(zero, {}, 100, 10);
    CHECK(lhs == std::complex<double>(0.0, 0.0));
    CHECK(rhs == std::complex<double>(0.0, 0.0));

    std::vector<std::uint64_t> d{5};
    auto [lhs2, rhs2] = brute_decomposition_lhs_rhs_kfull(zero, 2, 10'000, d);
    CHECK(lhs2 == std::complex<double>(0.0, 0.0));
    CHECK(rhs2 == std::complex<double>(0.0, 0.0));
}
