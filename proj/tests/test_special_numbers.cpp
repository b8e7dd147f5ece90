#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ergonum/oracle.hpp"
#include "ergonum/special_numbers.hpp"

using namespace ergonum;
using namespace ergonum::special;

TEST_CASE("sieve constants are exact rationals on the hand sets") {
    auto empty = sieve_constants({});
    CHECK(empty.alpha == 1.0);
    CHECK(empty.beta == 1.0);
    CHECK(empty.alpha0 == 1.0);
    CHECK(empty.p_s == 1);

    std::vector<std::uint64_t> two{2};
    auto s2 = sieve_constants(two);
    CHECK(s2.alpha == 2.0 / 3.0);
    CHECK(s2.beta == 3.0 / 4.0);
    CHECK(s2.alpha0 == 1.0 / 2.0);
    CHECK(s2.p_s == 2);

    std::vector<std::uint64_t> two_three{2, 3};
    auto s23 = sieve_constants(two_three);
    CHECK(s23.alpha == 0.5);
    CHECK(s23.beta == 2.0 / 3.0);
    CHECK(s23.alpha0 == 1.0 / 3.0);
    CHECK(s23.p_s == 6);

    std::vector<std::uint64_t> bad{4};
    CHECK_THROWS_AS(sieve_constants(bad), ValidationError);
}

TEST_CASE("zeta2_inverse") {
    // 6/pi^2 to 40 digits: 0.6079271018540266286632767792583658334262
    CHECK(zeta2_inverse() == doctest::Approx(0.6079271018540266).epsilon(1e-15));
    CHECK(zeta2_inverse() * std::numbers::pi * std::numbers::pi / 6.0 ==
          doctest::Approx(1.0).epsilon(1e-15));
    std::vector<std::uint64_t> two{2};
    CHECK(sieve_constants(two).alpha * zeta2_inverse() ==
          doctest::Approx(0.4052847345693511).epsilon(1e-14));
}

TEST_CASE("zeta via eta matches reference values") {
    // Reference values minted with 40-digit arithmetic.
    CHECK(zeta_via_eta(1.5) ==
          doctest::Approx(2.6123753486854883).epsilon(1e-13));
    CHECK(zeta_via_eta(3.0) ==
          doctest::Approx(1.2020569031595943).epsilon(1e-13));
    CHECK(zeta_via_eta(2.0) ==
          doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0)
              .epsilon(1e-13));
    // Continuation into (0, 1).
    CHECK(zeta_via_eta(2.0 / 3.0) ==
          doctest::Approx(-2.4475807362336582).epsilon(1e-12));
    CHECK_THROWS_AS(zeta_via_eta(1.0), ValidationError);
    CHECK_THROWS_AS(zeta_via_eta(0.0), ValidationError);
}

TEST_CASE("enumerate_squarefree") {
    CHECK(enumerate_squarefree(10, {}) ==
          std::vector<std::uint64_t>{1, 2, 3, 5, 6, 7, 10});
    std::vector<std::uint64_t> two{2};
    CHECK(enumerate_squarefree(10, two) == std::vector<std::uint64_t>{1, 3, 5, 7});
    CHECK(enumerate_squarefree(100, {}).size() == 61);
}

TEST_CASE("k-full enumeration matches the worked lists") {
    CHECK(enumerate_kfull(100, 2) ==
          std::vector<std::uint64_t>{1, 4, 8, 9, 16, 25, 27, 32, 36, 49, 64, 72,
                                     81, 100});
    CHECK(enumerate_kfull(100, 3) ==
          std::vector<std::uint64_t>{1, 8, 16, 27, 32, 64, 81});
    CHECK(enumerate_kfull(3, 2) == std::vector<std::uint64_t>{1});
}

TEST_CASE("k-full enumeration equals the brute filter at 1e5") {
    for (std::uint32_t k : {2u, 3u, 4u}) {
        CHECK(enumerate_kfull(100'000, k) == oracle::brute_kfull_list(100'000, k));
    }
}

TEST_CASE("kfull encode/decode on worked examples") {
    KFullForm f72 = kfull_encode(72, 2);
    CHECK(f72.m == 3);
    CHECK(f72.parts == std::vector<std::uint64_t>{2});
    CHECK(kfull_decode(f72) == 72);

    KFullForm f16 = kfull_encode(16, 2);
    CHECK(f16.m == 4);
    CHECK(f16.parts == std::vector<std::uint64_t>{1});

    KFullForm f108 = kfull_encode(108, 2);
    CHECK(f108.m == 2);
    CHECK(f108.parts == std::vector<std::uint64_t>{3});

    KFullForm custom{3, 2, {3, 5}};
    CHECK(kfull_decode(custom) == 2'025'000);
    CHECK(kfull_encode(2'025'000, 3) == custom);

    CHECK_THROWS_AS(kfull_encode(12, 2), ValidationError);
    KFullForm bad_parts{2, 1, {4}};  // 4 is not squarefree
    CHECK_THROWS_AS(kfull_decode(bad_parts), ValidationError);
    KFullForm not_coprime{3, 1, {6, 10}};
    CHECK_THROWS_AS(kfull_decode(not_coprime), ValidationError);
}

TEST_CASE("kfull roundtrip over every member to 1e6") {
    for (std::uint32_t k : {2u, 3u}) {
        auto members = enumerate_kfull(1'000'000, k);
        for (std::uint64_t n : members) {
            KFullForm form = kfull_encode(n, k);
            CHECK(kfull_decode(form) == n);
        }
    }
}

TEST_CASE("k-full order bounds") {
    CHECK_THROWS_AS(enumerate_kfull(100, 1), ValidationError);
    CHECK_THROWS_AS(count_kfull(100, 64), ValidationError);
    CHECK_THROWS_AS(kfull_encode(4, 1'000'000'000), ValidationError);
    CHECK(count_kfull(1'000'000'000'000ULL, 63) == 1);  // only n = 1
}

TEST_CASE("count_kfull") {
    CHECK(count_kfull(100, 2) == 14);
    CHECK(count_kfull(1, 2) == 1);
    // Brute-force value and leading-constant sanity: Q2(1e6) = 2027,
    // |Q2(1e6)/1e3 - c2| <= 0.25.
    CHECK(count_kfull(1'000'000, 2) == 2027);
    double ratio = 2027.0 / 1000.0;
    CHECK(std::abs(ratio - 2.1732543125195541) <= 0.25);
    // Monotone in N, nonincreasing in k.
    CHECK(count_kfull(5000, 2) <= count_kfull(50'000, 2));
    CHECK(count_kfull(50'000, 3) <= count_kfull(50'000, 2));
    CHECK(count_kfull(50'000, 4) <= count_kfull(50'000, 3));
}

TEST_CASE("erdos-szekeres constant") {
    // Single-factor truncation at cutoff 2.
    for (std::uint32_t k : {2u, 3u, 5u}) {
        double expect = 1.0;
        for (std::uint32_t m = k + 1; m <= 2 * k - 1; ++m) {
            expect += std::pow(2.0, -static_cast<double>(m) / k);
        }
        CHECK(erdos_szekeres_constant(k, 2, /*with_tail=*/false) ==
              doctest::Approx(expect).epsilon(1e-15));
    }
    // The raw truncated product is monotone increasing in the cutoff.
    double prev = 0.0;
    for (std::uint64_t cutoff : {10ULL, 100ULL, 1000ULL, 10'000ULL}) {
        double value = erdos_szekeres_constant(2, cutoff, /*with_tail=*/false);
        CHECK(value > prev);
        prev = value;
    }
    // Tail-corrected value against zeta(3/2)/zeta(3) by the series route.
    CHECK(std::abs(erdos_szekeres_constant(2, 1'000'000) -
                   2.1732543125195541) <= 1e-6);
    CHECK(erdos_szekeres_constant(2, 1'000'000) ==
          doctest::Approx(2.173254).epsilon(1e-5));
}

TEST_CASE("bateman-grosswald estimate") {
    // A = 2.1732543..., B = -1.4879506635322726 (eta-function continuation).
    double est100 = bateman_grosswald_estimate(100.0);
    CHECK(std::abs(est100 - 14.0) <= std::pow(100.0, 1.0 / 6.0));  // C = 1
    double est1e6 = bateman_grosswald_estimate(1e6);
    CHECK(std::abs(est1e6 - 2027.0) <= 10.0 * 10.0);  // C = 10, x^{1/6} = 10
    // x = 1: A + B is within O(1) of Q2(1) = 1.
    CHECK(std::abs(bateman_grosswald_estimate(1.0) - 1.0) <= 1.0);
    CHECK_THROWS_AS(bateman_grosswald_estimate(0.5), ValidationError);
}

TEST_CASE("squarefree density partial sums") {
    CHECK(squarefree_density_partial(100, {}) == doctest::Approx(0.61));
    std::vector<std::uint64_t> two{2};
    CHECK(squarefree_density_partial(10, two) == doctest::Approx(0.4));
    CHECK(std::abs(squarefree_density_partial(1'000'000, {}) -
                   0.6079271018540266) <= 5e-3);
    // Exact count at 1e6 from the independent numpy-style sieve: 607926.
    CHECK(count_squarefree(1'000'000, {}) == 607'926);
}

TEST_CASE("convolution identity and dirichlet inverse, all S in {2,3,5,7}") {
    arith::FactorSieve sieve(100'000);
    const std::vector<std::uint64_t> base{2, 3, 5, 7};
    for (unsigned mask = 0; mask < 16; ++mask) {
        std::vector<std::uint64_t> s;
        for (unsigned b = 0; b < 4; ++b) {
            if (mask & (1u << b)) s.push_back(base[b]);
        }
        auto conv = check_convolution_identity(10'000, s, sieve);
        CHECK(conv.checked == 10'000);
        CHECK(conv.violations == 0);
        auto inv = check_dirichlet_inverse(10'000, s, sieve);
        CHECK(inv.violations == 0);
    }
}

TEST_CASE("series identities converge to the lemma limits") {
    arith::FactorSieve sieve(1'000'000);
    const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
    const std::vector<std::vector<std::uint64_t>> sets{
        {}, {2}, {2, 3}, {2, 3, 5, 7}};
    const std::uint64_t m = 1'000'000;
    for (const auto& s : sets) {
        double beta = sieve_constants(s).beta;
        CHECK(std::abs(ws_series_partial(m, s) - beta * zeta2) <= 2.0 / m);
        CHECK(std::abs(mobius_ws_series_partial(m, s, sieve) -
                       1.0 / (beta * zeta2)) <= 2.0 / m);
    }
}
