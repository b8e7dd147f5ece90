#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ergonum/dynamics.hpp"
#include "ergonum/ergodic.hpp"
#include "ergonum/oracle.hpp"
#include "ergonum/special_numbers.hpp"

using namespace ergonum;
using namespace ergonum::ergodic;

namespace {

const arith::FactorSieve& shared_sieve() {
    static arith::FactorSieve sieve(1'000'000);
    return sieve;
}

Observable liouville_observable() {
    auto sys = dynamics::AdditiveSystem::cyclic(2);
    return dynamics::br_observable(sys, dynamics::State::cyclic(0),
                                   dynamics::StateFunction::table({1.0, -1.0}));
}

}  // namespace

TEST_CASE("restriction validation") {
    CHECK_THROWS_AS(Restriction::kfull(1), ValidationError);
    CHECK_THROWS_AS(Restriction::squarefree({4}), ValidationError);
    Restriction r = Restriction::squarefree();
    r.normalization = Normalization::per_count;
    CHECK_THROWS_AS(r.validate(), ValidationError);
}

TEST_CASE("checkpoint grid") {
    CheckpointGrid grid;
    auto pts = grid.points(10'000);
    CHECK(pts.front() == 1000);
    CHECK(pts.back() == 10'000);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] > pts[i - 1]);
    CHECK(grid.points(50) == std::vector<std::uint64_t>{50});
}

TEST_CASE("restricted_average worked examples") {
    AverageOptions opts;
    opts.grid.start = 100;

    auto ones = restricted_average(Observable::constant(1.0),
                                   Restriction::squarefree(), 100, opts);
    CHECK(ones.final().value.real() == doctest::Approx(0.61));
    CHECK(ones.final().members == 61);

    auto kf = restricted_average(Observable::constant(1.0), Restriction::kfull(2),
                                 5000, opts);
    for (const auto& cp : kf.checkpoints) {
        CHECK(cp.value.real() == doctest::Approx(1.0));
    }

    // lambda over squarefree at 100 is M(100)/100 = 0.01.
    auto mertens = restricted_average(liouville_observable(),
                                      Restriction::squarefree(), 100, opts);
    CHECK(mertens.final().value.real() == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("restricted_average equals squarefree_density_partial exactly") {
    AverageOptions opts;
    std::vector<std::uint64_t> s{2, 5};
    auto series = restricted_average(
        Observable::constant(1.0), Restriction::squarefree(s), 40'000, opts);
    for (const auto& cp : series.checkpoints) {
        CHECK(cp.value.real() ==
              special::squarefree_density_partial(cp.n, s));
    }
}

TEST_CASE("per_count averages respect the sup-norm bound") {
    auto series = restricted_average(liouville_observable(),
                                     Restriction::kfull(2), 200'000);
    for (const auto& cp : series.checkpoints) {
        CHECK(std::abs(cp.value) <= 1.0 + 1e-12);
    }
}

TEST_CASE("averages are identical across thread counts") {
    auto obs = liouville_observable();
    AverageOptions one;
    one.threads = 1;
    one.chunk_size = 1 << 14;  // many chunks
    AverageOptions four = one;
    four.threads = 4;
    auto a = restricted_average(obs, Restriction::squarefree({3}), 300'000, one);
    auto b = restricted_average(obs, Restriction::squarefree({3}), 300'000, four);
    REQUIRE(a.checkpoints.size() == b.checkpoints.size());
    for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
        // bitwise equality, not approximate
        CHECK(a.checkpoints[i].value.real() == b.checkpoints[i].value.real());
        CHECK(a.checkpoints[i].value.imag() == b.checkpoints[i].value.imag());
        CHECK(a.checkpoints[i].members == b.checkpoints[i].members);
    }

    // Direct (non-pure) engine path too.
    auto random_obs = random_disc_observable(42);
    auto c = restricted_average(random_obs, Restriction::all(), 100'000, one);
    auto d = restricted_average(random_obs, Restriction::all(), 100'000, four);
    REQUIRE(c.checkpoints.size() == d.checkpoints.size());
    for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
        CHECK(c.checkpoints[i].value.real() == d.checkpoints[i].value.real());
        CHECK(c.checkpoints[i].value.imag() == d.checkpoints[i].value.imag());
    }
}

TEST_CASE("omega histograms match direct counting") {
    AverageOptions opts;
    opts.grid.start = 500;
    auto hists = collect_omega_histograms(Restriction::all(), 20'000, opts);
    const auto& sieve = shared_sieve();
    for (const auto& h : hists) {
        std::array<std::uint64_t, kOmegaTableSize> expect{};
        for (std::uint64_t n = 1; n <= h.n; ++n) {
            ++expect[arith::big_omega(n, sieve)];
        }
        CHECK(h.members == h.n);
        CHECK(h.counts == expect);
    }
}

TEST_CASE("normalizer params and statistics") {
    CHECK_THROWS_AS(NormalizerParams::for_horizon(1, 99), ValidationError);
    auto p1 = NormalizerParams::with_loglog(1, 4.0);
    CHECK(ek_statistic(6, p1) == doctest::Approx(1.0));   // (6-4)/2
    CHECK(ek_statistic(4, p1) == doctest::Approx(0.0));
    auto p2 = NormalizerParams::with_loglog(2, 4.0);
    CHECK(ek_statistic(12, p2) == doctest::Approx(1.0));  // (12-8)/4

    // BKW coefficients: a_1 = 1/2, b_1 = 1/sqrt(3).
    CHECK(p1.a_k() == doctest::Approx(0.5));
    CHECK(p1.b_k() == doctest::Approx(0.5773502691896258));
    // k = 0 reduces to the EK normalization with k = 1.
    auto p0 = NormalizerParams::with_loglog(0, 3.1);
    CHECK(bkw_statistic(7, p0) == doctest::Approx(ek_statistic(7, NormalizerParams::with_loglog(1, 3.1))));
    // Zero numerator.
    double center = p1.a_k() * std::pow(4.0, 2.0);
    CHECK(bkw_statistic(static_cast<std::uint32_t>(center), p1) ==
          doctest::Approx(0.0));

    const auto& sieve = shared_sieve();
    auto ph = NormalizerParams::for_horizon(1, 1000);
    CHECK(ek_normalized(12, sieve, ph) ==
          doctest::Approx(ek_statistic(3, ph)));
    CHECK(bkw_normalized(10, sieve, ph) ==
          doctest::Approx(bkw_statistic(arith::big_omega(4, sieve), ph)));
}

TEST_CASE("gaussian expectation") {
    auto zero = CompactFunction::custom([](double) { return 0.0; }, -1, 1, 0.0);
    CHECK(gaussian_expectation(zero) == 0.0);

    // Closed form for the unit triangle on [-1,1]:
    // 2(Phi(1) - 1/2) - 2(phi(0) - phi(1)) = 0.36874638037250724.
    auto tri = CompactFunction::triangle(0.0, 1.0, 1.0);
    CHECK(gaussian_expectation(tri) ==
          doctest::Approx(0.36874638037250724).epsilon(1e-10));

    // A plateau covering [-10, 10] captures almost all Gaussian mass.
    auto wide = CompactFunction::plateau(-10.5, -10.0, 10.0, 10.5, 1.0);
    CHECK(gaussian_expectation(wide) == doctest::Approx(1.0).epsilon(1e-9));

    // Linearity to 1e-9.
    auto taper = CompactFunction::raised_cosine(-2.0, 1.0, 1.5);
    auto combo = CompactFunction::scaled_sum(2.5, tri, -1.25, taper);
    CHECK(gaussian_expectation(combo) ==
          doctest::Approx(2.5 * gaussian_expectation(tri) -
                          1.25 * gaussian_expectation(taper))
              .epsilon(1e-9));
}

TEST_CASE("loyd observable trivial cases") {
    auto params = NormalizerParams::for_horizon(1, 100'000);
    auto orbit = liouville_observable();

    // F == 1 on a wide plateau leaves the orbit factor unchanged (wide
    // enough that every statistic in range lands on the flat part).
    auto flat = CompactFunction::plateau(-100.0, -99.0, 99.0, 100.0, 1.0);
    auto obs = loyd_observable(flat, params, orbit);
    for (std::uint32_t omega = 0; omega < 20; ++omega) {
        CHECK(obs.weight(omega, 0, params) == orbit.weight(omega, 0, params));
    }

    // f_obs == 1 gives the pure Erdos-Kac functional.
    auto tri = CompactFunction::triangle(0.0, 1.0, 1.0);
    auto pure_ek = loyd_observable(tri, params, Observable::constant(1.0));
    for (std::uint32_t omega = 0; omega < 20; ++omega) {
        CHECK(pure_ek.weight(omega, 0, params).real() ==
              doctest::Approx(tri(ek_statistic(omega, params))));
    }

    // T = all primes filters nothing except n = 1.
    auto filtered =
        loyd_observable(flat, params, orbit, NormalizerKind::ek,
                        arith::PrimeFamily::all_primes());
    ArithSample s;
    s.n = 6;
    s.omega = 2;
    s.pmax = 3;
    CHECK(filtered.eval(s) == obs.eval(s));
    s.n = 1;
    s.omega = 0;
    s.pmax = 1;
    CHECK(filtered.eval(s) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("richter shift delta") {
    auto alt = [](std::uint64_t j) {
        return std::complex<double>((j & 1) ? -1.0 : 1.0, 0.0);
    };
    // Squarefree shift-1 delta at N equals 2|M(N)|/N exactly.
    CHECK(richter_shift_delta(alt, Restriction::squarefree(), 1, 100) ==
          doctest::Approx(0.02).epsilon(1e-12));
    std::int64_t m5000 = oracle::brute_mertens(5000);
    CHECK(richter_shift_delta(alt, Restriction::squarefree(), 1, 5000) ==
          doctest::Approx(2.0 * std::abs(m5000) / 5000.0).epsilon(1e-12));

    // Constant a gives exactly zero for any restriction.
    auto constant = [](std::uint64_t) { return std::complex<double>(0.7, 0.0); };
    CHECK(richter_shift_delta(constant, Restriction::all(), 1, 2000) == 0.0);
    CHECK(richter_shift_delta(constant, Restriction::kfull(2), 2, 2000) == 0.0);

    // All-n shift-1 delta equals 2|L(N)|/N; L(1e6) = -530 by the
    // trial-division oracle.
    CHECK(richter_shift_delta(alt, Restriction::all(), 1, 1'000'000) ==
          doctest::Approx(2.0 * 530.0 / 1e6).epsilon(1e-9));

    // Shift must match the restriction.
    CHECK_THROWS_AS(richter_shift_delta(alt, Restriction::squarefree(), 2, 100),
                    ValidationError);
    CHECK_THROWS_AS(richter_shift_delta(alt, Restriction::kfull(3), 2, 100),
                    ValidationError);
}

TEST_CASE("proposition 3 residual") {
    const auto& sieve = shared_sieve();
    auto zero = Observable::constant(0.0);
    CHECK(proposition3_residual(zero, {}, 10'000, 50, sieve) == 0.0);

    auto one = Observable::constant(1.0);
    double r1 = proposition3_residual(one, {}, 10'000, 100, sieve);
    CHECK(r1 <= 10.0 * (1.0 / 100.0 + 1.0 / 100.0));
    double r2 = proposition3_residual(one, {}, 10'000, 100, sieve);
    CHECK(r2 == r1);  // deterministic

    // D = sqrt(N): residual <= 20/sqrt(N).
    CHECK(proposition3_residual(one, {}, 10'000, 100, sieve) <= 20.0 / 100.0);

    // Against the literal double-sum oracle.
    std::vector<std::uint64_t> s{2};
    auto a_fn = [](std::uint64_t n) {
        return std::complex<double>(std::cos(0.1 * static_cast<double>(n % 97)),
                                    0.0);
    };
    Needs needs;
    needs.n_value = true;
    auto a_obs = Observable::from_sample_function(
        [&](const ArithSample& smp) { return a_fn(smp.n); }, needs, 1.0);
    auto [lhs, rhs] = oracle::brute_decomposition_lhs_rhs(a_fn, s, 2000, 12);
    CHECK(proposition3_residual(a_obs, s, 2000, 12, sieve) ==
          doctest::Approx(std::abs(lhs - rhs)).epsilon(1e-11));

    CHECK_THROWS_AS(proposition3_residual(one, {}, 100, 11, sieve),
                    ValidationError);
}

TEST_CASE("proposition 5 residual") {
    const auto& sieve = shared_sieve();
    auto zero = Observable::constant(0.0);
    std::vector<std::uint64_t> d{10};
    CHECK(proposition5_residual(zero, 2, 1'000'000, d, sieve) == 0.0);

    auto one = Observable::constant(1.0);
    double bound_shape = 1.0 / std::sqrt(10.0) + std::pow(1e6, -1.0 / 6.0);
    CHECK(proposition5_residual(one, 2, 1'000'000, d, sieve) <=
          10.0 * bound_shape);

    // Nonincreasing trend in D within a small noise floor.
    std::vector<double> residuals;
    for (std::uint64_t dd : {5ULL, 10ULL, 20ULL}) {
        std::vector<std::uint64_t> bounds{dd};
        residuals.push_back(proposition5_residual(one, 2, 1'000'000, bounds, sieve));
    }
    CHECK(residuals[1] <= residuals[0] + 1e-3);
    CHECK(residuals[2] <= residuals[1] + 1e-3);

    // Against the literal oracle at small scale.
    auto a_fn = [](std::uint64_t n) {
        return std::complex<double>(((n >> 1) & 1) ? -0.5 : 0.5, 0.0);
    };
    Needs needs;
    needs.n_value = true;
    auto a_obs = Observable::from_sample_function(
        [&](const ArithSample& smp) { return a_fn(smp.n); }, needs, 0.5);
    std::vector<std::uint64_t> d2{4};
    auto [lhs, rhs] = oracle::brute_decomposition_lhs_rhs_kfull(a_fn, 2, 50'000, d2);
    CHECK(proposition5_residual(a_obs, 2, 50'000, d2, sieve) ==
          doctest::Approx(std::abs(lhs - rhs)).epsilon(1e-11));

    // D out of the proposition's range.
    std::vector<std::uint64_t> too_big{1000};
    CHECK_THROWS_AS(proposition5_residual(one, 2, 1000, too_big, sieve),
                    ValidationError);
}

TEST_CASE("totient shift bound") {
    const auto& sieve = shared_sieve();
    // k = 0: the difference is exactly Omega(m).
    for (std::uint64_t m : {1ULL, 6ULL, 30ULL}) {
        for (std::uint64_t n : {1ULL, 35ULL, 101ULL}) {
            CHECK(totient_shift_bound_check(0, m, n, sieve));
            std::uint32_t lhs = arith::big_omega(m * n, sieve) -
                                arith::big_omega(n, sieve);
            CHECK(lhs == arith::big_omega(m, sieve));
        }
    }
    // m = 1: difference 0 for any k.
    CHECK(totient_shift_bound_check(2, 1, 9999, sieve));
    CHECK(totient_shift_bound_check(1, 6, 35, sieve));
}

TEST_CASE("ks distance to gaussian") {
    CHECK_THROWS_AS(ks_distance_to_gaussian({}), ValidationError);
    CHECK(ks_distance_to_gaussian({0.0, 0.0, 0.0}) == doctest::Approx(0.5));
    CHECK(ks_distance_to_gaussian({-10.0, 10.0}) ==
          doctest::Approx(0.5).epsilon(1e-9));

    // Seeded draws via Box-Muller over splitmix64: classical KS bound.
    SplitMix64 rng(20250811);
    std::vector<double> normals;
    const std::size_t n = 20'000;
    for (std::size_t i = 0; i < n / 2; ++i) {
        double u1 = rng.next_unit();
        double u2 = rng.next_unit();
        while (u1 == 0.0) u1 = rng.next_unit();
        double radius = std::sqrt(-2.0 * std::log(u1));
        normals.push_back(radius * std::cos(2.0 * std::numbers::pi * u2));
        normals.push_back(radius * std::sin(2.0 * std::numbers::pi * u2));
    }
    double ks = ks_distance_to_gaussian(normals);
    CHECK(ks <= 1.36 / std::sqrt(static_cast<double>(n)) + 0.01);

    // Weighted variant agrees with expanding the histogram.
    std::vector<double> values{-1.0, 0.0, 0.5, 2.0};
    std::vector<std::uint64_t> counts{3, 2, 5, 1};
    std::vector<double> expanded;
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::uint64_t c = 0; c < counts[i]; ++c) expanded.push_back(values[i]);
    }
    CHECK(ks_distance_to_gaussian_weighted(values, counts) ==
          doctest::Approx(ks_distance_to_gaussian(expanded)).epsilon(1e-14));
}

TEST_CASE("seeded random observables live on the unit disc and are stable") {
    auto obs = random_disc_observable(777);
    ArithSample s;
    s.n = 12345;
    auto v1 = obs.eval(s);
    auto v2 = obs.eval(s);
    CHECK(v1 == v2);
    for (std::uint64_t n = 1; n <= 500; ++n) {
        s.n = n;
        CHECK(std::abs(obs.eval(s)) <= 1.0);
    }
    auto other = random_disc_observable(778);
    s.n = 12345;
    CHECK(obs.eval(s) != other.eval(s));
}

TEST_CASE("bkw over squarefree via the joint histogram engine") {
    // Smoke: the per-checkpoint weights reproduce a direct summation at
    // small N for the BKW(k=1) functional.
    const auto& sieve = shared_sieve();
    auto tri = CompactFunction::triangle(0.0, 2.0, 1.0);
    auto params = NormalizerParams::for_horizon(1, 2000);
    auto obs = loyd_observable(tri, params, Observable::constant(1.0),
                               NormalizerKind::bkw);
    AverageOptions opts;
    opts.grid.start = 2000;
    opts.normalizer_mode = NormalizerMode::fixed_horizon;
    auto series =
        restricted_average(obs, Restriction::squarefree(), 2000, opts);

    KahanSum direct;
    std::uint64_t members = 0;
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        if (!arith::is_squarefree(n, sieve)) continue;
        ++members;
        direct.add(tri(bkw_normalized(n, sieve, params)));
    }
    CHECK(series.final().members == members);
    CHECK(series.final().value.real() ==
          doctest::Approx(direct.value() / 2000.0).epsilon(1e-12));
}
