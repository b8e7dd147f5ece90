#pragma once

// Squarefree and k-full machinery: Euler-type sieve constants, zeta
// evaluations (including the continued zeta(2/3)), canonical k-full forms,
// enumeration/counting, density partial sums, and the exact convolution
// identity suites.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ergonum/arith.hpp"
#include "ergonum/util.hpp"

namespace ergonum::special {

// alpha(S) = prod p/(p+1), beta(S) = prod (p^2-1)/p^2,
// alpha0(S) = prod (p-1)/p, P(S) = prod p. Empty S gives all ones.
struct SieveConstants {
    std::vector<std::uint64_t> s;
    double alpha = 1.0;
    double beta = 1.0;
    double alpha0 = 1.0;
    std::uint64_t p_s = 1;
};

SieveConstants sieve_constants(std::span<const std::uint64_t> s);

// 6/pi^2, the density of squarefree numbers.
double zeta2_inverse();

// zeta(s) for s > 0, s != 1, via the eta function's alternating series with
// Chebyshev (CVZ) acceleration; handles the continuation to 0 < s < 1.
double zeta_via_eta(double s);

// Streams {n <= N : mu^2(n) = 1, w_S(n) = 1} in ascending order.
void for_each_squarefree(std::uint64_t n_max, std::span<const std::uint64_t> s,
                         const std::function<void(std::uint64_t)>& fn);
std::vector<std::uint64_t> enumerate_squarefree(std::uint64_t n_max,
                                                std::span<const std::uint64_t> s);

// Canonical form of a k-full number: n = m^k * n_1^{k+1} * ... * n_{k-1}^{2k-1}
// with the n_i squarefree and pairwise coprime.
struct KFullForm {
    std::uint32_t k = 2;
    std::uint64_t m = 1;
    std::vector<std::uint64_t> parts;  // n_1 .. n_{k-1}

    friend bool operator==(const KFullForm&, const KFullForm&) = default;
};

KFullForm kfull_encode(std::uint64_t n, std::uint32_t k);
std::uint64_t kfull_decode(const KFullForm& form);

// All k-full n <= N ascending, generated from canonical forms (never by
// filtering the integers).
std::vector<std::uint64_t> enumerate_kfull(std::uint64_t n_max, std::uint32_t k);

// Same enumeration carrying the forms; sorted ascending by value.
struct KFullMember {
    std::uint64_t value;
    KFullForm form;
};
std::vector<KFullMember> enumerate_kfull_forms(std::uint64_t n_max, std::uint32_t k);

std::uint64_t count_kfull(std::uint64_t n_max, std::uint32_t k);

// c_k = prod_p (1 + sum_{m=k+1}^{2k-1} p^{-m/k}). The truncated product is
// monotone increasing in the cutoff; with_tail adds a PNT-integral estimate
// of the omitted primes (needed for 1e-6 accuracy at cutoff 1e6).
double erdos_szekeres_constant(std::uint32_t k,
                               std::uint64_t prime_cutoff = 1'000'000,
                               bool with_tail = true);

// A x^(1/2) + B x^(1/3) with A = zeta(3/2)/zeta(3), B = zeta(2/3)/zeta(2).
double bateman_grosswald_estimate(double x);

// (1/N) sum_{n<=N} mu^2(n) w_S(n), exact count divided by N.
double squarefree_density_partial(std::uint64_t n_max,
                                  std::span<const std::uint64_t> s);
std::uint64_t count_squarefree(std::uint64_t n_max, std::span<const std::uint64_t> s);

// --- exact identity suites (Cellarosi–Sinai lemma) ---

struct IdentityReport {
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
};

// mu^2(n) w_S(n) = sum_{d^2 | n} mu(d) w_S(d) w_S(n/d) for all n <= n_max.
IdentityReport check_convolution_identity(std::uint64_t n_max,
                                          std::span<const std::uint64_t> s,
                                          const arith::FactorSieve& sieve);

// (mu w_S) * w_S = 1_{n=1} for all n <= n_max.
IdentityReport check_dirichlet_inverse(std::uint64_t n_max,
                                       std::span<const std::uint64_t> s,
                                       const arith::FactorSieve& sieve);

// Partial sums of the two series from the lemma.
double ws_series_partial(std::uint64_t m_max, std::span<const std::uint64_t> s);
double mobius_ws_series_partial(std::uint64_t m_max,
                                std::span<const std::uint64_t> s,
                                const arith::FactorSieve& sieve);

}  // namespace ergonum::special
