#pragma once

// Brute-force reference implementations used to mint test fixtures and as
// property-test oracles. Deliberately slow and simple; no code shared with
// the main library beyond value types. Excluded from release builds.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ergonum/arith.hpp"

namespace ergonum::oracle {

struct OracleResult {
    std::string quantity;
    std::string input;
    std::string value;  // exact integer/list rendered as text, or a real
};

// Trial division, nothing else. n <= 1e8.
arith::Factorization brute_factor(std::uint64_t n);

// Filters every n <= N by "each prime factor has exponent >= k". N <= 1e7.
std::vector<std::uint64_t> brute_kfull_list(std::uint64_t n_max, std::uint32_t k);

// Mertens function via trial-division Moebius. N <= 1e7.
std::int64_t brute_mertens(std::uint64_t n_max);

// Liouville partial sum via trial-division Omega. N <= 1e7.
std::int64_t brute_liouville_sum(std::uint64_t n_max);

// Prime count via a per-integer primality test. N <= 1e7.
std::uint64_t brute_prime_count(std::uint64_t n_max);

// Both sides of the squarefree decomposition (truncated at D) by literal
// double summation. N <= 1e6.
std::pair<std::complex<double>, std::complex<double>> brute_decomposition_lhs_rhs(
    const std::function<std::complex<double>(std::uint64_t)>& a,
    std::span<const std::uint64_t> s, std::uint64_t n_max, std::uint64_t d_max);

// Both sides of the k-full decomposition (tuple bounds d_max[i]) by literal
// summation. N <= 1e6.
std::pair<std::complex<double>, std::complex<double>> brute_decomposition_lhs_rhs_kfull(
    const std::function<std::complex<double>(std::uint64_t)>& a, std::uint32_t k,
    std::uint64_t n_max, std::span<const std::uint64_t> d_max);

}  // namespace ergonum::oracle
