#include "ergonum/oracle.hpp"

#include <cmath>
#include <numeric>

namespace ergonum::oracle {

namespace {

void check_range(std::uint64_t n, std::uint64_t cap, const char* what) {
    if (n > cap) {
        throw ValidationError(std::string(what) + ": input " + std::to_string(n) +
                              " above oracle range " + std::to_string(cap));
    }
}

// Local trial-division helpers; intentionally independent of arith's sieve.
std::uint32_t td_omega(std::uint64_t n) {
    std::uint32_t count = 0;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        while (n % d == 0) {
            n /= d;
            ++count;
        }
    }
    if (n > 1) ++count;
    return count;
}

int td_mobius(std::uint64_t n) {
    int sign = 1;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            sign = -sign;
        }
    }
    if (n > 1) sign = -sign;
    return sign;
}

}  // namespace

arith::Factorization brute_factor(std::uint64_t n) {
    check_range(n, 100'000'000ULL, "brute_factor");
    if (n < 1) throw ValidationError("brute_factor: n must be >= 1");
    arith::Factorization f;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            std::uint32_t e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            f.factors.push_back({d, e});
        }
    }
    if (n > 1) f.factors.push_back({n, 1});
    return f;
}

std::vector<std::uint64_t> brute_kfull_list(std::uint64_t n_max, std::uint32_t k) {
    check_range(n_max, 10'000'000ULL, "brute_kfull_list");
    if (k < 2) throw ValidationError("brute_kfull_list: k must be >= 2");
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        bool kfull = true;
        std::uint64_t m = n;
        for (std::uint64_t d = 2; d * d <= m && kfull; ++d) {
            if (m % d == 0) {
                std::uint32_t e = 0;
                while (m % d == 0) {
                    m /= d;
                    ++e;
                }
                if (e < k) kfull = false;
            }
        }
        if (m > 1) kfull = false;  // leftover prime has exponent 1 < k
        if (kfull) out.push_back(n);
    }
    return out;
}

std::int64_t brute_mertens(std::uint64_t n_max) {
    check_range(n_max, 10'000'000ULL, "brute_mertens");
    std::int64_t sum = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) sum += td_mobius(n);
    return sum;
}

std::int64_t brute_liouville_sum(std::uint64_t n_max) {
    check_range(n_max, 10'000'000ULL, "brute_liouville_sum");
    std::int64_t sum = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) sum += (td_omega(n) & 1) ? -1 : 1;
    return sum;
}

std::uint64_t brute_prime_count(std::uint64_t n_max) {
    check_range(n_max, 10'000'000ULL, "brute_prime_count");
    std::uint64_t count = 0;
    for (std::uint64_t n = 2; n <= n_max; ++n) {
        bool prime = true;
        for (std::uint64_t d = 2; d * d <= n; ++d) {
            if (n % d == 0) {
                prime = false;
                break;
            }
        }
        if (prime) ++count;
    }
    return count;
}

std::pair<std::complex<double>, std::complex<double>> brute_decomposition_lhs_rhs(
    const std::function<std::complex<double>(std::uint64_t)>& a,
    std::span<const std::uint64_t> s, std::uint64_t n_max, std::uint64_t d_max) {
    check_range(n_max, 1'000'000ULL, "brute_decomposition_lhs_rhs");
    auto w = [&](std::uint64_t n) {
        for (std::uint64_t p : s) {
            if (n % p == 0) return 0;
        }
        return 1;
    };

    std::complex<double> lhs = 0.0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        int mu = td_mobius(n);
        if (mu != 0 && w(n)) lhs += a(n);
    }
    lhs /= static_cast<double>(n_max);

    std::complex<double> rhs = 0.0;
    for (std::uint64_t d = 1; d <= d_max; ++d) {
        int mu = td_mobius(d);
        if (mu == 0 || !w(d)) continue;
        std::uint64_t inner_max = n_max / (d * d);
        if (inner_max == 0) continue;
        std::complex<double> inner = 0.0;
        for (std::uint64_t n = 1; n <= inner_max; ++n) {
            if (w(n)) inner += a(d * d * n);
        }
        inner /= static_cast<double>(inner_max);
        rhs += static_cast<double>(mu) / static_cast<double>(d * d) * inner;
    }
    return {lhs, rhs};
}

std::pair<std::complex<double>, std::complex<double>> brute_decomposition_lhs_rhs_kfull(
    const std::function<std::complex<double>(std::uint64_t)>& a, std::uint32_t k,
    std::uint64_t n_max, std::span<const std::uint64_t> d_max) {
    check_range(n_max, 1'000'000ULL, "brute_decomposition_lhs_rhs_kfull");
    if (k < 2) throw ValidationError("brute_decomposition_lhs_rhs_kfull: k >= 2");
    if (d_max.size() != k - 1) {
        throw ValidationError("brute_decomposition_lhs_rhs_kfull: need k-1 bounds");
    }

    std::complex<double> lhs = 0.0;
    for (std::uint64_t n : brute_kfull_list(n_max, k)) lhs += a(n);
    lhs /= std::pow(static_cast<double>(n_max), 1.0 / k);

    // Literal tuple recursion over n_1 <= D_1, ..., n_{k-1} <= D_{k-1},
    // squarefree and pairwise coprime.
    std::complex<double> rhs = 0.0;
    std::vector<std::uint64_t> tuple(k - 1, 1);
    std::function<void(std::size_t)> recurse = [&](std::size_t i) {
        if (i == k - 1) {
            double weight = 1.0;
            std::uint64_t core = 1;
            bool ok = true;
            for (std::size_t j = 0; j < k - 1 && ok; ++j) {
                weight /= std::pow(static_cast<double>(tuple[j]),
                                   1.0 + static_cast<double>(j + 1) / k);
                for (std::uint32_t e = 0; e < k + j + 1; ++e) {
                    if (core > n_max / tuple[j]) {
                        ok = false;
                        break;
                    }
                    core *= tuple[j];
                }
            }
            if (!ok) return;
            // floor(V_k) = floor((N/core)^(1/k)) by integer search
            std::uint64_t ratio = n_max / core;
            auto kth_power_fits = [&](std::uint64_t base) {
                std::uint64_t pw = 1;
                for (std::uint32_t e = 0; e < k; ++e) {
                    if (base != 0 && pw > ratio / base) return false;
                    pw *= base;
                }
                return pw <= ratio;
            };
            std::uint64_t v = 0;
            while (kth_power_fits(v + 1)) ++v;
            if (v == 0) return;  // empty expectation contributes nothing
            std::complex<double> inner = 0.0;
            for (std::uint64_t m = 1; m <= v; ++m) {
                std::uint64_t arg = core;
                for (std::uint32_t e = 0; e < k; ++e) arg *= m;
                inner += a(arg);
            }
            inner /= static_cast<double>(v);
            rhs += weight * inner;
            return;
        }
        for (std::uint64_t cand = 1; cand <= d_max[i]; ++cand) {
            if (td_mobius(cand) == 0) continue;
            bool coprime = true;
            for (std::size_t j = 0; j < i; ++j) {
                if (std::gcd(cand, tuple[j]) != 1) {
                    coprime = false;
                    break;
                }
            }
            if (!coprime) continue;
            tuple[i] = cand;
            recurse(i + 1);
        }
    };
    recurse(0);
    return {lhs, rhs};
}

}  // namespace ergonum::oracle
