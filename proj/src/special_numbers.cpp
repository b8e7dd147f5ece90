#include "ergonum/special_numbers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ergonum/quadrature.hpp"

namespace ergonum::special {

namespace {

void require_distinct_primes(std::span<const std::uint64_t> s, const char* what) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!arith::trial_division_is_prime(s[i])) {
            throw ValidationError(std::string(what) + ": " + std::to_string(s[i]) +
                                  " is not prime");
        }
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (s[i] == s[j]) {
                throw ValidationError(std::string(what) + ": duplicate prime " +
                                      std::to_string(s[i]));
            }
        }
    }
}

bool trial_division_squarefree(std::uint64_t n) {
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return false;
        }
    }
    return true;
}

// Ei(u) by the everywhere-convergent series; adequate for u = ln x <= 40.
double exponential_integral(double u) {
    constexpr double kEulerGamma = 0.5772156649015328606;
    double sum = kEulerGamma + std::log(u);
    double term = 1.0;
    for (int n = 1; n < 200; ++n) {
        term *= u / n;
        double contrib = term / n;
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * std::abs(sum) && n > u) break;
    }
    return sum;
}

double log_integral(double x) { return exponential_integral(std::log(x)); }

}  // namespace

SieveConstants sieve_constants(std::span<const std::uint64_t> s) {
    require_distinct_primes(s, "sieve_constants");
    SieveConstants out;
    out.s.assign(s.begin(), s.end());
    std::sort(out.s.begin(), out.s.end());
    // Exact integer numerators/denominators, one division each, so the small
    // hand-checked sets come out as exact rationals in double.
    std::uint64_t a_num = 1, a_den = 1, b_num = 1, b_den = 1, a0_num = 1, a0_den = 1;
    for (std::uint64_t p : out.s) {
        a_num = checked_mul(a_num, p);
        a_den = checked_mul(a_den, p + 1);
        b_num = checked_mul(b_num, p * p - 1);
        b_den = checked_mul(b_den, p * p);
        a0_num = checked_mul(a0_num, p - 1);
        a0_den = checked_mul(a0_den, p);
        out.p_s = checked_mul(out.p_s, p);
    }
    out.alpha = static_cast<double>(a_num) / static_cast<double>(a_den);
    out.beta = static_cast<double>(b_num) / static_cast<double>(b_den);
    out.alpha0 = static_cast<double>(a0_num) / static_cast<double>(a0_den);
    return out;
}

double zeta2_inverse() {
    return 6.0 / (std::numbers::pi * std::numbers::pi);
}

double zeta_via_eta(double s) {
    if (!(s > 0.0) || s == 1.0) {
        throw ValidationError("zeta_via_eta: s must be positive and != 1");
    }
    // Cohen–Rodriguez Villegas–Zagier acceleration of
    // eta(s) = sum (-1)^j (j+1)^{-s}; error ~ 5.83^{-n}.
    const int n = 48;
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, c = -d, sum = 0.0;
    for (int j = 0; j < n; ++j) {
        c = b - c;
        sum += c * std::pow(static_cast<double>(j + 1), -s);
        b *= (j + n) * (j - n) / ((j + 0.5) * (j + 1.0));
    }
    double eta = sum / d;
    return eta / (1.0 - std::pow(2.0, 1.0 - s));
}

void for_each_squarefree(std::uint64_t n_max, std::span<const std::uint64_t> s,
                         const std::function<void(std::uint64_t)>& fn) {
    if (n_max < 1) throw ValidationError("for_each_squarefree: N must be >= 1");
    require_distinct_primes(s, "for_each_squarefree");
    constexpr std::uint64_t kBlock = 1 << 20;
    std::vector<std::uint32_t> primes = arith::primes_up_to(iroot(n_max, 2));
    std::vector<std::uint8_t> keep;
    for (std::uint64_t lo = 1; lo <= n_max; lo += kBlock) {
        std::uint64_t hi = std::min(n_max + 1, lo + kBlock);
        keep.assign(static_cast<std::size_t>(hi - lo), 1);
        for (std::uint32_t p : primes) {
            std::uint64_t q = static_cast<std::uint64_t>(p) * p;
            for (std::uint64_t m = ((lo + q - 1) / q) * q; m < hi; m += q) {
                keep[static_cast<std::size_t>(m - lo)] = 0;
            }
        }
        for (std::uint64_t p : s) {
            for (std::uint64_t m = ((lo + p - 1) / p) * p; m < hi; m += p) {
                keep[static_cast<std::size_t>(m - lo)] = 0;
            }
        }
        for (std::uint64_t n = lo; n < hi; ++n) {
            if (keep[static_cast<std::size_t>(n - lo)]) fn(n);
        }
    }
}

std::vector<std::uint64_t> enumerate_squarefree(std::uint64_t n_max,
                                                std::span<const std::uint64_t> s) {
    std::vector<std::uint64_t> out;
    for_each_squarefree(n_max, s, [&](std::uint64_t n) { out.push_back(n); });
    return out;
}

std::uint64_t count_squarefree(std::uint64_t n_max,
                               std::span<const std::uint64_t> s) {
    std::uint64_t count = 0;
    for_each_squarefree(n_max, s, [&](std::uint64_t) { ++count; });
    return count;
}

double squarefree_density_partial(std::uint64_t n_max,
                                  std::span<const std::uint64_t> s) {
    return static_cast<double>(count_squarefree(n_max, s)) /
           static_cast<double>(n_max);
}

namespace {

// Any 64-bit integer other than 1 has a prime factor of exponent < 64, so
// k-full machinery above k = 63 degenerates to {1}.
void require_kfull_order(std::uint32_t k, const char* what) {
    if (k < 2 || k > 63) {
        throw ValidationError(std::string(what) + ": k must lie in [2, 63]");
    }
}

}  // namespace

KFullForm kfull_encode(std::uint64_t n, std::uint32_t k) {
    require_kfull_order(k, "kfull_encode");
    if (n < 1) throw ValidationError("kfull_encode: n must be >= 1");
    KFullForm form;
    form.k = k;
    form.parts.assign(k - 1, 1);
    std::uint64_t rest = n;
    for (std::uint64_t d = 2; d * d <= rest; ++d) {
        if (rest % d != 0) continue;
        std::uint32_t e = 0;
        while (rest % d == 0) {
            rest /= d;
            ++e;
        }
        if (e < k) {
            throw ValidationError("kfull_encode: " + std::to_string(n) +
                                  " is not " + std::to_string(k) + "-full");
        }
        // Exponent e = k*v + (k+r) with r = e mod k >= 1 puts d into part
        // n_r; r = 0 folds entirely into m. Exponents >= 2k feed v.
        std::uint32_t r = e % k;
        std::uint32_t v = (r == 0) ? e / k : (e - k - r) / k;
        if (r != 0) form.parts[r - 1] = checked_mul(form.parts[r - 1], d);
        for (std::uint32_t i = 0; i < v; ++i) form.m = checked_mul(form.m, d);
    }
    if (rest > 1) {
        throw ValidationError("kfull_encode: " + std::to_string(n) + " is not " +
                              std::to_string(k) + "-full");
    }
    return form;
}

std::uint64_t kfull_decode(const KFullForm& form) {
    require_kfull_order(form.k, "kfull_decode");
    if (form.m < 1) throw ValidationError("kfull_decode: m must be >= 1");
    if (form.parts.size() != form.k - 1) {
        throw ValidationError("kfull_decode: expected " +
                              std::to_string(form.k - 1) + " parts");
    }
    for (std::size_t i = 0; i < form.parts.size(); ++i) {
        if (form.parts[i] < 1 || !trial_division_squarefree(form.parts[i])) {
            throw ValidationError("kfull_decode: part " + std::to_string(i + 1) +
                                  " is not squarefree");
        }
        for (std::size_t j = i + 1; j < form.parts.size(); ++j) {
            if (std::gcd(form.parts[i], form.parts[j]) != 1) {
                throw ValidationError("kfull_decode: parts not pairwise coprime");
            }
        }
    }
    std::uint64_t n = checked_pow(form.m, form.k);
    for (std::size_t i = 0; i < form.parts.size(); ++i) {
        n = checked_mul(n, checked_pow(form.parts[i],
                                       form.k + static_cast<std::uint32_t>(i) + 1));
    }
    return n;
}

namespace {

// Shared tuple recursion behind enumerate/count: visits each coprime
// squarefree tuple with prod n_i^{k+i} <= N once.
void visit_kfull_tuples(std::uint64_t n_max, std::uint32_t k,
                        std::vector<std::uint64_t>& tuple, std::size_t index,
                        std::uint64_t core,
                        const std::function<void(const std::vector<std::uint64_t>&,
                                                 std::uint64_t core)>& fn) {
    if (index == k - 1) {
        fn(tuple, core);
        return;
    }
    std::uint32_t expo = k + static_cast<std::uint32_t>(index) + 1;
    for (std::uint64_t cand = 1;; ++cand) {
        if (!pow_leq(cand, expo, n_max / core)) break;
        if (cand > 1) {
            if (!trial_division_squarefree(cand)) continue;
            bool coprime = true;
            for (std::size_t j = 0; j < index; ++j) {
                if (std::gcd(cand, tuple[j]) != 1) {
                    coprime = false;
                    break;
                }
            }
            if (!coprime) continue;
        }
        tuple[index] = cand;
        visit_kfull_tuples(n_max, k, tuple, index + 1,
                           core * checked_pow(cand, expo), fn);
        tuple[index] = 1;
    }
}

}  // namespace

std::vector<KFullMember> enumerate_kfull_forms(std::uint64_t n_max,
                                               std::uint32_t k) {
    if (n_max < 1) throw ValidationError("enumerate_kfull_forms: N must be >= 1");
    require_kfull_order(k, "enumerate_kfull_forms");
    std::vector<KFullMember> out;
    std::vector<std::uint64_t> tuple(k - 1, 1);
    visit_kfull_tuples(
        n_max, k, tuple, 0, 1,
        [&](const std::vector<std::uint64_t>& parts, std::uint64_t core) {
            std::uint64_t m_cap = iroot(n_max / core, k);
            for (std::uint64_t m = 1; m <= m_cap; ++m) {
                KFullMember member;
                member.form.k = k;
                member.form.m = m;
                member.form.parts = parts;
                member.value = checked_mul(core, checked_pow(m, k));
                out.push_back(std::move(member));
            }
        });
    std::sort(out.begin(), out.end(),
              [](const KFullMember& a, const KFullMember& b) {
                  return a.value < b.value;
              });
    return out;
}

std::vector<std::uint64_t> enumerate_kfull(std::uint64_t n_max, std::uint32_t k) {
    std::vector<std::uint64_t> out;
    for (const auto& member : enumerate_kfull_forms(n_max, k)) {
        out.push_back(member.value);
    }
    return out;
}

std::uint64_t count_kfull(std::uint64_t n_max, std::uint32_t k) {
    if (n_max < 1) throw ValidationError("count_kfull: N must be >= 1");
    require_kfull_order(k, "count_kfull");
    std::uint64_t count = 0;
    std::vector<std::uint64_t> tuple(k - 1, 1);
    visit_kfull_tuples(n_max, k, tuple, 0, 1,
                       [&](const std::vector<std::uint64_t>&, std::uint64_t core) {
                           count += iroot(n_max / core, k);
                       });
    return count;
}

double erdos_szekeres_constant(std::uint32_t k, std::uint64_t prime_cutoff,
                               bool with_tail) {
    if (k < 2) throw ValidationError("erdos_szekeres_constant: k must be >= 2");
    if (prime_cutoff < 2) {
        throw ValidationError("erdos_szekeres_constant: cutoff must be >= 2");
    }
    if (prime_cutoff > 200'000'000ULL) {
        throw CapacityError("erdos_szekeres_constant: cutoff above 2e8");
    }
    std::vector<std::uint32_t> primes = arith::primes_up_to(prime_cutoff);

    double product = 1.0;
    for (std::uint32_t p : primes) {
        double lp = std::log(static_cast<double>(p));
        double factor = 1.0;
        for (std::uint32_t m = k + 1; m <= 2 * k - 1; ++m) {
            factor += std::exp(-static_cast<double>(m) / k * lp);
        }
        product *= factor;
    }
    if (!with_tail) return product;

    // Tail over p > cutoff: sum of g(p) with g(t) = log(1 + sum t^{-m/k}),
    // estimated as the PNT integral of g(t)/log t plus the boundary
    // correction g(P)(li(P) - pi(P)) from the exact sieved pi(P).
    double cutoff = static_cast<double>(prime_cutoff);
    auto g_scaled = [&](double u) {
        // u = t^{-1/k}; returns g(t) * u^{-(k+1)} robustly for tiny u.
        double psi = 0.0;
        for (std::uint32_t j = 0; j <= k - 2; ++j) psi += std::pow(u, j);
        double sigma = std::pow(u, k + 1) * psi;
        double ratio = sigma < 1e-12 ? 1.0 - 0.5 * sigma : std::log1p(sigma) / sigma;
        return psi * ratio;
    };
    double u_hi = std::pow(cutoff, -1.0 / k);
    double integral = detail::adaptive_gl15(
        [&](double u) { return g_scaled(u) / std::log(1.0 / u); }, 0.0, u_hi,
        1e-16);
    double g_at_cutoff =
        std::log1p([&] {
            double acc = 0.0;
            for (std::uint32_t m = k + 1; m <= 2 * k - 1; ++m) {
                acc += std::pow(cutoff, -static_cast<double>(m) / k);
            }
            return acc;
        }());
    double boundary = g_at_cutoff * (log_integral(cutoff) -
                                     static_cast<double>(primes.size()));
    return product * std::exp(integral + boundary);
}

double bateman_grosswald_estimate(double x) {
    if (!(x >= 1.0)) {
        throw ValidationError("bateman_grosswald_estimate: x must be >= 1");
    }
    static const double a = zeta_via_eta(1.5) / zeta_via_eta(3.0);
    static const double b =
        zeta_via_eta(2.0 / 3.0) / (std::numbers::pi * std::numbers::pi / 6.0);
    return a * std::sqrt(x) + b * std::cbrt(x);
}

IdentityReport check_convolution_identity(std::uint64_t n_max,
                                          std::span<const std::uint64_t> s,
                                          const arith::FactorSieve& sieve) {
    if (n_max > sieve.limit()) {
        throw ValidationError("check_convolution_identity: N above sieve limit");
    }
    require_distinct_primes(s, "check_convolution_identity");
    std::size_t size = static_cast<std::size_t>(n_max) + 1;
    std::vector<std::int8_t> mu(size, 0);
    std::vector<std::uint8_t> ws(size, 1);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        mu[n] = static_cast<std::int8_t>(arith::mobius(n, sieve));
    }
    for (std::uint64_t p : s) {
        for (std::uint64_t m = p; m <= n_max; m += p) ws[m] = 0;
    }

    std::vector<std::int16_t> acc(size, 0);
    for (std::uint64_t d = 1; d * d <= n_max; ++d) {
        int coef = mu[d] * ws[d];
        if (coef == 0) continue;
        for (std::uint64_t n = d * d; n <= n_max; n += d * d) {
            acc[n] += static_cast<std::int16_t>(coef * ws[n / d]);
        }
    }

    IdentityReport report;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        int lhs = (mu[n] != 0 ? 1 : 0) * ws[n];
        ++report.checked;
        if (acc[n] != lhs) ++report.violations;
    }
    return report;
}

IdentityReport check_dirichlet_inverse(std::uint64_t n_max,
                                       std::span<const std::uint64_t> s,
                                       const arith::FactorSieve& sieve) {
    if (n_max > sieve.limit()) {
        throw ValidationError("check_dirichlet_inverse: N above sieve limit");
    }
    require_distinct_primes(s, "check_dirichlet_inverse");
    std::size_t size = static_cast<std::size_t>(n_max) + 1;
    std::vector<std::int8_t> mu(size, 0);
    std::vector<std::uint8_t> ws(size, 1);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        mu[n] = static_cast<std::int8_t>(arith::mobius(n, sieve));
    }
    for (std::uint64_t p : s) {
        for (std::uint64_t m = p; m <= n_max; m += p) ws[m] = 0;
    }

    std::vector<std::int16_t> acc(size, 0);
    for (std::uint64_t d = 1; d <= n_max; ++d) {
        int coef = mu[d] * ws[d];
        if (coef == 0) continue;
        for (std::uint64_t n = d; n <= n_max; n += d) {
            acc[n] += static_cast<std::int16_t>(coef * ws[n / d]);
        }
    }

    IdentityReport report;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        ++report.checked;
        if (acc[n] != (n == 1 ? 1 : 0)) ++report.violations;
    }
    return report;
}

double ws_series_partial(std::uint64_t m_max, std::span<const std::uint64_t> s) {
    require_distinct_primes(s, "ws_series_partial");
    KahanSum sum;
    for (std::uint64_t n = 1; n <= m_max; ++n) {
        if (arith::w_indicator(n, s)) {
            sum.add(1.0 / (static_cast<double>(n) * static_cast<double>(n)));
        }
    }
    return sum.value();
}

double mobius_ws_series_partial(std::uint64_t m_max,
                                std::span<const std::uint64_t> s,
                                const arith::FactorSieve& sieve) {
    if (m_max > sieve.limit()) {
        throw ValidationError("mobius_ws_series_partial: M above sieve limit");
    }
    require_distinct_primes(s, "mobius_ws_series_partial");
    KahanSum sum;
    for (std::uint64_t n = 1; n <= m_max; ++n) {
        int mu = arith::mobius(n, sieve);
        if (mu == 0 || !arith::w_indicator(n, s)) continue;
        sum.add(mu / (static_cast<double>(n) * static_cast<double>(n)));
    }
    return sum.value();
}

}  // namespace ergonum::special
