#include "ergonum/arith.hpp"

#include <algorithm>
#include <cmath>

namespace ergonum::arith {

std::uint64_t Factorization::value() const {
    std::uint64_t n = 1;
    for (const auto& pp : factors) {
        for (std::uint32_t e = 0; e < pp.exp; ++e) n = checked_mul(n, pp.prime);
    }
    return n;
}

bool Factorization::valid() const {
    std::uint64_t last = 1;
    for (const auto& pp : factors) {
        if (pp.prime <= last || pp.exp == 0) return false;
        last = pp.prime;
    }
    return true;
}

FactorSieve::FactorSieve(std::uint64_t limit, std::uint64_t limit_cap)
    : limit_(limit) {
    if (limit < 2) {
        throw CapacityError("FactorSieve: limit must be >= 2, got " +
                            std::to_string(limit));
    }
    if (limit > limit_cap) {
        throw CapacityError("FactorSieve: limit " + std::to_string(limit) +
                            " exceeds cap " + std::to_string(limit_cap));
    }
    spf_.assign(limit + 1, 0);
    // Linear sieve: each composite is crossed off exactly once by its
    // smallest prime factor.
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<std::uint32_t>(i);
            primes_.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes_) {
            if (p > spf_[i]) break;
            std::uint64_t next = static_cast<std::uint64_t>(p) * i;
            if (next > limit) break;
            spf_[next] = p;
        }
    }
}

std::uint32_t FactorSieve::smallest_prime_factor(std::uint64_t n) const {
    if (n < 2 || n > limit_) {
        throw ValidationError("smallest_prime_factor: n = " + std::to_string(n) +
                              " outside [2, " + std::to_string(limit_) + "]");
    }
    return spf_[n];
}

Factorization FactorSieve::factorize(std::uint64_t n) const {
    if (n < 1 || n > limit_) {
        throw ValidationError("factorize: n = " + std::to_string(n) +
                              " outside [1, " + std::to_string(limit_) + "]");
    }
    Factorization f;
    while (n > 1) {
        std::uint32_t p = spf_[n];
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.factors.push_back({p, e});
    }
    return f;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<std::uint8_t> composite(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
        }
    }
    return primes;
}

std::uint32_t big_omega(const Factorization& f) {
    std::uint32_t total = 0;
    for (const auto& pp : f.factors) total += pp.exp;
    return total;
}

int liouville(const Factorization& f) { return (big_omega(f) & 1) ? -1 : 1; }

int mobius(const Factorization& f) {
    for (const auto& pp : f.factors) {
        if (pp.exp >= 2) return 0;
    }
    return (f.factors.size() & 1) ? -1 : 1;
}

bool is_squarefree(const Factorization& f) {
    for (const auto& pp : f.factors) {
        if (pp.exp >= 2) return false;
    }
    return true;
}

std::uint64_t p_max(const Factorization& f) {
    return f.factors.empty() ? 1 : f.factors.back().prime;
}

std::uint64_t totient(const Factorization& f) {
    std::uint64_t phi = 1;
    for (const auto& pp : f.factors) {
        phi = checked_mul(phi, pp.prime - 1);
        for (std::uint32_t e = 1; e < pp.exp; ++e) phi = checked_mul(phi, pp.prime);
    }
    return phi;
}

// The per-n conveniences walk the spf chain directly; building a
// Factorization vector per call would dominate the identity-suite loops.

std::uint32_t big_omega(std::uint64_t n, const FactorSieve& sieve) {
    if (n < 1) throw ValidationError("big_omega: n must be >= 1");
    if (n == 1) return 0;
    std::uint32_t count = 0;
    while (n > 1) {
        std::uint32_t p = sieve.smallest_prime_factor(n);
        while (n % p == 0) {
            n /= p;
            ++count;
        }
    }
    return count;
}

int liouville(std::uint64_t n, const FactorSieve& sieve) {
    return (big_omega(n, sieve) & 1) ? -1 : 1;
}

int mobius(std::uint64_t n, const FactorSieve& sieve) {
    if (n < 1) throw ValidationError("mobius: n must be >= 1");
    if (n == 1) return 1;
    int sign = 1;
    while (n > 1) {
        std::uint32_t p = sieve.smallest_prime_factor(n);
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    return sign;
}

bool is_squarefree(std::uint64_t n, const FactorSieve& sieve) {
    return mobius(n, sieve) != 0;
}

std::uint64_t p_max(std::uint64_t n, const FactorSieve& sieve) {
    if (n < 1) throw ValidationError("p_max: n must be >= 1");
    std::uint64_t largest = 1;
    while (n > 1) {
        std::uint32_t p = sieve.smallest_prime_factor(n);
        largest = p;
        while (n % p == 0) n /= p;
    }
    return largest;
}

std::uint64_t totient(std::uint64_t n, const FactorSieve& sieve) {
    if (n < 1) throw ValidationError("totient: n must be >= 1");
    std::uint64_t phi = 1;
    while (n > 1) {
        std::uint64_t p = sieve.smallest_prime_factor(n);
        phi *= p - 1;
        n /= p;
        while (n % p == 0) {
            phi *= p;
            n /= p;
        }
    }
    return phi;
}

std::uint64_t iterated_totient(std::uint64_t n, std::uint32_t k,
                               const FactorSieve& sieve) {
    if (n < 1) throw ValidationError("iterated_totient: n must be >= 1");
    std::uint64_t v = n;
    for (std::uint32_t i = 0; i < k && v > 1; ++i) v = totient(v, sieve);
    return v;
}

bool trial_division_is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

std::uint32_t valuation(std::uint64_t n, std::uint64_t p) {
    if (n < 1) throw ValidationError("valuation: n must be >= 1");
    if (!trial_division_is_prime(p)) {
        throw ValidationError("valuation: p = " + std::to_string(p) +
                              " is not prime");
    }
    std::uint32_t e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

int w_indicator(std::uint64_t n, std::span<const std::uint64_t> s) {
    if (n < 1) throw ValidationError("w_indicator: n must be >= 1");
    for (std::uint64_t p : s) {
        if (n % p == 0) return 0;
    }
    return 1;
}

PrimeFamily PrimeFamily::all_primes() {
    return {"all", [](std::uint64_t) { return true; }, 1.0};
}

PrimeFamily PrimeFamily::one_mod_four() {
    return {"1mod4", [](std::uint64_t p) { return p % 4 == 1; }, 0.5};
}

SegmentSieve::SegmentSieve(std::uint64_t limit, bool want_pmax)
    : limit_(limit), want_pmax_(want_pmax) {
    if (limit < 1) throw ValidationError("SegmentSieve: limit must be >= 1");
    std::uint64_t root = iroot(limit, 2);
    base_primes_ = primes_up_to(root);
}

SegmentView SegmentSieve::fill(std::uint64_t lo, std::uint64_t hi,
                               SegmentBuffers& buf) const {
    if (lo < 1 || hi <= lo || hi > limit_ + 1) {
        throw ValidationError("SegmentSieve::fill: bad range [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + ")");
    }
    std::size_t width = static_cast<std::size_t>(hi - lo);
    buf.omega.assign(width, 0);
    buf.squarefree.assign(width, 1);
    buf.cofactor.assign(width, 1);
    if (want_pmax_) buf.pmax.assign(width, 1);

    auto first_multiple = [&](std::uint64_t q) {
        std::uint64_t m = ((lo + q - 1) / q) * q;
        return m;
    };

    for (std::uint32_t p : base_primes_) {
        std::uint64_t p64 = p;
        if (p64 >= hi) break;
        // exponent >= 1: one hit per multiple of p
        for (std::uint64_t m = first_multiple(p64); m < hi; m += p64) {
            std::size_t i = static_cast<std::size_t>(m - lo);
            buf.omega[i] += 1;
            buf.cofactor[i] *= p64;
            if (want_pmax_) buf.pmax[i] = p64;
        }
        // exponent >= e for e >= 2: one extra hit per multiple of p^e
        std::uint64_t pe = p64 * p64;
        bool first_square = true;
        while (pe < hi) {
            for (std::uint64_t m = first_multiple(pe); m < hi; m += pe) {
                std::size_t i = static_cast<std::size_t>(m - lo);
                buf.omega[i] += 1;
                buf.cofactor[i] *= p64;
                if (first_square) buf.squarefree[i] = 0;
            }
            first_square = false;
            if (pe > (hi - 1) / p64) break;
            pe *= p64;
        }
    }

    // Whatever the base primes did not absorb is a single prime > sqrt(hi-1).
    for (std::size_t i = 0; i < width; ++i) {
        std::uint64_t n = lo + i;
        if (buf.cofactor[i] != n) {
            buf.omega[i] += 1;
            if (want_pmax_) buf.pmax[i] = n / buf.cofactor[i];
        }
    }

    SegmentView view;
    view.lo = lo;
    view.hi = hi;
    view.omega = {buf.omega.data(), width};
    view.squarefree = {buf.squarefree.data(), width};
    if (want_pmax_) view.pmax = {buf.pmax.data(), width};
    return view;
}

void SegmentSieve::scan(std::uint64_t segment_size,
                        const std::function<void(const SegmentView&)>& fn) const {
    if (segment_size < 1) throw ValidationError("scan: segment_size must be >= 1");
    SegmentBuffers buf;
    for (std::uint64_t lo = 1; lo <= limit_; lo += segment_size) {
        std::uint64_t hi = std::min(limit_ + 1, lo + segment_size);
        fn(fill(lo, hi, buf));
    }
}

}  // namespace ergonum::arith
