#pragma once

// Sieve-backed arithmetic functions: smallest-prime-factor table, full
// factorizations, Omega, Liouville, Moebius, iterated totient, largest
// prime factor, coprimality indicators, and a segmented sieve that streams
// Omega / squarefree / p_max over [1, N] in bounded memory.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ergonum/util.hpp"

namespace ergonum::arith {

struct PrimePower {
    std::uint64_t prime = 0;
    std::uint32_t exp = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime-power list sorted ascending by prime; empty list represents n = 1.
struct Factorization {
    std::vector<PrimePower> factors;

    // Reconstructs n, overflow-checked.
    std::uint64_t value() const;
    bool valid() const;  // primes strictly increasing, exponents positive

    friend bool operator==(const Factorization&, const Factorization&) = default;
};

// Smallest-prime-factor table for all 2 <= n <= limit; immutable after
// construction and safe to share across threads.
class FactorSieve {
public:
    // ~1 GiB of table by default; experiments beyond this use SegmentSieve.
    static constexpr std::uint64_t kDefaultLimitCap = 1ULL << 28;

    explicit FactorSieve(std::uint64_t limit,
                         std::uint64_t limit_cap = kDefaultLimitCap);

    std::uint64_t limit() const { return limit_; }

    std::uint32_t smallest_prime_factor(std::uint64_t n) const;
    bool is_prime(std::uint64_t n) const {
        return n >= 2 && smallest_prime_factor(n) == n;
    }

    Factorization factorize(std::uint64_t n) const;

    // Primes <= limit, ascending (collected during the linear sieve pass).
    const std::vector<std::uint32_t>& primes() const { return primes_; }

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

// --- pure functions of a factorization ---

std::uint32_t big_omega(const Factorization& f);
int liouville(const Factorization& f);
int mobius(const Factorization& f);
bool is_squarefree(const Factorization& f);
std::uint64_t p_max(const Factorization& f);  // p_max of 1 is 1
std::uint64_t totient(const Factorization& f);

// --- sieve-backed conveniences, 1 <= n <= sieve.limit() ---

std::uint32_t big_omega(std::uint64_t n, const FactorSieve& sieve);
int liouville(std::uint64_t n, const FactorSieve& sieve);
int mobius(std::uint64_t n, const FactorSieve& sieve);
bool is_squarefree(std::uint64_t n, const FactorSieve& sieve);
std::uint64_t p_max(std::uint64_t n, const FactorSieve& sieve);
std::uint64_t totient(std::uint64_t n, const FactorSieve& sieve);

// k-fold iterate of Euler's totient; phi_0(n) = n. Iterates shrink, so they
// always stay inside the sieve.
std::uint64_t iterated_totient(std::uint64_t n, std::uint32_t k,
                               const FactorSieve& sieve);

// Largest e with p^e | n. Validates primality of p (trial division).
std::uint32_t valuation(std::uint64_t n, std::uint64_t p);

// w_S(n): 1 iff no prime of S divides n; w_{} is identically 1.
int w_indicator(std::uint64_t n, std::span<const std::uint64_t> s);

bool trial_division_is_prime(std::uint64_t n);

// A set of primes T with a claimed relative density delta(T) among primes
// (adopted definition: lim pi_T(x)/pi(x); the density is caller-supplied
// metadata, never verified).
struct PrimeFamily {
    std::string name;
    std::function<bool(std::uint64_t)> contains;  // defined on primes
    double density = 1.0;

    static PrimeFamily all_primes();   // density 1
    static PrimeFamily one_mod_four(); // density 1/2

    // Filter on p_max(n). n = 1 has p_max = 1, which no prime family
    // contains; callers wanting the trivial all-integers filter simply pass
    // no family at all.
    bool passes_pmax(std::uint64_t pmax_of_n) const {
        return pmax_of_n >= 2 && contains(pmax_of_n);
    }
};

// --- segmented sieve over [1, N] ---

// One filled segment [lo, hi): omega[i], squarefree[i] (0/1) and optionally
// pmax[i] describe n = lo + i.
struct SegmentView {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::span<const std::uint8_t> omega;
    std::span<const std::uint8_t> squarefree;
    std::span<const std::uint64_t> pmax;  // empty unless requested
};

struct SegmentBuffers {
    std::vector<std::uint8_t> omega;
    std::vector<std::uint8_t> squarefree;
    std::vector<std::uint64_t> cofactor;
    std::vector<std::uint64_t> pmax;
};

// Stateless filler: base primes up to sqrt(limit) computed once, then any
// [lo, hi) subrange can be filled into caller-owned buffers. const methods
// are safe to call from multiple threads with distinct buffers.
class SegmentSieve {
public:
    static constexpr std::uint64_t kDefaultSegment = 1ULL << 22;

    SegmentSieve(std::uint64_t limit, bool want_pmax);

    std::uint64_t limit() const { return limit_; }
    bool want_pmax() const { return want_pmax_; }

    // Fills buffers for [lo, hi), 1 <= lo < hi <= limit+1.
    SegmentView fill(std::uint64_t lo, std::uint64_t hi, SegmentBuffers& buf) const;

    // Sequentially scans [1, limit] in ascending segments.
    void scan(std::uint64_t segment_size,
              const std::function<void(const SegmentView&)>& fn) const;

private:
    std::uint64_t limit_;
    bool want_pmax_;
    std::vector<std::uint32_t> base_primes_;
};

}  // namespace ergonum::arith
