#pragma once

// Shared numeric utilities: error taxonomy, compensated summation,
// deterministic splitmix64 generator, overflow-checked integer arithmetic,
// integer k-th roots.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ergonum {

// Bad arguments / domain violations. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Resource limits (sieve above the configured cap, overflow). Exit code 3.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem failures. Exit code 4.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// integrate() with a StateFunction outside the closed-form family.
class UnsupportedFunctionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Kahan–Neumaier compensated accumulator. Long averages (1e8+ terms) lose
// 3-4 digits with a plain double; the compensation term keeps them.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    // Sequential merge; callers must fold partials in a fixed order so that
    // results do not depend on the thread count.
    void merge(const KahanSum& other) {
        add(other.sum);
        comp += other.comp;
    }

    double value() const { return sum + comp; }
};

struct KahanComplex {
    KahanSum re;
    KahanSum im;

    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    void merge(const KahanComplex& other) {
        re.merge(other.re);
        im.merge(other.im);
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

// splitmix64: tiny, seedable, identical on every platform. Used for the
// seeded random-observable fixtures and test data generation.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Stateless hash of (seed, n); the seeded-observable contract is that values
// depend only on the pair, not on evaluation order.
inline std::uint64_t splitmix64_hash(std::uint64_t seed, std::uint64_t n) {
    SplitMix64 g(seed ^ (n * 0xD1B54A32D192ED03ULL));
    return g.next();
}

// Overflow-checked ops: 1e9-scale inputs leave headroom, but overflow must
// surface as an error, never wraparound.
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw CapacityError("integer overflow in product " + std::to_string(a) +
                            " * " + std::to_string(b));
    }
    return out;
}

inline std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
    std::uint64_t out = 1;
    for (unsigned i = 0; i < exp; ++i) out = checked_mul(out, base);
    return out;
}

// True iff base^exp <= bound, evaluated without overflow.
inline bool pow_leq(std::uint64_t base, unsigned exp, std::uint64_t bound) {
    std::uint64_t acc = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && acc > bound / base) return false;
        acc *= base;
    }
    return acc <= bound;
}

// floor(n^(1/k)) computed exactly: floating seed, then integer fix-up.
// Floating roots alone misclassify near perfect-power boundaries.
inline std::uint64_t iroot(std::uint64_t n, unsigned k) {
    if (k == 0) throw ValidationError("iroot: k must be >= 1");
    if (k == 1 || n <= 1) return n;
    auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / k));
    // The double seed can be off by one or two in either direction.
    r += 2;
    while (r > 0 && !pow_leq(r, k, n)) --r;
    return r;
}

inline bool is_perfect_power(std::uint64_t n, unsigned k, std::uint64_t* root = nullptr) {
    std::uint64_t r = iroot(n, k);
    bool exact = pow_leq(r, k, n) && !pow_leq(r + 1, k, n) && checked_pow(r, k) == n;
    if (root) *root = r;
    return exact;
}

}  // namespace ergonum
