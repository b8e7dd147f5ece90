#pragma once

// Restricted ergodic averages over [1, N] (all n / squarefree with excluded
// primes and p_max families / k-full via canonical forms), Erdos–Kac and
// BKW normalized functionals, Loyd product observables, Richter shift
// deltas, decomposition-proposition residuals, and the Gaussian comparison
// machinery (compact test functions, Gaussian expectations, KS distance).
//
// Averages are associative reductions over fixed-size chunks: per-chunk
// compensated partials are folded in ascending chunk order, so results are
// identical for every thread count.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ergonum/arith.hpp"
#include "ergonum/observable.hpp"
#include "ergonum/util.hpp"

namespace ergonum::ergodic {

enum class Normalization { per_n, per_count, per_root };

// Which n enter the average and how it is normalized. Squarefree
// restrictions divide by N itself; k-full restrictions use
// per_count (expectation form) or per_root (N^{1/k} form).
struct Restriction {
    enum class Kind { all, squarefree, kfull };

    Kind kind = Kind::all;
    std::vector<std::uint64_t> exclude;        // S: excluded primes
    std::optional<arith::PrimeFamily> family;  // T: p_max(n) must lie in T
    std::uint32_t k = 0;                       // k-full order
    Normalization normalization = Normalization::per_n;

    static Restriction all();
    static Restriction squarefree(std::vector<std::uint64_t> exclude = {},
                                  std::optional<arith::PrimeFamily> family = {});
    static Restriction kfull(std::uint32_t k,
                             Normalization norm = Normalization::per_count);

    void validate() const;
};

// Geometric checkpoint grid (default ratio 10^{1/4} starting at 1e3); the
// final N is always included.
struct CheckpointGrid {
    std::uint64_t start = 1000;
    double ratio = 1.7782794100389228;  // 10^(1/4)

    std::vector<std::uint64_t> points(std::uint64_t n) const;
};

enum class NormalizerMode { per_checkpoint, fixed_horizon };

struct AverageOptions {
    CheckpointGrid grid;
    unsigned threads = 1;
    std::uint64_t chunk_size = arith::SegmentSieve::kDefaultSegment;
    NormalizerMode normalizer_mode = NormalizerMode::per_checkpoint;
};

struct Checkpoint {
    std::uint64_t n = 0;
    std::complex<double> value = 0.0;
    std::uint64_t members = 0;
};

struct AverageSeries {
    std::vector<Checkpoint> checkpoints;

    const Checkpoint& final() const { return checkpoints.back(); }
};

// Partial averages of `obs` under `restriction` at the checkpoint grid up
// to N. Deterministic across thread counts.
AverageSeries restricted_average(const Observable& obs,
                                 const Restriction& restriction, std::uint64_t n,
                                 const AverageOptions& options = {});

// Cumulative Omega histograms of the restricted members at each checkpoint.
struct OmegaHistogram {
    std::uint64_t n = 0;
    std::uint64_t members = 0;
    std::array<std::uint64_t, kOmegaTableSize> counts{};
};

std::vector<OmegaHistogram> collect_omega_histograms(
    const Restriction& restriction, std::uint64_t n,
    const AverageOptions& options = {});

// --- normalized functionals (spec signatures; statistics from counts live
// in observable.hpp) ---

double ek_normalized(std::uint64_t n, const arith::FactorSieve& sieve,
                     const NormalizerParams& params);
double bkw_normalized(std::uint64_t n, const arith::FactorSieve& sieve,
                      const NormalizerParams& params);

// --- compactly supported test functions F ---

class CompactFunction {
public:
    static CompactFunction triangle(double center, double halfwidth,
                                    double height);
    static CompactFunction raised_cosine(double lo, double hi, double height);
    static CompactFunction plateau(double lo, double flat_lo, double flat_hi,
                                   double hi, double height);
    static CompactFunction custom(std::function<double(double)> fn, double lo,
                                  double hi, double sup_norm);
    // ca*a + cb*b, support hull; exercises linearity.
    static CompactFunction scaled_sum(double ca, const CompactFunction& a,
                                      double cb, const CompactFunction& b);

    double operator()(double t) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double sup_norm() const { return sup_norm_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

private:
    std::function<double(double)> fn_;
    double lo_ = 0.0, hi_ = 0.0, sup_norm_ = 0.0;
    std::vector<double> breakpoints_;
};

// (1/sqrt(2 pi)) integral of F(t) e^{-t^2/2}; adaptive Gauss–Legendre over
// the support, absolute error <= 1e-10.
double gaussian_expectation(const CompactFunction& f);

// --- Loyd-type product observables ---

enum class NormalizerKind { ek, bkw };

// n -> F(statistic(n)) * f_obs(n), optionally multiplied by the indicator
// 1_{p_max(n) in family}. kind==ek uses (Omega(n)-k loglogN)/(k sqrt(loglogN));
// kind==bkw uses the BKW normalization of Omega(phi_k(n)).
Observable loyd_observable(const CompactFunction& f, const NormalizerParams& params,
                           const Observable& f_obs,
                           NormalizerKind kind = NormalizerKind::ek,
                           std::optional<arith::PrimeFamily> family = {});

// --- Richter shift identities ---

// Observable n -> a(Omega(n)) - a(Omega(n)+shift); averaging it under a
// restriction gives the Richter delta before taking absolute values.
Observable richter_diff_observable(
    const std::function<std::complex<double>(std::uint64_t)>& a,
    std::uint32_t shift);

// |avg a(Omega(n)) - avg a(Omega(n)+shift)| at N under the restriction's
// paper normalization (per_n for all/squarefree with shift 1, per_root for
// k-full with shift k).
double richter_shift_delta(
    const std::function<std::complex<double>(std::uint64_t)>& a,
    const Restriction& restriction, std::uint32_t shift, std::uint64_t n,
    const AverageOptions& options = {});

// --- decomposition residuals ---

// | (1/N) sum mu^2 w_S a  -  sum_{d<=D} mu(d) w_S(d)/d^2 E_{n<=N/d^2} w_S a(d^2 n) |
double proposition3_residual(const Observable& a,
                             std::span<const std::uint64_t> s, std::uint64_t n,
                             std::uint64_t d, const arith::FactorSieve& sieve);

// k-full analogue with tuple bounds d[i] (1 <= D_i <= N^{1/((k-1)(k+i))}).
double proposition5_residual(const Observable& a, std::uint32_t k,
                             std::uint64_t n, std::span<const std::uint64_t> d,
                             const arith::FactorSieve& sieve);

// 0 <= Omega(phi_k(mn)) - Omega(phi_k(n)) <= Omega(phitilde_k(m)) with
// phitilde(m) = phi(m) m.
bool totient_shift_bound_check(std::uint32_t k, std::uint64_t m, std::uint64_t n,
                               const arith::FactorSieve& sieve);

// sup over the sample points of |ECDF - Phi| (right-continuous ECDF
// evaluated at each sample; Phi from erfc, |err| <= 1e-12).
double ks_distance_to_gaussian(std::vector<double> samples);
double ks_distance_to_gaussian_weighted(std::span<const double> values,
                                        std::span<const std::uint64_t> counts);

}  // namespace ergonum::ergodic
