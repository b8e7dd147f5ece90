#pragma once

// Observables: bounded complex-valued functions of n built from arithmetic
// data (Omega, p_max, iterated-totient Omega), dynamics orbits, and
// Erdos–Kac-type normalized functionals.
//
// Observables that are pure functions of (Omega(n), Omega(phi_k(n))) expose
// a weight callback so averaging drivers can accumulate integer histograms
// and re-evaluate the weight per checkpoint (the per-checkpoint normalizer
// mode); everything else is evaluated sample by sample.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "ergonum/arith.hpp"
#include "ergonum/util.hpp"

namespace ergonum::ergodic {

// Omega(n) <= 63 for any 64-bit n; tables indexed by Omega use this size.
inline constexpr std::size_t kOmegaTableSize = 64;

// Per-n arithmetic inputs. Drivers fill only the fields an observable's
// Needs declares.
struct ArithSample {
    std::uint64_t n = 1;
    std::uint32_t omega = 0;
    std::uint32_t omega_phi = 0;  // Omega(phi_k(n)) when phi_depth >= 0
    std::uint64_t pmax = 1;
};

struct Needs {
    bool omega = false;
    bool pmax = false;
    bool n_value = false;
    int phi_depth = -1;  // k of Omega(phi_k(n)); -1 = unused
};

// Horizon data for the Erdos–Kac / Bassily–Katai–Wijsmuller normalizers.
// a_k = 1/(k+1)!, b_k = k!/sqrt(2k+1). The loglog of the horizon N must be
// safely positive, hence N >= 100.
struct NormalizerParams {
    std::uint32_t k = 1;
    std::uint64_t horizon = 0;  // 0 when built from an explicit loglog value
    double loglog = 0.0;

    static NormalizerParams for_horizon(std::uint32_t k, std::uint64_t n) {
        if (n < 100) {
            throw ValidationError("NormalizerParams: horizon N must be >= 100");
        }
        NormalizerParams p;
        p.k = k;
        p.horizon = n;
        p.loglog = std::log(std::log(static_cast<double>(n)));
        return p;
    }

    // Direct loglog injection, for tests and synthetic horizons.
    static NormalizerParams with_loglog(std::uint32_t k, double loglog) {
        if (!(loglog > 0.0)) {
            throw ValidationError("NormalizerParams: loglog must be positive");
        }
        NormalizerParams p;
        p.k = k;
        p.loglog = loglog;
        return p;
    }

    double a_k() const {
        double fact = 1.0;
        for (std::uint32_t i = 2; i <= k + 1; ++i) fact *= i;
        return 1.0 / fact;
    }
    double b_k() const {
        double fact = 1.0;
        for (std::uint32_t i = 2; i <= k; ++i) fact *= i;
        return fact / std::sqrt(2.0 * k + 1.0);
    }
};

// (omega - k loglog N) / (k sqrt(loglog N)); k >= 1.
inline double ek_statistic(std::uint32_t omega, const NormalizerParams& p) {
    if (p.k < 1) throw ValidationError("ek_statistic: k must be >= 1");
    return (static_cast<double>(omega) - p.k * p.loglog) /
           (p.k * std::sqrt(p.loglog));
}

// (omega_phi - a_k (loglog N)^{k+1}) / (b_k (loglog N)^{k+1/2}); k >= 0.
inline double bkw_statistic(std::uint32_t omega_phi, const NormalizerParams& p) {
    double center = p.a_k() * std::pow(p.loglog, p.k + 1.0);
    double scale = p.b_k() * std::pow(p.loglog, p.k + 0.5);
    return (static_cast<double>(omega_phi) - center) / scale;
}

class Observable {
public:
    using WeightFn = std::function<std::complex<double>(
        std::uint32_t omega, std::uint32_t omega_phi, const NormalizerParams&)>;
    using EvalFn = std::function<std::complex<double>(const ArithSample&)>;

    // Default-constructed observable is the constant 1.
    Observable()
        : weight_([](std::uint32_t, std::uint32_t, const NormalizerParams&) {
              return std::complex<double>(1.0, 0.0);
          }) {}

    static Observable constant(std::complex<double> c) {
        Observable o;
        o.weight_ = [c](std::uint32_t, std::uint32_t, const NormalizerParams&) {
            return c;
        };
        o.sup_norm_ = std::abs(c);
        return o;
    }

    // j = Omega(n) -> table[j]; the canonical fast path for orbit observables.
    static Observable from_omega_table(std::vector<std::complex<double>> table) {
        if (table.size() < kOmegaTableSize) table.resize(kOmegaTableSize, 0.0);
        Observable o;
        double sup = 0.0;
        for (const auto& v : table) sup = std::max(sup, std::abs(v));
        o.weight_ = [t = std::move(table)](std::uint32_t omega, std::uint32_t,
                                           const NormalizerParams&) {
            return t[omega];
        };
        o.sup_norm_ = sup;
        o.needs_.omega = true;
        return o;
    }

    // Weight depending on the normalizer horizon (Erdos–Kac / BKW / Loyd
    // products). phi_depth >= 0 routes Omega(phi_k(n)) into the weight.
    static Observable from_weight(WeightFn fn, double sup_norm, int phi_depth,
                                  NormalizerParams bound_params) {
        Observable o;
        o.weight_ = std::move(fn);
        o.sup_norm_ = sup_norm;
        o.horizon_dependent_ = true;
        o.bound_params_ = bound_params;
        o.needs_.omega = true;
        o.needs_.phi_depth = phi_depth;
        return o;
    }

    // General per-sample evaluation; no histogram fast path.
    static Observable from_sample_function(EvalFn fn, Needs needs, double sup_norm) {
        Observable o;
        o.weight_ = nullptr;  // not a pure omega observable
        o.eval_ = std::move(fn);
        o.needs_ = needs;
        o.sup_norm_ = sup_norm;
        return o;
    }

    // Multiplies by the indicator 1_{p_max(n) in T}.
    Observable with_pmax_filter(arith::PrimeFamily family) const {
        Observable o = *this;
        o.pmax_filter_ = std::move(family);
        o.needs_.pmax = true;
        return o;
    }

    bool pure() const { return static_cast<bool>(weight_); }
    bool horizon_dependent() const { return horizon_dependent_; }
    const Needs& needs() const { return needs_; }
    double sup_norm() const { return sup_norm_; }
    const NormalizerParams& bound_params() const { return bound_params_; }
    const std::optional<arith::PrimeFamily>& pmax_filter() const {
        return pmax_filter_;
    }

    std::complex<double> weight(std::uint32_t omega, std::uint32_t omega_phi,
                                const NormalizerParams& params) const {
        return weight_(omega, omega_phi, params);
    }

    // Point evaluation; horizon-dependent weights use the bound params.
    std::complex<double> eval(const ArithSample& sample) const {
        if (pmax_filter_ && !pmax_filter_->passes_pmax(sample.pmax)) return 0.0;
        if (weight_) return weight_(sample.omega, sample.omega_phi, bound_params_);
        return eval_(sample);
    }

private:
    WeightFn weight_;
    EvalFn eval_;
    Needs needs_;
    double sup_norm_ = 1.0;
    bool horizon_dependent_ = false;
    NormalizerParams bound_params_ = NormalizerParams::with_loglog(1, 1.0);
    std::optional<arith::PrimeFamily> pmax_filter_;
};

// The seeded bounded-observable family used by residual tests: a(n) is a
// splitmix64 hash of (seed, n) mapped to the closed unit disc.
inline Observable random_disc_observable(std::uint64_t seed) {
    Needs needs;
    needs.n_value = true;
    return Observable::from_sample_function(
        [seed](const ArithSample& sample) {
            std::uint64_t h1 = splitmix64_hash(seed, sample.n);
            std::uint64_t h2 = splitmix64_hash(seed ^ 0x6A09E667F3BCC909ULL, sample.n);
            double radius = std::sqrt(static_cast<double>(h1 >> 11) * 0x1.0p-53);
            double angle =
                2.0 * std::numbers::pi * (static_cast<double>(h2 >> 11) * 0x1.0p-53);
            return std::polar(radius, angle);
        },
        needs, 1.0);
}

}  // namespace ergonum::ergodic
