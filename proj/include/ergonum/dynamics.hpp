#pragma once

// Concrete uniquely ergodic systems: cyclic groups, circle rotations and
// their products, with one-step orbit evaluation, exact invariant-measure
// integration of the built-in function families, and finitely generated
// multiplicative torus actions.

#include <cstdint>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "ergonum/arith.hpp"
#include "ergonum/observable.hpp"
#include "ergonum/util.hpp"

namespace ergonum::dynamics {

// A state is one component per leaf system: a residue for cyclic leaves, a
// point of [0,1) for circle leaves. Product systems concatenate leaves.
using LeafState = std::variant<std::uint64_t, double>;

struct State {
    std::vector<LeafState> leaves;

    static State cyclic(std::uint64_t residue) { return {{LeafState{residue}}}; }
    static State circle(double x) { return {{LeafState{x}}}; }
};

class AdditiveSystem {
public:
    // x -> x+1 mod m on residues, uniform invariant measure.
    static AdditiveSystem cyclic(std::uint64_t modulus);

    // x -> x + alpha mod 1 on [0,1), Lebesgue invariant measure. The
    // irrationality of alpha cannot be decided from a double; the caller
    // asserts it. golden() and sqrt2() are prebuilt irrational rotations.
    static AdditiveSystem circle(double alpha, bool irrational);
    static AdditiveSystem golden();
    static AdditiveSystem sqrt2();

    static AdditiveSystem product(const AdditiveSystem& a, const AdditiveSystem& b);

    bool uniquely_ergodic() const { return uniquely_ergodic_; }
    bool totally_uniquely_ergodic() const { return totally_uniquely_ergodic_; }
    std::size_t leaf_count() const { return leaves_.size(); }

    struct CyclicLeaf {
        std::uint64_t modulus;
        std::uint64_t step;  // T advances by `step` mod modulus
    };
    struct CircleLeaf {
        double step;       // T advances by `step` mod 1
        bool irrational;   // caller-asserted flag on the step angle
        std::uint64_t step_hi_ticks;  // round(step * 2^26): exact integer part
        double step_lo;               // step - step_hi_ticks / 2^26
    };
    using Leaf = std::variant<CyclicLeaf, CircleLeaf>;
    const std::vector<Leaf>& leaves() const { return leaves_; }

    State origin() const;  // residue 0 / point 0 in every leaf

private:
    std::vector<Leaf> leaves_;
    bool uniquely_ergodic_ = false;
    bool totally_uniquely_ergodic_ = false;

    friend AdditiveSystem power_system(const AdditiveSystem&, std::uint64_t);
    void refresh_flags();
};

// T^n x in one step: rotations advance by n*step mod 1 through an exact
// integer-tick path (no error accumulation over n ~ 1e9), cyclic leaves by
// n*step mod m.
State orbit_value(const AdditiveSystem& sys, const State& x, std::uint64_t n);

// The system with transform T^k. Unique ergodicity is re-derived: an
// irrational rotation keeps both flags, a cyclic system keeps unique
// ergodicity iff gcd(k, m) = 1.
AdditiveSystem power_system(const AdditiveSystem& sys, std::uint64_t k);

// Bounded functions on the state space with closed-form invariant-measure
// integrals: trig polynomials and piecewise-linear hats on circle leaves,
// arbitrary tables on cyclic leaves, products across leaves.
class StateFunction {
public:
    // mean + sum_j (cos_coef[j-1] cos(2 pi j x) + sin_coef[j-1] sin(2 pi j x))
    static StateFunction trig_poly(double mean, std::vector<double> cos_coef,
                                   std::vector<double> sin_coef);
    static StateFunction one();
    static StateFunction cosine();       // cos(2 pi x)
    static StateFunction sine();         // sin(2 pi x)
    static StateFunction sin_squared();  // sin^2(2 pi x) = 1/2 - cos(4 pi x)/2

    // Piecewise-linear hat on [lo, hi] with apex at `peak`; 0 <= lo < peak <
    // hi <= 1. Integral h (hi - lo) / 2.
    static StateFunction hat(double lo, double peak, double hi, double height);

    // Cyclic-leaf table; values.size() must equal the modulus.
    static StateFunction table(std::vector<double> values);

    // No closed-form integral; integrate() rejects it.
    static StateFunction custom(std::function<double(double)> fn, double sup_norm);

    static StateFunction product(StateFunction a, StateFunction b);

    double operator()(const State& x) const;
    bool has_exact_integral() const;
    double exact_integral() const;  // throws UnsupportedFunctionError
    double sup_norm() const { return sup_norm_; }

    // True unless leaf `i` is a table of a different size than `modulus`.
    bool table_matches(std::size_t i, std::uint64_t modulus) const;

private:
    struct TrigLeaf {
        double mean;
        std::vector<double> cos_coef, sin_coef;
    };
    struct HatLeaf {
        double lo, peak, hi, height;
    };
    struct TableLeaf {
        std::vector<double> values;
    };
    struct CustomLeaf {
        std::function<double(double)> fn;
    };
    using LeafFn = std::variant<TrigLeaf, HatLeaf, TableLeaf, CustomLeaf>;

    std::vector<LeafFn> leaves_;
    double sup_norm_ = 0.0;

    static double eval_leaf(const LeafFn& fn, const LeafState& x);
    static double integral_leaf(const LeafFn& fn);
};

// Exact invariant-measure integral: Lebesgue on circle leaves, uniform on
// cyclic leaves, product measure across leaves.
double integrate(const AdditiveSystem& sys, const StateFunction& f);

// Finitely generated multiplicative action on the circle:
// S_n y = y + sum_p v_p(n) theta_p mod 1 over the generator primes. The
// strong-unique-ergodicity condition (some prime set P with
// sum_{p not in P} 1/p < infinity and a unique invariant measure under all
// S_p, p in P) is not certified here; instances are illustrative only.
class MultiplicativeSystem {
public:
    explicit MultiplicativeSystem(
        std::vector<std::pair<std::uint64_t, double>> generators);

    const std::vector<std::pair<std::uint64_t, double>>& generators() const {
        return generators_;
    }

private:
    std::vector<std::pair<std::uint64_t, double>> generators_;
};

// S_n y via the valuations of n at the generator primes.
double mult_act(const MultiplicativeSystem& msys, double y, std::uint64_t n);

// --- observable builders ---

// n -> f(T^{Omega(n)} x). Requires a uniquely ergodic system. With the
// two-point system, f(0)=1, f(1)=-1, x=0 this is the Liouville function.
ergodic::Observable br_observable(const AdditiveSystem& sys, const State& x,
                                  const StateFunction& f);

// n -> f(T^n x), the canonical invariant-average observable: its average is
// the invariant integral by unique ergodicity, and replacing n by mn leaves
// the average unchanged (T^m is again uniquely ergodic on this family).
ergodic::Observable birkhoff_observable(const AdditiveSystem& sys, const State& x,
                                        const StateFunction& f);

// n -> f(T^{Omega(mn+r)} x), m >= 1, 0 <= r <= m-1. Omega(mn+r) is read from
// `sieve`, which must cover m*N + r for the range being averaged.
ergodic::Observable ap_observable(const AdditiveSystem& sys, const State& x,
                                  const StateFunction& f, std::uint64_t m,
                                  std::uint64_t r,
                                  std::shared_ptr<const arith::FactorSieve> sieve);

// n -> g(S_n y) on a multiplicative system; g must be a single circle-leaf
// function.
ergodic::Observable mult_observable(const MultiplicativeSystem& msys, double y,
                                    const StateFunction& g);

}  // namespace ergonum::dynamics
