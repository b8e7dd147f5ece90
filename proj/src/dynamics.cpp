#include "ergonum/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ergonum::dynamics {

namespace {

constexpr double kTick = 67108864.0;  // 2^26

double frac(double x) {
    double f = x - std::floor(x);
    return f >= 1.0 ? f - 1.0 : f;  // guard against floor rounding at 1.0
}

AdditiveSystem::CircleLeaf make_circle_leaf(double step, bool irrational) {
    step = frac(step);
    AdditiveSystem::CircleLeaf leaf;
    leaf.step = step;
    leaf.irrational = irrational;
    // Split the angle into an exact tick count over a 2^26 grid plus a tiny
    // remainder. n*ticks mod 2^26 is exact integer arithmetic for any n, so
    // a single fused rotation step carries no accumulated error.
    leaf.step_hi_ticks = static_cast<std::uint64_t>(std::llround(step * kTick));
    leaf.step_lo = step - static_cast<double>(leaf.step_hi_ticks) / kTick;
    return leaf;
}

double rotate(const AdditiveSystem::CircleLeaf& leaf, double x, std::uint64_t n) {
    constexpr std::uint64_t kMask = (1ULL << 26) - 1;
    std::uint64_t ticks = ((n & kMask) * (leaf.step_hi_ticks & kMask)) & kMask;
    double hi_phase = static_cast<double>(ticks) / kTick;
    double lo_phase = frac(static_cast<double>(n) * leaf.step_lo);
    return frac(hi_phase + lo_phase + x);
}

}  // namespace

AdditiveSystem AdditiveSystem::cyclic(std::uint64_t modulus) {
    if (modulus < 1) throw ValidationError("cyclic: modulus must be >= 1");
    AdditiveSystem sys;
    sys.leaves_.push_back(CyclicLeaf{modulus, 1 % modulus});
    sys.refresh_flags();
    return sys;
}

AdditiveSystem AdditiveSystem::circle(double alpha, bool irrational) {
    if (!(alpha >= 0.0) || !(alpha < 1.0)) {
        throw ValidationError("circle: alpha must lie in [0, 1)");
    }
    AdditiveSystem sys;
    sys.leaves_.push_back(make_circle_leaf(alpha, irrational));
    sys.refresh_flags();
    return sys;
}

AdditiveSystem AdditiveSystem::golden() {
    return circle((std::sqrt(5.0) - 1.0) / 2.0, true);
}

AdditiveSystem AdditiveSystem::sqrt2() {
    return circle(std::sqrt(2.0) - 1.0, true);
}

AdditiveSystem AdditiveSystem::product(const AdditiveSystem& a,
                                       const AdditiveSystem& b) {
    AdditiveSystem sys;
    sys.leaves_ = a.leaves_;
    sys.leaves_.insert(sys.leaves_.end(), b.leaves_.begin(), b.leaves_.end());
    sys.refresh_flags();
    return sys;
}

void AdditiveSystem::refresh_flags() {
    // Leaf-wise conjunction. For products this assumes the factors are
    // jointly uniquely ergodic (e.g. rationally independent rotation
    // angles); like irrationality itself, that is asserted, not decided.
    bool ue = true, tue = true;
    for (const Leaf& leaf : leaves_) {
        if (const auto* c = std::get_if<CyclicLeaf>(&leaf)) {
            ue &= (c->modulus == 1) || std::gcd(c->step, c->modulus) == 1;
            tue &= c->modulus == 1;
        } else {
            const auto& r = std::get<CircleLeaf>(leaf);
            ue &= r.irrational;
            tue &= r.irrational;
        }
    }
    uniquely_ergodic_ = ue;
    totally_uniquely_ergodic_ = tue;
}

State AdditiveSystem::origin() const {
    State x;
    for (const Leaf& leaf : leaves_) {
        if (std::holds_alternative<CyclicLeaf>(leaf)) {
            x.leaves.push_back(LeafState{std::uint64_t{0}});
        } else {
            x.leaves.push_back(LeafState{0.0});
        }
    }
    return x;
}

State orbit_value(const AdditiveSystem& sys, const State& x, std::uint64_t n) {
    if (x.leaves.size() != sys.leaf_count()) {
        throw ValidationError("orbit_value: state does not match system");
    }
    State out = x;
    for (std::size_t i = 0; i < sys.leaves().size(); ++i) {
        const auto& leaf = sys.leaves()[i];
        if (const auto* c = std::get_if<AdditiveSystem::CyclicLeaf>(&leaf)) {
            const auto* r = std::get_if<std::uint64_t>(&x.leaves[i]);
            if (!r || *r >= c->modulus) {
                throw ValidationError("orbit_value: bad cyclic state");
            }
            unsigned __int128 advanced =
                static_cast<unsigned __int128>(n) * c->step + *r;
            out.leaves[i] = static_cast<std::uint64_t>(advanced % c->modulus);
        } else {
            const auto& rot = std::get<AdditiveSystem::CircleLeaf>(leaf);
            const auto* p = std::get_if<double>(&x.leaves[i]);
            if (!p) throw ValidationError("orbit_value: bad circle state");
            out.leaves[i] = rotate(rot, *p, n);
        }
    }
    return out;
}

AdditiveSystem power_system(const AdditiveSystem& sys, std::uint64_t k) {
    if (k < 1) throw ValidationError("power_system: k must be >= 1");
    AdditiveSystem out = sys;
    for (auto& leaf : out.leaves_) {
        if (auto* c = std::get_if<AdditiveSystem::CyclicLeaf>(&leaf)) {
            unsigned __int128 step =
                static_cast<unsigned __int128>(c->step) * k;
            c->step = static_cast<std::uint64_t>(step % c->modulus);
        } else {
            auto& r = std::get<AdditiveSystem::CircleLeaf>(leaf);
            // k*alpha mod 1 through the exact tick path, then re-split.
            double stepped = rotate(r, 0.0, k);
            leaf = make_circle_leaf(stepped, r.irrational);
        }
    }
    out.refresh_flags();
    return out;
}

// --- StateFunction ---

StateFunction StateFunction::trig_poly(double mean, std::vector<double> cos_coef,
                                       std::vector<double> sin_coef) {
    StateFunction f;
    double sup = std::abs(mean);
    for (double c : cos_coef) sup += std::abs(c);
    for (double c : sin_coef) sup += std::abs(c);
    f.leaves_.push_back(TrigLeaf{mean, std::move(cos_coef), std::move(sin_coef)});
    f.sup_norm_ = sup;
    return f;
}

StateFunction StateFunction::one() { return trig_poly(1.0, {}, {}); }
StateFunction StateFunction::cosine() { return trig_poly(0.0, {1.0}, {}); }
StateFunction StateFunction::sine() { return trig_poly(0.0, {}, {1.0}); }

StateFunction StateFunction::sin_squared() {
    // sin^2(2 pi x) = 1/2 - cos(4 pi x)/2
    return trig_poly(0.5, {0.0, -0.5}, {});
}

StateFunction StateFunction::hat(double lo, double peak, double hi, double height) {
    if (!(0.0 <= lo && lo < peak && peak < hi && hi <= 1.0)) {
        throw ValidationError("hat: need 0 <= lo < peak < hi <= 1");
    }
    StateFunction f;
    f.leaves_.push_back(HatLeaf{lo, peak, hi, height});
    f.sup_norm_ = std::abs(height);
    return f;
}

StateFunction StateFunction::table(std::vector<double> values) {
    if (values.empty()) throw ValidationError("table: values must be nonempty");
    StateFunction f;
    double sup = 0.0;
    for (double v : values) sup = std::max(sup, std::abs(v));
    f.leaves_.push_back(TableLeaf{std::move(values)});
    f.sup_norm_ = sup;
    return f;
}

StateFunction StateFunction::custom(std::function<double(double)> fn,
                                    double sup_norm) {
    StateFunction f;
    f.leaves_.push_back(CustomLeaf{std::move(fn)});
    f.sup_norm_ = sup_norm;
    return f;
}

StateFunction StateFunction::product(StateFunction a, StateFunction b) {
    StateFunction f;
    f.leaves_ = std::move(a.leaves_);
    f.leaves_.insert(f.leaves_.end(),
                     std::make_move_iterator(b.leaves_.begin()),
                     std::make_move_iterator(b.leaves_.end()));
    f.sup_norm_ = a.sup_norm_ * b.sup_norm_;
    return f;
}

double StateFunction::eval_leaf(const LeafFn& fn, const LeafState& x) {
    if (const auto* trig = std::get_if<TrigLeaf>(&fn)) {
        const auto* p = std::get_if<double>(&x);
        if (!p) throw ValidationError("StateFunction: trig leaf needs circle state");
        double acc = trig->mean;
        for (std::size_t j = 0; j < trig->cos_coef.size(); ++j) {
            acc += trig->cos_coef[j] *
                   std::cos(2.0 * std::numbers::pi * (j + 1) * *p);
        }
        for (std::size_t j = 0; j < trig->sin_coef.size(); ++j) {
            acc += trig->sin_coef[j] *
                   std::sin(2.0 * std::numbers::pi * (j + 1) * *p);
        }
        return acc;
    }
    if (const auto* hat = std::get_if<HatLeaf>(&fn)) {
        const auto* p = std::get_if<double>(&x);
        if (!p) throw ValidationError("StateFunction: hat leaf needs circle state");
        double t = *p;
        if (t <= hat->lo || t >= hat->hi) return 0.0;
        if (t <= hat->peak) {
            return hat->height * (t - hat->lo) / (hat->peak - hat->lo);
        }
        return hat->height * (hat->hi - t) / (hat->hi - hat->peak);
    }
    if (const auto* table = std::get_if<TableLeaf>(&fn)) {
        const auto* r = std::get_if<std::uint64_t>(&x);
        if (!r || *r >= table->values.size()) {
            throw ValidationError("StateFunction: table leaf needs matching residue");
        }
        return table->values[*r];
    }
    const auto& custom = std::get<CustomLeaf>(fn);
    const auto* p = std::get_if<double>(&x);
    if (!p) throw ValidationError("StateFunction: custom leaf needs circle state");
    return custom.fn(*p);
}

double StateFunction::integral_leaf(const LeafFn& fn) {
    if (const auto* trig = std::get_if<TrigLeaf>(&fn)) return trig->mean;
    if (const auto* hat = std::get_if<HatLeaf>(&fn)) {
        return hat->height * (hat->hi - hat->lo) / 2.0;
    }
    if (const auto* table = std::get_if<TableLeaf>(&fn)) {
        double sum = 0.0;
        for (double v : table->values) sum += v;
        return sum / static_cast<double>(table->values.size());
    }
    throw UnsupportedFunctionError(
        "integrate: custom StateFunction has no closed-form integral");
}

double StateFunction::operator()(const State& x) const {
    if (x.leaves.size() != leaves_.size()) {
        throw ValidationError("StateFunction: state arity mismatch");
    }
    double prod = 1.0;
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        prod *= eval_leaf(leaves_[i], x.leaves[i]);
    }
    return prod;
}

bool StateFunction::table_matches(std::size_t i, std::uint64_t modulus) const {
    if (i >= leaves_.size()) return false;
    const auto* table = std::get_if<TableLeaf>(&leaves_[i]);
    return !table || table->values.size() == modulus;
}

bool StateFunction::has_exact_integral() const {
    for (const auto& leaf : leaves_) {
        if (std::holds_alternative<CustomLeaf>(leaf)) return false;
    }
    return true;
}

double StateFunction::exact_integral() const {
    double prod = 1.0;
    for (const auto& leaf : leaves_) prod *= integral_leaf(leaf);
    return prod;
}

double integrate(const AdditiveSystem& sys, const StateFunction& f) {
    // Validates arity and leaf-kind compatibility, then multiplies the
    // closed-form leaf integrals (Lebesgue / uniform / product measure).
    State probe = sys.origin();
    (void)f(probe);
    for (std::size_t i = 0; i < sys.leaves().size(); ++i) {
        const auto* c = std::get_if<AdditiveSystem::CyclicLeaf>(&sys.leaves()[i]);
        if (c && !f.table_matches(i, c->modulus)) {
            throw ValidationError("integrate: table size must equal the modulus");
        }
    }
    return f.exact_integral();
}

// --- MultiplicativeSystem ---

MultiplicativeSystem::MultiplicativeSystem(
    std::vector<std::pair<std::uint64_t, double>> generators)
    : generators_(std::move(generators)) {
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        auto& [p, theta] = generators_[i];
        if (!arith::trial_division_is_prime(p)) {
            throw ValidationError("MultiplicativeSystem: generator " +
                                  std::to_string(p) + " is not prime");
        }
        if (!(theta >= 0.0) || !(theta < 1.0)) {
            throw ValidationError("MultiplicativeSystem: angles must be in [0,1)");
        }
        for (std::size_t j = i + 1; j < generators_.size(); ++j) {
            if (generators_[j].first == p) {
                throw ValidationError("MultiplicativeSystem: duplicate generator");
            }
        }
    }
}

double mult_act(const MultiplicativeSystem& msys, double y, std::uint64_t n) {
    if (n < 1) throw ValidationError("mult_act: n must be >= 1");
    double phase = y;
    for (const auto& [p, theta] : msys.generators()) {
        std::uint64_t m = n;
        while (m % p == 0) {
            m /= p;
            phase += theta;
        }
    }
    return frac(phase);
}

// --- observable builders ---

ergodic::Observable br_observable(const AdditiveSystem& sys, const State& x,
                                  const StateFunction& f) {
    if (!sys.uniquely_ergodic()) {
        throw ValidationError("br_observable: system is not uniquely ergodic");
    }
    std::vector<std::complex<double>> table(ergodic::kOmegaTableSize);
    for (std::size_t j = 0; j < table.size(); ++j) {
        table[j] = f(orbit_value(sys, x, j));
    }
    return ergodic::Observable::from_omega_table(std::move(table));
}

ergodic::Observable birkhoff_observable(const AdditiveSystem& sys, const State& x,
                                        const StateFunction& f) {
    if (!sys.uniquely_ergodic()) {
        throw ValidationError("birkhoff_observable: system is not uniquely ergodic");
    }
    (void)f(x);  // arity validation up front
    ergodic::Needs needs;
    needs.n_value = true;
    return ergodic::Observable::from_sample_function(
        [sys, x, f](const ergodic::ArithSample& sample) {
            return std::complex<double>(f(orbit_value(sys, x, sample.n)), 0.0);
        },
        needs, f.sup_norm());
}

ergodic::Observable ap_observable(const AdditiveSystem& sys, const State& x,
                                  const StateFunction& f, std::uint64_t m,
                                  std::uint64_t r,
                                  std::shared_ptr<const arith::FactorSieve> sieve) {
    if (m < 1) throw ValidationError("ap_observable: m must be >= 1");
    if (r >= m) throw ValidationError("ap_observable: need 0 <= r <= m-1");
    if (!sieve) throw ValidationError("ap_observable: sieve is required");
    if (!sys.uniquely_ergodic()) {
        throw ValidationError("ap_observable: system is not uniquely ergodic");
    }
    std::vector<double> orbit_table(ergodic::kOmegaTableSize);
    double sup = 0.0;
    for (std::size_t j = 0; j < orbit_table.size(); ++j) {
        orbit_table[j] = f(orbit_value(sys, x, j));
        sup = std::max(sup, std::abs(orbit_table[j]));
    }
    ergodic::Needs needs;
    needs.n_value = true;
    return ergodic::Observable::from_sample_function(
        [sys_table = std::move(orbit_table), m, r,
         sieve = std::move(sieve)](const ergodic::ArithSample& sample) {
            std::uint64_t target = checked_mul(m, sample.n) + r;
            return std::complex<double>(
                sys_table[arith::big_omega(target, *sieve)], 0.0);
        },
        needs, sup);
}

ergodic::Observable mult_observable(const MultiplicativeSystem& msys, double y,
                                    const StateFunction& g) {
    ergodic::Needs needs;
    needs.n_value = true;
    return ergodic::Observable::from_sample_function(
        [msys, y, g](const ergodic::ArithSample& sample) {
            return std::complex<double>(
                g(State::circle(mult_act(msys, y, sample.n))), 0.0);
        },
        needs, g.sup_norm());
}

}  // namespace ergonum::dynamics
