#include "ergonum/ergodic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <thread>

#include "ergonum/quadrature.hpp"
#include "ergonum/special_numbers.hpp"

namespace ergonum::ergodic {

namespace {

double gauss_phi(double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

double gauss_cdf(double t) {
    return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

// ------------------------------------------------------------------
// chunked scans
// ------------------------------------------------------------------

// work(index, state&) -> Result; states are per-thread, results land in
// index order regardless of scheduling.
template <class Result, class State, class Work>
std::vector<Result> run_parallel(std::size_t count, unsigned threads,
                                 const Work& work) {
    std::vector<Result> results(count);
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        State state;
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            results[i] = work(i, state);
        }
    };
    if (threads <= 1 || count <= 1) {
        body();
        return results;
    }
    std::vector<std::thread> pool;
    unsigned spawn = std::min<unsigned>(threads, static_cast<unsigned>(count));
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    return results;
}

struct WorkerState {
    arith::SegmentBuffers seg;
    std::vector<std::uint8_t> ws_mask;
};

// What a scan must produce/filter per n.
struct ScanConfig {
    const Restriction* restriction = nullptr;
    const arith::PrimeFamily* extra_family = nullptr;  // observable's filter
    int phi_depth = -1;
    bool need_pmax = false;
    std::uint64_t n_max = 0;
    std::uint64_t chunk = arith::SegmentSieve::kDefaultSegment;
};

// Streams the restricted members of one chunk [lo, hi) in ascending order
// through fn(const ArithSample&), reading omega/squarefree/pmax from the
// segmented sieve.
template <class Fn>
void stream_chunk_segmented(const arith::SegmentSieve& sieve,
                            const ScanConfig& cfg, std::uint64_t lo,
                            std::uint64_t hi, WorkerState& state, Fn&& fn) {
    arith::SegmentView view = sieve.fill(lo, hi, state.seg);
    const Restriction& r = *cfg.restriction;
    std::size_t width = static_cast<std::size_t>(hi - lo);

    const bool squarefree_only = r.kind == Restriction::Kind::squarefree;
    bool use_mask = squarefree_only && !r.exclude.empty();
    if (use_mask) {
        state.ws_mask.assign(width, 1);
        for (std::uint64_t p : r.exclude) {
            for (std::uint64_t m = ((lo + p - 1) / p) * p; m < hi; m += p) {
                state.ws_mask[static_cast<std::size_t>(m - lo)] = 0;
            }
        }
    }

    for (std::size_t i = 0; i < width; ++i) {
        if (squarefree_only) {
            if (!view.squarefree[i]) continue;
            if (use_mask && !state.ws_mask[i]) continue;
        }
        ArithSample sample;
        sample.n = lo + i;
        sample.omega = view.omega[i];
        if (cfg.need_pmax) sample.pmax = view.pmax[i];
        if (r.family && !r.family->passes_pmax(sample.pmax)) continue;
        fn(sample);
    }
}

// In-core variant for scans that need the iterated-totient chain.
template <class Fn>
void stream_chunk_incore(const arith::FactorSieve& sieve, const ScanConfig& cfg,
                         std::uint64_t lo, std::uint64_t hi, Fn&& fn) {
    const Restriction& r = *cfg.restriction;
    const bool squarefree_only = r.kind == Restriction::Kind::squarefree;
    for (std::uint64_t n = lo; n < hi; ++n) {
        ArithSample sample;
        sample.n = n;
        // One spf walk for omega / squarefree / pmax together.
        bool squarefree = true;
        std::uint32_t omega = 0;
        std::uint64_t pmax = 1;
        std::uint64_t rest = n;
        while (rest > 1) {
            std::uint64_t p = sieve.smallest_prime_factor(rest);
            pmax = p;
            std::uint32_t e = 0;
            while (rest % p == 0) {
                rest /= p;
                ++e;
            }
            omega += e;
            if (e > 1) squarefree = false;
        }
        if (squarefree_only) {
            if (!squarefree) continue;
            bool excluded = false;
            for (std::uint64_t p : r.exclude) {
                if (n % p == 0) {
                    excluded = true;
                    break;
                }
            }
            if (excluded) continue;
        }
        sample.omega = omega;
        sample.pmax = pmax;
        if (r.family && !r.family->passes_pmax(sample.pmax)) continue;
        if (cfg.phi_depth >= 0) {
            std::uint64_t v = arith::iterated_totient(
                n, static_cast<std::uint32_t>(cfg.phi_depth), sieve);
            sample.omega_phi = arith::big_omega(v, sieve);
        }
        fn(sample);
    }
}

// ------------------------------------------------------------------
// engines
// ------------------------------------------------------------------

struct HistState {
    std::uint64_t members = 0;
    std::array<std::uint64_t, kOmegaTableSize> counts{};
    std::vector<std::uint64_t> joint;  // kOmegaTableSize^2 when phi tracked

    void init(bool want_joint) {
        members = 0;
        counts.fill(0);
        if (want_joint) joint.assign(kOmegaTableSize * kOmegaTableSize, 0);
    }
    // Restriction membership and histogram contributions are tracked
    // separately: an observable-side p_max filter zeroes a member's weight
    // but the member still counts toward per_count normalization.
    void add_member() { ++members; }
    void add_value(const ArithSample& s) {
        ++counts[s.omega];
        if (!joint.empty()) {
            ++joint[s.omega * kOmegaTableSize +
                    std::min<std::uint32_t>(s.omega_phi, kOmegaTableSize - 1)];
        }
    }
    void accumulate(const HistState& other) {
        members += other.members;
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
        for (std::size_t i = 0; i < joint.size(); ++i) joint[i] += other.joint[i];
    }
};

struct HistSnapshot {
    std::uint64_t cp = 0;
    HistState hist;
};

struct HistChunkResult {
    std::vector<HistSnapshot> at;
    HistState total;
};

struct DirectSnapshot {
    std::uint64_t cp = 0;
    std::uint64_t members = 0;
    KahanComplex sum;
};

struct DirectChunkResult {
    std::vector<DirectSnapshot> at;
    std::uint64_t members = 0;
    KahanComplex sum;
};

// Checkpoints belonging to chunk [lo, hi).
std::vector<std::uint64_t> cps_in(const std::vector<std::uint64_t>& cps,
                                  std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t cp : cps) {
        if (cp >= lo && cp < hi) out.push_back(cp);
    }
    return out;
}

// Wraps an engine accumulator with the snapshot-at-checkpoint protocol.
template <class Accumulate, class Snapshot>
auto snapshotting(const std::vector<std::uint64_t>& cps, Accumulate&& acc,
                  Snapshot&& snap) {
    // Returns (member_fn, finish_fn) pair via a small struct.
    struct Protocol {
        const std::vector<std::uint64_t>& cps;
        std::size_t idx = 0;
        Accumulate acc;
        Snapshot snap;
        void member(const ArithSample& s) {
            while (idx < cps.size() && cps[idx] < s.n) snap(cps[idx++]);
            acc(s);
        }
        void finish() {
            while (idx < cps.size()) snap(cps[idx++]);
        }
    };
    return Protocol{cps, 0, std::forward<Accumulate>(acc),
                    std::forward<Snapshot>(snap)};
}

struct ScanContext {
    ScanConfig cfg;
    std::vector<std::uint64_t> checkpoints;
    const arith::SegmentSieve* seg_sieve = nullptr;
    const arith::FactorSieve* incore = nullptr;
};

std::size_t chunk_count(const ScanContext& ctx) {
    return static_cast<std::size_t>((ctx.cfg.n_max + ctx.cfg.chunk - 1) /
                                    ctx.cfg.chunk);
}

std::pair<std::uint64_t, std::uint64_t> chunk_range(const ScanContext& ctx,
                                                    std::size_t c) {
    std::uint64_t lo = 1 + c * ctx.cfg.chunk;
    std::uint64_t hi = std::min(ctx.cfg.n_max + 1, lo + ctx.cfg.chunk);
    return {lo, hi};
}

std::vector<HistSnapshot> run_hist_engine(const ScanContext& ctx,
                                          unsigned threads) {
    bool want_joint = ctx.cfg.phi_depth >= 0;
    auto results = run_parallel<HistChunkResult, WorkerState>(
        chunk_count(ctx), threads, [&](std::size_t c, WorkerState& state) {
            auto [lo, hi] = chunk_range(ctx, c);
            HistChunkResult result;
            result.total.init(want_joint);
            auto local = cps_in(ctx.checkpoints, lo, hi);
            auto protocol = snapshotting(
                local,
                [&](const ArithSample& s) {
                    result.total.add_member();
                    if (ctx.cfg.extra_family &&
                        !ctx.cfg.extra_family->passes_pmax(s.pmax)) {
                        return;
                    }
                    result.total.add_value(s);
                },
                [&](std::uint64_t cp) {
                    result.at.push_back({cp, result.total});
                });
            auto fn = [&](const ArithSample& s) { protocol.member(s); };
            if (ctx.incore) {
                stream_chunk_incore(*ctx.incore, ctx.cfg, lo, hi, fn);
            } else {
                stream_chunk_segmented(*ctx.seg_sieve, ctx.cfg, lo, hi, state, fn);
            }
            protocol.finish();
            return result;
        });

    // Fold in ascending chunk order; checkpoint snapshots become cumulative.
    std::vector<HistSnapshot> out;
    HistState running;
    running.init(want_joint);
    for (const auto& chunk : results) {
        for (const auto& snap : chunk.at) {
            HistSnapshot cumulative;
            cumulative.cp = snap.cp;
            cumulative.hist = running;
            cumulative.hist.accumulate(snap.hist);
            out.push_back(std::move(cumulative));
        }
        running.accumulate(chunk.total);
    }
    return out;
}

std::vector<DirectSnapshot> run_direct_engine(const ScanContext& ctx,
                                              const Observable& obs,
                                              unsigned threads) {
    auto results = run_parallel<DirectChunkResult, WorkerState>(
        chunk_count(ctx), threads, [&](std::size_t c, WorkerState& state) {
            auto [lo, hi] = chunk_range(ctx, c);
            DirectChunkResult result;
            auto local = cps_in(ctx.checkpoints, lo, hi);
            auto protocol = snapshotting(
                local,
                [&](const ArithSample& s) {
                    ++result.members;
                    result.sum.add(obs.eval(s));
                },
                [&](std::uint64_t cp) {
                    result.at.push_back({cp, result.members, result.sum});
                });
            auto fn = [&](const ArithSample& s) { protocol.member(s); };
            if (ctx.incore) {
                stream_chunk_incore(*ctx.incore, ctx.cfg, lo, hi, fn);
            } else {
                stream_chunk_segmented(*ctx.seg_sieve, ctx.cfg, lo, hi, state, fn);
            }
            protocol.finish();
            return result;
        });

    std::vector<DirectSnapshot> out;
    KahanComplex running;
    std::uint64_t members = 0;
    for (const auto& chunk : results) {
        for (const auto& snap : chunk.at) {
            DirectSnapshot cumulative;
            cumulative.cp = snap.cp;
            cumulative.members = members + snap.members;
            cumulative.sum = running;
            cumulative.sum.merge(snap.sum);
            out.push_back(cumulative);
        }
        running.merge(chunk.sum);
        members += chunk.members;
    }
    return out;
}

// ------------------------------------------------------------------
// k-full member scan (sequential; member counts are ~ c_k N^{1/k})
// ------------------------------------------------------------------

template <class Fn>
void stream_kfull(const Restriction& r, std::uint64_t n_max, int phi_depth,
                  Fn&& fn) {
    auto members = special::enumerate_kfull_forms(n_max, r.k);
    std::uint64_t part_limit = std::max<std::uint64_t>(2, iroot(n_max, 2));
    arith::FactorSieve small(part_limit);
    // Omega(phi_k) over k-full members needs factorizations up to N itself.
    std::unique_ptr<arith::FactorSieve> full;
    if (phi_depth >= 0) full = std::make_unique<arith::FactorSieve>(n_max);

    for (const auto& member : members) {
        ArithSample sample;
        sample.n = member.value;
        std::uint32_t omega = r.k * arith::big_omega(member.form.m, small);
        std::uint64_t pmax = arith::p_max(member.form.m, small);
        for (std::size_t i = 0; i < member.form.parts.size(); ++i) {
            std::uint64_t part = member.form.parts[i];
            omega += (r.k + static_cast<std::uint32_t>(i) + 1) *
                     arith::big_omega(part, small);
            pmax = std::max(pmax, arith::p_max(part, small));
        }
        sample.omega = omega;
        sample.pmax = pmax;
        if (r.family && !r.family->passes_pmax(sample.pmax)) continue;
        if (phi_depth >= 0) {
            std::uint64_t v = arith::iterated_totient(
                member.value, static_cast<std::uint32_t>(phi_depth), *full);
            sample.omega_phi = arith::big_omega(v, *full);
        }
        fn(sample);
    }
}

std::vector<HistSnapshot> run_hist_engine_kfull(const Restriction& r,
                                                std::uint64_t n_max,
                                                const std::vector<std::uint64_t>& cps,
                                                int phi_depth,
                                                const arith::PrimeFamily* extra) {
    bool want_joint = phi_depth >= 0;
    std::vector<HistSnapshot> out;
    HistState running;
    running.init(want_joint);
    auto protocol = snapshotting(
        cps,
        [&](const ArithSample& s) {
            running.add_member();
            if (extra && !extra->passes_pmax(s.pmax)) return;
            running.add_value(s);
        },
        [&](std::uint64_t cp) { out.push_back({cp, running}); });
    stream_kfull(r, n_max, phi_depth,
                 [&](const ArithSample& s) { protocol.member(s); });
    protocol.finish();
    return out;
}

std::vector<DirectSnapshot> run_direct_engine_kfull(const Restriction& r,
                                                    std::uint64_t n_max,
                                                    const std::vector<std::uint64_t>& cps,
                                                    const Observable& obs) {
    std::vector<DirectSnapshot> out;
    KahanComplex running;
    std::uint64_t members = 0;
    auto protocol = snapshotting(
        cps,
        [&](const ArithSample& s) {
            ++members;
            running.add(obs.eval(s));
        },
        [&](std::uint64_t cp) { out.push_back({cp, members, running}); });
    stream_kfull(r, n_max, obs.needs().phi_depth,
                 [&](const ArithSample& s) { protocol.member(s); });
    protocol.finish();
    return out;
}

double normalization_divisor(const Restriction& r, std::uint64_t cp,
                             std::uint64_t members) {
    switch (r.normalization) {
        case Normalization::per_n:
            return static_cast<double>(cp);
        case Normalization::per_count:
            return members == 0 ? 1.0 : static_cast<double>(members);
        case Normalization::per_root:
            return std::pow(static_cast<double>(cp), 1.0 / r.k);
    }
    return 1.0;
}

ArithSample make_sample(std::uint64_t n, const Needs& needs,
                        const arith::FactorSieve& sieve) {
    ArithSample s;
    s.n = n;
    if (needs.omega || needs.phi_depth >= 0) s.omega = arith::big_omega(n, sieve);
    if (needs.pmax) s.pmax = arith::p_max(n, sieve);
    if (needs.phi_depth >= 0) {
        std::uint64_t v = arith::iterated_totient(
            n, static_cast<std::uint32_t>(needs.phi_depth), sieve);
        s.omega_phi = arith::big_omega(v, sieve);
    }
    return s;
}

}  // namespace

// ------------------------------------------------------------------
// Restriction / grid
// ------------------------------------------------------------------

Restriction Restriction::all() {
    Restriction r;
    r.kind = Kind::all;
    r.normalization = Normalization::per_n;
    return r;
}

Restriction Restriction::squarefree(std::vector<std::uint64_t> exclude,
                                    std::optional<arith::PrimeFamily> family) {
    Restriction r;
    r.kind = Kind::squarefree;
    r.exclude = std::move(exclude);
    r.family = std::move(family);
    r.normalization = Normalization::per_n;
    r.validate();
    return r;
}

Restriction Restriction::kfull(std::uint32_t k, Normalization norm) {
    Restriction r;
    r.kind = Kind::kfull;
    r.k = k;
    r.normalization = norm;
    r.validate();
    return r;
}

void Restriction::validate() const {
    switch (kind) {
        case Kind::all:
            if (normalization == Normalization::per_root) {
                throw ValidationError("Restriction: all-integers uses per_n");
            }
            break;
        case Kind::squarefree:
            if (normalization != Normalization::per_n) {
                throw ValidationError(
                    "Restriction: squarefree admits per_n normalization only");
            }
            for (std::uint64_t p : exclude) {
                if (!arith::trial_division_is_prime(p)) {
                    throw ValidationError("Restriction: excluded value " +
                                          std::to_string(p) + " is not prime");
                }
            }
            break;
        case Kind::kfull:
            if (k < 2 || k > 63) {
                throw ValidationError("Restriction: k-full needs 2 <= k <= 63");
            }
            if (normalization == Normalization::per_n) {
                throw ValidationError(
                    "Restriction: k-full admits per_count or per_root");
            }
            if (!exclude.empty()) {
                throw ValidationError("Restriction: k-full takes no excluded set");
            }
            break;
    }
}

std::vector<std::uint64_t> CheckpointGrid::points(std::uint64_t n) const {
    if (n < 1) throw ValidationError("CheckpointGrid: N must be >= 1");
    if (!(ratio > 1.0)) throw ValidationError("CheckpointGrid: ratio must be > 1");
    std::vector<std::uint64_t> out;
    std::uint64_t cur = start;
    while (cur < n && cur >= 1) {
        out.push_back(cur);
        auto next = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(cur) * ratio));
        cur = std::max(cur + 1, next);
    }
    out.push_back(n);
    return out;
}

// ------------------------------------------------------------------
// public drivers
// ------------------------------------------------------------------

AverageSeries restricted_average(const Observable& obs,
                                 const Restriction& restriction, std::uint64_t n,
                                 const AverageOptions& options) {
    restriction.validate();
    if (n < 1) throw ValidationError("restricted_average: N must be >= 1");

    std::vector<std::uint64_t> cps = options.grid.points(n);
    int phi_depth = obs.needs().phi_depth;

    AverageSeries series;

    if (obs.pure()) {
        std::vector<HistSnapshot> snaps;
        if (restriction.kind == Restriction::Kind::kfull) {
            snaps = run_hist_engine_kfull(
                restriction, n, cps, phi_depth,
                obs.pmax_filter() ? &*obs.pmax_filter() : nullptr);
        } else {
            ScanContext ctx;
            ctx.cfg.restriction = &restriction;
            ctx.cfg.extra_family = obs.pmax_filter() ? &*obs.pmax_filter() : nullptr;
            ctx.cfg.phi_depth = phi_depth;
            ctx.cfg.need_pmax = restriction.family.has_value() ||
                                obs.pmax_filter().has_value();
            ctx.cfg.n_max = n;
            ctx.cfg.chunk = options.chunk_size;
            ctx.checkpoints = cps;
            std::unique_ptr<arith::SegmentSieve> seg;
            std::unique_ptr<arith::FactorSieve> incore;
            if (phi_depth >= 0) {
                incore = std::make_unique<arith::FactorSieve>(std::max<std::uint64_t>(2, n));
                ctx.incore = incore.get();
            } else {
                seg = std::make_unique<arith::SegmentSieve>(n, ctx.cfg.need_pmax);
                ctx.seg_sieve = seg.get();
            }
            snaps = run_hist_engine(ctx, options.threads);
        }

        for (const auto& snap : snaps) {
            NormalizerParams params = obs.bound_params();
            if (obs.horizon_dependent() &&
                options.normalizer_mode == NormalizerMode::per_checkpoint) {
                params = NormalizerParams::for_horizon(params.k, snap.cp);
            }
            std::complex<double> sum = 0.0;
            if (phi_depth >= 0) {
                for (std::size_t j = 0; j < kOmegaTableSize; ++j) {
                    for (std::size_t w = 0; w < kOmegaTableSize; ++w) {
                        std::uint64_t count =
                            snap.hist.joint[j * kOmegaTableSize + w];
                        if (count == 0) continue;
                        sum += static_cast<double>(count) *
                               obs.weight(static_cast<std::uint32_t>(j),
                                          static_cast<std::uint32_t>(w), params);
                    }
                }
            } else {
                for (std::size_t j = 0; j < kOmegaTableSize; ++j) {
                    std::uint64_t count = snap.hist.counts[j];
                    if (count == 0) continue;
                    sum += static_cast<double>(count) *
                           obs.weight(static_cast<std::uint32_t>(j), 0, params);
                }
            }
            double divisor =
                normalization_divisor(restriction, snap.cp, snap.hist.members);
            series.checkpoints.push_back(
                {snap.cp, sum / divisor, snap.hist.members});
        }
        return series;
    }

    if (obs.horizon_dependent() &&
        options.normalizer_mode == NormalizerMode::per_checkpoint) {
        throw ValidationError(
            "restricted_average: per-checkpoint normalizers need a pure "
            "(omega-weight) observable");
    }

    std::vector<DirectSnapshot> snaps;
    if (restriction.kind == Restriction::Kind::kfull) {
        snaps = run_direct_engine_kfull(restriction, n, cps, obs);
    } else {
        ScanContext ctx;
        ctx.cfg.restriction = &restriction;
        ctx.cfg.phi_depth = phi_depth;
        ctx.cfg.need_pmax = restriction.family.has_value() || obs.needs().pmax;
        ctx.cfg.n_max = n;
        ctx.cfg.chunk = options.chunk_size;
        ctx.checkpoints = cps;
        std::unique_ptr<arith::SegmentSieve> seg;
        std::unique_ptr<arith::FactorSieve> incore;
        if (phi_depth >= 0) {
            incore = std::make_unique<arith::FactorSieve>(std::max<std::uint64_t>(2, n));
            ctx.incore = incore.get();
        } else {
            seg = std::make_unique<arith::SegmentSieve>(n, ctx.cfg.need_pmax);
            ctx.seg_sieve = seg.get();
        }
        snaps = run_direct_engine(ctx, obs, options.threads);
    }

    for (const auto& snap : snaps) {
        double divisor = normalization_divisor(restriction, snap.cp, snap.members);
        series.checkpoints.push_back(
            {snap.cp, snap.sum.value() / divisor, snap.members});
    }
    return series;
}

std::vector<OmegaHistogram> collect_omega_histograms(
    const Restriction& restriction, std::uint64_t n,
    const AverageOptions& options) {
    restriction.validate();
    if (n < 1) throw ValidationError("collect_omega_histograms: N must be >= 1");
    std::vector<std::uint64_t> cps = options.grid.points(n);

    std::vector<HistSnapshot> snaps;
    if (restriction.kind == Restriction::Kind::kfull) {
        snaps = run_hist_engine_kfull(restriction, n, cps, -1, nullptr);
    } else {
        ScanContext ctx;
        ctx.cfg.restriction = &restriction;
        ctx.cfg.need_pmax = restriction.family.has_value();
        ctx.cfg.n_max = n;
        ctx.cfg.chunk = options.chunk_size;
        ctx.checkpoints = cps;
        arith::SegmentSieve seg(n, ctx.cfg.need_pmax);
        ctx.seg_sieve = &seg;
        snaps = run_hist_engine(ctx, options.threads);
    }

    std::vector<OmegaHistogram> out;
    for (const auto& snap : snaps) {
        OmegaHistogram h;
        h.n = snap.cp;
        h.members = snap.hist.members;
        h.counts = snap.hist.counts;
        out.push_back(h);
    }
    return out;
}

// ------------------------------------------------------------------
// normalized functionals
// ------------------------------------------------------------------

double ek_normalized(std::uint64_t n, const arith::FactorSieve& sieve,
                     const NormalizerParams& params) {
    return ek_statistic(arith::big_omega(n, sieve), params);
}

double bkw_normalized(std::uint64_t n, const arith::FactorSieve& sieve,
                      const NormalizerParams& params) {
    std::uint64_t v = arith::iterated_totient(n, params.k, sieve);
    return bkw_statistic(arith::big_omega(v, sieve), params);
}

// ------------------------------------------------------------------
// compact functions and Gaussian machinery
// ------------------------------------------------------------------

CompactFunction CompactFunction::triangle(double center, double halfwidth,
                                          double height) {
    if (!(halfwidth > 0.0) || !std::isfinite(center) || !std::isfinite(halfwidth)) {
        throw ValidationError("triangle: need finite center and halfwidth > 0");
    }
    CompactFunction f;
    f.lo_ = center - halfwidth;
    f.hi_ = center + halfwidth;
    f.sup_norm_ = std::abs(height);
    f.breakpoints_ = {f.lo_, center, f.hi_};
    f.fn_ = [center, halfwidth, height](double t) {
        double d = std::abs(t - center);
        return d >= halfwidth ? 0.0 : height * (1.0 - d / halfwidth);
    };
    return f;
}

CompactFunction CompactFunction::raised_cosine(double lo, double hi,
                                               double height) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw ValidationError("raised_cosine: need finite lo < hi");
    }
    CompactFunction f;
    f.lo_ = lo;
    f.hi_ = hi;
    f.sup_norm_ = std::abs(height);
    f.breakpoints_ = {lo, hi};
    double center = 0.5 * (lo + hi);
    double width = hi - lo;
    f.fn_ = [center, width, height](double t) {
        double u = (t - center) / width;  // in [-1/2, 1/2] on the support
        if (u <= -0.5 || u >= 0.5) return 0.0;
        return height * 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * u));
    };
    return f;
}

CompactFunction CompactFunction::plateau(double lo, double flat_lo,
                                         double flat_hi, double hi,
                                         double height) {
    if (!(lo < flat_lo && flat_lo <= flat_hi && flat_hi < hi)) {
        throw ValidationError("plateau: need lo < flat_lo <= flat_hi < hi");
    }
    CompactFunction f;
    f.lo_ = lo;
    f.hi_ = hi;
    f.sup_norm_ = std::abs(height);
    f.breakpoints_ = {lo, flat_lo, flat_hi, hi};
    f.fn_ = [=](double t) {
        if (t <= lo || t >= hi) return 0.0;
        if (t < flat_lo) {
            double u = (t - lo) / (flat_lo - lo);
            return height * 0.5 * (1.0 - std::cos(std::numbers::pi * u));
        }
        if (t > flat_hi) {
            double u = (hi - t) / (hi - flat_hi);
            return height * 0.5 * (1.0 - std::cos(std::numbers::pi * u));
        }
        return height;
    };
    return f;
}

CompactFunction CompactFunction::custom(std::function<double(double)> fn,
                                        double lo, double hi, double sup_norm) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw ValidationError("custom: support bounds must be finite, lo < hi");
    }
    CompactFunction f;
    f.lo_ = lo;
    f.hi_ = hi;
    f.sup_norm_ = sup_norm;
    f.breakpoints_ = {lo, hi};
    f.fn_ = [fn = std::move(fn), lo, hi](double t) {
        return (t <= lo || t >= hi) ? 0.0 : fn(t);
    };
    return f;
}

CompactFunction CompactFunction::scaled_sum(double ca, const CompactFunction& a,
                                            double cb, const CompactFunction& b) {
    CompactFunction f;
    f.lo_ = std::min(a.lo_, b.lo_);
    f.hi_ = std::max(a.hi_, b.hi_);
    f.sup_norm_ = std::abs(ca) * a.sup_norm_ + std::abs(cb) * b.sup_norm_;
    f.breakpoints_ = a.breakpoints_;
    f.breakpoints_.insert(f.breakpoints_.end(), b.breakpoints_.begin(),
                          b.breakpoints_.end());
    std::sort(f.breakpoints_.begin(), f.breakpoints_.end());
    f.breakpoints_.erase(
        std::unique(f.breakpoints_.begin(), f.breakpoints_.end()),
        f.breakpoints_.end());
    f.fn_ = [ca, fa = a, cb, fb = b](double t) { return ca * fa(t) + cb * fb(t); };
    return f;
}

double CompactFunction::operator()(double t) const {
    if (t <= lo_ || t >= hi_) return 0.0;
    return fn_(t);
}

double gaussian_expectation(const CompactFunction& f) {
    // Integrate piecewise between the kinks; GL15 panels converge fast on
    // each smooth piece.
    double total = 0.0;
    const auto& bps = f.breakpoints();
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        total += detail::adaptive_gl15(
            [&](double t) { return f(t) * gauss_phi(t); }, bps[i], bps[i + 1],
            1e-12);
    }
    return total;
}

Observable loyd_observable(const CompactFunction& f, const NormalizerParams& params,
                           const Observable& f_obs, NormalizerKind kind,
                           std::optional<arith::PrimeFamily> family) {
    if (!f_obs.pure()) {
        throw ValidationError(
            "loyd_observable: the orbit factor must be a pure omega observable");
    }
    int phi_depth = kind == NormalizerKind::bkw ? static_cast<int>(params.k) : -1;
    if (kind == NormalizerKind::ek && params.k < 1) {
        throw ValidationError("loyd_observable: ek normalizer needs k >= 1");
    }
    Observable out = Observable::from_weight(
        [f, kind, f_obs](std::uint32_t omega, std::uint32_t omega_phi,
                         const NormalizerParams& p) {
            double stat = kind == NormalizerKind::ek ? ek_statistic(omega, p)
                                                     : bkw_statistic(omega_phi, p);
            return f(stat) * f_obs.weight(omega, omega_phi, p);
        },
        f.sup_norm() * f_obs.sup_norm(), phi_depth, params);
    if (family) return out.with_pmax_filter(std::move(*family));
    return out;
}

// ------------------------------------------------------------------
// Richter shift deltas
// ------------------------------------------------------------------

Observable richter_diff_observable(
    const std::function<std::complex<double>(std::uint64_t)>& a,
    std::uint32_t shift) {
    std::vector<std::complex<double>> table(kOmegaTableSize);
    for (std::size_t j = 0; j < table.size(); ++j) {
        table[j] = a(j) - a(j + shift);
    }
    return Observable::from_omega_table(std::move(table));
}

double richter_shift_delta(
    const std::function<std::complex<double>(std::uint64_t)>& a,
    const Restriction& restriction, std::uint32_t shift, std::uint64_t n,
    const AverageOptions& options) {
    restriction.validate();
    Restriction effective = restriction;
    switch (restriction.kind) {
        case Restriction::Kind::all:
        case Restriction::Kind::squarefree:
            if (shift != 1) {
                throw ValidationError(
                    "richter_shift_delta: shift must be 1 over all/squarefree");
            }
            effective.normalization = Normalization::per_n;
            break;
        case Restriction::Kind::kfull:
            if (shift != restriction.k) {
                throw ValidationError(
                    "richter_shift_delta: shift must equal k over k-full");
            }
            effective.normalization = Normalization::per_root;
            break;
    }
    AverageOptions opts = options;
    opts.grid.start = n;  // single checkpoint at N
    AverageSeries series =
        restricted_average(richter_diff_observable(a, shift), effective, n, opts);
    return std::abs(series.final().value);
}

// ------------------------------------------------------------------
// decomposition residuals
// ------------------------------------------------------------------

double proposition3_residual(const Observable& a,
                             std::span<const std::uint64_t> s, std::uint64_t n,
                             std::uint64_t d, const arith::FactorSieve& sieve) {
    if (n < 1) throw ValidationError("proposition3_residual: N must be >= 1");
    if (d < 1 || d * d > n) {
        throw ValidationError("proposition3_residual: need 1 <= D <= sqrt(N)");
    }
    if (n > sieve.limit()) {
        throw ValidationError("proposition3_residual: N above sieve limit");
    }
    if (a.sup_norm() > 1.0 + 1e-9) {
        throw ValidationError("proposition3_residual: |a| must be bounded by 1");
    }
    auto w = [&](std::uint64_t v) {
        for (std::uint64_t p : s) {
            if (v % p == 0) return false;
        }
        return true;
    };

    KahanComplex lhs;
    for (std::uint64_t i = 1; i <= n; ++i) {
        if (arith::mobius(i, sieve) == 0 || !w(i)) continue;
        lhs.add(a.eval(make_sample(i, a.needs(), sieve)));
    }
    std::complex<double> lhs_value = lhs.value() / static_cast<double>(n);

    std::complex<double> rhs = 0.0;
    for (std::uint64_t dd = 1; dd <= d; ++dd) {
        int mu = arith::mobius(dd, sieve);
        if (mu == 0 || !w(dd)) continue;
        std::uint64_t inner_max = n / (dd * dd);
        if (inner_max == 0) continue;
        KahanComplex inner;
        for (std::uint64_t m = 1; m <= inner_max; ++m) {
            if (!w(m)) continue;
            inner.add(a.eval(make_sample(dd * dd * m, a.needs(), sieve)));
        }
        rhs += static_cast<double>(mu) /
               static_cast<double>(dd * dd) *
               (inner.value() / static_cast<double>(inner_max));
    }
    return std::abs(lhs_value - rhs);
}

double proposition5_residual(const Observable& a, std::uint32_t k,
                             std::uint64_t n, std::span<const std::uint64_t> d,
                             const arith::FactorSieve& sieve) {
    if (k < 2) throw ValidationError("proposition5_residual: k must be >= 2");
    if (d.size() != k - 1) {
        throw ValidationError("proposition5_residual: need k-1 tuple bounds");
    }
    if (n > sieve.limit()) {
        throw ValidationError("proposition5_residual: N above sieve limit");
    }
    if (a.sup_norm() > 1.0 + 1e-9) {
        throw ValidationError("proposition5_residual: |a| must be bounded by 1");
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
        // 1 <= D_i <= N^{1/((k-1)(k+i+1))}, checked in exact arithmetic.
        if (d[i] < 1 ||
            !pow_leq(d[i], (k - 1) * (k + static_cast<unsigned>(i) + 1), n)) {
            throw ValidationError("proposition5_residual: D_" +
                                  std::to_string(i + 1) + " out of range");
        }
    }

    KahanComplex lhs;
    for (const auto& member : special::enumerate_kfull_forms(n, k)) {
        lhs.add(a.eval(make_sample(member.value, a.needs(), sieve)));
    }
    std::complex<double> lhs_value =
        lhs.value() / std::pow(static_cast<double>(n), 1.0 / k);

    std::complex<double> rhs = 0.0;
    std::vector<std::uint64_t> tuple(k - 1, 1);
    std::function<void(std::size_t, std::uint64_t)> recurse =
        [&](std::size_t index, std::uint64_t core) {
            if (index == k - 1) {
                std::uint64_t ratio = n / core;  // core <= N by the D ranges
                std::uint64_t v = iroot(ratio, k);
                if (v == 0) return;
                KahanComplex inner;
                for (std::uint64_t m = 1; m <= v; ++m) {
                    std::uint64_t arg = checked_mul(core, checked_pow(m, k));
                    inner.add(a.eval(make_sample(arg, a.needs(), sieve)));
                }
                double weight = 1.0;
                for (std::size_t j = 0; j < k - 1; ++j) {
                    weight /= std::pow(static_cast<double>(tuple[j]),
                                       1.0 + static_cast<double>(j + 1) / k);
                }
                rhs += weight * (inner.value() / static_cast<double>(v));
                return;
            }
            std::uint32_t expo = k + static_cast<std::uint32_t>(index) + 1;
            for (std::uint64_t cand = 1; cand <= d[index]; ++cand) {
                if (arith::mobius(cand, sieve) == 0) continue;
                bool coprime = true;
                for (std::size_t j = 0; j < index; ++j) {
                    if (std::gcd(cand, tuple[j]) != 1) {
                        coprime = false;
                        break;
                    }
                }
                if (!coprime) continue;
                tuple[index] = cand;
                recurse(index + 1, checked_mul(core, checked_pow(cand, expo)));
                tuple[index] = 1;
            }
        };
    recurse(0, 1);
    return std::abs(lhs_value - rhs);
}

bool totient_shift_bound_check(std::uint32_t k, std::uint64_t m, std::uint64_t n,
                               const arith::FactorSieve& sieve) {
    if (m < 1 || n < 1) {
        throw ValidationError("totient_shift_bound_check: m, n must be >= 1");
    }
    std::uint64_t mn = checked_mul(m, n);
    std::int64_t lhs =
        static_cast<std::int64_t>(
            arith::big_omega(arith::iterated_totient(mn, k, sieve), sieve)) -
        static_cast<std::int64_t>(
            arith::big_omega(arith::iterated_totient(n, k, sieve), sieve));

    // phitilde_k(m) with phitilde(x) = phi(x) x.
    std::uint64_t bound_arg = m;
    for (std::uint32_t i = 0; i < k; ++i) {
        bound_arg = checked_mul(arith::totient(bound_arg, sieve), bound_arg);
        if (bound_arg > sieve.limit()) {
            throw ValidationError(
                "totient_shift_bound_check: phitilde iterate exceeds sieve");
        }
    }
    std::int64_t bound = arith::big_omega(bound_arg, sieve);
    return 0 <= lhs && lhs <= bound;
}

// ------------------------------------------------------------------
// KS distance
// ------------------------------------------------------------------

double ks_distance_to_gaussian(std::vector<double> samples) {
    if (samples.empty()) {
        throw ValidationError("ks_distance_to_gaussian: empty sample list");
    }
    std::sort(samples.begin(), samples.end());
    double total = static_cast<double>(samples.size());
    double sup = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        double ecdf = static_cast<double>(j) / total;
        sup = std::max(sup, std::abs(ecdf - gauss_cdf(samples[i])));
        i = j;
    }
    return sup;
}

double ks_distance_to_gaussian_weighted(std::span<const double> values,
                                        std::span<const std::uint64_t> counts) {
    if (values.empty() || values.size() != counts.size()) {
        throw ValidationError("ks_distance_to_gaussian_weighted: bad input");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    if (total == 0) {
        throw ValidationError("ks_distance_to_gaussian_weighted: zero total");
    }
    double sup = 0.0;
    std::uint64_t cumulative = 0;
    for (std::size_t idx : order) {
        if (counts[idx] == 0) continue;
        cumulative += counts[idx];
        double ecdf = static_cast<double>(cumulative) / static_cast<double>(total);
        sup = std::max(sup, std::abs(ecdf - gauss_cdf(values[idx])));
    }
    return sup;
}

}  // namespace ergonum::ergodic
