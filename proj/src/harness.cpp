#include "ergonum/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>

#include "ergonum/dynamics.hpp"
#include "ergonum/ergodic.hpp"
#include "ergonum/special_numbers.hpp"

namespace ergonum::harness {

namespace {

using ergodic::AverageOptions;
using ergodic::Observable;
using ergodic::Restriction;

std::vector<double> split_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError("could not parse number '" + item + "'");
        }
    }
    return out;
}

struct AlphaSpec {
    double value = 0.0;
    bool irrational = false;
};

AlphaSpec parse_alpha(const std::string& text) {
    if (text == "golden") return {(std::sqrt(5.0) - 1.0) / 2.0, true};
    if (text == "sqrt2") return {std::sqrt(2.0) - 1.0, true};
    if (text.rfind("custom:", 0) == 0) {
        std::string rest = text.substr(7);
        bool irrational = false;
        if (auto pos = rest.find(':'); pos != std::string::npos) {
            std::string flag = rest.substr(pos + 1);
            if (flag != "irrational") {
                throw ValidationError("alpha: unknown qualifier '" + flag + "'");
            }
            irrational = true;
            rest = rest.substr(0, pos);
        }
        auto vals = split_doubles(rest);
        if (vals.size() != 1) throw ValidationError("alpha: custom needs one value");
        return {vals[0], irrational};
    }
    throw ValidationError("alpha: expected golden|sqrt2|custom:<v>[:irrational], got '" +
                          text + "'");
}

dynamics::StateFunction parse_ffun(const std::string& text) {
    if (text == "one") return dynamics::StateFunction::one();
    if (text == "cos") return dynamics::StateFunction::cosine();
    if (text == "sin") return dynamics::StateFunction::sine();
    if (text == "sin2") return dynamics::StateFunction::sin_squared();
    if (text.rfind("hat:", 0) == 0) {
        auto v = split_doubles(text.substr(4));
        if (v.size() == 3) return dynamics::StateFunction::hat(v[0], v[1], v[2], 1.0);
        if (v.size() == 4) return dynamics::StateFunction::hat(v[0], v[1], v[2], v[3]);
        throw ValidationError("ffun: hat needs lo,peak,hi[,height]");
    }
    throw ValidationError("ffun: expected one|cos|sin|sin2|hat:..., got '" + text +
                          "'");
}

ergodic::CompactFunction parse_bigf(const std::string& text) {
    if (text == "tri") return ergodic::CompactFunction::triangle(0.0, 1.0, 1.0);
    if (text.rfind("tri:", 0) == 0) {
        auto v = split_doubles(text.substr(4));
        if (v.size() != 3) throw ValidationError("bigf: tri needs center,halfwidth,height");
        return ergodic::CompactFunction::triangle(v[0], v[1], v[2]);
    }
    if (text.rfind("taper:", 0) == 0) {
        auto v = split_doubles(text.substr(6));
        if (v.size() == 2) return ergodic::CompactFunction::raised_cosine(v[0], v[1], 1.0);
        if (v.size() == 3) return ergodic::CompactFunction::raised_cosine(v[0], v[1], v[2]);
        throw ValidationError("bigf: taper needs lo,hi[,height]");
    }
    if (text.rfind("plateau:", 0) == 0) {
        auto v = split_doubles(text.substr(8));
        if (v.size() == 4) {
            return ergodic::CompactFunction::plateau(v[0], v[1], v[2], v[3], 1.0);
        }
        if (v.size() == 5) {
            return ergodic::CompactFunction::plateau(v[0], v[1], v[2], v[3], v[4]);
        }
        throw ValidationError("bigf: plateau needs lo,flat_lo,flat_hi,hi[,height]");
    }
    throw ValidationError("bigf: expected tri|taper:lo,hi|plateau:..., got '" + text +
                          "'");
}

std::function<std::complex<double>(std::uint64_t)> parse_afun(
    const std::string& text) {
    if (text == "alt") {
        return [](std::uint64_t j) {
            return std::complex<double>((j & 1) ? -1.0 : 1.0, 0.0);
        };
    }
    if (text == "i") {
        return [](std::uint64_t j) {
            static const std::complex<double> powers[4] = {
                {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
            return powers[j & 3];
        };
    }
    throw ValidationError("afun: expected alt|i, got '" + text + "'");
}

std::optional<arith::PrimeFamily> parse_family(const std::string& text) {
    if (text.empty()) return std::nullopt;
    if (text == "all") return arith::PrimeFamily::all_primes();
    if (text == "1mod4") return arith::PrimeFamily::one_mod_four();
    throw ValidationError("prime-family: expected all|1mod4, got '" + text + "'");
}

dynamics::AdditiveSystem make_circle(const ExperimentSpec& spec) {
    AlphaSpec a = parse_alpha(spec.alpha);
    return dynamics::AdditiveSystem::circle(a.value - std::floor(a.value),
                                            a.irrational);
}

// Illustrative finitely generated torus action: theta_p = frac(p * alpha)
// on the generator primes 2, 3, 5, 7.
dynamics::MultiplicativeSystem make_multiplicative(const ExperimentSpec& spec) {
    AlphaSpec a = parse_alpha(spec.alpha);
    std::vector<std::pair<std::uint64_t, double>> gens;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL}) {
        double angle = p * a.value;
        gens.emplace_back(p, angle - std::floor(angle));
    }
    return dynamics::MultiplicativeSystem(std::move(gens));
}

AverageOptions make_options(const ExperimentSpec& spec, unsigned threads) {
    AverageOptions opts;
    opts.grid.ratio = spec.checkpoint_ratio;
    opts.threads = threads;
    return opts;
}

void append_series_rows(RunReport& report, const ergodic::AverageSeries& series,
                        double predicted) {
    for (const auto& cp : series.checkpoints) {
        CheckpointRow row;
        row.n = cp.n;
        row.value = cp.value;
        row.predicted = predicted;
        row.abs_err = std::abs(cp.value - predicted);
        row.members = cp.members;
        report.rows.push_back(row);
    }
}

void run_identities(const ExperimentSpec& spec, RunReport& report) {
    arith::FactorSieve sieve(std::max<std::uint64_t>(2, spec.n));
    std::span<const std::uint64_t> s(spec.exclude_primes);
    double beta_zeta2 = special::sieve_constants(s).beta *
                        (std::numbers::pi * std::numbers::pi / 6.0);
    double tol = 2.0 / static_cast<double>(spec.n);

    auto add_row = [&](const std::string& name, double measure,
                       std::uint64_t checked, bool pass) {
        CheckpointRow row;
        row.n = spec.n;
        row.value = measure;
        row.predicted = 0.0;
        row.abs_err = measure;
        row.members = checked;
        report.rows.push_back(row);
        report.notes.push_back((pass ? "PASS " : "FAIL ") + name);
    };

    auto conv = special::check_convolution_identity(spec.n, s, sieve);
    add_row("convolution-identity", static_cast<double>(conv.violations),
            conv.checked, conv.violations == 0);

    auto inv = special::check_dirichlet_inverse(spec.n, s, sieve);
    add_row("dirichlet-inverse", static_cast<double>(inv.violations), inv.checked,
            inv.violations == 0);

    double ws_dev = std::abs(special::ws_series_partial(spec.n, s) - beta_zeta2);
    add_row("ws-series", ws_dev, spec.n, ws_dev <= tol);

    double mws_dev = std::abs(special::mobius_ws_series_partial(spec.n, s, sieve) -
                              1.0 / beta_zeta2);
    add_row("mobius-ws-series", mws_dev, spec.n, mws_dev <= tol);
}

}  // namespace

std::string to_string(ExperimentId id) {
    switch (id) {
        case ExperimentId::thm_squarefree: return "thm-squarefree";
        case ExperimentId::thm_bkw_loyd: return "thm-bkw-loyd";
        case ExperimentId::thm_multiplicative: return "thm-multiplicative";
        case ExperimentId::thm_ap: return "thm-ap";
        case ExperimentId::thm_kfull_ergodic: return "thm-kfull-ergodic";
        case ExperimentId::thm_kfull_ek: return "thm-kfull-ek";
        case ExperimentId::thm_kfull_loyd: return "thm-kfull-loyd";
        case ExperimentId::richter: return "richter";
        case ExperimentId::counts: return "counts";
        case ExperimentId::identities: return "identities";
    }
    throw ValidationError("unknown experiment id");
}

ExperimentId experiment_id_from_string(const std::string& name) {
    for (ExperimentId id :
         {ExperimentId::thm_squarefree, ExperimentId::thm_bkw_loyd,
          ExperimentId::thm_multiplicative, ExperimentId::thm_ap,
          ExperimentId::thm_kfull_ergodic, ExperimentId::thm_kfull_ek,
          ExperimentId::thm_kfull_loyd, ExperimentId::richter,
          ExperimentId::counts, ExperimentId::identities}) {
        if (to_string(id) == name) return id;
    }
    throw ValidationError("unknown experiment id '" + name + "'");
}

void ExperimentSpec::validate() const {
    std::vector<std::string> problems;
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) problems.push_back(msg);
    };

    need(n >= 1, "n: must be >= 1");
    need(checkpoint_ratio > 1.0, "checkpoints: ratio must be > 1");
    need(format == "csv" || format == "json", "format: must be csv or json");
    for (std::uint64_t p : exclude_primes) {
        need(arith::trial_division_is_prime(p),
             "exclude-primes: " + std::to_string(p) + " is not prime");
    }
    try {
        parse_family(prime_family);
    } catch (const ValidationError& e) {
        problems.push_back(e.what());
    }

    auto try_parse = [&](auto&& fn) {
        try {
            fn();
        } catch (const ValidationError& e) {
            problems.push_back(e.what());
        }
    };

    switch (id) {
        case ExperimentId::thm_squarefree:
        case ExperimentId::thm_multiplicative:
            try_parse([&] { parse_alpha(alpha); });
            try_parse([&] { parse_ffun(ffun); });
            break;
        case ExperimentId::thm_bkw_loyd:
            need(n >= 100, "n: normalized functionals need n >= 100");
            try_parse([&] { parse_alpha(alpha); });
            try_parse([&] { parse_ffun(ffun); });
            try_parse([&] { parse_bigf(bigf); });
            break;
        case ExperimentId::thm_ap:
            need(m >= 1, "m: must be >= 1");
            need(m >= 1 && r < m, "r: need 0 <= r <= m-1");
            need(exclude_primes.empty(), "exclude-primes: thm-ap uses S = {}");
            try_parse([&] { parse_alpha(alpha); });
            try_parse([&] { parse_ffun(ffun); });
            break;
        case ExperimentId::thm_kfull_ergodic:
            need(k >= 2, "k: k-full experiments need k >= 2");
            try_parse([&] { parse_alpha(alpha); });
            try_parse([&] { parse_ffun(ffun); });
            break;
        case ExperimentId::thm_kfull_ek:
            need(k >= 2, "k: k-full experiments need k >= 2");
            need(n >= 100, "n: normalized functionals need n >= 100");
            try_parse([&] { parse_bigf(bigf); });
            break;
        case ExperimentId::thm_kfull_loyd:
            need(k >= 2, "k: k-full experiments need k >= 2");
            need(n >= 100, "n: normalized functionals need n >= 100");
            try_parse([&] { parse_alpha(alpha); });
            try_parse([&] { parse_ffun(ffun); });
            try_parse([&] { parse_bigf(bigf); });
            break;
        case ExperimentId::richter:
            need(restriction == "all" || restriction == "squarefree" ||
                     restriction == "kfull" || restriction.empty(),
                 "restriction: expected all|squarefree|kfull");
            if (restriction == "kfull") need(k >= 2, "k: k-full needs k >= 2");
            try_parse([&] { parse_afun(afun); });
            break;
        case ExperimentId::counts:
            need(k >= 2, "k: counts needs k >= 2");
            break;
        case ExperimentId::identities:
            need(n <= 10'000'000, "n: identities capped at 1e7");
            break;
    }

    if (!problems.empty()) {
        std::string joined = "invalid spec:";
        for (const auto& p : problems) joined += "\n  " + p;
        throw ValidationError(joined);
    }
}

unsigned resolve_threads(const ExperimentSpec& spec) {
    const char* raw = std::getenv(spec.threads_env.c_str());
    if (!raw || !*raw) return 1;
    char* end = nullptr;
    unsigned long v = std::strtoul(raw, &end, 10);
    if (end == raw || *end != '\0' || v == 0 || v > 1024) {
        throw ValidationError("threads env " + spec.threads_env +
                              ": expected a positive integer, got '" + raw + "'");
    }
    return static_cast<unsigned>(v);
}

double predicted_limit(const ExperimentSpec& spec) {
    std::span<const std::uint64_t> s(spec.exclude_primes);
    double zeta2_inv = special::zeta2_inverse();
    auto family = parse_family(spec.prime_family);
    double delta = family ? family->density : 1.0;

    switch (spec.id) {
        case ExperimentId::thm_squarefree:
            return special::sieve_constants(s).alpha * zeta2_inv *
                   parse_ffun(spec.ffun).exact_integral();
        case ExperimentId::thm_bkw_loyd:
            return special::sieve_constants(s).alpha * zeta2_inv * delta *
                   ergodic::gaussian_expectation(parse_bigf(spec.bigf)) *
                   parse_ffun(spec.ffun).exact_integral();
        case ExperimentId::thm_multiplicative:
            return special::sieve_constants(s).alpha * zeta2_inv *
                   parse_ffun(spec.ffun).exact_integral();
        case ExperimentId::thm_ap:
            return zeta2_inv * parse_ffun(spec.ffun).exact_integral();
        case ExperimentId::thm_kfull_ergodic:
            return parse_ffun(spec.ffun).exact_integral();
        case ExperimentId::thm_kfull_ek:
            return ergodic::gaussian_expectation(parse_bigf(spec.bigf));
        case ExperimentId::thm_kfull_loyd:
            return ergodic::gaussian_expectation(parse_bigf(spec.bigf)) *
                   parse_ffun(spec.ffun).exact_integral();
        case ExperimentId::richter:
            return 0.0;
        case ExperimentId::counts:
            return special::erdos_szekeres_constant(spec.k, 1'000'000);
        case ExperimentId::identities:
            return 0.0;
    }
    throw ValidationError("unknown experiment id");
}

RunReport run(const ExperimentSpec& spec) {
    spec.validate();
    unsigned threads = resolve_threads(spec);

    RunReport report;
    report.spec = spec;
    report.threads = threads;
    auto start = std::chrono::steady_clock::now();

    AverageOptions opts = make_options(spec, threads);
    std::span<const std::uint64_t> s(spec.exclude_primes);
    auto family = parse_family(spec.prime_family);

    switch (spec.id) {
        case ExperimentId::thm_squarefree: {
            // Canonical invariant-average observable a(n) = f(T^n x):
            // its plain average is the invariant integral, so the
            // restricted average tends to alpha(S)/zeta(2) * int f at
            // equidistribution speed.
            auto sys = make_circle(spec);
            auto obs = dynamics::birkhoff_observable(sys, sys.origin(),
                                                     parse_ffun(spec.ffun));
            auto series = ergodic::restricted_average(
                obs, Restriction::squarefree({s.begin(), s.end()}), spec.n, opts);
            append_series_rows(report, series, predicted_limit(spec));
            break;
        }
        case ExperimentId::thm_bkw_loyd: {
            auto sys = make_circle(spec);
            auto orbit =
                dynamics::br_observable(sys, sys.origin(), parse_ffun(spec.ffun));
            auto obs = ergodic::loyd_observable(
                parse_bigf(spec.bigf),
                ergodic::NormalizerParams::for_horizon(spec.k, spec.n), orbit,
                ergodic::NormalizerKind::bkw, family);
            auto series = ergodic::restricted_average(
                obs, Restriction::squarefree({s.begin(), s.end()}), spec.n, opts);
            append_series_rows(report, series, predicted_limit(spec));
            break;
        }
        case ExperimentId::thm_multiplicative: {
            auto msys = make_multiplicative(spec);
            auto obs = dynamics::mult_observable(msys, 0.0, parse_ffun(spec.ffun));
            auto series = ergodic::restricted_average(
                obs, Restriction::squarefree({s.begin(), s.end()}), spec.n, opts);
            append_series_rows(report, series, predicted_limit(spec));
            report.notes.push_back(
                "illustrative: strong unique ergodicity of the finitely "
                "generated torus action is not certified");
            break;
        }
        case ExperimentId::thm_ap: {
            std::uint64_t sieve_limit = checked_mul(spec.m, spec.n) + spec.r;
            if (sieve_limit > arith::FactorSieve::kDefaultLimitCap) {
                throw CapacityError("thm-ap: m*N+r = " +
                                    std::to_string(sieve_limit) +
                                    " exceeds the in-core sieve cap");
            }
            auto sys = make_circle(spec);
            auto sieve = std::make_shared<arith::FactorSieve>(
                std::max<std::uint64_t>(2, sieve_limit));
            auto obs = dynamics::ap_observable(sys, sys.origin(),
                                               parse_ffun(spec.ffun), spec.m,
                                               spec.r, sieve);
            auto series = ergodic::restricted_average(
                obs, Restriction::squarefree(), spec.n, opts);
            append_series_rows(report, series, predicted_limit(spec));
            break;
        }
        case ExperimentId::thm_kfull_ergodic: {
            auto sys = make_circle(spec);
            if (!sys.totally_uniquely_ergodic()) {
                report.notes.push_back(
                    "warning: system is not marked totally uniquely ergodic; "
                    "the k-full limit statement does not apply");
            }
            auto obs =
                dynamics::br_observable(sys, sys.origin(), parse_ffun(spec.ffun));
            auto series = ergodic::restricted_average(
                obs, Restriction::kfull(spec.k), spec.n, opts);
            append_series_rows(report, series, predicted_limit(spec));
            break;
        }
        case ExperimentId::thm_kfull_ek: {
            auto obs = ergodic::loyd_observable(
                parse_bigf(spec.bigf),
                ergodic::NormalizerParams::for_horizon(spec.k, spec.n),
                Observable::constant(1.0), ergodic::NormalizerKind::ek);
            auto series = ergodic::restricted_average(
                obs, Restriction::kfull(spec.k), spec.n, opts);
            append_series_rows(report, series, predicted_limit(spec));
            break;
        }
        case ExperimentId::thm_kfull_loyd: {
            auto sys = make_circle(spec);
            auto orbit =
                dynamics::br_observable(sys, sys.origin(), parse_ffun(spec.ffun));
            auto obs = ergodic::loyd_observable(
                parse_bigf(spec.bigf),
                ergodic::NormalizerParams::for_horizon(spec.k, spec.n), orbit,
                ergodic::NormalizerKind::ek);
            auto series = ergodic::restricted_average(
                obs, Restriction::kfull(spec.k), spec.n, opts);
            append_series_rows(report, series, predicted_limit(spec));
            break;
        }
        case ExperimentId::richter: {
            std::string which = spec.restriction.empty() ? "squarefree"
                                                         : spec.restriction;
            Restriction restriction = Restriction::all();
            std::uint32_t shift = 1;
            if (which == "squarefree") {
                restriction = Restriction::squarefree({s.begin(), s.end()});
            } else if (which == "kfull") {
                restriction =
                    Restriction::kfull(spec.k, ergodic::Normalization::per_root);
                shift = spec.k;
            }
            auto diff =
                ergodic::richter_diff_observable(parse_afun(spec.afun), shift);
            auto series =
                ergodic::restricted_average(diff, restriction, spec.n, opts);
            append_series_rows(report, series, 0.0);
            break;
        }
        case ExperimentId::counts: {
            auto series = ergodic::restricted_average(
                Observable::constant(1.0),
                Restriction::kfull(spec.k, ergodic::Normalization::per_root),
                spec.n, opts);
            append_series_rows(report, series, predicted_limit(spec));
            break;
        }
        case ExperimentId::identities: {
            run_identities(spec, report);
            break;
        }
    }

    if (spec.timings) {
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        for (auto& row : report.rows) {
            row.ms = static_cast<std::uint64_t>(elapsed);
        }
    }
    return report;
}

namespace {

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (ec != std::errc()) throw IoError("number formatting failed");
    return std::string(buf, ptr);
}

}  // namespace

std::string to_csv(const RunReport& report) {
    std::string out = "N,value_re,value_im,predicted,abs_err,members,ms\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.n);
        out += ',';
        out += format_real(row.value.real());
        out += ',';
        out += format_real(row.value.imag());
        out += ',';
        out += format_real(row.predicted);
        out += ',';
        out += format_real(row.abs_err);
        out += ',';
        out += std::to_string(row.members);
        out += ',';
        out += std::to_string(row.ms);
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const RunReport& report) {
    nlohmann::json spec{
        {"id", to_string(report.spec.id)},
        {"n", report.spec.n},
        {"k", report.spec.k},
        {"exclude_primes", report.spec.exclude_primes},
        {"prime_family", report.spec.prime_family},
        {"alpha", report.spec.alpha},
        {"ffun", report.spec.ffun},
        {"bigf", report.spec.bigf},
        {"afun", report.spec.afun},
        {"restriction", report.spec.restriction},
        {"m", report.spec.m},
        {"r", report.spec.r},
        {"seed", report.spec.seed},
        {"checkpoint_ratio", report.spec.checkpoint_ratio},
        {"out", report.spec.out},
        {"format", report.spec.format},
        {"threads_env", report.spec.threads_env},
        {"timings", report.spec.timings},
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"n", row.n},
                        {"value_re", row.value.real()},
                        {"value_im", row.value.imag()},
                        {"predicted", row.predicted},
                        {"abs_err", row.abs_err},
                        {"members", row.members},
                        {"ms", row.ms}});
    }
    return nlohmann::json{{"spec", spec},
                          {"environment",
                           {{"version", report.version},
                            {"threads", report.threads}}},
                          {"notes", report.notes},
                          {"rows", rows}};
}

RunReport report_from_json(const nlohmann::json& j) {
    RunReport report;
    const auto& spec = j.at("spec");
    report.spec.id = experiment_id_from_string(spec.at("id").get<std::string>());
    report.spec.n = spec.at("n").get<std::uint64_t>();
    report.spec.k = spec.at("k").get<std::uint32_t>();
    report.spec.exclude_primes =
        spec.at("exclude_primes").get<std::vector<std::uint64_t>>();
    report.spec.prime_family = spec.at("prime_family").get<std::string>();
    report.spec.alpha = spec.at("alpha").get<std::string>();
    report.spec.ffun = spec.at("ffun").get<std::string>();
    report.spec.bigf = spec.at("bigf").get<std::string>();
    report.spec.afun = spec.at("afun").get<std::string>();
    report.spec.restriction = spec.at("restriction").get<std::string>();
    report.spec.m = spec.at("m").get<std::uint64_t>();
    report.spec.r = spec.at("r").get<std::uint64_t>();
    report.spec.seed = spec.at("seed").get<std::uint64_t>();
    report.spec.checkpoint_ratio = spec.at("checkpoint_ratio").get<double>();
    report.spec.out = spec.at("out").get<std::string>();
    report.spec.format = spec.at("format").get<std::string>();
    report.spec.threads_env = spec.at("threads_env").get<std::string>();
    report.spec.timings = spec.at("timings").get<bool>();
    report.version = j.at("environment").at("version").get<std::string>();
    report.threads = j.at("environment").at("threads").get<unsigned>();
    report.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
        CheckpointRow r;
        r.n = row.at("n").get<std::uint64_t>();
        r.value = {row.at("value_re").get<double>(),
                   row.at("value_im").get<double>()};
        r.predicted = row.at("predicted").get<double>();
        r.abs_err = row.at("abs_err").get<double>();
        r.members = row.at("members").get<std::uint64_t>();
        r.ms = row.at("ms").get<std::uint64_t>();
        report.rows.push_back(r);
    }
    return report;
}

void emit(const RunReport& report, std::ostream& stream) {
    if (report.spec.format == "json") {
        stream << to_json(report).dump(2) << '\n';
    } else {
        stream << to_csv(report);
    }
    if (!stream) throw IoError("emit: write failed");
}

void emit_to_path(const RunReport& report) {
    if (report.spec.out == "-") {
        emit(report, std::cout);
        return;
    }
    std::ofstream file(report.spec.out, std::ios::binary);
    if (!file) throw IoError("emit: cannot open '" + report.spec.out + "'");
    emit(report, file);
    if (!file) throw IoError("emit: write to '" + report.spec.out + "' failed");
}

}  // namespace ergonum::harness
