#pragma once

// Experiment runner: binds sieves, dynamical systems and restricted
// averages into reproducible theorem-verification runs with CSV/JSON
// reports. Values are deterministic for a fixed spec across runs and
// thread counts; wall-time columns are zeroed unless timings are requested.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergonum/util.hpp"

namespace ergonum::harness {

inline constexpr const char* kVersion = "ergonum 0.1.0";

enum class ExperimentId {
    thm_squarefree,
    thm_bkw_loyd,
    thm_multiplicative,
    thm_ap,
    thm_kfull_ergodic,
    thm_kfull_ek,
    thm_kfull_loyd,
    richter,
    counts,
    identities,
};

std::string to_string(ExperimentId id);
ExperimentId experiment_id_from_string(const std::string& name);

struct ExperimentSpec {
    ExperimentId id = ExperimentId::thm_squarefree;
    std::uint64_t n = 1'000'000;
    std::uint32_t k = 2;
    std::vector<std::uint64_t> exclude_primes;  // S
    std::string prime_family;                   // "", "all", "1mod4"
    std::string alpha = "golden";   // golden | sqrt2 | custom:<v>[:irrational]
    std::string ffun = "sin2";      // one | cos | sin | sin2 | hat:lo,peak,hi[,h]
    std::string bigf = "tri";       // tri[:c,w,h] | taper:lo,hi[,h] | plateau:a,b,c,d[,h]
    std::string afun = "alt";       // richter: alt ((-1)^j) | i (i^j)
    std::string restriction = "";   // richter: all | squarefree | kfull
    std::uint64_t m = 1;
    std::uint64_t r = 0;
    std::uint64_t seed = 0;
    double checkpoint_ratio = 1.7782794100389228;  // 10^(1/4)
    std::string out = "-";
    std::string format = "csv";
    std::string threads_env = "ERGONUM_THREADS";
    bool timings = false;

    // Throws ValidationError naming the offending fields.
    void validate() const;
};

struct CheckpointRow {
    std::uint64_t n = 0;
    std::complex<double> value = 0.0;
    double predicted = 0.0;
    double abs_err = 0.0;
    std::uint64_t members = 0;
    std::uint64_t ms = 0;
};

struct RunReport {
    ExperimentSpec spec;
    std::string version = kVersion;
    unsigned threads = 1;
    std::vector<std::string> notes;
    std::vector<CheckpointRow> rows;
};

// Closed-form predicted limit for the spec's experiment (never fitted to
// the data): alpha(S)/zeta(2) * A factors, Gaussian expectations, exact
// integrals, delta(T), c_k.
double predicted_limit(const ExperimentSpec& spec);

// Thread count read from the environment variable named by the spec;
// unset means single-threaded.
unsigned resolve_threads(const ExperimentSpec& spec);

RunReport run(const ExperimentSpec& spec);

// CSV: header "N,value_re,value_im,predicted,abs_err,members,ms", one row
// per checkpoint, 17 significant digits, '.' decimal point, trailing
// newline, UTF-8.
std::string to_csv(const RunReport& report);

nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

// Writes in spec.format to spec.out ("-" = stdout). Throws IoError.
void emit(const RunReport& report, std::ostream& stream);
void emit_to_path(const RunReport& report);

}  // namespace ergonum::harness
