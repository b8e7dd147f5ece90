// ergonum CLI: one subcommand per experiment, CSV/JSON reports on stdout or
// a file. Flags override values from an optional key=value config file.
// Exit codes: 0 ok, 2 validation error, 3 capacity error, 4 I/O error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ergonum/harness.hpp"

#ifdef ERGONUM_WITH_ORACLE
#include "ergonum/oracle.hpp"
#endif

namespace {

using ergonum::harness::ExperimentId;
using ergonum::harness::ExperimentSpec;

void add_common_flags(CLI::App* cmd, ExperimentSpec& spec) {
    cmd->add_option("--n", spec.n, "Average horizon N");
    cmd->add_option("--k", spec.k, "k (k-full order / totient depth)");
    cmd->add_option("--exclude-primes", spec.exclude_primes,
                    "Excluded primes S, comma separated (e.g. 2,3)")
        ->delimiter(',');
    cmd->add_option("--prime-family", spec.prime_family,
                    "p_max family T: all|1mod4");
    cmd->add_option("--alpha", spec.alpha,
                    "Rotation angle: golden|sqrt2|custom:<v>[:irrational]");
    cmd->add_option("--ffun", spec.ffun, "f id: one|cos|sin|sin2|hat:lo,peak,hi");
    cmd->add_option("--bigf", spec.bigf,
                    "F id: tri[:c,w,h]|taper:lo,hi|plateau:a,b,c,d");
    cmd->add_option("--afun", spec.afun, "Richter a(j): alt|i");
    cmd->add_option("--restriction", spec.restriction,
                    "Richter restriction: all|squarefree|kfull");
    cmd->add_option("--m", spec.m, "Progression modulus m");
    cmd->add_option("--r", spec.r, "Progression residue r");
    cmd->add_option("--seed", spec.seed, "Seed echoed into the report");
    cmd->add_option("--checkpoints", spec.checkpoint_ratio,
                    "Geometric checkpoint ratio (> 1)");
    cmd->add_option("--out", spec.out, "Output path ('-' = stdout)");
    cmd->add_option("--format", spec.format, "csv|json");
    cmd->add_option("--threads-env", spec.threads_env,
                    "Environment variable holding the thread count");
    cmd->add_flag("--timings", spec.timings,
                  "Write measured wall time into the ms column "
                  "(breaks byte-for-byte determinism)");
}

#ifdef ERGONUM_WITH_ORACLE
// Fixture-minting entry point: prints only the value so it can be pasted or
// piped; -v echoes the full OracleResult.
int run_oracle(const std::vector<std::string>& args, bool verbose) {
    if (args.empty()) {
        std::cerr << "oracle quantities: factor <n> | kfull-count <N> <k> | "
                     "kfull-list <N> <k> | mertens <N> | liouville-sum <N> | "
                     "prime-count <N>\n";
        return 2;
    }
    const std::string& what = args[0];
    auto arg = [&](std::size_t i) -> std::uint64_t {
        if (i >= args.size()) {
            throw ergonum::ValidationError("oracle " + what + ": missing argument");
        }
        return std::stoull(args[i]);
    };
    auto echo = [&] {
        std::string joined;
        for (std::size_t i = 1; i < args.size(); ++i) {
            if (i > 1) joined += ' ';
            joined += args[i];
        }
        return joined;
    };

    ergonum::oracle::OracleResult result{what, echo(), ""};
    if (what == "factor") {
        for (const auto& pp : ergonum::oracle::brute_factor(arg(1)).factors) {
            if (!result.value.empty()) result.value += ' ';
            result.value += std::to_string(pp.prime) + '^' + std::to_string(pp.exp);
        }
    } else if (what == "kfull-count") {
        result.value =
            std::to_string(ergonum::oracle::brute_kfull_list(arg(1), arg(2)).size());
    } else if (what == "kfull-list") {
        for (std::uint64_t v : ergonum::oracle::brute_kfull_list(arg(1), arg(2))) {
            if (!result.value.empty()) result.value += '\n';
            result.value += std::to_string(v);
        }
    } else if (what == "mertens") {
        result.value = std::to_string(ergonum::oracle::brute_mertens(arg(1)));
    } else if (what == "liouville-sum") {
        result.value = std::to_string(ergonum::oracle::brute_liouville_sum(arg(1)));
    } else if (what == "prime-count") {
        result.value = std::to_string(ergonum::oracle::brute_prime_count(arg(1)));
    } else {
        throw ergonum::ValidationError("oracle: unknown quantity '" + what + "'");
    }

    if (verbose) std::cout << result.quantity << '(' << result.input << ") = ";
    std::cout << result.value << '\n';
    return 0;
}
#endif

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ergonum: ergodic averages over squarefree and k-full numbers"};
    app.require_subcommand(0, 1);
    // key=value config file; put experiment options under an [experiment]
    // section (e.g. [thm-squarefree]). Command-line flags override it.
    app.set_config("--config", "", "key=value config file; flags override it");

    ExperimentSpec spec;

    const std::vector<std::pair<std::string, std::string>> experiments = {
        {"thm-squarefree", "Squarefree ergodic average vs alpha(S)/zeta(2) * int f"},
        {"thm-bkw-loyd", "Squarefree BKW x orbit product average"},
        {"thm-multiplicative", "Multiplicative system average (illustrative)"},
        {"thm-ap", "Squarefree average along Omega(mn+r)"},
        {"thm-kfull-ergodic", "k-full orbit average vs int f"},
        {"thm-kfull-ek", "k-full Erdos-Kac functional vs Gaussian expectation"},
        {"thm-kfull-loyd", "k-full Loyd product average"},
        {"richter", "Richter shift delta"},
        {"counts", "Q_k counts vs the Erdos-Szekeres constant"},
        {"identities", "Exact convolution/series identity suites"},
    };
    for (const auto& [name, desc] : experiments) {
        auto* cmd = app.add_subcommand(name, desc);
        add_common_flags(cmd, spec);
    }

#ifdef ERGONUM_WITH_ORACLE
    std::vector<std::string> oracle_args;
    bool oracle_verbose = false;
    auto* oracle_cmd = app.add_subcommand("oracle");
    oracle_cmd->group("");  // hidden from help
    oracle_cmd->add_flag("-v", oracle_verbose);
    oracle_cmd->add_option("args", oracle_args);
    oracle_cmd->allow_extras();
#endif

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : 2;
    }

    try {
#ifdef ERGONUM_WITH_ORACLE
        if (oracle_cmd->parsed()) return run_oracle(oracle_args, oracle_verbose);
#endif
        auto picked = app.get_subcommands();
        if (picked.empty()) {
            std::cerr << app.help();
            return 2;
        }
        spec.id =
            ergonum::harness::experiment_id_from_string(picked.front()->get_name());
        spec.validate();

        auto report = ergonum::harness::run(spec);
        for (const auto& note : report.notes) std::cerr << note << '\n';
        ergonum::harness::emit_to_path(report);
        return 0;
    } catch (const ergonum::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const ergonum::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return 3;
    } catch (const ergonum::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
