#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dpk/candf.hpp"
#include "dpk/document.hpp"
#include "dpk/error.hpp"
#include "dpk/lattice.hpp"
#include "dpk/oracle.hpp"
#include "dpk/solver.hpp"

namespace dpk::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Settings {
    std::string input;
    std::uint64_t budget = kDefaultOracleBudget;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    std::vector<double> h;
    double power = 0.0;
    std::string emit_instance;
    bool oracle_check = false;
    bool timing = false;
    bool force_general = false;
    std::string phase2 = "compatible";
    std::size_t n = 10;
    std::size_t k = 1;
    std::size_t trials = 5;
    double shrink = kDefaultShrink;
};

SolveOptions solve_options(const Settings& s) {
    SolveOptions o;
    o.threads = std::max(1u, s.threads);
    o.force_general = s.force_general;
    o.phase2 = s.phase2 == "exhaustive" ? Phase2Mode::exhaustive : Phase2Mode::compatible;
    return o;
}

// Binomial(n, k) * (2 psi_ceil + 2)^k, saturating at the uint64 maximum.
std::uint64_t phase1_bound(std::size_t n, std::size_t k, std::int64_t psi_ceil) {
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t b = 1;
    // b * (n - i) is divisible by i + 1 at every step.
    for (std::size_t i = 0; i < k; ++i) {
        if (__builtin_mul_overflow(b, n - i, &b)) return kMax;
        b /= i + 1;
    }
    const auto base = static_cast<std::uint64_t>(2 * psi_ceil + 2);
    for (std::size_t i = 0; i < k; ++i)
        if (__builtin_mul_overflow(b, base, &b)) return kMax;
    return b;
}

int cmd_solve(const Settings& s, std::ostream& out) {
    const InstanceDocument doc = read_instance_file(s.input);
    const auto start = Clock::now();
    const SolveResult r = solve(doc.instance, solve_options(s));
    const double ms = elapsed_ms(start);
    out << result_json(r, s.timing ? std::optional<double>(ms) : std::nullopt).dump(2) << "\n";
    return kExitOk;
}

int cmd_oracle(const Settings& s, std::ostream& out) {
    const InstanceDocument doc = read_instance_file(s.input);
    const InstanceStats stats = validate(doc.instance);
    const OracleResult r = brute_force(doc.instance, stats, s.budget);
    out << oracle_json(r, stats).dump(2) << "\n";
    return kExitOk;
}

int cmd_validate(const Settings& s, std::ostream& out) {
    const InstanceDocument doc = read_instance_file(s.input);
    const InstanceStats stats = validate(doc.instance);
    Json j;
    j["n"] = doc.instance.n();
    j["k"] = doc.instance.k();
    j["valid"] = true;
    j["stats"] = stats_json(stats);
    out << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_candf(const Settings& s, std::ostream& out, std::ostream& err) {
    if (s.h.empty()) throw InvalidArgument("candf: --h is required");
    if (!channel_gains_bounded(s.h)) err << "dpk: warning: some |h_i| > 1, outside the unit-gain channel model\n";
    const DpkInstance inst = candf_instance(s.h, s.power);
    if (!s.emit_instance.empty()) {
        InstanceDocument doc{std::string(kInstanceSchema), inst, std::nullopt, "compute-and-forward channel"};
        write_instance_file(s.emit_instance, doc);
    }
    const auto start = Clock::now();
    const RateResult r = compute_rate(s.h, s.power, solve_options(s));
    const double ms = elapsed_ms(start);
    out << rate_json(r, s.h, s.power, s.timing ? std::optional<double>(ms) : std::nullopt).dump(2) << "\n";
    return kExitOk;
}

int cmd_bench(const Settings& s, std::ostream& out, std::ostream& err) {
    if (s.k == 0 || s.k > s.n) throw InvalidArgument("bench: need 1 <= k <= n");
    std::size_t violations = 0;
    std::size_t mismatches = 0;
    std::vector<Json> rows;

    out << std::left << std::setw(7) << "trial" << std::setw(6) << "n" << std::setw(4) << "k" << std::setw(10)
        << "psi_ceil" << std::setw(15) << "phase1_points" << std::setw(16) << "phase1_bound" << std::setw(14)
        << "candidates" << std::setw(12) << "wall_ms" << std::setw(14) << "f_star" << "check\n";
    for (std::size_t t = 0; t < s.trials; ++t) {
        const std::uint64_t seed = s.seed + t;
        const DpkInstance inst = random_instance(s.n, s.k, seed, s.shrink);
        const auto start = Clock::now();
        const SolveResult r = solve(inst, solve_options(s));
        const double ms = elapsed_ms(start);
        const std::uint64_t bound = phase1_bound(s.n, s.k, r.stats.psi_ceil);
        const bool within = r.phase1_points <= bound;
        if (!within) ++violations;

        std::string check = within ? "ok" : "BOUND-VIOLATION";
        Json row;
        row["trial"] = t;
        row["seed"] = seed;
        row["n"] = s.n;
        row["k"] = s.k;
        row["psi"] = r.stats.psi;
        row["psi_ceil"] = r.stats.psi_ceil;
        row["phase1_points"] = r.phase1_points;
        row["phase1_bound"] = bound;
        row["candidates_evaluated"] = r.candidates_evaluated;
        row["wall_time_ms"] = ms;
        row["f_star"] = r.f_star;
        row["used_path"] = std::string(to_string(r.used_path));
        if (s.oracle_check) {
            const OracleResult o = brute_force(inst, r.stats, s.budget);
            const bool match = std::abs(o.f_star - r.f_star) <= 1e-9 * std::max(1.0, std::abs(o.f_star));
            if (!match) {
                ++mismatches;
                check += " ORACLE-MISMATCH";
            } else {
                check += " oracle-ok";
            }
            row["oracle_f_star"] = o.f_star;
            row["oracle_match"] = match;
        }
        std::ostringstream wall;
        wall << std::fixed << std::setprecision(3) << ms;
        std::ostringstream fs;
        fs << std::setprecision(8) << r.f_star;
        out << std::left << std::setw(7) << t << std::setw(6) << s.n << std::setw(4) << s.k << std::setw(10)
            << r.stats.psi_ceil << std::setw(15) << r.phase1_points << std::setw(16) << bound
            << std::setw(14) << r.candidates_evaluated << std::setw(12) << wall.str() << std::setw(14) << fs.str()
            << check << "\n";
        rows.push_back(std::move(row));
    }
    out << "\n";
    for (const auto& row : rows) out << row.dump() << "\n";
    Json summary;
    summary["trials"] = s.trials;
    summary["bound_violations"] = violations;
    summary["oracle_mismatches"] = mismatches;
    out << summary.dump() << "\n";
    if (violations > 0 || mismatches > 0) {
        err << "dpk: bench: " << violations << " bound violation(s), " << mismatches << " oracle mismatch(es)\n";
        return kExitFailure;
    }
    return kExitOk;
}

void add_input(CLI::App* cmd, Settings& s) {
    cmd->add_option("--input,input", s.input, "Instance document (JSON)")->required();
}

void add_solver_flags(CLI::App* cmd, Settings& s) {
    cmd->add_option("--threads", s.threads, "Phase 2 worker threads")->check(CLI::Range(1u, 1024u));
    cmd->add_option("--phase2", s.phase2, "Phase 2 subset selection")
        ->check(CLI::IsMember({"compatible", "exhaustive"}));
    cmd->add_flag("--general", s.force_general, "Use the two-phase path even for rank-one V");
    cmd->add_flag("--timing", s.timing, "Include wall_time_ms in the result");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Settings s;
    CLI::App app{"Exact shortest vectors of lattices with a diagonal-minus-low-rank Gram matrix", "dpk"};
    app.require_subcommand(1);

    auto* solve_cmd = app.add_subcommand("solve", "Solve an instance with the candidate enumeration algorithm");
    add_input(solve_cmd, s);
    add_solver_flags(solve_cmd, s);

    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force all minimizers inside the search radius");
    add_input(oracle_cmd, s);
    oracle_cmd->add_option("--budget", s.budget, "Maximum number of enumerated vectors");

    auto* validate_cmd = app.add_subcommand("validate", "Certify positive definiteness and report the search radius");
    add_input(validate_cmd, s);

    auto* candf_cmd = app.add_subcommand("candf", "Compute-and-Forward rate for a channel vector");
    candf_cmd->set_help_flag("--help", "Print this help message and exit");
    candf_cmd->add_option("--h", s.h, "Channel gains, comma separated")->delimiter(',')->required();
    candf_cmd->add_option("--power", s.power, "Transmit power")->required();
    candf_cmd->add_option("--emit-instance", s.emit_instance, "Also write the lattice instance to this path");
    add_solver_flags(candf_cmd, s);

    auto* bench_cmd = app.add_subcommand("bench", "Solve random instances and check the candidate-count bound");
    bench_cmd->add_option("--n", s.n, "Dimension")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--k", s.k, "Rank of V")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--trials", s.trials, "Number of random instances");
    bench_cmd->add_option("--seed", s.seed, "Seed of the first trial (trial t uses seed + t)");
    bench_cmd->add_option("--shrink", s.shrink, "Largest eigenvalue of V^T D^-1 V is shrink^2")->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--budget", s.budget, "Oracle budget for --oracle-check");
    bench_cmd->add_flag("--oracle-check", s.oracle_check, "Compare every result with the brute-force oracle");
    add_solver_flags(bench_cmd, s);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "dpk: error: " << e.what() << "\n";
        return kExitParse;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(s, out);
        if (oracle_cmd->parsed()) return cmd_oracle(s, out);
        if (validate_cmd->parsed()) return cmd_validate(s, out);
        if (candf_cmd->parsed()) return cmd_candf(s, out, err);
        if (bench_cmd->parsed()) return cmd_bench(s, out, err);
    } catch (const ParseError& e) {
        err << "dpk: parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const InvalidArgument& e) {
        err << "dpk: invalid argument: " << e.what() << "\n";
        return kExitParse;
    } catch (const NotPositiveDefinite& e) {
        err << "dpk: not positive definite: " << e.what() << "\n";
        return kExitNotPd;
    } catch (const BudgetExceeded& e) {
        err << "dpk: budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        err << "dpk: error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace dpk::cli
