#pragma once

// Command-line front end. run() parses argv, performs one computation and
// writes one document to `out`; nothing reaches `out` unless the command
// succeeds.
//
// Exit status: 0 success, 1 invalid arguments, 2 computation or
// configuration failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "powerslab/constants.hpp"
#include "powerslab/empirical.hpp"
#include "powerslab/factorize.hpp"
#include "powerslab/linnik.hpp"
#include "powerslab/power_sums.hpp"
#include "powerslab/report.hpp"
#include "powerslab/romanov.hpp"

namespace powerslab::cli {

struct GlobalOptions {
    std::string format = "json";
    unsigned threads = default_workers();
    std::string cache_dir;
    std::uint64_t prime_limit = LinnikConstants::kDefaultPrimeLimit;
    double epsilon = 1e-10;
    double tol = 1e-6;
};

// Thrown for argument problems detected after parsing.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::map<int, double> parse_s_table(const std::string& spec) {
    std::map<int, double> table;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw UsageError("--s-table entries must look like t:value, got '" + item + "'");
        }
        try {
            table[std::stoi(item.substr(0, colon))] = std::stod(item.substr(colon + 1));
        } catch (const std::logic_error&) {
            throw UsageError("--s-table: cannot parse '" + item + "'");
        }
    }
    return table;
}

namespace detail {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    [[nodiscard]] std::int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

inline void stamp(ReportTable& t, const GlobalOptions& g, const Timer& timer) {
    auto& meta = t.meta();
    meta["version"] = kVersion;
    meta["prime_limit"] = g.prime_limit;
    meta["epsilon"] = g.epsilon;
    meta["tol"] = g.tol;
    meta["runtime_ms"] = timer.ms();
}

inline LinnikConstants linnik_constants(const GlobalOptions& g) {
    LinnikConstants c = LinnikConstants::with_prime_limit(g.prime_limit);
    c.epsilon = g.epsilon;
    return c;
}

}  // namespace detail

inline ReportTable cmd_constants(const GlobalOptions& g) {
    const LinnikConstants c = detail::linnik_constants(g);
    ReportTable t("Constants", {{"name", CellKind::Text}, {"lo", CellKind::Real}, {"hi", CellKind::Real},
                                {"notes", CellKind::Text}});
    t.add_row({std::string("C0"), c.C0.lo(), c.C0.hi(),
               std::string("twin-prime constant, primes below ") + std::to_string(g.prime_limit)},
              Provenance::Derived);
    t.add_row({std::string("R0"), c.R0.lo(), c.R0.hi(), std::string("published bracket")},
              Provenance::PaperReproduction);
    t.add_row({std::string("c1_grh"), c.c1_grh.lo(), c.c1_grh.hi(), std::string("upper bound only")},
              Provenance::PaperReproduction);
    t.add_row({std::string("c1_uncond"), c.c1_uncond.lo(), c.c1_uncond.hi(), std::string("upper bound only")},
              Provenance::PaperReproduction);
    for (const auto& [k, a] : c.A_brackets) {
        t.add_row({"A(" + std::to_string(k) + ")", a.lo(), a.hi(), std::string("published bracket")},
                  Provenance::PaperReproduction);
    }
    t.add_row({std::string("log2"), c.log2.lo(), c.log2.hi(), std::string("")}, Provenance::Derived);
    t.add_row({std::string("epsilon"), c.epsilon, c.epsilon, std::string("cutoff exponent slack")},
              Provenance::PaperReproduction);
    const std::uint64_t ell = (std::uint64_t{1} << kDefaultRomanovM) - 1;
    const FactorList f = factorize(ell);
    const auto phi = static_cast<double>(euler_phi(f));
    t.add_row({std::string("phi(2^24-1)"), phi, phi, format_factor_line(f)}, Provenance::Derived);
    t.add_row({std::string("C3"), kDefaultC3, kDefaultC3, std::string("m = 24")}, Provenance::PaperReproduction);
    return t;
}

inline ReportTable cmd_ak(const GlobalOptions& g, int k, int L, FactorCache* cache) {
    const Interval C0 = compute_C0(g.prime_limit);
    AkOptions opts;
    opts.workers = g.threads;
    opts.cache = cache;
    const AkEstimate est = estimate_Ak(k, L, C0, opts);
    ReportTable t("Finite-L estimate of A(k)",
                  {{"k", CellKind::Int}, {"L", CellKind::Int}, {"S_lo", CellKind::Real}, {"S_hi", CellKind::Real},
                   {"A_lo", CellKind::Real}, {"A_hi", CellKind::Real}, {"paper_lo", CellKind::Real},
                   {"paper_hi", CellKind::Real}});
    t.add_row({std::int64_t{k}, std::int64_t{L}, est.S_value.lo(), est.S_value.hi(), est.estimate.lo(),
               est.estimate.hi(), est.paper_bracket->lo(), est.paper_bracket->hi()},
              Provenance::Derived);
    return t;
}

inline ReportTable cmd_linnik_check(const GlobalOptions& g, int K, bool grh, double c1) {
    const CriterionResult r = criterion_lhs(K, c1, grh, detail::linnik_constants(g));
    ReportTable t("Pintz-Ruzsa criterion",
                  {{"K", CellKind::Int}, {"i", CellKind::Int}, {"j", CellKind::Int}, {"grh", CellKind::Text},
                   {"C1", CellKind::Real}, {"C2prime", CellKind::Real}, {"lhs", CellKind::Real},
                   {"satisfied", CellKind::Text}});
    t.add_row({std::int64_t{r.K}, std::int64_t{r.i}, std::int64_t{r.j}, std::string(r.grh ? "yes" : "no"), r.C1,
               r.C2prime, r.lhs, std::string(r.satisfied ? "true" : "false")},
              Provenance::Derived);
    return t;
}

inline ReportTable cmd_linnik_table(const GlobalOptions& g) {
    const LinnikConstants c = detail::linnik_constants(g);
    const RomanovConfig cfg = make_romanov_config(kDefaultRomanovM, 3.02, c.C0);
    DensityOptions opts;
    opts.workers = g.threads;
    const DensityResult r = density_lower_bound(cfg, opts);
    K2Delegation k2;
    k2.C1 = 3.02;
    k2.d_lower = r.d_lower;
    k2.K = pintz_threshold(r.d_lower, 1);
    return make_linnik_table(c, k2, g.tol);
}

inline ReportTable cmd_romanov_bound(const GlobalOptions& g, int m, double c1, const std::string& per_class_csv,
                                     const std::string& s_table, std::optional<double> c3) {
    const Interval C0 = compute_C0(g.prime_limit);
    std::optional<std::map<int, double>> table;
    if (!s_table.empty()) table = parse_s_table(s_table);
    const RomanovConfig cfg = make_romanov_config(m, c1, C0, table, c3);
    DensityOptions opts;
    opts.workers = g.threads;
    std::ofstream csv;
    if (!per_class_csv.empty()) {
        csv.open(per_class_csv, std::ios::trunc);
        if (!csv) throw std::runtime_error("cannot open " + per_class_csv);
        csv << "k,alpha_mask,N1,T,D,f_D,share\n";
        csv.precision(17);
        opts.per_class = [&](const ClassStats& s) {
            csv << s.k << ',' << s.alpha_mask << ',' << s.N1 << ',' << s.T << ',' << s.D << ',' << s.f_D << ','
                << s.share << '\n';
        };
    }
    const DensityResult r = density_lower_bound(cfg, opts);
    if (csv.is_open() && !csv) throw std::runtime_error("failed writing " + per_class_csv);
    const auto K = pintz_threshold(r.d_lower, 1);
    ReportTable t("Romanov density lower bound",
                  {{"m", CellKind::Int}, {"C1", CellKind::Real}, {"C3", CellKind::Real}, {"d_lower", CellKind::Real},
                   {"class_count_nonzero", CellKind::Int}, {"total_N1", CellKind::Int},
                   {"pintz_K", CellKind::Text}});
    t.add_row({std::int64_t{m}, c1, cfg.C3, r.d_lower, static_cast<std::int64_t>(r.class_count_nonzero),
               static_cast<std::int64_t>(r.total_N1), K ? std::to_string(*K) : std::string("-")},
              m == kDefaultRomanovM && !table ? Provenance::PaperReproduction : Provenance::Derived);
    return t;
}

inline std::vector<std::uint64_t> parse_checkpoints(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stoull(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw UsageError("--checkpoints: cannot parse '" + item + "'");
        }
    }
    return out;
}

inline ReportTable cmd_empirical_romanov(std::uint64_t limit, int k_powers, const std::string& checkpoints) {
    if (limit > PrimeSieve::kMaxLimit) throw UsageError("--limit exceeds the supported sieve range");
    const PrimeSieve sieve(std::max<std::uint64_t>(limit, 2));
    const DensityProfile prof = density_profile(limit, k_powers, parse_checkpoints(checkpoints), sieve);
    ReportTable t("Density of p + " + std::to_string(k_powers) + " powers of two",
                  {{"N", CellKind::Int}, {"k_powers", CellKind::Int}, {"count", CellKind::Int}, {"d", CellKind::Real}});
    for (const auto& p : prof.points) {
        t.add_row({static_cast<std::int64_t>(p.N), std::int64_t{k_powers}, static_cast<std::int64_t>(p.count), p.d},
                  Provenance::Heuristic);
    }
    return t;
}

inline ReportTable cmd_empirical_goldbach(const GlobalOptions& g, std::uint64_t n, std::uint64_t sample,
                                          std::uint64_t lo, std::uint64_t hi, std::uint64_t seed) {
    std::vector<std::uint64_t> ns;
    if (n != 0) {
        ns.push_back(n);
    } else {
        if (sample == 0 || lo > hi) throw UsageError("give --n, or --sample with --min <= --max");
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::uint64_t> pick(lo / 2 + (lo % 2), hi / 2);
        if (lo / 2 + (lo % 2) > hi / 2) throw UsageError("no even numbers in [--min, --max]");
        for (std::uint64_t i = 0; i < sample; ++i) ns.push_back(2 * pick(rng));
    }
    std::uint64_t top = 0;
    for (auto v : ns) top = std::max(top, v);
    if (top > PrimeSieve::kMaxLimit) throw UsageError("N exceeds the supported sieve range");
    const PrimeSieve sieve(std::max<std::uint64_t>(top, 2));
    const Interval C0 = compute_C0(g.prime_limit);
    ReportTable t("Goldbach representations", {{"N", CellKind::Int}, {"G", CellKind::Int},
                                               {"hl_ratio", CellKind::Real}, {"twice_ratio_below_6.7814", CellKind::Text}});
    for (auto v : ns) {
        const std::uint64_t G = goldbach_G(v, sieve);
        const double ratio = hl_ratio(v, sieve, C0);
        t.add_row({static_cast<std::int64_t>(v), static_cast<std::int64_t>(G), ratio,
                   std::string(2.0 * ratio < 6.7814 ? "yes" : "no")},
                  Provenance::Heuristic);
    }
    return t;
}

inline ReportTable cmd_empirical_gaps(std::uint64_t n, std::uint64_t h, std::uint64_t mod, std::uint64_t res) {
    if (n > PrimeSieve::kMaxLimit) throw UsageError("--n exceeds the supported sieve range");
    const PrimeSieve sieve(std::max<std::uint64_t>(n, 2));
    const std::uint64_t R = gap_count(n, h, res, mod, sieve);
    ReportTable t("Prime pairs at a fixed gap", {{"N", CellKind::Int}, {"h", CellKind::Int}, {"mod", CellKind::Int},
                                                 {"res", CellKind::Int}, {"R", CellKind::Int}});
    t.add_row({static_cast<std::int64_t>(n), static_cast<std::int64_t>(h), static_cast<std::int64_t>(mod),
               static_cast<std::int64_t>(res), static_cast<std::int64_t>(R)},
              Provenance::Derived);
    return t;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"powerslab: Goldbach-Linnik and Romanov constant toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    app.add_option("--format", g.format, "json, csv or md")->check(CLI::IsMember({"json", "csv", "md"}));
    app.add_option("--threads", g.threads, "worker threads (output does not depend on it)")
        ->check(CLI::Range(1U, 1024U));
    app.add_option("--cache-dir", g.cache_dir, std::string("factor cache directory (fallback: $") +
                                                   FactorCache::kEnvVar + ")");
    app.add_option("--prime-limit", g.prime_limit, "primes used for the C0 enclosure")
        ->check(CLI::Range(std::uint64_t{5}, PrimeSieve::kMaxLimit));
    app.add_option("--epsilon", g.epsilon, "cutoff exponent slack")->check(CLI::Range(0.0, 1e-3));
    app.add_option("--tol", g.tol, "bisection tolerance")->check(CLI::PositiveNumber);

    auto* constants = app.add_subcommand("constants", "enclosures of the analytic constants");

    int ak_k = 1;
    int ak_L = 64;
    auto* ak = app.add_subcommand("ak", "finite-L estimate of A(k)");
    ak->add_option("--k", ak_k)->required()->check(CLI::Range(1, 4));
    ak->add_option("--L", ak_L)->required()->check(CLI::Range(1, 64));

    auto* linnik = app.add_subcommand("linnik", "Pintz-Ruzsa criterion");
    linnik->require_subcommand(1);
    int check_K = 6;
    bool check_grh = false;
    double check_c1 = 6.7814;
    auto* check = linnik->add_subcommand("check", "evaluate the criterion");
    check->add_option("--K", check_K)->required();
    check->add_flag("--grh", check_grh);
    check->add_option("--c1", check_c1)->required();
    auto* ltable = linnik->add_subcommand("table", "required C1 for each K");

    auto* romanov = app.add_subcommand("romanov", "Romanov density lower bound");
    romanov->require_subcommand(1);
    int rom_m = kDefaultRomanovM;
    double rom_c1 = 8.0;
    std::string per_class_csv;
    std::string s_table;
    double rom_c3 = kDefaultC3;
    auto* bound = romanov->add_subcommand("bound", "density lower bound for one C1");
    bound->add_option("--m", rom_m)->check(CLI::Range(1, 32));
    bound->add_option("--c1", rom_c1)->required()->check(CLI::PositiveNumber);
    bound->add_option("--per-class-csv", per_class_csv);
    bound->add_option("--s-table", s_table, "t:value,... for every divisor t of m");
    auto* c3_opt = bound->add_option("--c3", rom_c3)->check(CLI::PositiveNumber);
    auto* rtable = romanov->add_subcommand("table", "density bounds for the reference C1 values");

    auto* empirical = app.add_subcommand("empirical", "sieve-based counts");
    empirical->require_subcommand(1);
    std::uint64_t emp_limit = 1'000'000;
    int emp_k = 1;
    std::string emp_checkpoints;
    auto* erom = empirical->add_subcommand("romanov", "density of p + k powers of two");
    erom->add_option("--limit", emp_limit)->check(CLI::Range(std::uint64_t{4}, PrimeSieve::kMaxLimit));
    erom->add_option("--k-powers", emp_k)->check(CLI::Range(1, 8));
    erom->add_option("--checkpoints", emp_checkpoints, "comma separated N_i <= limit");
    std::uint64_t gb_n = 0;
    std::uint64_t gb_sample = 0;
    std::uint64_t gb_min = 100'000;
    std::uint64_t gb_max = 1'000'000;
    std::uint64_t gb_seed = 1;
    auto* egold = empirical->add_subcommand("goldbach", "Goldbach pair counts");
    auto* n_opt = egold->add_option("--n", gb_n);
    auto* s_opt = egold->add_option("--sample", gb_sample);
    n_opt->excludes(s_opt);
    egold->add_option("--min", gb_min);
    egold->add_option("--max", gb_max);
    egold->add_option("--seed", gb_seed);
    std::uint64_t gap_n = 0;
    std::uint64_t gap_h = 0;
    std::uint64_t gap_mod = 1;
    std::uint64_t gap_res = 1;
    auto* egaps = empirical->add_subcommand("gaps", "prime pairs with p1 - p2 = h");
    egaps->set_help_flag("--help", "Print this help message and exit");
    egaps->add_option("--n", gap_n)->required();
    egaps->add_option("--h", gap_h)->required();
    egaps->add_option("--mod", gap_mod)->check(CLI::PositiveNumber);
    egaps->add_option("--res", gap_res);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    std::optional<FactorCache> cache;
    try {
        const detail::Timer timer;
        const Format format = format_from(g.format);
        if (auto dir = FactorCache::resolve_dir(g.cache_dir)) cache.emplace(*dir / FactorCache::kFileName);

        ReportTable table;
        bool record = false;
        if (*constants) {
            table = cmd_constants(g);
        } else if (*ak) {
            if (ak_L > ak_cap(ak_k)) {
                throw UsageError("--L must be at most " + std::to_string(ak_cap(ak_k)) + " for k=" +
                                 std::to_string(ak_k));
            }
            table = cmd_ak(g, ak_k, ak_L, cache ? &*cache : nullptr);
            record = true;
        } else if (*check) {
            table = cmd_linnik_check(g, check_K, check_grh, check_c1);
            record = true;
        } else if (*ltable) {
            table = cmd_linnik_table(g);
        } else if (*bound) {
            std::optional<double> c3;
            if (c3_opt->count() > 0) c3 = rom_c3;
            table = cmd_romanov_bound(g, rom_m, rom_c1, per_class_csv, s_table, c3);
            record = true;
        } else if (*rtable) {
            const Interval C0 = compute_C0(g.prime_limit);
            table = make_romanov_table(C0, g.threads);
        } else if (*erom) {
            table = cmd_empirical_romanov(emp_limit, emp_k, emp_checkpoints);
        } else if (*egold) {
            table = cmd_empirical_goldbach(g, gb_n, gb_sample, gb_min, gb_max, gb_seed);
        } else if (*egaps) {
            table = cmd_empirical_gaps(gap_n, gap_h, gap_mod, gap_res);
            record = true;
        }
        if (cache) cache->flush();
        detail::stamp(table, g, timer);
        out << serialize(table, format, record);
        return 0;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return 1;
    } catch (const std::out_of_range& e) {
        err << "unsupported: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace powerslab::cli
