#pragma once

// Lower bound for the lower density of integers p + 2^a, computed class by
// class modulo ell = 2^m - 1.
//
// For a residue k the first moment counts pairs (kappa, alpha) with
// (kappa, ell) = 1 and kappa + 2^alpha = k (mod ell); kappa is fixed by
// alpha, so this is the popcount N1 of an m-bit mask of valid alphas. The
// second moment adds C0 C1 C3 T / (m log 2) where T sums S(gcd(a1 - a2, m))
// over ordered pairs of valid alphas. Pintz's integrality lemma then turns
// D = S2/S1 into the density share f(D) N1 / (phi(ell) m log 2).

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "powerslab/constants.hpp"
#include "powerslab/factorize.hpp"
#include "powerslab/interval.hpp"
#include "powerslab/parallel.hpp"
#include "powerslab/report.hpp"

namespace powerslab {

// Inconsistent or missing configuration data (exit status 2 in the CLI).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultRomanovM = 24;
inline constexpr double kDefaultC3 = 3.73922;

// Upper bounds for S(t), t | 24, as tabulated by Elsholtz and Schlage-Puchta.
inline const std::map<int, double>& default_S_table() {
    static const std::map<int, double> table{
        {1, 1.01609}, {2, 1.04568}, {3, 1.02545}, {4, 1.06517},
        {6, 1.08269}, {8, 1.06864}, {12, 1.12771}, {24, 1.14370},
    };
    return table;
}

inline std::vector<int> divisors_of(int m) {
    std::vector<int> out;
    for (int d = 1; d <= m; ++d) {
        if (m % d == 0) out.push_back(d);
    }
    return out;
}

struct RomanovConfig {
    int m = kDefaultRomanovM;
    std::uint64_t ell = (std::uint64_t{1} << kDefaultRomanovM) - 1;
    double C1 = 8.0;
    double C3 = kDefaultC3;
    std::map<int, double> S_table;  // keyed by the divisors of m
    Interval C0;
    std::uint64_t phi_ell = 0;
    std::vector<std::uint64_t> ell_primes;  // distinct primes of ell

    [[nodiscard]] std::uint32_t full_mask() const {
        return m == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << m) - 1;
    }
};

// Builds and checks a configuration. The S-table and C3 are only shipped for
// m = 24; any other m needs both supplied.
inline RomanovConfig make_romanov_config(int m, double C1, const Interval& C0,
                                         std::optional<std::map<int, double>> S_table = std::nullopt,
                                         std::optional<double> C3 = std::nullopt) {
    if (m < 1 || m > 32) {
        throw std::invalid_argument("romanov: m must be in 1..32");
    }
    if (!(C1 > 0.0)) {
        throw std::invalid_argument("romanov: C1 must be positive");
    }
    if (!C0.positive()) {
        throw std::invalid_argument("romanov: C0 enclosure must be positive");
    }
    RomanovConfig cfg;
    cfg.m = m;
    cfg.ell = (std::uint64_t{1} << m) - 1;
    cfg.C1 = C1;
    cfg.C0 = C0;
    if (S_table) {
        cfg.S_table = *S_table;
    } else if (m == kDefaultRomanovM) {
        cfg.S_table = default_S_table();
    } else {
        throw ConfigError("romanov: no S-table for m=" + std::to_string(m) + "; supply one");
    }
    if (C3) {
        cfg.C3 = *C3;
    } else if (m != kDefaultRomanovM) {
        throw ConfigError("romanov: no C3 for m=" + std::to_string(m) + "; supply one");
    }
    if (!(cfg.C3 > 0.0)) {
        throw ConfigError("romanov: C3 must be positive");
    }
    std::vector<int> keys;
    for (const auto& [t, s] : cfg.S_table) {
        keys.push_back(t);
        if (!(s > 0.0)) throw ConfigError("romanov: S-table entries must be positive");
    }
    if (keys != divisors_of(m)) {
        throw ConfigError("romanov: S-table keys must be exactly the divisors of m=" + std::to_string(m));
    }
    const FactorList f = factorize(cfg.ell);
    cfg.phi_ell = euler_phi(f);
    for (const auto& pp : f.factors) cfg.ell_primes.push_back(pp.prime);
    return cfg;
}

// Direct definition: bit alpha set iff gcd((k - 2^alpha) mod ell, ell) = 1.
inline std::uint32_t valid_alphas(std::uint64_t k, const RomanovConfig& cfg) {
    if (k >= cfg.ell && !(cfg.ell == 1 && k == 0)) {
        throw std::invalid_argument("valid_alphas: residue out of range");
    }
    std::uint32_t mask = 0;
    for (int a = 0; a < cfg.m; ++a) {
        const std::uint64_t pw = (std::uint64_t{1} << a) % cfg.ell;
        const std::uint64_t kappa = (k + cfg.ell - pw) % cfg.ell;
        if (std::gcd(kappa, cfg.ell) == 1) mask |= std::uint32_t{1} << a;
    }
    return mask;
}

// Fast equivalent of valid_alphas: k - 2^alpha is a unit mod ell unless
// 2^alpha = k (mod p) for some prime p | ell, so precompute, per prime and
// residue, the alphas that collide.
class AlphaMasker {
public:
    explicit AlphaMasker(const RomanovConfig& cfg) : full_(cfg.full_mask()) {
        for (std::uint64_t p : cfg.ell_primes) {
            PrimeTable t;
            t.p = p;
            t.pow2.resize(static_cast<std::size_t>(cfg.m));
            for (int a = 0; a < cfg.m; ++a) t.pow2[static_cast<std::size_t>(a)] = detail::pow_mod(2, a, p);
            if (p <= kDenseLimit) {
                t.colliding.assign(static_cast<std::size_t>(p), 0);
                for (int a = 0; a < cfg.m; ++a) {
                    t.colliding[static_cast<std::size_t>(t.pow2[static_cast<std::size_t>(a)])] |= std::uint32_t{1} << a;
                }
            }
            tables_.push_back(std::move(t));
        }
    }

    [[nodiscard]] std::uint32_t operator()(std::uint64_t k) const {
        std::uint32_t bad = 0;
        for (const auto& t : tables_) {
            const std::uint64_t r = k % t.p;
            if (!t.colliding.empty()) {
                bad |= t.colliding[static_cast<std::size_t>(r)];
            } else {
                for (std::size_t a = 0; a < t.pow2.size(); ++a) {
                    if (t.pow2[a] == r) bad |= std::uint32_t{1} << a;
                }
            }
        }
        return full_ & ~bad;
    }

private:
    static constexpr std::uint64_t kDenseLimit = 1U << 16;
    struct PrimeTable {
        std::uint64_t p = 0;
        std::vector<std::uint64_t> pow2;
        std::vector<std::uint32_t> colliding;
    };
    std::uint32_t full_;
    std::vector<PrimeTable> tables_;
};

// S-table value for each alpha difference t mod m (gcd(0, m) = m).
inline std::vector<double> shift_weights(const RomanovConfig& cfg) {
    std::vector<double> w(static_cast<std::size_t>(cfg.m));
    for (int t = 0; t < cfg.m; ++t) {
        const int g = std::gcd(t, cfg.m);
        auto it = cfg.S_table.find(g);
        if (it == cfg.S_table.end()) {
            throw ConfigError("romanov: S-table has no entry for " + std::to_string(g));
        }
        w[static_cast<std::size_t>(t)] = it->second;
    }
    return w;
}

namespace detail {

inline std::uint32_t rotr(std::uint32_t x, int t, int m, std::uint32_t full) {
    if (t == 0) return x;
    return ((x >> t) | (x << (m - t))) & full;
}

// Pairs with alpha1 - alpha2 = t (mod m) number popcount(mask & rotr(mask, t)).
inline double class_T_with(std::uint32_t mask, const std::vector<double>& weights, int m, std::uint32_t full) {
    double T = 0.0;
    for (int t = 0; t < m; ++t) {
        const int pairs = std::popcount(mask & rotr(mask, t, m, full));
        T += pairs * weights[static_cast<std::size_t>(t)];
    }
    return T;
}

}  // namespace detail

inline double class_T(std::uint32_t mask, const RomanovConfig& cfg) {
    return detail::class_T_with(mask & cfg.full_mask(), shift_weights(cfg), cfg.m, cfg.full_mask());
}

// Pintz: if sum b = M and sum b^2 <= D M with integer b >= 0, then
// #{b > 0} >= f(D) M with f(D) = (ceil D + floor D - D) / (ceil D floor D).
inline double pintz_density_factor(double D) {
    if (!(D >= 1.0) || !std::isfinite(D)) {
        throw std::invalid_argument("pintz_density_factor: D must be at least 1");
    }
    const double c = std::ceil(D);
    const double f = std::floor(D);
    return (c + f - D) / (c * f);
}

// D = 1 + C0 C1 C3 T / (m log 2 N1), with C0 rounded up and log 2 rounded down.
inline double class_D(int N1, double T, const RomanovConfig& cfg) {
    if (N1 <= 0) {
        throw std::invalid_argument("class_D: class has no representations (N1 = 0)");
    }
    const double num = cfg.C0.hi() * cfg.C1 * cfg.C3 * T;
    const double den = cfg.m * log2_interval().lo() * N1;
    return 1.0 + num / den;
}

struct ClassStats {
    std::uint64_t k = 0;
    std::uint32_t alpha_mask = 0;
    int N1 = 0;
    double T = 0.0;
    double D = 0.0;     // 0 when N1 = 0
    double f_D = 0.0;   // 0 when N1 = 0
    double share = 0.0;
};

inline double share_denominator(const RomanovConfig& cfg) {
    return static_cast<double>(cfg.phi_ell) * cfg.m * log2_interval().hi();
}

inline ClassStats class_stats(std::uint64_t k, const RomanovConfig& cfg) {
    ClassStats s;
    s.k = k;
    s.alpha_mask = valid_alphas(k, cfg);
    s.N1 = std::popcount(s.alpha_mask);
    if (s.N1 == 0) return s;
    s.T = class_T(s.alpha_mask, cfg);
    s.D = class_D(s.N1, s.T, cfg);
    s.f_D = pintz_density_factor(s.D);
    s.share = s.f_D * s.N1 / share_denominator(cfg);
    return s;
}

struct DensityResult {
    int m = 0;
    double C1 = 0.0;
    double d_lower = 0.0;
    std::uint64_t class_count_nonzero = 0;
    std::uint64_t total_N1 = 0;  // equals phi(ell) m
    std::int64_t runtime_ms = 0;
};

struct DensityOptions {
    unsigned workers = 1;
    bool memoize = true;
    // Called once per class in ascending k; forces a single worker.
    std::function<void(const ClassStats&)> per_class;
};

// Sum over all classes of f(D) N1 / (phi(ell) m log 2). Classes are taken in
// fixed chunks of 2^16 residues; each chunk keeps its own memo keyed by the
// alpha mask and the chunk sums are folded in ascending order, so the bits
// of the result do not depend on the worker count.
inline DensityResult density_lower_bound(const RomanovConfig& cfg, const DensityOptions& opts = {}) {
    const auto start = std::chrono::steady_clock::now();
    const AlphaMasker masker(cfg);
    const std::vector<double> weights = shift_weights(cfg);
    const std::uint32_t full = cfg.full_mask();
    const double log2_lo = log2_interval().lo();
    const double d_scale = cfg.C0.hi() * cfg.C1 * cfg.C3 / (cfg.m * log2_lo);

    struct Partial {
        double weighted = 0.0;  // sum f(D) N1
        std::uint64_t nonzero = 0;
        std::uint64_t mass = 0;
    };

    auto evaluate = [&](std::uint32_t mask, int N1, double& T, double& D) {
        T = detail::class_T_with(mask, weights, cfg.m, full);
        D = 1.0 + d_scale * T / N1;
        return pintz_density_factor(D) * N1;
    };

    auto chunk_fn = [&](std::uint64_t begin, std::uint64_t end) {
        Partial part;
        std::unordered_map<std::uint32_t, double> memo;
        for (std::uint64_t k = begin; k < end; ++k) {
            const std::uint32_t mask = masker(k);
            const int N1 = std::popcount(mask);
            part.mass += static_cast<std::uint64_t>(N1);
            if (N1 == 0) {
                if (opts.per_class) opts.per_class(ClassStats{k, mask});
                continue;
            }
            ++part.nonzero;
            double contribution = 0.0;
            if (opts.per_class) {
                ClassStats s{k, mask, N1};
                contribution = evaluate(mask, N1, s.T, s.D);
                s.f_D = contribution / N1;
                s.share = contribution / share_denominator(cfg);
                opts.per_class(s);
            } else if (opts.memoize) {
                auto [it, inserted] = memo.try_emplace(mask, 0.0);
                if (inserted) {
                    double T = 0.0;
                    double D = 0.0;
                    it->second = evaluate(mask, N1, T, D);
                }
                contribution = it->second;
            } else {
                double T = 0.0;
                double D = 0.0;
                contribution = evaluate(mask, N1, T, D);
            }
            part.weighted += contribution;
        }
        return part;
    };

    const unsigned workers = opts.per_class ? 1U : opts.workers;
    const Partial total = chunked_reduce<Partial>(
        cfg.ell, std::uint64_t{1} << 16, workers, Partial{}, chunk_fn, [](Partial& acc, const Partial& p) {
            acc.weighted += p.weighted;
            acc.nonzero += p.nonzero;
            acc.mass += p.mass;
        });

    DensityResult r;
    r.m = cfg.m;
    r.C1 = cfg.C1;
    r.d_lower = total.weighted / share_denominator(cfg);
    r.class_count_nonzero = total.nonzero;
    r.total_N1 = total.mass;
    r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                       .count();
    return r;
}

// Pintz's observation, generalized to k powers: d_k > 1/4 gives K = 2k.
inline std::optional<int> pintz_threshold(double d_lower, int k) {
    if (!(d_lower >= 0.0 && d_lower <= 0.5)) {
        throw std::invalid_argument("pintz_threshold: density must lie in [0, 0.5]");
    }
    if (k < 1) {
        throw std::invalid_argument("pintz_threshold: k must be positive");
    }
    if (d_lower > 0.25) return 2 * k;
    return std::nullopt;
}

// C1 values and lower bounds of the reference density table.
inline const std::vector<std::pair<double, double>>& reference_density_table() {
    static const std::vector<std::pair<double, double>> rows{
        {8.0, 0.10788}, {7.8209, 0.11011}, {6.7814, 0.12532}, {4.0, 0.19871}, {3.02, 0.25007}, {2.0, 0.34583},
    };
    return rows;
}

inline ReportTable make_romanov_table(const Interval& C0, unsigned workers) {
    ReportTable t("Lower bounds for the lower density of p + 2^a (m = 24)",
                  {{"C1", CellKind::Real},
                   {"d_lower", CellKind::Real},
                   {"reference", CellKind::Real},
                   {"class_count_nonzero", CellKind::Int},
                   {"pintz_K", CellKind::Text}});
    for (const auto& [C1, ref] : reference_density_table()) {
        const RomanovConfig cfg = make_romanov_config(kDefaultRomanovM, C1, C0);
        DensityOptions opts;
        opts.workers = workers;
        const DensityResult r = density_lower_bound(cfg, opts);
        const auto K = pintz_threshold(r.d_lower, 1);
        t.add_row({C1, r.d_lower, ref, static_cast<std::int64_t>(r.class_count_nonzero),
                   K ? std::to_string(*K) : std::string("-")},
                  Provenance::PaperReproduction);
    }
    t.meta()["m"] = kDefaultRomanovM;
    t.meta()["C3"] = kDefaultC3;
    return t;
}

}  // namespace powerslab
