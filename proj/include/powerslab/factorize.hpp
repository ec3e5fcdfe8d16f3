#pragma once

// Certified factorization of 64-bit integers.
//
// Small primes are removed by trial division; whatever is left is split with
// Brent's variant of Pollard rho (fixed seed schedule) and every reported
// factor is certified with a Miller-Rabin test whose base set is
// deterministic below 3.3e24.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace powerslab {

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct FactorList {
    std::uint64_t n = 1;
    std::vector<PrimePower> factors;  // primes strictly increasing

    friend bool operator==(const FactorList&, const FactorList&) = default;
};

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

inline constexpr std::array<std::uint32_t, 25> kSmallPrimes = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41,
    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

inline const std::vector<std::uint32_t>& trial_primes() {
    // primes below 2^10
    static const std::vector<std::uint32_t> primes = [] {
        std::vector<std::uint32_t> out;
        for (std::uint32_t n = 2; n < 1024; ++n) {
            bool prime = true;
            for (std::uint32_t d = 2; d * d <= n; ++d) {
                if (n % d == 0) {
                    prime = false;
                    break;
                }
            }
            if (prime) out.push_back(n);
        }
        return out;
    }();
    return primes;
}

inline std::uint64_t brent_rho(std::uint64_t n, std::uint64_t c) {
    auto f = [&](std::uint64_t x) { return (mul_mod(x, x, n) + c) % n; };
    constexpr std::uint64_t kBatch = 128;
    std::uint64_t y = 2 + c % (n - 3);
    std::uint64_t x = y;
    std::uint64_t ys = y;
    std::uint64_t q = 1;
    std::uint64_t g = 1;
    for (std::uint64_t r = 1; g == 1; r <<= 1U) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) y = f(y);
        for (std::uint64_t k = 0; k < r && g == 1; k += kBatch) {
            ys = y;
            const std::uint64_t lim = std::min(kBatch, r - k);
            for (std::uint64_t i = 0; i < lim; ++i) {
                y = f(y);
                q = mul_mod(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
        }
    }
    if (g == n) {
        // batch overshot; retrace one step at a time
        do {
            ys = f(ys);
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g;
}

}  // namespace detail

// Deterministic for every 64-bit n.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint32_t p : detail::kSmallPrimes) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    // Smallest base prefixes that are deterministic below each bound.
    static constexpr std::array<std::uint64_t, 12> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    std::size_t nbases = 12;
    if (n < 3'215'031'751ULL) {
        nbases = 4;
    } else if (n < 3'474'749'660'383ULL) {
        nbases = 6;
    } else if (n < 341'550'071'728'321ULL) {
        nbases = 7;
    } else if (n < 3'825'123'056'546'413'051ULL) {
        nbases = 9;
    }
    for (std::size_t b = 0; b < nbases; ++b) {
        const std::uint64_t a = kBases[b];
        std::uint64_t x = detail::pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = detail::mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

inline void split_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    std::uint64_t d = n;
    for (std::uint64_t c = 1; d == n || d == 1; ++c) {
        d = brent_rho(n, c);
    }
    split_into(d, out);
    split_into(n / d, out);
}

}  // namespace detail

// Accepts the full unsigned 64-bit range; n = 0 is rejected.
inline FactorList factorize(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("factorize: n must be positive");
    }
    FactorList result;
    result.n = n;
    std::vector<std::uint64_t> primes;
    std::uint64_t rest = n;
    for (std::uint32_t p : detail::trial_primes()) {
        if (std::uint64_t{p} * p > rest) break;
        while (rest % p == 0) {
            primes.push_back(p);
            rest /= p;
        }
    }
    if (rest > 1) {
        const std::uint64_t bound = detail::trial_primes().back();
        if (rest < (bound + 1) * (bound + 1)) {
            primes.push_back(rest);  // no factor below its square root
        } else {
            detail::split_into(rest, primes);
        }
    }
    std::sort(primes.begin(), primes.end());
    for (std::uint64_t p : primes) {
        if (!result.factors.empty() && result.factors.back().prime == p) {
            ++result.factors.back().exponent;
        } else {
            result.factors.push_back({p, 1});
        }
    }
    return result;
}

// Product of prime^exponent; nullopt if it does not fit in 64 bits.
inline std::optional<std::uint64_t> expand(const FactorList& f) {
    std::uint64_t v = 1;
    for (const auto& pp : f.factors) {
        for (unsigned e = 0; e < pp.exponent; ++e) {
            if (__builtin_mul_overflow(v, pp.prime, &v)) return std::nullopt;
        }
    }
    return v;
}

inline std::uint64_t euler_phi(const FactorList& f) {
    std::uint64_t phi = f.n;
    for (const auto& pp : f.factors) phi = phi / pp.prime * (pp.prime - 1);
    return phi;
}

// "n: p1^e1 p2^e2 ..." ; an empty factor list for n = 1.
inline std::string format_factor_line(const FactorList& f) {
    std::ostringstream os;
    os << f.n << ':';
    for (const auto& pp : f.factors) os << ' ' << pp.prime << '^' << pp.exponent;
    return os.str();
}

inline FactorList parse_factor_line(const std::string& line) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("factor cache: missing ':' in line '" + line + "'");
    }
    FactorList f;
    f.n = std::stoull(line.substr(0, colon));
    std::istringstream is(line.substr(colon + 1));
    std::string tok;
    while (is >> tok) {
        const auto caret = tok.find('^');
        if (caret == std::string::npos) {
            throw std::invalid_argument("factor cache: bad token '" + tok + "'");
        }
        f.factors.push_back({std::stoull(tok.substr(0, caret)),
                             static_cast<unsigned>(std::stoul(tok.substr(caret + 1)))});
    }
    return f;
}

// Certified factorizations keyed by n, persisted as sorted text lines.
// Entries read from disk are re-certified before they are trusted.
class FactorCache {
public:
    FactorCache() = default;
    explicit FactorCache(std::filesystem::path file) : file_(std::move(file)) { load(); }

    static constexpr const char* kEnvVar = "POWERSLAB_CACHE_DIR";
    static constexpr const char* kFileName = "factors.txt";

    // Flag value wins; otherwise $POWERSLAB_CACHE_DIR; otherwise no cache dir.
    static std::optional<std::filesystem::path> resolve_dir(const std::string& flag_value) {
        if (!flag_value.empty()) return std::filesystem::path(flag_value);
        if (const char* env = std::getenv(kEnvVar); env != nullptr && *env != '\0') {
            return std::filesystem::path(env);
        }
        return std::nullopt;
    }

    std::optional<FactorList> find(std::uint64_t n) const {
        std::shared_lock lock(mutex_);
        auto it = entries_.find(n);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    FactorList get(std::uint64_t n) {
        if (auto hit = find(n)) return *hit;
        FactorList f = factorize(n);
        std::unique_lock lock(mutex_);
        if (entries_.emplace(n, f).second) dirty_ = true;
        return f;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return entries_.size();
    }

    // Rewrites the whole file in ascending n, so repeated flushes are idempotent.
    void flush() {
        std::unique_lock lock(mutex_);
        if (!dirty_ || file_.empty()) return;
        if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
        const auto tmp = file_.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            for (const auto& [n, f] : entries_) out << format_factor_line(f) << '\n';
            if (!out) throw std::runtime_error("factor cache: cannot write " + tmp);
        }
        std::filesystem::rename(tmp, file_);
        dirty_ = false;
    }

    const std::filesystem::path& file() const { return file_; }

private:
    void load() {
        std::ifstream in(file_);
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            FactorList f = parse_factor_line(line);
            if (!certified(f)) {
                throw std::runtime_error("factor cache: entry failed certification: " + line);
            }
            entries_.emplace(f.n, std::move(f));
        }
    }

    static bool certified(const FactorList& f) {
        if (f.n == 0 || expand(f) != std::optional<std::uint64_t>(f.n)) return false;
        for (std::size_t i = 0; i < f.factors.size(); ++i) {
            if (f.factors[i].exponent == 0 || !is_prime_u64(f.factors[i].prime)) return false;
            if (i > 0 && f.factors[i - 1].prime >= f.factors[i].prime) return false;
        }
        return true;
    }

    std::filesystem::path file_;
    mutable std::shared_mutex mutex_;
    std::map<std::uint64_t, FactorList> entries_;
    bool dirty_ = false;
};

}  // namespace powerslab
