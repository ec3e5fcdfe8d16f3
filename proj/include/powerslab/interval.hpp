#pragma once

// Closed floating-point enclosures [lo, hi].
//
// Operations run in round-to-nearest. The exact rounding error of each
// endpoint is recovered with two-sum or an fma residual, and the endpoint is
// stepped one ulp outward only when that error points the wrong way. The
// result is the same as directed rounding without touching fenv state, so
// no -frounding-math is needed. Do not build with -ffast-math.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace powerslab {

namespace detail {

inline double round_down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

inline double round_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

// Sign of (exact - rounded) for each elementary operation.
inline double add_error(double a, double b, double s) {
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

inline double add_down(double a, double b) {
    const double s = a + b;
    return add_error(a, b, s) < 0.0 ? round_down(s) : s;
}
inline double add_up(double a, double b) {
    const double s = a + b;
    return add_error(a, b, s) > 0.0 ? round_up(s) : s;
}
inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

inline double mul_down(double a, double b) {
    const double p = a * b;
    return std::fma(a, b, -p) < 0.0 ? round_down(p) : p;
}
inline double mul_up(double a, double b) {
    const double p = a * b;
    return std::fma(a, b, -p) > 0.0 ? round_up(p) : p;
}

// a/b - q has the sign of (a - q*b)/b.
inline double div_down(double a, double b) {
    const double q = a / b;
    const double r = std::fma(-q, b, a);
    return (b > 0.0 ? r : -r) < 0.0 ? round_down(q) : q;
}
inline double div_up(double a, double b) {
    const double q = a / b;
    const double r = std::fma(-q, b, a);
    return (b > 0.0 ? r : -r) > 0.0 ? round_up(q) : q;
}

inline double sqrt_down(double x) {
    const double s = std::sqrt(x);
    return std::fma(-s, s, x) < 0.0 ? round_down(s) : s;
}
inline double sqrt_up(double x) {
    const double s = std::sqrt(x);
    return std::fma(-s, s, x) > 0.0 ? round_up(s) : s;
}

}  // namespace detail

class Interval {
public:
    constexpr Interval() = default;

    // Degenerate interval. Exact when the double is the intended value.
    explicit Interval(double point) : Interval(point, point) {}

    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw std::invalid_argument("Interval: endpoints must be finite");
        }
        if (lo > hi) {
            throw std::invalid_argument("Interval: lo > hi");
        }
    }

    // Enclosure of an integer that may not be representable as a double.
    static Interval from_integer(std::int64_t n) {
        const auto d = static_cast<double>(n);
        if (static_cast<long double>(d) == static_cast<long double>(n)) {
            return Interval(d);
        }
        return Interval(detail::round_down(d), detail::round_up(d));
    }

    static Interval from_unsigned(std::uint64_t n) {
        const auto d = static_cast<double>(n);
        if (d < 18446744073709551616.0 && static_cast<std::uint64_t>(d) == n) {
            return Interval(d);
        }
        return Interval(detail::round_down(d), detail::round_up(d));
    }

    // Enclosure of p/q for integers p, q (q != 0).
    static Interval ratio(std::int64_t p, std::int64_t q) {
        return from_integer(p) / from_integer(q);
    }

    // Widen a round-to-nearest approximation by `ulps` on each side.
    static Interval around(double approx, int ulps) {
        double lo = approx;
        double hi = approx;
        for (int i = 0; i < ulps; ++i) {
            lo = detail::round_down(lo);
            hi = detail::round_up(hi);
        }
        return Interval(lo, hi);
    }

    [[nodiscard]] double lo() const { return lo_; }
    [[nodiscard]] double hi() const { return hi_; }
    [[nodiscard]] double width() const { return hi_ - lo_; }
    [[nodiscard]] double mid() const { return lo_ + 0.5 * (hi_ - lo_); }

    [[nodiscard]] bool contains(double x) const { return lo_ <= x && x <= hi_; }
    [[nodiscard]] bool contains(const Interval& other) const {
        return lo_ <= other.lo_ && other.hi_ <= hi_;
    }
    [[nodiscard]] bool subset_of(const Interval& other) const { return other.contains(*this); }
    [[nodiscard]] bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
    [[nodiscard]] bool positive() const { return lo_ > 0.0; }

    Interval& operator+=(const Interval& rhs) {
        lo_ = detail::add_down(lo_, rhs.lo_);
        hi_ = detail::add_up(hi_, rhs.hi_);
        return *this;
    }
    Interval& operator-=(const Interval& rhs) {
        const double lo = detail::sub_down(lo_, rhs.hi_);
        hi_ = detail::sub_up(hi_, rhs.lo_);
        lo_ = lo;
        return *this;
    }
    Interval& operator*=(const Interval& rhs);
    Interval& operator/=(const Interval& rhs);

    friend Interval operator+(Interval a, const Interval& b) { return a += b; }
    friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
    friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
    friend Interval operator/(Interval a, const Interval& b) { return a /= b; }
    friend Interval operator-(const Interval& a) { return Interval(-a.hi_, -a.lo_); }

    friend bool operator==(const Interval&, const Interval&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Interval& x) {
        return os << '[' << x.lo_ << ", " << x.hi_ << ']';
    }

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

inline Interval& Interval::operator*=(const Interval& rhs) {
    using detail::mul_down;
    using detail::mul_up;
    if (lo_ >= 0.0 && rhs.lo_ >= 0.0) {
        lo_ = mul_down(lo_, rhs.lo_);
        hi_ = mul_up(hi_, rhs.hi_);
        return *this;
    }
    const double lo = std::min({mul_down(lo_, rhs.lo_), mul_down(lo_, rhs.hi_),
                                mul_down(hi_, rhs.lo_), mul_down(hi_, rhs.hi_)});
    hi_ = std::max({mul_up(lo_, rhs.lo_), mul_up(lo_, rhs.hi_),
                    mul_up(hi_, rhs.lo_), mul_up(hi_, rhs.hi_)});
    lo_ = lo;
    return *this;
}

inline Interval& Interval::operator/=(const Interval& rhs) {
    if (rhs.contains_zero()) {
        throw std::domain_error("Interval: division by an interval containing zero");
    }
    using detail::div_down;
    using detail::div_up;
    const double lo = std::min({div_down(lo_, rhs.lo_), div_down(lo_, rhs.hi_),
                                div_down(hi_, rhs.lo_), div_down(hi_, rhs.hi_)});
    hi_ = std::max({div_up(lo_, rhs.lo_), div_up(lo_, rhs.hi_),
                    div_up(hi_, rhs.lo_), div_up(hi_, rhs.hi_)});
    lo_ = lo;
    return *this;
}

inline Interval sqrt(const Interval& x) {
    if (x.lo() < 0.0) {
        throw std::domain_error("Interval: sqrt of negative values");
    }
    return Interval(detail::sqrt_down(x.lo()), detail::sqrt_up(x.hi()));
}

// x^n by repeated squaring; even powers of sign-straddling intervals start at 0.
inline Interval pow(const Interval& x, unsigned n) {
    if (n == 0) {
        return Interval(1.0);
    }
    if (n % 2 == 0 && x.contains_zero()) {
        const double m = std::max(-x.lo(), x.hi());
        const Interval mag = pow(Interval(0.0, m), n);
        return Interval(0.0, mag.hi());
    }
    if (n % 2 == 0 && x.hi() < 0.0) {
        return pow(-x, n);
    }
    Interval result(1.0);
    Interval base = x;
    while (n > 0) {
        if (n & 1U) {
            result *= base;
        }
        n >>= 1U;
        if (n > 0) {
            base *= base;
        }
    }
    return result;
}

inline Interval hull(const Interval& a, const Interval& b) {
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

// Tight enclosure of log 2 (correctly rounded constant plus one ulp).
inline Interval log2_interval() {
    return Interval::around(0.69314718055994530942, 1);
}

}  // namespace powerslab
