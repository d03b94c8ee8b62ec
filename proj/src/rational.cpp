#include "feller/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "feller/errors.hpp"

namespace feller {

namespace {

Rat from_i128(__int128 n, __int128 d) {
    if (d < 0) {
        n = -n;
        d = -d;
    }
    // Reduce in 128 bits before the range check.
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a != 0) {
        n /= a;
        d /= a;
    }
    constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
    constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return Rat(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

}  // namespace

Rat::Rat(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw ValidationError("rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::string Rat::str() const { return std::to_string(num) + "/" + std::to_string(den); }

Rat Rat::parse(std::string_view text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rat(std::stoll(std::string(text)), 1);
        }
        const std::int64_t n = std::stoll(std::string(text.substr(0, slash)));
        const std::int64_t d = std::stoll(std::string(text.substr(slash + 1)));
        return Rat(n, d);
    } catch (const std::invalid_argument&) {
        throw ValidationError("rational: cannot parse '" + std::string(text) + "'");
    } catch (const std::out_of_range&) {
        throw ValidationError("rational: out of range '" + std::string(text) + "'");
    }
}

Rat Rat::from_double_exact(double d, std::int64_t max_den) {
    if (!std::isfinite(d)) throw ValidationError("rational: non-finite value");
    const bool neg = d < 0;
    double x = neg ? -d : d;

    // Stern-Brocot search for the best approximation with bounded
    // denominator.
    std::int64_t lo_n = 0, lo_d = 1;         // 0/1
    std::int64_t hi_n = 1, hi_d = 0;         // 1/0 (infinity)
    std::int64_t best_n = 0, best_d = 1;
    const std::int64_t whole = static_cast<std::int64_t>(std::floor(x));
    lo_n = whole;
    hi_n = whole + 1;
    hi_d = 1;
    best_n = whole;
    if (x == static_cast<double>(whole)) {
        return Rat(neg ? -whole : whole, 1);
    }
    while (true) {
        const std::int64_t mid_n = lo_n + hi_n;
        const std::int64_t mid_d = lo_d + hi_d;
        if (mid_d > max_den) break;
        const double mid = static_cast<double>(mid_n) / static_cast<double>(mid_d);
        best_n = mid_n;
        best_d = mid_d;
        if (mid == x) break;
        if (mid < x) {
            lo_n = mid_n;
            lo_d = mid_d;
        } else {
            hi_n = mid_n;
            hi_d = mid_d;
        }
    }
    Rat r(neg ? -best_n : best_n, best_d);
    if (r.to_double() != d) {
        throw ValidationError("rational: " + std::to_string(d) +
                              " has no exact representation with denominator <= " +
                              std::to_string(max_den));
    }
    return r;
}

bool operator<(const Rat& a, const Rat& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

Rat operator+(const Rat& a, const Rat& b) {
    return from_i128(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                     static_cast<__int128>(a.den) * b.den);
}

Rat operator-(const Rat& a, const Rat& b) {
    return from_i128(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                     static_cast<__int128>(a.den) * b.den);
}

}  // namespace feller
