#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace feller {

// Exact rational with 64-bit numerator/denominator, always reduced with a
// positive denominator. Comparisons and arithmetic go through 128-bit
// intermediates; results that overflow 64 bits throw (never reachable at
// the denominators canonical partitions produce).
struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rat() = default;
    Rat(std::int64_t n, std::int64_t d);  // reduces; throws on d == 0
    static Rat of_int(std::int64_t n) { return Rat(n, 1); }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;  // "num/den"

    // Parses "num/den" or a bare integer.
    static Rat parse(std::string_view text);

    // Best rational approximation of d with denominator <= max_den
    // (Stern-Brocot walk); throws unless the result converts back to
    // exactly d, so "nice" decimals round-trip and junk is rejected.
    static Rat from_double_exact(double d, std::int64_t max_den = 1'000'000);

    friend bool operator==(const Rat& a, const Rat& b) = default;
    friend bool operator<(const Rat& a, const Rat& b);
    friend bool operator<=(const Rat& a, const Rat& b) { return a == b || a < b; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

    friend Rat operator+(const Rat& a, const Rat& b);
    friend Rat operator-(const Rat& a, const Rat& b);
};

}  // namespace feller
