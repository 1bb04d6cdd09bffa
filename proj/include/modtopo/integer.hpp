#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>

#include "modtopo/error.hpp"

namespace modtopo {

/// Arbitrary-precision integer used for every matrix entry and torsion order.
using Integer = boost::multiprecision::cpp_int;
/// Exact rational, always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline Integer abs(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

inline Integer lcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0)
        return 0;
    return abs(a / gcd(a, b) * b);
}

/// Floor-style remainder in [0, m) for m > 0.
inline Integer mod_floor(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0)
        r += m;
    return r;
}

inline Integer binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    Integer result = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

inline Integer pow2(std::size_t e) { return Integer(1) << e; }

inline std::size_t to_count(const Integer& x, const char* what) {
    if (x < 0 || x > std::numeric_limits<std::size_t>::max())
        throw Error(ErrorCode::ValueTooLarge, std::string(what) + " does not fit a count: " + x.str());
    return static_cast<std::size_t>(x);
}

inline bool is_prime(std::int64_t p) {
    if (p < 2)
        return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

} // namespace modtopo
