#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>

namespace cdga {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative argument");
    BigInt r = 1;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

// Binomial coefficient C(n, k); zero outside the triangle.
inline BigInt binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline Rational rational_pow(const Rational& base, int exp) {
    if (exp < 0) {
        if (base == 0) throw std::invalid_argument("negative power of zero");
        return Rational(1) / rational_pow(base, -exp);
    }
    Rational r = 1;
    Rational b = base;
    int e = exp;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace cdga
