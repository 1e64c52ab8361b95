// Copyright 2026 The ckt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <type_traits>

namespace ckt {

/// Raised when fixed-width exact arithmetic would lose bits.
class ArithmeticOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/**
 * ZRootTwo: numbers of the form a + b*sqrt(2) with integer a, b.
 *
 * Real elements of Z[omega] land here (|x|^2, Pauli expectations).
 */
template <typename Int>
struct ZRootTwo {
    Int a{0};
    Int b{0};

    constexpr ZRootTwo() = default;
    constexpr ZRootTwo(Int a_, Int b_) : a(std::move(a_)), b(std::move(b_)) {}

    friend constexpr ZRootTwo operator+(const ZRootTwo &x, const ZRootTwo &y) { return {x.a + y.a, x.b + y.b}; }
    friend constexpr ZRootTwo operator-(const ZRootTwo &x, const ZRootTwo &y) { return {x.a - y.a, x.b - y.b}; }
    friend constexpr ZRootTwo operator*(const ZRootTwo &x, const ZRootTwo &y) {
        return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a};
    }
    friend constexpr bool operator==(const ZRootTwo &, const ZRootTwo &) = default;

    constexpr bool is_zero() const { return a == 0 && b == 0; }

    /// Exact sign of a + b*sqrt(2).
    int sign() const {
        auto sgn = [](const Int &v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
        const int sa = sgn(a), sb = sgn(b);
        if (sa == 0) return sb;
        if (sb == 0 || sa == sb) return sa;
        // opposite signs: compare a^2 with 2 b^2
        const Int lhs = a * a, rhs = 2 * b * b;
        if (lhs == rhs) return 0;
        return lhs > rhs ? sa : sb;
    }

    double to_double() const { return static_cast<double>(a) + static_cast<double>(b) * M_SQRT2; }
};

/**
 * ZOmega: elements of the cyclotomic integer ring Z[omega], omega = exp(i pi/4),
 * stored as a + b omega + c omega^2 + d omega^3.
 *
 * The template parameter selects the coefficient type. std::int64_t is used
 * on the enumeration hot path; any arbitrary-precision integer with the usual
 * operators (e.g. boost::multiprecision::cpp_int) works as well.
 */
template <typename Int>
struct ZOmega {
    Int a{0};
    Int b{0};
    Int c{0};
    Int d{0};

    constexpr ZOmega() = default;
    constexpr ZOmega(Int a_, Int b_, Int c_, Int d_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

    static constexpr ZOmega one() { return {1, 0, 0, 0}; }
    static constexpr ZOmega omega() { return {0, 1, 0, 0}; }
    static constexpr ZOmega imag() { return {0, 0, 1, 0}; }

    friend constexpr ZOmega operator+(const ZOmega &x, const ZOmega &y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
    friend constexpr ZOmega operator-(const ZOmega &x, const ZOmega &y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
    friend constexpr ZOmega operator-(const ZOmega &x) { return {-x.a, -x.b, -x.c, -x.d}; }
    friend constexpr ZOmega operator*(const ZOmega &x, const ZOmega &y) {
        // omega^4 = -1
        return {x.a * y.a - x.b * y.d - x.c * y.c - x.d * y.b,
                x.a * y.b + x.b * y.a - x.c * y.d - x.d * y.c,
                x.a * y.c + x.b * y.b + x.c * y.a - x.d * y.d,
                x.a * y.d + x.b * y.c + x.c * y.b + x.d * y.a};
    }
    ZOmega &operator+=(const ZOmega &y) { return *this = *this + y; }
    ZOmega &operator-=(const ZOmega &y) { return *this = *this - y; }
    friend constexpr bool operator==(const ZOmega &, const ZOmega &) = default;
    friend constexpr auto operator<=>(const ZOmega &x, const ZOmega &y) {
        return std::array<Int, 4>{x.a, x.b, x.c, x.d} <=> std::array<Int, 4>{y.a, y.b, y.c, y.d};
    }

    constexpr bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }

    /// Multiplication by omega is a coefficient rotation with a sign flip.
    constexpr ZOmega mul_omega() const { return {-d, a, b, c}; }

    constexpr ZOmega mul_omega_pow(int m) const {
        m &= 7;
        ZOmega r = *this;
        if (m >= 4) {
            r = -r;
            m -= 4;
        }
        for (int i = 0; i < m; ++i) r = r.mul_omega();
        return r;
    }

    constexpr ZOmega conj() const { return {a, -d, -c, -b}; }

    constexpr bool divisible_by_sqrt2() const {
        auto even = [](const Int &v) { return (v % 2) == 0; };
        return even(a - c) && even(b - d);
    }

    /// Exact division by sqrt(2); requires divisible_by_sqrt2().
    constexpr ZOmega div_sqrt2() const { return {(b - d) / 2, (a + c) / 2, (b + d) / 2, (c - a) / 2}; }

    constexpr ZOmega mul_sqrt2() const { return {b - d, a + c, b + d, c - a}; }

    /// x * conj(x), which is real and lies in Z[sqrt2].
    constexpr ZRootTwo<Int> norm_sq() const {
        const ZOmega p = *this * conj();
        return {p.a, p.b};
    }

    /// Real part projection for an element known to be real (c == 0, d == -b).
    constexpr ZRootTwo<Int> real_root_two() const { return {a, b}; }

    std::complex<double> to_complex() const {
        constexpr double h = M_SQRT1_2;
        return {static_cast<double>(a) + h * static_cast<double>(b) - h * static_cast<double>(d),
                h * static_cast<double>(b) + static_cast<double>(c) + h * static_cast<double>(d)};
    }

    friend std::ostream &operator<<(std::ostream &os, const ZOmega &x) {
        return os << '(' << x.a << ',' << x.b << ',' << x.c << ',' << x.d << ')';
    }
};

/**
 * DyadicRootTwo: exact real value (a + b sqrt2) / 2^exp in lowest terms.
 *
 * Lowest terms means exp == 0 or at least one of a, b is odd, which makes
 * equality of values equivalent to equality of representations.
 */
struct DyadicRootTwo {
    std::int64_t a{0};
    std::int64_t b{0};
    int exp{0};

    static DyadicRootTwo make(std::int64_t a, std::int64_t b, int exp) {
        DyadicRootTwo r{a, b, exp};
        r.reduce();
        return r;
    }

    void reduce() {
        if (a == 0 && b == 0) {
            exp = 0;
            return;
        }
        while (exp > 0 && (a % 2) == 0 && (b % 2) == 0) {
            a /= 2;
            b /= 2;
            --exp;
        }
    }

    double to_double() const { return std::ldexp(static_cast<double>(a) + static_cast<double>(b) * M_SQRT2, -exp); }

    friend bool operator==(const DyadicRootTwo &, const DyadicRootTwo &) = default;
    friend auto operator<=>(const DyadicRootTwo &, const DyadicRootTwo &) = default;
};

namespace detail {

inline void hash_combine(std::size_t &seed, std::uint64_t v) {
    v ^= v >> 33;
    v *= 0xff51afd7ed558ccdULL;
    v ^= v >> 33;
    seed ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace detail

}  // namespace ckt
