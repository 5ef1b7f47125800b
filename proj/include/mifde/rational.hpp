#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

#include "mifde/errors.hpp"

namespace mifde {

/// Exact rational number, kept reduced with positive denominator.
/// Used for fractional orders m/n where the characteristic-polynomial and
/// spectral machinery needs exact integer exponents.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;

    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw DomainError("Rational: zero denominator");
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

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool positive() const { return num > 0; }

    /// True when the value lies in (0, 1].
    bool in_unit_interval() const { return num > 0 && num <= den; }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    /// Best continued-fraction approximation with denominator <= max_den.
    /// Returns nullopt when no convergent comes within tol of x.
    static std::optional<Rational> from_double(double x, std::int64_t max_den = 1000,
                                               double tol = 1e-9) {
        if (!std::isfinite(x)) return std::nullopt;
        const int sign = x < 0 ? -1 : 1;
        double v = std::abs(x);
        std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
        double frac = v;
        for (int it = 0; it < 64; ++it) {
            const double fl = std::floor(frac);
            if (fl > 1e17) break;
            const std::int64_t a = static_cast<std::int64_t>(fl);
            const std::int64_t p2 = a * p1 + p0;
            const std::int64_t q2 = a * q1 + q0;
            if (q2 > max_den) break;
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            if (std::abs(v - static_cast<double>(p1) / static_cast<double>(q1)) < tol)
                return Rational(sign * p1, q1);
            const double rem = frac - fl;
            if (rem < 1e-15) break;
            frac = 1.0 / rem;
        }
        if (q1 > 0 &&
            std::abs(v - static_cast<double>(p1) / static_cast<double>(q1)) < tol)
            return Rational(sign * p1, q1);
        return std::nullopt;
    }
};

/// lcm with an explicit cap; fractional-order denominators multiply up fast.
inline std::int64_t lcm_checked(std::int64_t a, std::int64_t b,
                                std::int64_t cap = 1'000'000) {
    const std::int64_t l = std::lcm(a, b);
    if (l <= 0 || l > cap)
        throw DomainError("lcm of order denominators exceeds supported range");
    return l;
}

} // namespace mifde
