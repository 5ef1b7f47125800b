#pragma once

#include <cmath>
#include <limits>

namespace mifde {

namespace detail {

// Lanczos approximation, g = 7, 9 terms. Good to ~15 significant digits on
// the positive axis, which is what the log-space series assembly relies on.
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};
inline constexpr double kHalfLogTwoPi = 0.91893853320467274178;

/// sin(pi*x) with argument reduction done on x itself, so large or
/// near-integer x do not lose accuracy to pi-rounding.
inline double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r > 1.0)
        r -= 2.0;
    else if (r < -1.0)
        r += 2.0;
    if (r > 0.5)
        r = 1.0 - r;
    else if (r < -0.5)
        r = -1.0 - r;
    return std::sin(M_PI * r);
}

inline double log_gamma_positive(double x) {
    // Lanczos evaluated for x >= 0.5.
    const double xm1 = x - 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (xm1 + i);
    const double t = xm1 + kLanczosG + 0.5;
    return kHalfLogTwoPi + (xm1 + 0.5) * std::log(t) - t + std::log(acc);
}

} // namespace detail

/// ln|Gamma(x)| together with the sign of Gamma(x). sign == 0 marks a pole
/// (x a non-positive integer), where log_abs is +inf.
struct SignedLogGamma {
    double log_abs = 0.0;
    int sign = 1;
};

inline SignedLogGamma log_gamma_signed(double x) {
    if (x >= 0.5) return {detail::log_gamma_positive(x), 1};
    if (x == std::floor(x)) {
        // Non-positive integer: pole of Gamma.
        return {std::numeric_limits<double>::infinity(), 0};
    }
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    const double s = detail::sin_pi(x);
    const double log_abs =
        std::log(M_PI) - std::log(std::abs(s)) - detail::log_gamma_positive(1.0 - x);
    return {log_abs, s > 0.0 ? 1 : -1};
}

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) { return log_gamma_signed(x).log_abs; }

/// 1/Gamma(x); exactly zero at the poles of Gamma.
inline double rgamma(double x) {
    const SignedLogGamma g = log_gamma_signed(x);
    if (g.sign == 0) return 0.0;
    return g.sign * std::exp(-g.log_abs);
}

inline double gamma_fn(double x) {
    const SignedLogGamma g = log_gamma_signed(x);
    if (g.sign == 0) return std::numeric_limits<double>::quiet_NaN();
    return g.sign * std::exp(g.log_abs);
}

} // namespace mifde
