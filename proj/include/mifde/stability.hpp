#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "mifde/errors.hpp"
#include "mifde/polynomial.hpp"
#include "mifde/rational.hpp"
#include "mifde/types.hpp"

namespace mifde {

/// Verdicts within MARGIN_EPS of the sector edge are reported as marginal;
/// the boundary instances of the rotation family land there exactly.
inline constexpr double kMarginEps = 1e-9;

enum class StabilityClass { Stable, Unstable, Marginal };

struct RootWitness {
    Complex root;
    double arg = 0.0;
};

/// Outcome of a sector test. margin is the smallest |arg(root)| - g*pi/2 over
/// the tested roots (radians); stable <=> margin > 0.
struct StabilityVerdict {
    bool stable = false;
    double margin = 0.0;
    double sector_half_angle = 0.0;
    std::vector<RootWitness> witnesses;
    std::vector<Complex> zero_roots; // excluded from the verdict, reported

    StabilityClass classification() const {
        if (std::abs(margin) <= kMarginEps) return StabilityClass::Marginal;
        return margin > 0.0 ? StabilityClass::Stable : StabilityClass::Unstable;
    }
};

namespace detail {

inline StabilityVerdict sector_verdict(const std::vector<Complex>& roots, double half_angle) {
    StabilityVerdict v;
    v.sector_half_angle = half_angle;
    v.margin = std::numeric_limits<double>::infinity();
    for (const Complex& r : roots) {
        if (std::abs(r) < 1e-10) {
            v.zero_roots.push_back(r);
            continue;
        }
        const double a = std::abs(std::arg(r));
        v.witnesses.push_back({r, a});
        v.margin = std::min(v.margin, a - half_angle);
    }
    if (v.witnesses.empty()) v.margin = 0.0;
    v.stable = v.margin > 0.0;
    return v;
}

} // namespace detail

/// Matignon sector test for the single-order system D^a y = A y: stable iff
/// every eigenvalue of A satisfies |arg(lambda)| > a*pi/2.
inline StabilityVerdict matignon_stable(const Eigen::MatrixXd& A, double alpha) {
    if (A.rows() != A.cols()) throw DimensionMismatch("matignon_stable: A not square");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("matignon_stable: alpha outside (0,1]");
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
    std::vector<Complex> eigs(static_cast<std::size_t>(A.rows()));
    for (Eigen::Index i = 0; i < A.rows(); ++i) eigs[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    StabilityVerdict v = detail::sector_verdict(eigs, alpha * M_PI / 2.0);
    // A zero eigenvalue rules out asymptotic stability outright.
    if (!v.zero_roots.empty()) {
        v.stable = false;
        v.margin = std::min(v.margin, -alpha * M_PI / 2.0);
    }
    return v;
}

/// Rational-order sector test: with M the lcm of the order denominators and
/// p(lambda) = Det(diag(lambda^{M a_i}) - A), the system is asymptotically
/// stable iff every root satisfies |arg(lambda)| > pi/(2M). Roots below 1e-10
/// in magnitude are excluded from the verdict and reported separately.
inline StabilityVerdict rational_index_stable(const Eigen::MatrixXd& A,
                                              const std::vector<Rational>& orders) {
    auto [poly, M] = characteristic_polynomial(A, orders);
    RootSet rs = find_roots(poly);
    if (!rs.converged)
        throw NoConvergence("rational_index_stable: characteristic roots did not converge");
    return detail::sector_verdict(rs.roots, M_PI / (2.0 * static_cast<double>(M)));
}

/// Two-term scalar criterion for D^a y + a_coef D^b y + b_coef y = 0 with
/// a > b > 0 and a/b rational:
///   b_coef > 0, b < 2, a - b < 2, and
///   a_coef > -sin(a pi/2) b_coef^{(a-b)/a}
///            / ( sin(b pi/2)^{b/a} sin((a-b) pi/2)^{(a-b)/a} ).
inline bool two_term_stable(double a_coef, double b_coef, double alpha, double beta) {
    if (!(alpha > beta && beta > 0.0))
        throw DomainError("two_term_stable: need alpha > beta > 0");
    if (!Rational::from_double(beta / alpha, 1000, 1e-9))
        throw DomainError("two_term_stable: alpha/beta must be rational");
    if (!(beta < 2.0 && alpha - beta < 2.0)) return false;
    if (!(b_coef > 0.0)) return false;
    const double threshold =
        -std::sin(alpha * M_PI / 2.0) * std::pow(b_coef, (alpha - beta) / alpha) /
        (std::pow(std::sin(beta * M_PI / 2.0), beta / alpha) *
         std::pow(std::sin((alpha - beta) * M_PI / 2.0), (alpha - beta) / alpha));
    return a_coef > threshold;
}

/// One point of the asymptotic-stability boundary of the rotation family
/// A = [[d, -theta], [theta, d]] (eigenvalues d +/- i theta), parameterized by
/// x = r^{alpha-beta}. angle is (1/pi) arctan(theta/d).
struct BoundarySample {
    double x = 0.0;
    double r = 0.0;
    double d = 0.0;
    double theta_over_d = 0.0;
    double angle = 0.0;
};

struct BoundaryCurve {
    std::vector<BoundarySample> samples;
    bool degenerate = false; // alpha == beta: constant Matignon angle
};

namespace detail {

struct BoundaryCoeffs {
    double a, b;  // relabeled so a > b
    double K, L;  // K = sin(a pi/2) sin(b pi/2)/sin^2((a+b) pi/2), L = 2 cos((a+b) pi/2)
    double sa, sb, sab;
};

inline BoundaryCoeffs boundary_coeffs(double alpha, double beta) {
    BoundaryCoeffs c;
    c.a = std::max(alpha, beta);
    c.b = std::min(alpha, beta);
    c.sa = std::sin(c.a * M_PI / 2.0);
    c.sb = std::sin(c.b * M_PI / 2.0);
    c.sab = std::sin((c.a + c.b) * M_PI / 2.0);
    c.K = c.sa * c.sb / (c.sab * c.sab);
    c.L = 2.0 * std::cos((c.a + c.b) * M_PI / 2.0);
    return c;
}

inline BoundarySample boundary_sample_at_x(const BoundaryCoeffs& c, double x) {
    BoundarySample s;
    s.x = x;
    s.r = std::pow(x, 1.0 / (c.a - c.b));
    const double phi2 = c.K * ((x * x + 1.0) / x - c.L);
    s.theta_over_d = std::sqrt(phi2);
    s.d = std::pow(x, c.a / (c.a - c.b)) * c.sab / (x * c.sa + c.sb);
    s.angle = std::atan(s.theta_over_d) / M_PI;
    return s;
}

} // namespace detail

/// Boundary curve sampled over an x-grid. Requires distinct orders; with
/// alpha == beta the boundary is the constant Matignon angle and a single
/// flagged sample is returned. Callers may pass the orders in either order.
inline BoundaryCurve boundary_curve(double alpha, double beta,
                                    const std::vector<double>& x_grid) {
    if (!(alpha > 0.0 && alpha <= 1.0 && beta > 0.0 && beta <= 1.0))
        throw DomainError("boundary_curve: orders outside (0,1]");
    BoundaryCurve curve;
    if (alpha == beta) {
        BoundarySample s;
        s.x = 1.0;
        s.r = 1.0;
        s.d = 1.0;
        s.theta_over_d = std::tan(alpha * M_PI / 2.0);
        s.angle = alpha / 2.0;
        curve.samples.push_back(s);
        curve.degenerate = true;
        return curve;
    }
    const detail::BoundaryCoeffs c = detail::boundary_coeffs(alpha, beta);
    curve.samples.reserve(x_grid.size());
    for (double x : x_grid) {
        if (!(x > 0.0)) throw DomainError("boundary_curve: x grid must be positive");
        curve.samples.push_back(detail::boundary_sample_at_x(c, x));
    }
    std::sort(curve.samples.begin(), curve.samples.end(),
              [](const BoundarySample& u, const BoundarySample& v) { return u.d < v.d; });
    return curve;
}

/// Boundary sample at a prescribed d. d(x) is strictly increasing, so the
/// inverse is found by bracketing and bisection in x.
inline BoundarySample boundary_sample_at_d(double alpha, double beta, double d) {
    if (!(d > 0.0)) throw DomainError("boundary_sample_at_d: d must be positive");
    if (alpha == beta) throw DomainError("boundary_sample_at_d: orders must differ");
    const detail::BoundaryCoeffs c = detail::boundary_coeffs(alpha, beta);
    double lo = 1.0, hi = 1.0;
    while (detail::boundary_sample_at_x(c, lo).d > d) lo *= 0.5;
    while (detail::boundary_sample_at_x(c, hi).d < d) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (detail::boundary_sample_at_x(c, mid).d < d ? lo : hi) = mid;
    }
    return detail::boundary_sample_at_x(c, 0.5 * (lo + hi));
}

/// Closed-form theta/d of the boundary for the commensurate case alpha = 2 beta
/// (the + branch), with the (1, 1/2) and (2/3, 1/3) order pairs evaluated
/// through their explicit radicals.
inline double boundary_closed_form(double alpha, double beta, double d) {
    const double a = std::max(alpha, beta);
    const double b = std::min(alpha, beta);
    if (std::abs(a - 2.0 * b) > 1e-12)
        throw DomainError("boundary_closed_form: requires alpha = 2 beta");
    if (!(d > 0.0)) throw DomainError("boundary_closed_form: d must be positive");

    if (std::abs(a - 1.0) < 1e-12) {
        // (alpha, beta) = (1, 1/2): tan = sqrt((1+d)(1+sqrt(1+2/d)))
        return std::sqrt((1.0 + d) * (1.0 + std::sqrt(1.0 + 2.0 / d)));
    }
    if (std::abs(a - 2.0 / 3.0) < 1e-12) {
        // (alpha, beta) = (2/3, 1/3):
        // tan = sqrt(3/8) sqrt((1+d/2) sqrt(1+8/(3d)) + d/2 - 1)
        return std::sqrt(3.0 / 8.0) *
               std::sqrt((1.0 + d / 2.0) * std::sqrt(1.0 + 8.0 / (3.0 * d)) + d / 2.0 - 1.0);
    }
    const double sb = std::sin(b * M_PI / 2.0);
    const double s3b = std::sin(3.0 * b * M_PI / 2.0);
    const double sbpi = std::sin(b * M_PI);
    const double db = d * sb / s3b;
    const double ratio = sbpi / s3b; // d_alpha / d
    const double inner = 1.0 + (4.0 / d) * (sb * s3b) / (sbpi * sbpi);
    const double last = 2.0 * std::cos(3.0 * b * M_PI / 2.0) / std::cos(b * M_PI / 2.0);
    const double phi2 =
        0.5 * ratio * ratio * (db - 1.0 + (1.0 + db) * std::sqrt(inner) - last);
    return std::sqrt(phi2);
}

/// Infimum of theta/d over the boundary,
///   sqrt(sin(a pi/2) sin(b pi/2)) / cos((a+b) pi/4),
/// attained at x = 1. Equals tan(a pi/2) when a = b; +infinity when a+b = 2.
inline double boundary_infimum(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha <= 1.0 && beta > 0.0 && beta <= 1.0))
        throw DomainError("boundary_infimum: orders outside (0,1]");
    if (alpha + beta == 2.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(std::sin(alpha * M_PI / 2.0) * std::sin(beta * M_PI / 2.0)) /
           std::cos((alpha + beta) * M_PI / 4.0);
}

} // namespace mifde
