#pragma once

// Test-side oracles, independent of the library's own numerical paths:
// adaptive quadrature, seeded random system generators, and simple signal
// analysis for the trajectory-shape checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mifde/rational.hpp"
#include "mifde/stability.hpp"
#include "mifde/types.hpp"

namespace oracles {

/// Adaptive Simpson quadrature with absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth = 40) {
    struct Rec {
        static double go(const std::function<double(double)>& f, double a, double b, double fa,
                         double fm, double fb, double whole, double tol, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return go(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
                   go(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
        }
    };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Rec::go(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Deterministic random 2x2 mixed system with the given rational orders,
/// redrawn until the rational-index test reports clear asymptotic stability
/// and the spectral poles are well separated from zero and from each other.
struct RandomSystems {
    std::mt19937 rng;
    explicit RandomSystems(unsigned seed) : rng(seed) {}

    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(rng);
    }

    mifde::MixedSystem stable_2x2(const mifde::Rational& a, const mifde::Rational& b) {
        for (;;) {
            mifde::MixedSystem sys;
            sys.m1 = sys.m2 = 1;
            sys.alpha = a;
            sys.beta = b;
            sys.A.resize(2, 2);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) sys.A(r, c) = uniform(-2.0, 2.0);
            sys.y0 = Eigen::Vector2d(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
            if (std::abs(sys.A.determinant()) < 0.05) continue;
            mifde::StabilityVerdict v;
            try {
                v = mifde::rational_index_stable(sys.A, {a, b});
            } catch (const mifde::Error&) {
                continue;
            }
            if (!v.stable || v.margin < 0.05) continue;
            // Keep the spectral construction comfortable: simple, nonzero poles.
            bool ok = true;
            for (std::size_t i = 0; i < v.witnesses.size() && ok; ++i) {
                if (std::abs(v.witnesses[i].root) < 0.05) ok = false;
                for (std::size_t j = i + 1; j < v.witnesses.size() && ok; ++j)
                    if (std::abs(v.witnesses[i].root - v.witnesses[j].root) < 1e-3) ok = false;
            }
            if (ok) return sys;
        }
    }

    /// Random block system with equal orders (used by the series<->ML check).
    /// The spectral radius is capped so the underlying series itself keeps
    /// full double precision at the small orders; beyond |z| of a few, both
    /// series routes lose digits to the same cancellation and the comparison
    /// would measure noise, not agreement.
    mifde::MixedSystem random_equal_order(double alpha, int m1, int m2) {
        mifde::MixedSystem sys;
        sys.m1 = m1;
        sys.m2 = m2;
        sys.alpha = alpha;
        sys.beta = alpha;
        sys.A.resize(m1 + m2, m1 + m2);
        for (Eigen::Index r = 0; r < sys.A.rows(); ++r)
            for (Eigen::Index c = 0; c < sys.A.cols(); ++c) sys.A(r, c) = uniform(-1.0, 1.0);
        const double rho = sys.A.eigenvalues().cwiseAbs().maxCoeff();
        if (rho > 1.2) sys.A *= 1.2 / rho;
        sys.y0.resize(m1 + m2);
        for (Eigen::Index i = 0; i < sys.y0.size(); ++i) sys.y0[i] = uniform(-1.0, 1.0);
        return sys;
    }
};

/// Indices of strict local maxima of a sampled signal.
inline std::vector<Eigen::Index> peak_indices(const Eigen::VectorXd& y) {
    std::vector<Eigen::Index> peaks;
    for (Eigen::Index i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] > y[i + 1]) peaks.push_back(i);
    return peaks;
}

/// Local maxima that drop by at least `frac` of the signal's full range
/// before the next maximum (or the end). This keeps the peaks of the visible
/// oscillation and discards micro-ripples riding on a slow algebraic tail.
inline std::vector<Eigen::Index> prominent_peaks(const Eigen::VectorXd& y, double frac) {
    const double range = y.maxCoeff() - y.minCoeff();
    const auto all = peak_indices(y);
    std::vector<Eigen::Index> kept;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const Eigen::Index stop = (i + 1 < all.size()) ? all[i + 1] : y.size() - 1;
        double lo = y[all[i]];
        for (Eigen::Index k = all[i]; k <= stop; ++k) lo = std::min(lo, y[k]);
        if (y[all[i]] - lo >= frac * range) kept.push_back(all[i]);
    }
    return kept;
}

/// Peak-to-peak amplitude of each oscillation cycle: for every local maximum,
/// the height above the lowest point reached before the next maximum. The
/// slow algebraic drift of fractional trajectories moves consecutive cycles
/// together, so this isolates the oscillation envelope.
inline std::vector<double> cycle_amplitudes(const Eigen::VectorXd& y) {
    const auto peaks = peak_indices(y);
    std::vector<double> amp;
    for (std::size_t i = 0; i + 1 < peaks.size(); ++i) {
        double lo = y[peaks[i]];
        for (Eigen::Index k = peaks[i]; k <= peaks[i + 1]; ++k) lo = std::min(lo, y[k]);
        amp.push_back(y[peaks[i]] - lo);
    }
    return amp;
}

} // namespace oracles
