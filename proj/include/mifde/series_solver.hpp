#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mifde/errors.hpp"
#include "mifde/gamma.hpp"
#include "mifde/types.hpp"

namespace mifde {

/// Coefficient pyramid of the index-2 series solution. Level n stores the
/// m x m(n+1) block matrix
///   L_n = [ a_{n,1} ... a_{n,n}   0     ]
///         [   0     b_{n,1} ... b_{n,n} ]
/// with L_0 = I_m, and each level obtained from the previous one by
///   [a_{n,1..n}; b_{n,1..n}] = A L_{n-1}
/// (the bottom block row is then shifted right by one block).
struct CoefficientPyramid {
    Eigen::MatrixXd A;
    Eigen::Index m1 = 0;
    Eigen::Index m2 = 0;
    std::vector<Eigen::MatrixXd> levels;

    int depth() const { return static_cast<int>(levels.size()) - 1; }

    /// m x m column block k (0-based) of level n.
    auto block(int n, int k) const {
        const Eigen::Index m = m1 + m2;
        return levels[static_cast<std::size_t>(n)].middleCols(k * m, m);
    }
};

inline void extend_pyramid(CoefficientPyramid& pyr, int depth) {
    const Eigen::Index m = pyr.m1 + pyr.m2;
    while (pyr.depth() < depth) {
        const Eigen::MatrixXd& prev = pyr.levels.back();
        const Eigen::Index ncols = prev.cols();
        Eigen::MatrixXd grown = pyr.A * prev; // m x m*n
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(m, ncols + m);
        next.topLeftCorner(pyr.m1, ncols) = grown.topRows(pyr.m1);
        next.block(pyr.m1, m, pyr.m2, ncols) = grown.bottomRows(pyr.m2);
        pyr.levels.push_back(std::move(next));
    }
}

inline CoefficientPyramid build_pyramid(const MixedSystem& sys, int depth) {
    sys.validate();
    if (depth < 0) throw DomainError("build_pyramid: negative depth");
    CoefficientPyramid pyr;
    pyr.A = sys.A;
    pyr.m1 = sys.m1;
    pyr.m2 = sys.m2;
    pyr.levels.push_back(Eigen::MatrixXd::Identity(sys.size(), sys.size()));
    extend_pyramid(pyr, depth);
    return pyr;
}

struct PEvalResult {
    Eigen::MatrixXd P;
    int levels_used = 0;
    bool precision_loss = false;
};

/// Evaluate P_{alpha,beta}(t) = sum_n L_n p_n(t). The basis entry multiplying
/// block j of level n is t^{n a + j(b-a)} / Gamma(1 + n a + j(b-a)), assembled
/// as exp(x ln t - lnGamma(1+x)) so large levels neither overflow nor hit 0^0.
/// Truncation waits for three consecutive levels below tol * |partial sum|
/// (level contributions are non-monotone for mixed orders); the pyramid is
/// extended on demand up to level_cap.
inline PEvalResult eval_P(CoefficientPyramid& pyr, const MixedSystem& sys, double t,
                          double tol, int level_cap = 300) {
    if (t < 0.0) throw DomainError("eval_P: negative time");
    const Eigen::Index m = sys.size();
    PEvalResult out;
    out.P = Eigen::MatrixXd::Identity(m, m);
    out.levels_used = 1;
    if (t == 0.0) return out;

    const double a = sys.alpha.value;
    const double b = sys.beta.value;
    const double log_t = std::log(t);

    double max_level = 1.0;
    int small_in_row = 0;
    for (int n = 1; n <= level_cap; ++n) {
        if (pyr.depth() < n) extend_pyramid(pyr, n);
        Eigen::MatrixXd contrib = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j <= n; ++j) {
            const double expo = n * a + j * (b - a);
            const double w = std::exp(expo * log_t - log_gamma(1.0 + expo));
            contrib.noalias() += pyr.block(n, j) * w;
        }
        out.P += contrib;
        ++out.levels_used;
        const double cn = contrib.cwiseAbs().maxCoeff();
        max_level = std::max(max_level, cn);
        const double sn = out.P.cwiseAbs().maxCoeff();
        if (cn < tol * sn) {
            if (++small_in_row >= 3) {
                out.precision_loss = max_level > 1e12 * sn;
                return out;
            }
        } else {
            small_in_row = 0;
        }
    }
    throw NoConvergence("eval_P: level cap reached without convergence");
}

/// Homogeneous solve y(t_k) = P(t_k) y0 on the given grid.
inline Trajectory solve_series(const MixedSystem& sys, const Eigen::VectorXd& times,
                               double tol = 1e-12, int level_cap = 300) {
    sys.validate();
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        if (times[k] < 0.0 || (k > 0 && times[k] <= times[k - 1]))
            throw DomainError("solve_series: times must be increasing and nonnegative");
    }
    CoefficientPyramid pyr = build_pyramid(sys, 0);
    Trajectory traj;
    traj.solver = "series";
    traj.times = times;
    traj.states.resize(times.size(), sys.size());
    bool precision_loss = false;
    int max_depth = 0;
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        PEvalResult r = eval_P(pyr, sys, times[k], tol, level_cap);
        traj.states.row(k) = (r.P * sys.y0).transpose();
        precision_loss |= r.precision_loss;
        max_depth = std::max(max_depth, r.levels_used);
    }
    traj.depth = max_depth;
    if (precision_loss) traj.warnings.push_back("PrecisionLoss: dominant series level exceeded 1e12 * result");
    return traj;
}

/// Weights of the product-integration rule for
///   int_0^t (t-s)^{g-1} f(s) ds
/// with f interpolated piecewise-linearly on the nodes s_k = k t / n.
/// First-order accurate; the endpoint singularity is integrated exactly.
inline std::vector<double> frac_kernel_weights(double g, double t, int n) {
    std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
    const double dt = t / n;
    for (int k = 0; k < n; ++k) {
        const double uk = t - k * dt;       // distance from upper limit
        const double uk1 = t - (k + 1) * dt;
        const double A = (std::pow(uk, g) - std::pow(uk1, g)) / g;
        const double B = (std::pow(uk, g + 1.0) - std::pow(uk1, g + 1.0)) / (g + 1.0);
        w[static_cast<std::size_t>(k)] += (B - uk1 * A) / dt;
        w[static_cast<std::size_t>(k) + 1] += (uk * A - B) / dt;
    }
    return w;
}

/// Same rule scaled to the Riemann-Liouville integral I^g (kernel / Gamma(g)).
inline std::vector<double> frac_integral_weights(double g, double t, int n) {
    auto w = frac_kernel_weights(g, t, n);
    const double rg = rgamma(g);
    for (auto& wk : w) wk *= rg;
    return w;
}

using Forcing = std::function<Eigen::VectorXd(double)>;

/// Smooth part of the forced-response Green kernel. The kernel H with Laplace
/// transform (diag(s^alpha I, s^beta I) - A)^{-1} has column blocks
///   H(tau) cols_c = S_c(tau) * tau^{g_c - 1},  g_0 = alpha, g_1 = beta,
///   S_c(tau) = sum_n sum_j B_{n,j} cols_c * tau^{e_{n,j}} / Gamma(e_{n,j} + g_c),
/// with e_{n,j} the pyramid exponents n a + j(b-a). In the scalar equal-order
/// case S collapses to E_{alpha,alpha}(lambda tau^alpha), the classical Green
/// scalar Green function; at alpha = beta = 1 it is the matrix exponential.
inline Eigen::MatrixXd eval_green_smooth(CoefficientPyramid& pyr, const MixedSystem& sys,
                                         double tau, int block, double tol,
                                         int level_cap = 300) {
    const Eigen::Index m = sys.size();
    const Eigen::Index col0 = block == 0 ? 0 : sys.m1;
    const Eigen::Index ncols = block == 0 ? sys.m1 : sys.m2;
    const double g = block == 0 ? sys.alpha.value : sys.beta.value;
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(m, m).middleCols(col0, ncols) * rgamma(g);
    if (tau == 0.0) return S;

    const double a = sys.alpha.value;
    const double b = sys.beta.value;
    const double log_tau = std::log(tau);
    int small_in_row = 0;
    for (int n = 1; n <= level_cap; ++n) {
        if (pyr.depth() < n) extend_pyramid(pyr, n);
        Eigen::MatrixXd contrib = Eigen::MatrixXd::Zero(m, ncols);
        for (int j = 0; j <= n; ++j) {
            const double expo = n * a + j * (b - a);
            const double w = std::exp(expo * log_tau - log_gamma(expo + g));
            contrib.noalias() += pyr.block(n, j).middleCols(col0, ncols) * w;
        }
        S += contrib;
        const double cn = contrib.cwiseAbs().maxCoeff();
        const double sn = S.cwiseAbs().maxCoeff();
        if (cn < tol * sn) {
            if (++small_in_row >= 3) return S;
        } else {
            small_in_row = 0;
        }
    }
    throw NoConvergence("eval_green_smooth: level cap reached without convergence");
}

namespace detail {

inline Eigen::VectorXd forced_state(CoefficientPyramid& pyr, const MixedSystem& sys,
                                    const Forcing& F, double t, int substeps, double tol,
                                    int level_cap) {
    const Eigen::Index m = sys.size();
    Eigen::VectorXd y = eval_P(pyr, sys, t, tol, level_cap).P * sys.y0;
    if (t == 0.0) return y;
    const double dt = t / substeps;
    std::vector<Eigen::VectorXd> force(static_cast<std::size_t>(substeps) + 1);
    for (int k = 0; k <= substeps; ++k) force[static_cast<std::size_t>(k)] = F(k * dt);
    for (int block = 0; block < 2; ++block) {
        const double g = block == 0 ? sys.alpha.value : sys.beta.value;
        const Eigen::Index col0 = block == 0 ? 0 : sys.m1;
        const Eigen::Index ncols = block == 0 ? sys.m1 : sys.m2;
        const std::vector<double> w = frac_kernel_weights(g, t, substeps);
        for (int k = 0; k <= substeps; ++k) {
            const Eigen::MatrixXd S =
                eval_green_smooth(pyr, sys, t - k * dt, block, tol, level_cap);
            y.noalias() += w[static_cast<std::size_t>(k)] *
                           (S * force[static_cast<std::size_t>(k)].segment(col0, ncols));
        }
    }
    return y;
}

} // namespace detail

/// Forced solve: y(t) = P(t) y0 + int_0^t H(t-s) F(s) ds with the Green kernel
/// H = L^{-1}[(diag(s^a I, s^b I) - A)^{-1}]. The integral is evaluated
/// blockwise by product integration: the (t-s)^{g-1} kernel factor is handled
/// exactly and the smooth factor S(t-s) F(s) piecewise-linearly (first order).
inline Trajectory solve_series_forced(const MixedSystem& sys, const Forcing& F,
                                      const Eigen::VectorXd& times, int substeps,
                                      double tol = 1e-12, int level_cap = 300) {
    sys.validate();
    if (substeps < 8) throw DomainError("solve_series_forced: substeps must be >= 8");
    CoefficientPyramid pyr = build_pyramid(sys, 0);
    Trajectory traj;
    traj.solver = "series_forced";
    traj.times = times;
    traj.states.resize(times.size(), sys.size());
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        if (times[k] < 0.0 || (k > 0 && times[k] <= times[k - 1]))
            throw DomainError("solve_series_forced: times must be increasing and nonnegative");
        traj.states.row(k) =
            detail::forced_state(pyr, sys, F, times[k], substeps, tol, level_cap).transpose();
    }
    // Resolution check at the final time: refine once and compare.
    if (times.size() > 0 && times[times.size() - 1] > 0.0) {
        const Eigen::VectorXd fine = detail::forced_state(pyr, sys, F, times[times.size() - 1],
                                                          2 * substeps, tol, level_cap);
        const double diff =
            (fine.transpose() - traj.states.row(times.size() - 1)).cwiseAbs().maxCoeff();
        if (diff > 10.0 * std::max(tol, 1e-14))
            traj.warnings.push_back("QuadratureUnderResolved: doubling substeps moved the result by " +
                                    std::to_string(diff));
    }
    return traj;
}

} // namespace mifde
