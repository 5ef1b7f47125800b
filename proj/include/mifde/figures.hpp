#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mifde/l1_stepper.hpp"
#include "mifde/stability.hpp"
#include "mifde/system_io.hpp"
#include "mifde/types.hpp"

namespace mifde {
namespace figures {

/// Boundary theta at d = 1 for the (1/2, 1) family: sqrt(2(1+sqrt(3))).
inline double theta_half_one() { return std::sqrt(2.0 * (1.0 + std::sqrt(3.0))); }

/// Boundary theta at d = 1 for the (1/3, 2/3) family: (sqrt(3)/4) sqrt(sqrt(33)-1).
inline double theta_third_twothird() {
    return std::sqrt(3.0) / 4.0 * std::sqrt(std::sqrt(33.0) - 1.0);
}

/// Rotation-family matrix [[d, -theta], [theta, d]] with eigenvalues d +/- i theta.
inline Eigen::MatrixXd rotation_matrix(double d, double theta) {
    Eigen::MatrixXd A(2, 2);
    A << d, -theta, theta, d;
    return A;
}

/// Symmetric-coupling matrix [[d, theta], [theta, d]] with eigenvalues d +/- theta.
inline Eigen::MatrixXd symmetric_matrix(double d, double theta) {
    Eigen::MatrixXd A(2, 2);
    A << d, theta, theta, d;
    return A;
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
    return g;
}

struct BoundaryFigure {
    BoundaryCurve curve;
    double midpoint_angle; // reference line, units of pi
};

/// Stability-boundary dataset for the (1/2, 1) orders; the reference line is
/// the midpoint 3/8 of the admissible angle range (1/4, 1/2).
inline BoundaryFigure fig2_data(int samples = 601) {
    return {boundary_curve(0.5, 1.0, log_grid(1e-3, 1e3, samples)), 3.0 / 8.0};
}

/// Same for the (1/3, 2/3) orders; admissible range (1/6, 1/3), midpoint 1/4.
inline BoundaryFigure fig3_data(int samples = 601) {
    return {boundary_curve(1.0 / 3.0, 2.0 / 3.0, log_grid(1e-3, 1e3, samples)), 0.25};
}

inline Trajectory decimate(const Trajectory& traj, int stride) {
    if (stride <= 1) return traj;
    const Eigen::Index n = (traj.times.size() + stride - 1) / stride;
    Trajectory out;
    out.solver = traj.solver;
    out.step_size = traj.step_size;
    out.warnings = traj.warnings;
    out.times.resize(n);
    out.states.resize(n, traj.states.cols());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < traj.times.size(); i += stride, ++k) {
        out.times[k] = traj.times[i];
        out.states.row(k) = traj.states.row(i);
    }
    return out;
}

inline Trajectory l1_rotation_run(double alpha, double beta, double d, double theta,
                                  double t_end, double h, int out_stride) {
    MultiIndexSystem sys;
    sys.A = rotation_matrix(d, theta);
    sys.orders = {alpha, beta};
    sys.y0 = Eigen::Vector2d(1.0, 0.0);
    return decimate(step_solve(sys, h, static_cast<int>(std::llround(t_end / h))), out_stride);
}

/// Step sizes for the Figure 4 runs. The boundary cases sit exactly on the
/// stability edge, where the implicit scheme's own dissipation damps the
/// marginal oscillation at a rate proportional to h (the beta = 1 row is
/// backward Euler, the dominant contribution for the (1/2, 1) pair); these
/// values keep the artificial per-cycle envelope decay under ~4% across the
/// 40-unit horizon. The decaying runs tolerate a coarser step.
inline constexpr double kFig4StepHalfOne = 2e-4;
inline constexpr double kFig4StepThirds = 1e-3;
inline constexpr double kFig4StepPerturbed = 1e-3;
inline constexpr double kFig4THorizon = 40.0;

struct Fig4Data {
    double theta_a = 0.0; // boundary theta for orders (1/2, 1)
    double theta_b = 0.0; // boundary theta for orders (1/3, 2/3)
    Trajectory a_boundary, a_perturbed;
    Trajectory b_boundary, b_perturbed;
};

/// The two decaying (theta + 0.3) trajectories; also the data behind the
/// phase plots.
inline Fig4Data fig4_perturbed_data() {
    Fig4Data f;
    f.theta_a = theta_half_one();
    f.theta_b = theta_third_twothird();
    const double T = kFig4THorizon;
    f.a_perturbed = l1_rotation_run(0.5, 1.0, 1.0, f.theta_a + 0.3, T, kFig4StepPerturbed, 5);
    f.b_perturbed = l1_rotation_run(1.0 / 3.0, 2.0 / 3.0, 1.0, f.theta_b + 0.3, T, kFig4StepPerturbed, 5);
    return f;
}

/// Four trajectories at d = 1: boundary theta and theta + 0.3 for both order
/// pairs. The boundary runs show sustained oscillation, the perturbed ones
/// decay.
inline Fig4Data fig4_data() {
    Fig4Data f = fig4_perturbed_data();
    const double T = kFig4THorizon;
    f.a_boundary = l1_rotation_run(0.5, 1.0, 1.0, f.theta_a, T, kFig4StepHalfOne, 25);
    f.b_boundary = l1_rotation_run(1.0 / 3.0, 2.0 / 3.0, 1.0, f.theta_b, T, kFig4StepThirds, 5);
    return f;
}

struct Fig6Run {
    double alpha, beta;
    Trajectory traj;
};

/// Effect of order separation: A = [[d, theta], [theta, d]] with d = -1,
/// theta = 1/2 (eigenvalues -3/2 and -1/2) for four (alpha, beta) pairs,
/// started from y0 = (1, 1).
inline std::vector<Fig6Run> fig6_data(double t_end = 10.0, double h = 1e-3) {
    const double pairs[4][2] = {{0.85, 0.95}, {0.5, 0.95}, {0.2, 0.05}, {0.15, 0.95}};
    std::vector<Fig6Run> runs;
    for (const auto& p : pairs) {
        MultiIndexSystem sys;
        sys.A = symmetric_matrix(-1.0, 0.5);
        sys.orders = {p[0], p[1]};
        sys.y0 = Eigen::Vector2d(1.0, 1.0);
        runs.push_back({p[0], p[1],
                        decimate(step_solve(sys, h, static_cast<int>(std::llround(t_end / h))), 5)});
    }
    return runs;
}

inline void write_boundary_csv(const BoundaryCurve& curve, std::ostream& out) {
    out << "x,r,d,theta,angle\n";
    for (const auto& s : curve.samples) {
        out << detail::format_g17(s.x) << "," << detail::format_g17(s.r) << ","
            << detail::format_g17(s.d) << "," << detail::format_g17(s.theta_over_d * s.d)
            << "," << detail::format_g17(s.angle) << "\n";
    }
}

inline void write_boundary_csv(const BoundaryCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write '" + path + "'");
    write_boundary_csv(curve, out);
}

inline void write_midpoint_csv(const BoundaryCurve& curve, double angle,
                               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write '" + path + "'");
    out << "d,angle\n";
    for (const auto& s : curve.samples)
        out << detail::format_g17(s.d) << "," << detail::format_g17(angle) << "\n";
}

} // namespace figures
} // namespace mifde
