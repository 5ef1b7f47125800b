#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

#include "mifde/errors.hpp"
#include "mifde/gamma.hpp"
#include "mifde/types.hpp"

namespace mifde {

/// Discrete Caputo kernel of the L1 scheme on a uniform mesh of size h:
///   D^a y(t_n) ~ c_a * sum_{j=1}^n w_j (y_{n-j+1} - y_{n-j}),
///   w_j = j^{1-a} - (j-1)^{1-a},  c_a = 1 / (Gamma(2-a) h^a).
/// w_1 = 1 and the weights decrease in j for a in (0,1). a = 1 reduces to the
/// backward difference (all w_j vanish for j >= 2, taking 0^0 = 1).
struct L1Weights {
    double alpha = 1.0;
    double scale = 0.0;
    std::vector<double> w; // w[j] valid for j = 1..n

    static L1Weights build(double alpha, double h, int n) {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("L1Weights: order outside (0,1]");
        if (!(h > 0.0)) throw DomainError("L1Weights: nonpositive step");
        L1Weights lw;
        lw.alpha = alpha;
        lw.scale = 1.0 / (gamma_fn(2.0 - alpha) * std::pow(h, alpha));
        lw.w.assign(static_cast<std::size_t>(n) + 1, 0.0);
        if (alpha == 1.0) {
            if (n >= 1) lw.w[1] = 1.0;
            return lw;
        }
        const double e = 1.0 - alpha;
        double prev = 0.0; // 0^{1-a} = 0 for a < 1
        for (int j = 1; j <= n; ++j) {
            const double cur = std::pow(static_cast<double>(j), e);
            lw.w[static_cast<std::size_t>(j)] = cur - prev;
            prev = cur;
        }
        return lw;
    }
};

/// Implicit L1 time stepping for D^{a_i} y_i = (A y)_i + F_i(t). At step n the
/// dense system (C - A) y_n = C y_{n-1} - C H_n + F(t_n) is solved, where
/// C = diag(c_{a_i}) and H_n collects the convolution history; C - A is
/// factored once since it does not change across steps. History is kept
/// densely (O(n) work per step), which is what the convergence tests assume.
inline Trajectory step_solve(const MultiIndexSystem& sys, double h, int n_steps) {
    sys.validate();
    if (!(h > 0.0)) throw DomainError("step_solve: step size must be positive");
    if (n_steps < 1) throw DomainError("step_solve: need at least one step");

    const Eigen::Index m = sys.size();
    std::vector<L1Weights> lw(static_cast<std::size_t>(m));
    std::map<double, std::vector<double>> reversed; // order -> reversed weights
    for (Eigen::Index i = 0; i < m; ++i) {
        const double a = sys.orders[static_cast<std::size_t>(i)];
        lw[static_cast<std::size_t>(i)] = L1Weights::build(a, h, n_steps + 1);
        if (a < 1.0 && !reversed.count(a)) {
            // wr[idx] = w[n_steps + 1 - idx]; the history sum at step n becomes
            // a forward dot product over wr[n_steps - n + k] * d[k].
            std::vector<double> wr(static_cast<std::size_t>(n_steps) + 2, 0.0);
            const auto& w = lw[static_cast<std::size_t>(i)].w;
            for (int idx = 0; idx <= n_steps + 1; ++idx) {
                const int j = n_steps + 1 - idx;
                if (j >= 0 && j <= n_steps + 1) wr[static_cast<std::size_t>(idx)] = w[static_cast<std::size_t>(j)];
            }
            reversed.emplace(a, std::move(wr));
        }
    }

    Eigen::MatrixXd lhs = -sys.A;
    for (Eigen::Index i = 0; i < m; ++i) lhs(i, i) += lw[static_cast<std::size_t>(i)].scale;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    {
        const Eigen::VectorXd du = lu.matrixLU().diagonal().cwiseAbs();
        const double dmin = du.minCoeff();
        const double dmax = du.maxCoeff();
        if (!(dmin > 0.0) || dmin / dmax < 1e-14)
            throw SingularMatrix("step_solve: C - A singular to working precision (pivot ratio " +
                                 std::to_string(dmax > 0.0 ? dmin / dmax : 0.0) + ")");
    }

    // Per-component contiguous difference buffers d[k] = y_k - y_{k-1}.
    std::vector<std::vector<double>> diff(static_cast<std::size_t>(m));
    for (auto& d : diff) d.assign(static_cast<std::size_t>(n_steps) + 1, 0.0);

    Trajectory traj;
    traj.solver = "l1";
    traj.step_size = h;
    traj.times.resize(n_steps + 1);
    traj.states.resize(n_steps + 1, m);
    traj.times[0] = 0.0;
    traj.states.row(0) = sys.y0.transpose();

    Eigen::VectorXd y = sys.y0;
    Eigen::VectorXd rhs(m);
    for (int n = 1; n <= n_steps; ++n) {
        const double tn = n * h;
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const double a = sys.orders[ii];
            double hist = 0.0;
            if (a < 1.0 && n >= 2) {
                const double* wr = reversed.at(a).data() + (n_steps - n);
                const double* d = diff[ii].data();
                // Four independent accumulators keep the FMA pipeline full; the
                // summation order is still fixed, so results stay deterministic.
                double h0 = 0.0, h1 = 0.0, h2 = 0.0, h3 = 0.0;
                int k = 1;
                for (; k + 3 <= n - 1; k += 4) {
                    h0 += wr[k] * d[k];
                    h1 += wr[k + 1] * d[k + 1];
                    h2 += wr[k + 2] * d[k + 2];
                    h3 += wr[k + 3] * d[k + 3];
                }
                for (; k <= n - 1; ++k) h0 += wr[k] * d[k];
                hist = (h0 + h1) + (h2 + h3);
            }
            rhs[i] = lw[ii].scale * (y[i] - hist);
        }
        if (sys.forcing) rhs += sys.forcing(tn);
        const Eigen::VectorXd ynew = lu.solve(rhs);
        for (Eigen::Index i = 0; i < m; ++i)
            diff[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] = ynew[i] - y[i];
        y = ynew;
        traj.times[n] = tn;
        traj.states.row(n) = y.transpose();
    }
    return traj;
}

/// Discrete Caputo derivative of sampled data (the L1 operator applied to the
/// columns of a trajectory). Row n-1 of the result is the derivative at t_n,
/// n = 1..N; the operator is not defined at t_0.
inline Eigen::MatrixXd caputo_apply(const Trajectory& samples, double order, double h) {
    const Eigen::Index N = samples.times.size() - 1;
    if (N < 1) throw DomainError("caputo_apply: need at least two samples");
    for (Eigen::Index k = 0; k < N; ++k) {
        const double dt = samples.times[k + 1] - samples.times[k];
        if (std::abs(dt - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw NonUniformGrid("caputo_apply: grid spacing does not match h");
    }
    const Eigen::Index m = samples.states.cols();
    const L1Weights lw = L1Weights::build(order, h, static_cast<int>(N));
    Eigen::MatrixXd diff = samples.states.bottomRows(N) - samples.states.topRows(N);
    Eigen::MatrixXd out(N, m);
    for (Eigen::Index n = 1; n <= N; ++n) {
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(m);
        for (Eigen::Index j = 1; j <= n; ++j)
            acc += lw.w[static_cast<std::size_t>(j)] * diff.row(n - j);
        out.row(n - 1) = lw.scale * acc;
    }
    return out;
}

} // namespace mifde
