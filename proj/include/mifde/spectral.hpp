#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mifde/errors.hpp"
#include "mifde/mittag_leffler.hpp"
#include "mifde/polynomial.hpp"
#include "mifde/types.hpp"

namespace mifde {

/// Closed-form solution data for the scalar-block index-2 system with rational
/// orders: poles lambda_j of Det(z) in the variable z = s^{ml_alpha} together
/// with per-component residues, so that
///   y_i(t) = Re( t^{ml_beta - 1} sum_j A_j^{(i)} E_{ml_alpha, ml_beta}(lambda_j t^{ml_alpha}) ).
/// The t^{ml_beta-1} factor is what makes each term the inverse Laplace
/// transform of s^{ml_alpha-ml_beta}/(s^{ml_alpha}-lambda_j); it is identically
/// 1 in the commensurate construction (ml_beta = 1). init_moment is the power
/// sum index recovering y(0): y_i(0) = sum_j A_j^{(i)} lambda_j^{init_moment}.
struct SpectralForm {
    std::vector<Complex> poles;
    Eigen::MatrixXcd residues; // 2 x N, row per component
    double ml_alpha = 1.0;
    double ml_beta = 1.0;
    int init_moment = 0;
};

namespace detail {

struct ScalarBlocks {
    double a1, a2, b1, b2, y10, y20;
    Rational alpha, beta;
    bool swapped = false;
};

inline ScalarBlocks scalar_blocks(const MixedSystem& sys) {
    sys.validate();
    if (sys.m1 != 1 || sys.m2 != 1)
        throw DomainError("spectral: requires two scalar blocks (m1 = m2 = 1)");
    if (!sys.alpha.exact || !sys.beta.exact)
        throw DomainError("spectral: requires exact rational orders");
    ScalarBlocks s;
    s.a1 = sys.A(0, 0);
    s.a2 = sys.A(0, 1);
    s.b1 = sys.A(1, 0);
    s.b2 = sys.A(1, 1);
    s.y10 = sys.y0[0];
    s.y20 = sys.y0[1];
    s.alpha = *sys.alpha.exact;
    s.beta = *sys.beta.exact;
    // Convention alpha <= beta; relabel the blocks otherwise.
    if (s.alpha.value() > s.beta.value()) {
        std::swap(s.a1, s.b2);
        std::swap(s.a2, s.b1);
        std::swap(s.y10, s.y20);
        std::swap(s.alpha, s.beta);
        s.swapped = true;
    }
    return s;
}

inline SpectralForm assemble(const ScalarBlocks& s, std::vector<Complex> det_coeffs,
                             std::vector<Complex> p1, std::vector<Complex> p2,
                             double ml_alpha, double ml_beta, int init_moment) {
    const ComplexPolynomial det(std::move(det_coeffs));
    PartialFractions pf = partial_fractions(
        {ComplexPolynomial(std::move(p1)), ComplexPolynomial(std::move(p2))}, det);
    for (const Complex& pole : pf.poles)
        if (std::abs(pole) < 1e-10)
            throw ZeroRoot("spectral: Det has a zero root (Det(A) = 0)");

    SpectralForm form;
    form.poles = pf.poles;
    form.ml_alpha = ml_alpha;
    form.ml_beta = ml_beta;
    form.init_moment = init_moment;
    const auto N = static_cast<Eigen::Index>(form.poles.size());
    form.residues.resize(2, N);
    for (Eigen::Index j = 0; j < N; ++j) {
        const auto js = static_cast<std::size_t>(j);
        form.residues(s.swapped ? 1 : 0, j) = pf.residues[0][js];
        form.residues(s.swapped ? 0 : 1, j) = pf.residues[1][js];
    }
    return form;
}

} // namespace detail

/// General rational decomposition: with alpha = m/n <= beta = p/q and
/// z = s^{1/(nq)},
///   Det(z)  = z^{mq+np} - a1 z^{np} - b2 z^{mq} + Det(A),
///   p1(z)   = y1(0) z^{np} + a2 y2(0) z^{np-mq} - b2 y1(0),
///   p2(z)   = y2(0) z^{np} - a1 y2(0) z^{np-mq} + b1 y1(0),
/// and ML parameters (1/(nq), 1 - alpha + 1/(nq)).
inline SpectralForm decompose(const MixedSystem& sys) {
    const detail::ScalarBlocks s = detail::scalar_blocks(sys);
    const auto m = static_cast<std::size_t>(s.alpha.num);
    const auto n = static_cast<std::size_t>(s.alpha.den);
    const auto p = static_cast<std::size_t>(s.beta.num);
    const auto q = static_cast<std::size_t>(s.beta.den);
    const std::size_t mq = m * q;
    const std::size_t np = n * p;
    const std::size_t N = mq + np;
    const double det_a = s.a1 * s.b2 - s.a2 * s.b1;

    std::vector<Complex> det(N + 1, Complex(0.0, 0.0));
    det[N] += 1.0;
    det[np] -= s.a1;
    det[mq] -= s.b2;
    det[0] += det_a;

    std::vector<Complex> p1(np + 1, Complex(0.0, 0.0));
    p1[np] += s.y10;
    p1[np - mq] += s.a2 * s.y20;
    p1[0] -= s.b2 * s.y10;

    std::vector<Complex> p2(np + 1, Complex(0.0, 0.0));
    p2[np] += s.y20;
    p2[np - mq] -= s.a1 * s.y20;
    p2[0] += s.b1 * s.y10;

    const double ml_alpha = 1.0 / static_cast<double>(n * q);
    const double ml_beta = 1.0 - s.alpha.value() + ml_alpha;
    return detail::assemble(s, std::move(det), std::move(p1), std::move(p2), ml_alpha,
                            ml_beta, static_cast<int>(mq) - 1);
}

/// Commensurate decomposition for beta = K alpha: Det collapses to degree K+1
/// in the variable w = s^alpha and the solution is a plain E_alpha combination
/// (ml_beta = 1), which is much cheaper to evaluate than the general form.
inline SpectralForm decompose_commensurate(const MixedSystem& sys, int K) {
    const detail::ScalarBlocks s = detail::scalar_blocks(sys);
    if (K < 1) throw DomainError("decompose_commensurate: K must be a positive integer");
    if (s.beta.num * s.alpha.den != static_cast<std::int64_t>(K) * s.alpha.num * s.beta.den)
        throw DomainError("decompose_commensurate: beta != K * alpha");
    const auto Ku = static_cast<std::size_t>(K);
    const double det_a = s.a1 * s.b2 - s.a2 * s.b1;

    std::vector<Complex> det(Ku + 2, Complex(0.0, 0.0));
    det[Ku + 1] += 1.0;
    det[Ku] -= s.a1;
    det[1] -= s.b2;
    det[0] += det_a;

    std::vector<Complex> p1(Ku + 1, Complex(0.0, 0.0));
    p1[Ku] += s.y10;
    p1[Ku - 1] += s.a2 * s.y20;
    p1[0] -= s.b2 * s.y10;

    std::vector<Complex> p2(Ku + 1, Complex(0.0, 0.0));
    p2[Ku] += s.y20;
    p2[Ku - 1] -= s.a1 * s.y20;
    p2[0] += s.b1 * s.y10;

    return detail::assemble(s, std::move(det), std::move(p1), std::move(p2),
                            s.alpha.value(), 1.0, 0);
}

struct SpectralEval {
    Eigen::Vector2d y;
    double imag_residual = 0.0;
};

/// Evaluate the spectral form at one time. Poles and residues of a real system
/// come in conjugate pairs, so the imaginary parts must cancel; the residual
/// is checked against both the result size and the term magnitudes so that
/// zero crossings of y do not trip the guard.
inline SpectralEval eval_spectral(const SpectralForm& form, double t,
                                  const SeriesOptions& opt = {}) {
    if (t < 0.0) throw DomainError("eval_spectral: negative time");
    SpectralEval out;
    Complex acc[2] = {Complex(0.0, 0.0), Complex(0.0, 0.0)};
    double term_scale = 0.0;
    if (t == 0.0) {
        // Limit t -> 0+: only the power sum of order init_moment survives.
        for (std::size_t j = 0; j < form.poles.size(); ++j) {
            const Complex lk = std::pow(form.poles[j], static_cast<double>(form.init_moment));
            for (int i = 0; i < 2; ++i) {
                const Complex term = form.residues(i, static_cast<Eigen::Index>(j)) * lk;
                acc[i] += term;
                term_scale = std::max(term_scale, std::abs(term));
            }
        }
    } else {
        const double w = std::pow(t, form.ml_beta - 1.0);
        const double ta = std::pow(t, form.ml_alpha);
        for (std::size_t j = 0; j < form.poles.size(); ++j) {
            const Complex e = ml(form.ml_alpha, form.ml_beta, 1, form.poles[j] * ta, opt).value;
            for (int i = 0; i < 2; ++i) {
                const Complex term = form.residues(i, static_cast<Eigen::Index>(j)) * e * w;
                acc[i] += term;
                term_scale = std::max(term_scale, std::abs(term));
            }
        }
    }
    out.y[0] = acc[0].real();
    out.y[1] = acc[1].real();
    out.imag_residual = std::max(std::abs(acc[0].imag()), std::abs(acc[1].imag()));
    const double scale = std::max({out.y.cwiseAbs().maxCoeff(), term_scale, 1e-300});
    if (out.imag_residual > 1e-8 * scale)
        throw ConjugacyViolation("eval_spectral: imaginary residual exceeds tolerance");
    return out;
}

/// Trajectory helper: picks the commensurate construction when beta is an
/// integer multiple of alpha, the general one otherwise.
inline Trajectory solve_spectral(const MixedSystem& sys, const Eigen::VectorXd& times,
                                 const SeriesOptions& opt = {}) {
    const detail::ScalarBlocks s = detail::scalar_blocks(sys);
    SpectralForm form;
    const std::int64_t num = s.beta.num * s.alpha.den;
    const std::int64_t den = s.alpha.num * s.beta.den;
    if (num % den == 0)
        form = decompose_commensurate(sys, static_cast<int>(num / den));
    else
        form = decompose(sys);

    Trajectory traj;
    traj.solver = "spectral";
    traj.times = times;
    traj.states.resize(times.size(), 2);
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        if (times[k] < 0.0 || (k > 0 && times[k] <= times[k - 1]))
            throw DomainError("solve_spectral: times must be increasing and nonnegative");
        traj.states.row(k) = eval_spectral(form, times[k], opt).y.transpose();
    }
    return traj;
}

} // namespace mifde
