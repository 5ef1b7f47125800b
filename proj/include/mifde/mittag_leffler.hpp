#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "mifde/errors.hpp"
#include "mifde/gamma.hpp"
#include "mifde/types.hpp"

namespace mifde {

/// Parameters of the three-parameter Mittag-Leffler function
///   E^gamma_{alpha,beta}(z) = sum_k (gamma)_k z^k / (Gamma(alpha k + beta) k!).
/// gamma = 1 gives E_{alpha,beta}; beta = gamma = 1 gives E_alpha.
struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;
    int gamma = 1;
};

struct SeriesOptions {
    double tol = 1e-16;       ///< relative stop threshold on series terms
    int term_cap = 10000;     ///< NoConvergence beyond this many terms
    double series_bound = 50; ///< largest |z| accepted for series evaluation
    int matrix_dim_cap = 64;  ///< largest matrix dimension for ml_matrix
};

/// Result of a scalar series evaluation. max_term_magnitude against |value|
/// measures how much cancellation the alternating series went through;
/// precision_loss is set once that ratio passes 1e12.
struct EvalReport {
    Complex value{0.0, 0.0};
    int terms_used = 0;
    double max_term_magnitude = 0.0;
    bool precision_loss = false;
};

namespace detail {

// Compensated (Kahan) accumulator for one real lane.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

inline void check_ml_params(const MLParams& p) {
    if (!(p.alpha > 0.0)) throw DomainError("ml: alpha must be positive");
    if (p.gamma < 1) throw DomainError("ml: gamma must be a positive integer");
    if (!std::isfinite(p.beta)) throw DomainError("ml: beta must be finite");
}

} // namespace detail

/// Series evaluation of E^gamma_{alpha,beta}(z) with terms assembled in log
/// space and summed with compensated accumulation. Stops once three
/// consecutive terms fall below tol * |partial sum|.
inline EvalReport ml(const MLParams& p, Complex z, const SeriesOptions& opt = {}) {
    detail::check_ml_params(p);
    if (std::abs(z) > opt.series_bound)
        throw DomainError("ml: |z| exceeds the configured series bound");

    EvalReport rep;
    if (z == Complex(0.0, 0.0)) {
        rep.value = rgamma(p.beta);
        rep.terms_used = 1;
        rep.max_term_magnitude = std::abs(rep.value);
        return rep;
    }

    const double log_abs_z = std::log(std::abs(z));
    const double arg_z = std::arg(z);
    const bool real_input = (z.imag() == 0.0);
    const double lgamma_gamma = log_gamma(static_cast<double>(p.gamma));

    detail::Kahan re, im;
    int small_in_row = 0;
    int k = 0;
    for (; k < opt.term_cap; ++k) {
        const SignedLogGamma g = log_gamma_signed(p.alpha * k + p.beta);
        double term_mag = 0.0;
        Complex term(0.0, 0.0);
        if (g.sign != 0) {
            // log of (gamma)_k / k! = lgamma(gamma+k) - lgamma(gamma) - lgamma(k+1)
            const double log_poch =
                log_gamma(static_cast<double>(p.gamma) + k) - lgamma_gamma;
            const double log_mag = log_poch + k * log_abs_z -
                                   log_gamma(static_cast<double>(k) + 1.0) - g.log_abs;
            if (log_mag > 700.0)
                throw OverflowDomain("ml: series term exceeds double range");
            term_mag = std::exp(log_mag);
            if (real_input) {
                const double s = (z.real() < 0.0 && (k & 1)) ? -1.0 : 1.0;
                term = Complex(g.sign * s * term_mag, 0.0);
            } else {
                term = std::polar(term_mag, k * arg_z) * static_cast<double>(g.sign);
            }
        }
        re.add(term.real());
        im.add(term.imag());
        if (term_mag > rep.max_term_magnitude) rep.max_term_magnitude = term_mag;

        const double partial = std::hypot(re.sum, im.sum);
        if (k >= 1 && term_mag < opt.tol * partial) {
            if (++small_in_row >= 3) {
                ++k;
                break;
            }
        } else {
            small_in_row = 0;
        }
    }
    if (k >= opt.term_cap)
        throw NoConvergence("ml: term cap reached without convergence");

    rep.value = Complex(re.sum, im.sum);
    rep.terms_used = k;
    const double mag = std::abs(rep.value);
    rep.precision_loss = mag > 0.0 && rep.max_term_magnitude > 1e12 * mag;
    return rep;
}

inline EvalReport ml(double alpha, double beta, int gamma, Complex z,
                     const SeriesOptions& opt = {}) {
    return ml(MLParams{alpha, beta, gamma}, z, opt);
}

/// Matrix Mittag-Leffler function E_alpha(M) = sum_j M^j / Gamma(1 + j alpha),
/// under the same three-consecutive-small-terms stopping rule applied to
/// max-norms of the term matrices.
inline Eigen::MatrixXcd ml_matrix(double alpha, const Eigen::MatrixXcd& M,
                                  const SeriesOptions& opt = {}) {
    if (!(alpha > 0.0)) throw DomainError("ml_matrix: alpha must be positive");
    if (M.rows() != M.cols()) throw DimensionMismatch("ml_matrix: matrix not square");
    if (M.rows() > opt.matrix_dim_cap)
        throw DomainError("ml_matrix: dimension exceeds configured cap");

    const Eigen::Index n = M.rows();
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd sum = term;
    int small_in_row = 0;
    for (int j = 1; j < opt.term_cap; ++j) {
        // term_j = term_{j-1} * M * Gamma(1+(j-1)alpha)/Gamma(1+j alpha)
        const double log_ratio = log_gamma(1.0 + (j - 1) * alpha) - log_gamma(1.0 + j * alpha);
        term = (term * M * std::exp(log_ratio)).eval();
        sum += term;
        const double tn = term.cwiseAbs().maxCoeff();
        const double sn = sum.cwiseAbs().maxCoeff();
        if (tn < opt.tol * sn) {
            if (++small_in_row >= 3) return sum;
        } else {
            small_in_row = 0;
        }
    }
    throw NoConvergence("ml_matrix: term cap reached without convergence");
}

inline Eigen::MatrixXcd ml_matrix(double alpha, const Eigen::MatrixXd& M,
                                  const SeriesOptions& opt = {}) {
    return ml_matrix(alpha, Eigen::MatrixXcd(M.cast<Complex>()), opt);
}

} // namespace mifde
