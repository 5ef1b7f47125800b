#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

#include "mifde/errors.hpp"
#include "mifde/rational.hpp"
#include "mifde/types.hpp"

namespace mifde {

/// Univariate polynomial over the complex numbers, coefficients in ascending
/// powers. The coefficient vector is trimmed so the leading entry is nonzero.
struct ComplexPolynomial {
    std::vector<Complex> coeffs;

    ComplexPolynomial() : coeffs{Complex(0.0, 0.0)} {}
    explicit ComplexPolynomial(std::vector<Complex> c) : coeffs(std::move(c)) {
        if (coeffs.empty()) coeffs.push_back(Complex(0.0, 0.0));
        trim();
    }
    static ComplexPolynomial from_real(const std::vector<double>& c) {
        std::vector<Complex> cc(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) cc[i] = Complex(c[i], 0.0);
        return ComplexPolynomial(std::move(cc));
    }

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Complex leading() const { return coeffs.back(); }
    bool is_zero() const { return coeffs.size() == 1 && coeffs[0] == Complex(0.0, 0.0); }

    Complex eval(Complex z) const {
        Complex acc = coeffs.back();
        for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    ComplexPolynomial derivative() const {
        if (degree() < 1) return ComplexPolynomial();
        std::vector<Complex> d(coeffs.size() - 1);
        for (std::size_t k = 1; k < coeffs.size(); ++k)
            d[k - 1] = coeffs[k] * static_cast<double>(k);
        return ComplexPolynomial(std::move(d));
    }

    double coefficient_scale() const {
        double s = 0.0;
        for (const auto& c : coeffs) s = std::max(s, std::abs(c));
        return s;
    }

    ComplexPolynomial operator*(const ComplexPolynomial& o) const {
        std::vector<Complex> r(coeffs.size() + o.coeffs.size() - 1, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs.size(); ++j) r[i + j] += coeffs[i] * o.coeffs[j];
        return ComplexPolynomial(std::move(r));
    }

    static ComplexPolynomial from_roots(Complex lead, const std::vector<Complex>& roots) {
        ComplexPolynomial p(std::vector<Complex>{lead});
        for (const auto& r : roots) p = p * ComplexPolynomial(std::vector<Complex>{-r, Complex(1.0, 0.0)});
        return p;
    }

  private:
    void trim() {
        while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
    }
};

/// All roots of a polynomial plus the worst residual |p(root)| observed.
struct RootSet {
    std::vector<Complex> roots;
    double residual_bound = 0.0;
    bool converged = false;
};

/// Deterministic simultaneous root iteration (Durand-Kerner) started from
/// equally spaced points on the Cauchy-bound circle, followed by one Newton
/// polish per root. On non-convergence the best iterate is returned with
/// converged = false rather than thrown.
inline RootSet find_roots(const ComplexPolynomial& p, double tol = 1e-10) {
    if (p.is_zero()) throw DegenerateInput("find_roots: zero polynomial");
    const int n = p.degree();
    if (n < 1) throw DegenerateInput("find_roots: constant polynomial has no roots");

    // Monic copy for the iteration.
    std::vector<Complex> mc(p.coeffs.size());
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) mc[i] = p.coeffs[i] / p.leading();
    const ComplexPolynomial monic(mc);

    double cauchy = 0.0;
    for (int i = 0; i < n; ++i) cauchy = std::max(cauchy, std::abs(mc[static_cast<std::size_t>(i)]));
    const double radius = 1.0 + cauchy;

    std::vector<Complex> z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        z[static_cast<std::size_t>(i)] = std::polar(radius, 2.0 * M_PI * i / n + 0.4);

    const double stop = 1e-14 * std::max(1.0, radius);
    bool converged = false;
    for (int sweep = 0; sweep < 500; ++sweep) {
        double max_update = 0.0;
        for (int i = 0; i < n; ++i) {
            Complex denom(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
            if (denom == Complex(0.0, 0.0)) {
                z[static_cast<std::size_t>(i)] += Complex(1e-8, 1e-8);
                max_update = radius;
                continue;
            }
            const Complex delta = monic.eval(z[static_cast<std::size_t>(i)]) / denom;
            z[static_cast<std::size_t>(i)] -= delta;
            max_update = std::max(max_update, std::abs(delta));
        }
        if (max_update < stop) {
            converged = true;
            break;
        }
    }

    // Newton polish tightens residuals cheaply.
    const ComplexPolynomial dp = monic.derivative();
    for (auto& zi : z) {
        const Complex d = dp.eval(zi);
        if (std::abs(d) > 0.0) {
            const Complex step = monic.eval(zi) / d;
            if (std::abs(step) < 0.1 * (1.0 + std::abs(zi))) zi -= step;
        }
    }

    RootSet rs;
    rs.roots = std::move(z);
    for (const auto& r : rs.roots) rs.residual_bound = std::max(rs.residual_bound, std::abs(p.eval(r)));
    rs.converged = converged && rs.residual_bound <= tol * std::max(p.coefficient_scale(), 1e-300);
    return rs;
}

/// Characteristic polynomial of the rational-order system,
///   p(lambda) = Det(diag(lambda^{M a_1}, ..., lambda^{M a_m}) - A),
/// with M the lcm of the order denominators, so every exponent M a_i is an
/// integer. Built by evaluating the determinant at N+1 points on a circle and
/// recovering coefficients with the inverse DFT (the exact degree
/// N = sum_i M a_i is known up front). Returns the polynomial and M.
inline std::pair<ComplexPolynomial, std::int64_t>
characteristic_polynomial(const Eigen::MatrixXd& A, const std::vector<Rational>& orders) {
    const Eigen::Index m = A.rows();
    if (A.cols() != m) throw DimensionMismatch("characteristic_polynomial: A not square");
    if (static_cast<Eigen::Index>(orders.size()) != m)
        throw DimensionMismatch("characteristic_polynomial: orders length mismatch");

    std::int64_t M = 1;
    for (const auto& o : orders) {
        if (!o.in_unit_interval())
            throw DomainError("characteristic_polynomial: orders must lie in (0,1]");
        M = lcm_checked(M, o.den);
    }

    std::vector<std::int64_t> exps(orders.size());
    std::int64_t N = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        exps[i] = M / orders[i].den * orders[i].num;
        N += exps[i];
    }
    if (N > 2000) throw DomainError("characteristic_polynomial: degree too large");

    const int npts = static_cast<int>(N) + 1;
    const double radius = 1.5;
    std::vector<Complex> values(static_cast<std::size_t>(npts));
    Eigen::MatrixXcd G(m, m);
    for (int k = 0; k < npts; ++k) {
        const Complex lam = std::polar(radius, 2.0 * M_PI * k / npts);
        G = -A.cast<Complex>();
        for (Eigen::Index i = 0; i < m; ++i)
            G(i, i) += std::pow(lam, static_cast<double>(exps[static_cast<std::size_t>(i)]));
        values[static_cast<std::size_t>(k)] = Eigen::PartialPivLU<Eigen::MatrixXcd>(G).determinant();
    }

    // Inverse DFT on the circle, undoing the radius scaling per coefficient.
    std::vector<Complex> coeffs(static_cast<std::size_t>(npts));
    for (int j = 0; j < npts; ++j) {
        Complex acc(0.0, 0.0);
        for (int k = 0; k < npts; ++k)
            acc += values[static_cast<std::size_t>(k)] *
                   std::polar(1.0, -2.0 * M_PI * j * k / npts);
        coeffs[static_cast<std::size_t>(j)] = acc / (static_cast<double>(npts) * std::pow(radius, j));
    }
    return {ComplexPolynomial(std::move(coeffs)), M};
}

/// Residues of p_i(z)/D(z) at the (simple) roots of D, computed through the
/// derivative formula A_j = p_i(lambda_j)/D'(lambda_j).
struct PartialFractions {
    std::vector<Complex> poles;
    std::vector<std::vector<Complex>> residues; // residues[i][j]: numerator i, pole j
    double root_residual = 0.0;
};

inline PartialFractions partial_fractions(const std::vector<ComplexPolynomial>& numerators,
                                          const ComplexPolynomial& denominator,
                                          double separation_tol = 1e-8) {
    for (const auto& p : numerators)
        if (p.degree() >= denominator.degree() && !p.is_zero())
            throw DegreeViolation("partial_fractions: numerator degree too high");

    RootSet rs = find_roots(denominator);
    if (!rs.converged)
        throw NoConvergence("partial_fractions: denominator root finding did not converge");

    const std::size_t N = rs.roots.size();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if (std::abs(rs.roots[i] - rs.roots[j]) <= separation_tol)
                throw RepeatedRoots("partial_fractions: repeated denominator roots");

    const ComplexPolynomial dd = denominator.derivative();
    PartialFractions pf;
    pf.poles = rs.roots;
    pf.root_residual = rs.residual_bound;
    pf.residues.resize(numerators.size());
    for (std::size_t i = 0; i < numerators.size(); ++i) {
        pf.residues[i].resize(N);
        for (std::size_t j = 0; j < N; ++j)
            pf.residues[i][j] = numerators[i].eval(pf.poles[j]) / dd.eval(pf.poles[j]);
    }
    return pf;
}

} // namespace mifde
