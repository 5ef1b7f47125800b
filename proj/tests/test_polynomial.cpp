#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "mifde/polynomial.hpp"
#include "oracles.hpp"

using namespace mifde;
using doctest::Approx;

namespace {

bool contains_root(const RootSet& rs, Complex target, double tol) {
    return std::any_of(rs.roots.begin(), rs.roots.end(),
                       [&](const Complex& r) { return std::abs(r - target) < tol; });
}

} // namespace

TEST_CASE("find_roots on small fixed polynomials") {
    // z^2 + 1
    auto rs = find_roots(ComplexPolynomial::from_real({1.0, 0.0, 1.0}));
    CHECK(rs.converged);
    CHECK(contains_root(rs, {0.0, 1.0}, 1e-12));
    CHECK(contains_root(rs, {0.0, -1.0}, 1e-12));

    // z^3 + z^2 + z + 1 = (z+1)(z^2+1)
    rs = find_roots(ComplexPolynomial::from_real({1.0, 1.0, 1.0, 1.0}));
    CHECK(rs.converged);
    CHECK(contains_root(rs, {-1.0, 0.0}, 1e-10));
    CHECK(contains_root(rs, {0.0, 1.0}, 1e-10));
    CHECK(contains_root(rs, {0.0, -1.0}, 1e-10));
}

TEST_CASE("boundary cubic has a root at argument pi/4") {
    // z^3 - z^2 - z + (3 + 2 sqrt(3)): the rotation-family characteristic
    // polynomial at d = 1, theta^2 = 2(1+sqrt(3)); the marginal pair sits at
    // arg = +/- pi/4 with |z|^2 = 2 + sqrt(3).
    const double c0 = 3.0 + 2.0 * std::sqrt(3.0);
    auto rs = find_roots(ComplexPolynomial::from_real({c0, -1.0, -1.0, 1.0}));
    CHECK(rs.converged);
    bool found = false;
    for (const auto& r : rs.roots)
        if (std::abs(std::arg(r) - M_PI / 4.0) < 1e-6) found = true;
    CHECK(found);
    const double r_expect = std::sqrt(2.0 + std::sqrt(3.0));
    CHECK(contains_root(rs, std::polar(r_expect, M_PI / 4.0), 1e-8));
}

TEST_CASE("root-set product check on random polynomials up to degree 12") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int deg = 2 + static_cast<int>(rng() % 11);
        std::vector<Complex> c(static_cast<std::size_t>(deg) + 1);
        for (auto& ci : c) ci = Complex(u(rng), u(rng));
        while (std::abs(c.back()) < 0.3) c.back() = Complex(u(rng), u(rng));
        ComplexPolynomial p(c);
        auto rs = find_roots(p);
        REQUIRE(rs.converged);
        auto rebuilt = ComplexPolynomial::from_roots(p.leading(), rs.roots);
        double scale = p.coefficient_scale();
        for (int k = 0; k <= deg; ++k)
            CHECK(std::abs(rebuilt.coeffs[static_cast<std::size_t>(k)] -
                           p.coeffs[static_cast<std::size_t>(k)]) < 1e-8 * scale);
    }
}

TEST_CASE("characteristic_polynomial fixed cases") {
    // 1x1, alpha = 1/2: p(l) = l + 1, M = 2
    Eigen::MatrixXd A1(1, 1);
    A1 << -1.0;
    auto [p1, M1] = characteristic_polynomial(A1, {Rational(1, 2)});
    CHECK(M1 == 2);
    REQUIRE(p1.degree() == 1);
    CHECK(std::abs(p1.coeffs[0] - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(p1.coeffs[1] - Complex(1.0, 0.0)) < 1e-12);

    // [[d, -q], [q, d]], orders (1/2, 1): p(l) = l^3 - d l^2 - d l + d^2 + q^2
    const double d = 0.7, q = 1.3;
    Eigen::MatrixXd A2(2, 2);
    A2 << d, -q, q, d;
    auto [p2, M2] = characteristic_polynomial(A2, {Rational(1, 2), Rational(1, 1)});
    CHECK(M2 == 2);
    REQUIRE(p2.degree() == 3);
    CHECK(std::abs(p2.coeffs[0] - Complex(d * d + q * q, 0.0)) < 1e-10);
    CHECK(std::abs(p2.coeffs[1] - Complex(-d, 0.0)) < 1e-10);
    CHECK(std::abs(p2.coeffs[2] - Complex(-d, 0.0)) < 1e-10);
    CHECK(std::abs(p2.coeffs[3] - Complex(1.0, 0.0)) < 1e-10);

    // Equal orders reduce to the ordinary characteristic polynomial in l^{M a}.
    Eigen::MatrixXd A3(2, 2);
    A3 << 0.3, 1.1, -0.4, -0.9;
    auto [p3, M3] = characteristic_polynomial(A3, {Rational(1, 2), Rational(1, 2)});
    CHECK(M3 == 2);
    REQUIRE(p3.degree() == 2);
    CHECK(std::abs(p3.coeffs[0] - Complex(A3.determinant(), 0.0)) < 1e-10);
    CHECK(std::abs(p3.coeffs[1] - Complex(-A3.trace(), 0.0)) < 1e-10);
}

TEST_CASE("equal orders match the eigenvalue route on random matrices") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 3);
        Eigen::MatrixXd A(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) A(r, c) = u(rng);
        const Rational ord(2, 5);
        auto [p, M] = characteristic_polynomial(
            A, std::vector<Rational>(static_cast<std::size_t>(m), ord));
        CHECK(M == 5);
        // Oracle: expand prod (w - mu_i) over the eigenvalues of A.
        Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
        std::vector<Complex> eigs(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) eigs[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
        auto classical = ComplexPolynomial::from_roots({1.0, 0.0}, eigs);
        const auto e = static_cast<std::size_t>(M / ord.den * ord.num); // exponent step
        REQUIRE(p.degree() == m * static_cast<int>(e));
        for (int k = 0; k <= p.degree(); ++k) {
            const auto uk = static_cast<std::size_t>(k);
            const Complex expect =
                (uk % e == 0) ? classical.coeffs[uk / e] : Complex(0.0, 0.0);
            CHECK(std::abs(p.coeffs[uk] - expect) < 1e-10);
        }
    }
}

TEST_CASE("Descartes bound on Det(z)-shaped polynomials") {
    // z^{mq+np} - a1 z^{np} - b2 z^{mq} + DA has at most 4 real zeros when
    // mq+np is even and at most 5 when odd.
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const int shapes[][2] = {{3, 6}, {2, 4}, {3, 5}, {1, 2}};
    for (const auto& s : shapes)
        for (int trial = 0; trial < 8; ++trial) {
            const int mq = s[0], np = s[1], N = mq + np;
            std::vector<Complex> c(static_cast<std::size_t>(N) + 1, Complex(0, 0));
            c[static_cast<std::size_t>(N)] = 1.0;
            c[static_cast<std::size_t>(np)] -= u(rng);
            c[static_cast<std::size_t>(mq)] -= u(rng);
            c[0] += u(rng);
            if (std::abs(c[0]) < 0.1) c[0] += 0.5;
            auto rs = find_roots(ComplexPolynomial(c));
            REQUIRE(rs.converged);
            int real_count = 0;
            for (const auto& r : rs.roots)
                if (std::abs(r.imag()) < 1e-7 * (1.0 + std::abs(r.real()))) ++real_count;
            CHECK(real_count <= (N % 2 == 0 ? 4 : 5));
        }
}

TEST_CASE("partial fractions") {
    // 1/(z^2 - 1): residues 1/2 at z=1, -1/2 at z=-1.
    auto pf = partial_fractions({ComplexPolynomial::from_real({1.0})},
                                ComplexPolynomial::from_real({-1.0, 0.0, 1.0}));
    REQUIRE(pf.poles.size() == 2);
    for (std::size_t j = 0; j < 2; ++j) {
        if (std::abs(pf.poles[j] - Complex(1.0, 0.0)) < 1e-10)
            CHECK(std::abs(pf.residues[0][j] - Complex(0.5, 0.0)) < 1e-12);
        else
            CHECK(std::abs(pf.residues[0][j] - Complex(-0.5, 0.0)) < 1e-12);
    }

    // (z^2+1)/((z+1)(z^2+1)): residue 1 at -1, 0 at +/- i.
    auto den = ComplexPolynomial::from_real({1.0, 1.0, 1.0, 1.0});
    auto pf2 = partial_fractions({ComplexPolynomial::from_real({1.0, 0.0, 1.0})}, den);
    for (std::size_t j = 0; j < pf2.poles.size(); ++j) {
        if (std::abs(pf2.poles[j] - Complex(-1.0, 0.0)) < 1e-8)
            CHECK(std::abs(pf2.residues[0][j] - Complex(1.0, 0.0)) < 1e-10);
        else
            CHECK(std::abs(pf2.residues[0][j]) < 1e-10);
    }

    // Reconstruction: sum_j A_j/(z - l_j) equals p(z)/D(z) at random points.
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto num = ComplexPolynomial::from_real({0.3, -1.2, 0.7});
    auto den3 = ComplexPolynomial::from_real({2.0, 0.5, -1.0, 0.0, 1.0});
    auto pf3 = partial_fractions({num}, den3);
    for (int k = 0; k < 20; ++k) {
        const Complex z(2.5 * u(rng), 2.5 * u(rng));
        if (std::abs(den3.eval(z)) < 1e-3) continue;
        Complex sum(0.0, 0.0);
        for (std::size_t j = 0; j < pf3.poles.size(); ++j)
            sum += pf3.residues[0][j] / (z - pf3.poles[j]);
        const Complex direct = num.eval(z) / den3.eval(z);
        CHECK(std::abs(sum - direct) < 1e-10 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(find_roots(ComplexPolynomial()), DegenerateInput);
    CHECK_THROWS_AS(find_roots(ComplexPolynomial::from_real({3.0})), DegenerateInput);

    Eigen::MatrixXd A(2, 2);
    A.setZero();
    CHECK_THROWS_AS(characteristic_polynomial(A, {Rational(1, 2)}), DimensionMismatch);
    CHECK_THROWS_AS(characteristic_polynomial(A, {Rational(3, 2), Rational(1, 2)}), DomainError);

    // (z-1)^2: repeated roots rejected.
    CHECK_THROWS_AS(partial_fractions({ComplexPolynomial::from_real({1.0})},
                                      ComplexPolynomial::from_real({1.0, -2.0, 1.0})),
                    RepeatedRoots);
    // Degree violation.
    CHECK_THROWS_AS(partial_fractions({ComplexPolynomial::from_real({0.0, 0.0, 1.0})},
                                      ComplexPolynomial::from_real({-1.0, 0.0, 1.0})),
                    DegreeViolation);
}
