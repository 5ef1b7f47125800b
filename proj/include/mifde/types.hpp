#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mifde/errors.hpp"
#include "mifde/rational.hpp"

namespace mifde {

using Complex = std::complex<double>;

/// A fractional order in (0, 1]. Carries the exact rational form when known;
/// the rational-index stability test and the spectral solver require it.
struct FracOrder {
    double value = 1.0;
    std::optional<Rational> exact;

    FracOrder() = default;
    FracOrder(double v) : value(v) {} // NOLINT: implicit by design
    FracOrder(Rational r) : value(r.value()), exact(r) {}

    bool in_unit_interval() const { return value > 0.0 && value <= 1.0; }
};

/// Index-2 linear system D^alpha y1 = A1 y1 + A2 y2, D^beta y2 = B1 y1 + B2 y2
/// with block sizes m1, m2 and initial state y0.
struct MixedSystem {
    Eigen::MatrixXd A;
    Eigen::Index m1 = 0;
    Eigen::Index m2 = 0;
    FracOrder alpha;
    FracOrder beta;
    Eigen::VectorXd y0;

    Eigen::Index size() const { return m1 + m2; }

    auto A1() const { return A.topLeftCorner(m1, m1); }
    auto A2() const { return A.topRightCorner(m1, m2); }
    auto B1() const { return A.bottomLeftCorner(m2, m1); }
    auto B2() const { return A.bottomRightCorner(m2, m2); }

    void validate() const {
        if (m1 < 1 || m2 < 1) throw DimensionMismatch("MixedSystem: empty block");
        if (A.rows() != size() || A.cols() != size())
            throw DimensionMismatch("MixedSystem: A is not (m1+m2) square");
        if (y0.size() != size())
            throw DimensionMismatch("MixedSystem: y0 length mismatch");
        if (!alpha.in_unit_interval() || !beta.in_unit_interval())
            throw DomainError("MixedSystem: orders must lie in (0,1]");
    }
};

/// General r-block system, flattened to one order per scalar component.
struct MultiIndexSystem {
    Eigen::MatrixXd A;
    std::vector<double> orders;
    Eigen::VectorXd y0;
    std::function<Eigen::VectorXd(double)> forcing; // optional

    Eigen::Index size() const { return A.rows(); }

    void validate() const {
        if (A.rows() != A.cols()) throw DimensionMismatch("MultiIndexSystem: A not square");
        if (static_cast<Eigen::Index>(orders.size()) != A.rows())
            throw DimensionMismatch("MultiIndexSystem: orders length mismatch");
        if (y0.size() != A.rows())
            throw DimensionMismatch("MultiIndexSystem: y0 length mismatch");
        for (double a : orders)
            if (!(a > 0.0 && a <= 1.0))
                throw DomainError("MultiIndexSystem: orders must lie in (0,1]");
    }
};

inline MultiIndexSystem flatten(const MixedSystem& sys) {
    sys.validate();
    MultiIndexSystem flat;
    flat.A = sys.A;
    flat.y0 = sys.y0;
    flat.orders.assign(static_cast<std::size_t>(sys.size()), sys.beta.value);
    for (Eigen::Index i = 0; i < sys.m1; ++i) flat.orders[static_cast<std::size_t>(i)] = sys.alpha.value;
    return flat;
}

/// Sampled solution: one row of `states` per entry of `times`.
struct Trajectory {
    Eigen::VectorXd times;
    Eigen::MatrixXd states;
    std::string solver;
    double step_size = 0.0;
    int depth = 0;
    std::vector<std::string> warnings;
};

inline Eigen::VectorXd uniform_grid(double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw DomainError("invalid time grid");
    const auto n = static_cast<Eigen::Index>(std::llround(t_end / dt));
    Eigen::VectorXd t(n + 1);
    for (Eigen::Index k = 0; k <= n; ++k) t[k] = static_cast<double>(k) * dt;
    return t;
}

} // namespace mifde
