#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "mifde/errors.hpp"
#include "mifde/types.hpp"

namespace mifde {

/// On-disk system description. Orders are strings, either an exact rational
/// "m/n" or a decimal; decimals are converted to rationals by continued
/// fractions (denominator cap 1000) with a warning, since the rational-index
/// and spectral paths need exactness.
struct SystemFile {
    std::vector<FracOrder> orders;
    Eigen::MatrixXd A;
    Eigen::VectorXd y0;
    double t_end = 1.0;
    std::optional<double> dt;
    std::optional<int> depth;
    std::optional<double> tol;
    std::vector<std::string> warnings;
};

namespace detail {

inline FracOrder parse_order_token(const std::string& tok, std::vector<std::string>& warnings) {
    const auto slash = tok.find('/');
    if (slash != std::string::npos) {
        std::int64_t num = 0, den = 0;
        try {
            num = std::stoll(tok.substr(0, slash));
            den = std::stoll(tok.substr(slash + 1));
        } catch (const std::exception&) {
            throw DomainError("unparseable rational order '" + tok + "'");
        }
        const Rational r(num, den);
        if (!r.in_unit_interval()) throw DomainError("order " + tok + " outside (0,1]");
        return FracOrder(r);
    }
    double v = 0.0;
    try {
        v = std::stod(tok);
    } catch (const std::exception&) {
        throw DomainError("unparseable order '" + tok + "'");
    }
    if (!(v > 0.0 && v <= 1.0)) throw DomainError("order " + tok + " outside (0,1]");
    const auto r = Rational::from_double(v, 1000);
    if (r && r->in_unit_interval()) {
        warnings.push_back("order " + tok + " converted to rational " + r->str());
        return FracOrder(*r);
    }
    warnings.push_back("order " + tok + " kept as decimal; exact-rational paths unavailable");
    return FracOrder(v);
}

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline SystemFile parse_system_json(const nlohmann::json& j) {
    SystemFile sf;
    try {
        if (!j.contains("orders") || !j.contains("A") || !j.contains("y0"))
            throw DomainError("system file needs 'orders', 'A' and 'y0'");
        for (const auto& o : j.at("orders")) {
            if (o.is_string())
                sf.orders.push_back(detail::parse_order_token(o.get<std::string>(), sf.warnings));
            else
                sf.orders.push_back(
                    detail::parse_order_token(detail::format_g17(o.get<double>()), sf.warnings));
        }
        const auto& rows = j.at("A");
        const auto m = static_cast<Eigen::Index>(rows.size());
        sf.A.resize(m, m);
        for (Eigen::Index r = 0; r < m; ++r) {
            const auto& row = rows.at(static_cast<std::size_t>(r));
            if (static_cast<Eigen::Index>(row.size()) != m)
                throw DomainError("system file: A must be square (row-major rows)");
            for (Eigen::Index c = 0; c < m; ++c)
                sf.A(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
        const auto& y0j = j.at("y0");
        sf.y0.resize(static_cast<Eigen::Index>(y0j.size()));
        for (Eigen::Index i = 0; i < sf.y0.size(); ++i)
            sf.y0[i] = y0j.at(static_cast<std::size_t>(i)).get<double>();
        sf.t_end = j.value("t_end", 1.0);
        if (j.contains("dt")) sf.dt = j.at("dt").get<double>();
        if (j.contains("depth")) sf.depth = j.at("depth").get<int>();
        if (j.contains("tol")) sf.tol = j.at("tol").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("system file: ") + e.what());
    }
    if (static_cast<Eigen::Index>(sf.orders.size()) != sf.A.rows())
        throw DomainError("system file: orders length must match A dimension");
    if (sf.y0.size() != sf.A.rows())
        throw DomainError("system file: y0 length must match A dimension");
    return sf;
}

inline SystemFile load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open system file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("system file parse: ") + e.what());
    }
    return parse_system_json(j);
}

inline nlohmann::json system_to_json(const SystemFile& sf) {
    nlohmann::json j;
    for (const auto& o : sf.orders) {
        if (o.exact)
            j["orders"].push_back(o.exact->str());
        else
            j["orders"].push_back(detail::format_g17(o.value));
    }
    for (Eigen::Index r = 0; r < sf.A.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < sf.A.cols(); ++c) row.push_back(sf.A(r, c));
        j["A"].push_back(row);
    }
    for (Eigen::Index i = 0; i < sf.y0.size(); ++i) j["y0"].push_back(sf.y0[i]);
    j["t_end"] = sf.t_end;
    if (sf.dt) j["dt"] = *sf.dt;
    if (sf.depth) j["depth"] = *sf.depth;
    if (sf.tol) j["tol"] = *sf.tol;
    return j;
}

inline void save_system_file(const SystemFile& sf, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write system file '" + path + "'");
    out << system_to_json(sf).dump(2) << "\n";
}

/// Interpret the per-component orders as two contiguous constant blocks,
/// which is what the series and spectral solvers need.
inline MixedSystem to_mixed_system(const SystemFile& sf) {
    const auto m = static_cast<Eigen::Index>(sf.orders.size());
    if (m < 2) throw MethodInapplicable("system has fewer than 2 components");
    Eigen::Index m1 = 1;
    while (m1 < m && sf.orders[static_cast<std::size_t>(m1)].value ==
                         sf.orders[0].value)
        ++m1;
    if (m1 == m) throw MethodInapplicable("system has a single order; no second block");
    for (Eigen::Index i = m1; i < m; ++i)
        if (sf.orders[static_cast<std::size_t>(i)].value !=
            sf.orders[static_cast<std::size_t>(m1)].value)
            throw MethodInapplicable("orders do not form two contiguous blocks");
    MixedSystem sys;
    sys.A = sf.A;
    sys.m1 = m1;
    sys.m2 = m - m1;
    sys.alpha = sf.orders[0];
    sys.beta = sf.orders[static_cast<std::size_t>(m1)];
    sys.y0 = sf.y0;
    return sys;
}

inline MultiIndexSystem to_multi_index_system(const SystemFile& sf) {
    MultiIndexSystem sys;
    sys.A = sf.A;
    sys.y0 = sf.y0;
    sys.orders.reserve(sf.orders.size());
    for (const auto& o : sf.orders) sys.orders.push_back(o.value);
    return sys;
}

/// CSV with header `t,y1,...,ym`, 17 significant digits.
inline void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "t";
    for (Eigen::Index c = 0; c < traj.states.cols(); ++c) out << ",y" << (c + 1);
    out << "\n";
    for (Eigen::Index r = 0; r < traj.times.size(); ++r) {
        out << detail::format_g17(traj.times[r]);
        for (Eigen::Index c = 0; c < traj.states.cols(); ++c)
            out << "," << detail::format_g17(traj.states(r, c));
        out << "\n";
    }
}

inline void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write '" + path + "'");
    write_trajectory_csv(traj, out);
}

} // namespace mifde
