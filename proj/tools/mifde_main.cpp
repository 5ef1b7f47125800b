// mifde: mixed-index fractional differential equation toolkit.
//
// Subcommands: mlf (Mittag-Leffler evaluation), solve (series | l1 | spectral
// trajectories as CSV), stability (sector checks and boundary curves), figure
// (CSV bundles behind the reference figures).
//
// Exit codes: 0 ok, 2 input/domain error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mifde/mifde.hpp"

namespace {

using namespace mifde;

void emit_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string fmt(double v) { return detail::format_g17(v); }

int run_mlf(double alpha, double beta, int gamma, double z_re, double z_im, double tol) {
    SeriesOptions opt;
    if (tol > 0.0) opt.tol = tol;
    const EvalReport rep = ml(MLParams{alpha, beta, gamma}, Complex(z_re, z_im), opt);
    if (z_im == 0.0)
        std::cout << fmt(rep.value.real()) << "\n";
    else
        std::cout << fmt(rep.value.real()) << " + " << fmt(rep.value.imag()) << "i\n";
    std::cerr << "terms=" << rep.terms_used << " max_term=" << fmt(rep.max_term_magnitude)
              << (rep.precision_loss ? " precision_loss" : "") << "\n";
    return 0;
}

Eigen::VectorXd output_grid(double t_end, std::optional<double> dt) {
    const double step = dt.value_or(t_end / 200.0);
    return uniform_grid(t_end, step);
}

void write_csv_or_stdout(const Trajectory& traj, const std::string& out) {
    if (out.empty())
        write_trajectory_csv(traj, std::cout);
    else
        write_trajectory_csv(traj, out);
}

int run_solve(const std::string& file, const std::string& method, const std::string& out,
              std::optional<double> dt, std::optional<double> tol, std::optional<int> depth) {
    SystemFile sf = load_system_file(file);
    emit_warnings(sf.warnings);
    if (sf.y0.size() == 0) throw DomainError("empty y0");
    if (dt) sf.dt = dt;
    if (tol) sf.tol = tol;
    if (depth) sf.depth = depth;

    Trajectory traj;
    if (method == "l1") {
        if (!sf.dt) throw DomainError("l1 needs a step size (dt)");
        const auto sys = to_multi_index_system(sf);
        traj = step_solve(sys, *sf.dt, static_cast<int>(std::llround(sf.t_end / *sf.dt)));
    } else if (method == "series") {
        const auto sys = to_mixed_system(sf);
        traj = solve_series(sys, output_grid(sf.t_end, sf.dt), sf.tol.value_or(1e-12),
                            sf.depth.value_or(300));
    } else if (method == "spectral") {
        const auto sys = to_mixed_system(sf);
        if (!sys.alpha.exact || !sys.beta.exact)
            throw MethodInapplicable("spectral requires exact rational orders");
        traj = solve_spectral(sys, output_grid(sf.t_end, sf.dt));
    } else {
        throw DomainError("unknown method '" + method + "'");
    }
    emit_warnings(traj.warnings);
    write_csv_or_stdout(traj, out);
    return 0;
}

const char* class_name(StabilityClass c) {
    switch (c) {
        case StabilityClass::Stable: return "stable";
        case StabilityClass::Unstable: return "unstable";
        default: return "marginal";
    }
}

int run_stability_check(const std::string& file) {
    SystemFile sf = load_system_file(file);
    emit_warnings(sf.warnings);
    std::vector<Rational> orders;
    bool rational = true;
    for (const auto& o : sf.orders) {
        if (o.exact)
            orders.push_back(*o.exact);
        else
            rational = false;
    }
    StabilityVerdict v;
    if (rational) {
        v = rational_index_stable(sf.A, orders);
    } else {
        const double a0 = sf.orders[0].value;
        for (const auto& o : sf.orders)
            if (o.value != a0)
                throw MethodInapplicable(
                    "check needs rational orders (or one common order for the Matignon test)");
        v = matignon_stable(sf.A, a0);
    }
    std::cout << class_name(v.classification()) << " margin=" << fmt(v.margin) << "\n";
    for (const auto& w : v.witnesses)
        std::cerr << "root " << fmt(w.root.real()) << (w.root.imag() < 0 ? " - " : " + ")
                  << fmt(std::abs(w.root.imag())) << "i  |arg|=" << fmt(w.arg) << "\n";
    if (!v.zero_roots.empty())
        std::cerr << v.zero_roots.size() << " root(s) at the origin excluded from the verdict\n";
    return 0;
}

int run_stability_boundary(double alpha, double beta, double x_min, double x_max, int samples,
                           const std::string& out) {
    if (alpha == beta) throw DomainError("boundary mode requires two distinct orders");
    const auto curve = boundary_curve(alpha, beta, figures::log_grid(x_min, x_max, samples));
    if (out.empty())
        figures::write_boundary_csv(curve, std::cout);
    else
        figures::write_boundary_csv(curve, out);
    return 0;
}

int run_figure(const std::string& id, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    if (id == "fig2" || id == "fig3") {
        const auto fig = id == "fig2" ? figures::fig2_data() : figures::fig3_data();
        figures::write_boundary_csv(fig.curve, path(id + "_boundary.csv"));
        figures::write_midpoint_csv(fig.curve, fig.midpoint_angle, path(id + "_midpoint.csv"));
        return 0;
    }
    if (id == "fig4") {
        const auto f4 = figures::fig4_data();
        write_trajectory_csv(f4.a_boundary, path("fig4_half_one_boundary.csv"));
        write_trajectory_csv(f4.a_perturbed, path("fig4_half_one_perturbed.csv"));
        write_trajectory_csv(f4.b_boundary, path("fig4_thirds_boundary.csv"));
        write_trajectory_csv(f4.b_perturbed, path("fig4_thirds_perturbed.csv"));
        return 0;
    }
    if (id == "fig5") {
        // Phase plots use the two decaying (perturbed) trajectories only.
        const auto f4 = figures::fig4_perturbed_data();
        write_trajectory_csv(f4.a_perturbed, path("fig5_half_one.csv"));
        write_trajectory_csv(f4.b_perturbed, path("fig5_thirds.csv"));
        return 0;
    }
    if (id == "fig6") {
        for (const auto& run : figures::fig6_data()) {
            char name[64];
            std::snprintf(name, sizeof(name), "fig6_a%03d_b%03d.csv",
                          static_cast<int>(std::lround(run.alpha * 100)),
                          static_cast<int>(std::lround(run.beta * 100)));
            write_trajectory_csv(run.traj, path(name));
        }
        return 0;
    }
    throw DomainError("unknown figure id '" + id + "' (expected fig2..fig6)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed-index fractional differential equation toolkit"};
    app.require_subcommand(1);

    // mlf
    double alpha = 1.0, beta = 1.0, z = 0.0, zim = 0.0, tol = 0.0;
    int gamma = 1;
    auto* mlf_cmd = app.add_subcommand("mlf", "evaluate the Mittag-Leffler function");
    mlf_cmd->add_option("--alpha", alpha, "series exponent step (> 0)")->required();
    mlf_cmd->add_option("--beta", beta, "offset parameter (default 1)");
    mlf_cmd->add_option("--gamma", gamma, "Pochhammer order (default 1)");
    mlf_cmd->add_option("--z", z, "argument (real part)")->required();
    mlf_cmd->add_option("--zim", zim, "argument imaginary part");
    mlf_cmd->add_option("--tol", tol, "series stop tolerance");

    // solve
    std::string file, method = "series", out;
    double dt_flag = 0.0, tol_flag = 0.0;
    int depth_flag = 0;
    auto* solve_cmd = app.add_subcommand("solve", "solve a system file, emit a CSV trajectory");
    solve_cmd->add_option("--file", file, "JSON system file")->required();
    solve_cmd->add_option("--method", method, "series | l1 | spectral");
    solve_cmd->add_option("--out", out, "output CSV path (stdout when omitted)");
    solve_cmd->add_option("--dt", dt_flag, "step size / output grid spacing");
    solve_cmd->add_option("--tol", tol_flag, "series truncation tolerance");
    solve_cmd->add_option("--depth", depth_flag, "series level cap");

    // stability
    std::string mode = "check", sfile, sout;
    double salpha = 0.0, sbeta = 0.0, x_min = 1e-3, x_max = 1e3;
    int samples = 601;
    auto* stab_cmd = app.add_subcommand("stability", "sector checks and boundary curves");
    stab_cmd->add_option("--mode", mode, "check | boundary");
    stab_cmd->add_option("--file", sfile, "JSON system file (check mode)");
    stab_cmd->add_option("--alpha", salpha, "first order (boundary mode)");
    stab_cmd->add_option("--beta", sbeta, "second order (boundary mode)");
    stab_cmd->add_option("--x-min", x_min, "smallest x = r^(alpha-beta) sample");
    stab_cmd->add_option("--x-max", x_max, "largest x sample");
    stab_cmd->add_option("--samples", samples, "number of boundary samples");
    stab_cmd->add_option("--out", sout, "output CSV path (stdout when omitted)");

    // figure
    std::string fig_id, out_dir = ".";
    auto* fig_cmd = app.add_subcommand("figure", "emit the CSV bundle behind a figure");
    fig_cmd->add_option("--id", fig_id, "fig2 | fig3 | fig4 | fig5 | fig6")->required();
    fig_cmd->add_option("--out-dir", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (mlf_cmd->parsed()) return run_mlf(alpha, beta, gamma, z, zim, tol);
        if (solve_cmd->parsed())
            return run_solve(file, method, out,
                             dt_flag > 0.0 ? std::optional(dt_flag) : std::nullopt,
                             tol_flag > 0.0 ? std::optional(tol_flag) : std::nullopt,
                             depth_flag > 0 ? std::optional(depth_flag) : std::nullopt);
        if (stab_cmd->parsed()) {
            if (mode == "check") {
                if (sfile.empty()) throw DomainError("check mode needs --file");
                return run_stability_check(sfile);
            }
            if (mode == "boundary") {
                if (salpha <= 0.0 || sbeta <= 0.0)
                    throw DomainError("boundary mode needs --alpha and --beta");
                return run_stability_boundary(salpha, sbeta, x_min, x_max, samples, sout);
            }
            throw DomainError("unknown stability mode '" + mode + "'");
        }
        if (fig_cmd->parsed()) return run_figure(fig_id, out_dir);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
