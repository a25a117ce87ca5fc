#pragma once

// Command-line front end. `dispatch` is the whole program; the executable in
// tools/ only forwards argv to it.
//
// Exit codes: 0 success, 1 a verified property failed, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "expr.hpp"
#include "generators.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "loewner.hpp"
#include "resolvent.hpp"
#include "semigroup.hpp"

namespace reslab::cli {

using json = nlohmann::json;

enum ExitCode : int { success = 0, property_failure = 1, usage_error = 2 };

struct RunConfig {
    int radii = 24;
    int angles = 256;
    double margin = 1e-3;
    double solver_tolerance = resolvent_tolerance;
    std::string format;
    std::string output;

    void validate() const {
        if (radii < 1 || angles < 1) throw contract_error("grid needs at least one ring and one angle");
        if (!(margin > 0.0 && margin <= 0.1)) throw contract_error("grid margin must lie in (0, 0.1]");
        if (!(solver_tolerance > 0.0)) throw contract_error("solver tolerance must be positive");
    }
    DiskGrid grid() const { return DiskGrid::geometric(radii, angles, margin); }
};

/// Built-in name or a parsed expression in z.
inline GeneratorSpec resolve_generator(const std::string& text, const DiskGrid& grid) {
    if (builtin_map(text)) return builtin_generator(text, grid);
    return make_generator(parse_generator(text).to_map(), grid, text);
}

/// "a+bi" style literal, or an "re,im" pair.
inline cplx parse_complex_literal(const std::string& text) {
    if (const auto comma = text.find(','); comma != std::string::npos) {
        std::size_t used_re = 0, used_im = 0;
        const std::string re = text.substr(0, comma), im = text.substr(comma + 1);
        const double a = std::stod(re, &used_re);
        const double b = std::stod(im, &used_im);
        if (used_re != re.size() || used_im != im.size()) throw contract_error("bad complex pair '" + text + "'");
        return {a, b};
    }
    const ExprPtr e = parse_expression(text);
    if (contains_variable(*e)) throw contract_error("complex literal must not contain z");
    return eval_recursive(*e, 0.0);
}

inline json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline json to_json(const std::optional<cplx>& z) { return z ? to_json(*z) : json(nullptr); }

inline json to_json(const PropertyReport& r) {
    json ex = json::array();
    for (cplx z : r.exclusions) ex.push_back(to_json(z));
    json extras = json::object();
    for (const auto& [k, v] : r.extras) extras[k] = v;
    return json{{"property", r.property}, {"grid", r.grid},       {"worst_value", r.worst_value},
                {"worst_point", to_json(r.worst_point)},        {"tolerance", r.tolerance},
                {"pass", r.pass},         {"samples", r.samples}, {"exclusions", ex},
                {"extras", extras}};
}

namespace detail {

/// Writes to `path` when non-empty, otherwise to `out`.
template <class Writer>
void emit(const std::string& path, std::ostream& out, Writer write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw error("cannot open output file '" + path + "'");
    write(file);
}

inline void emit_json(const json& doc, const std::string& path, std::ostream& out) {
    emit(path, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

struct FigureCurve {
    std::string name;
    RegionBoundary curve;
};

}  // namespace detail

/// Figure 1: J_r(D) for z(1-z) at r = 0.6, 1, 1.1. Figure 2: the BFID
/// |z - 1/2| < 1/2 and its image under J_{-1}. Writes SVG and CSV files into
/// `dir` and returns the written file names.
inline std::vector<std::string> write_figures(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const GeneratorSpec gen = builtin_generator("ex2");
    std::vector<std::string> files;
    auto write_file = [&](const std::string& name, auto writer) {
        std::ofstream os(dir / name, std::ios::binary);
        if (!os) throw error("cannot write " + (dir / name).string());
        writer(os);
        files.push_back(name);
    };
    constexpr double figure_margin = 1e-4;
    constexpr int figure_points = 1024;
    for (const auto& [r, tag] : {std::pair{0.6, "0.6"}, std::pair{1.0, "1"}, std::pair{1.1, "1.1"}}) {
        const RegionBoundary b = region_boundary(gen, r, figure_points, figure_margin);
        write_file(std::string("fig1_r") + tag + ".csv", [&](std::ostream& os) { io::write_curve_csv(os, b.angles, b.points); });
        write_file(std::string("fig1_r") + tag + ".svg", [&](std::ostream& os) {
            io::write_svg(os, {io::SvgCurve{b.points, "black", "#c8c8c8", 0.008, true}});
        });
    }
    const BfidRegion fig2 = bfid_region_check(gen, -1.0, figure_points);
    std::vector<double> angles;
    for (int j = 0; j < figure_points; ++j) angles.push_back(2.0 * pi * j / figure_points);
    write_file("fig2_omega.csv", [&](std::ostream& os) { io::write_curve_csv(os, angles, fig2.omega_boundary); });
    write_file("fig2_image.csv", [&](std::ostream& os) { io::write_curve_csv(os, angles, fig2.image_boundary); });
    write_file("fig2.svg", [&](std::ostream& os) {
        io::write_svg(os, {io::SvgCurve{fig2.image_boundary, "black", "#c8c8c8", 0.008, true},
                           io::SvgCurve{fig2.omega_boundary, "black", "none", 0.008, true}});
    });
    return files;
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    CLI::App app{"Nonlinear resolvents of holomorphic semigroup generators on the unit disk", "resolvent_lab"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string gen_text = "ex2";
    double r = 0.0, t = 1.0, eps = 1e-3, s_param = -1.0, zeta_angle = 0.0;
    std::string w_text = "0", z_text = "0.5", suite = "all";
    int samples = 100, n = 64, points = 512, pairs = 10000;
    bool no_certify = false, bfid = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--gen", gen_text, "built-in name (identity, ex1, ex2, half) or expression in z");
        sub->add_option("--radii", cfg.radii, "rings in the verification grid");
        sub->add_option("--angles", cfg.angles, "angles per ring");
        sub->add_option("--margin", cfg.margin, "grid margin 1 - max radius");
        sub->add_option("--tol", cfg.solver_tolerance, "accepted resolvent residual");
        sub->add_option("--out", cfg.output, "output path (directory for `figures`)");
    };

    auto* resolve = app.add_subcommand("resolve", "solve z + r f(z) = w with a winding certificate");
    add_common(resolve);
    resolve->add_option("--r", r, "resolvent parameter r >= 0")->required();
    resolve->add_option("--w", w_text, "point of the disk, a+bi or re,im")->required();
    resolve->add_flag("--no-certify", no_certify, "skip the winding-number certificate");

    auto* flow_cmd = app.add_subcommand("flow", "integrate du/dt + f(u) = 0 and emit CSV");
    add_common(flow_cmd);
    flow_cmd->add_option("--z", z_text, "start point");
    flow_cmd->add_option("--t", t, "final time");
    flow_cmd->add_option("--samples", samples, "output rows after t = 0");

    auto* expf = app.add_subcommand("expformula", "n-fold resolvent J_{t/n}^n(z) against the flow");
    add_common(expf);
    expf->add_option("--z", z_text, "start point");
    expf->add_option("--t", t, "time");
    expf->add_option("--n", n, "number of resolvent steps");
    expf->add_option("--format", cfg.format, "csv (default) or json")->check(CLI::IsMember({"csv", "json"}));

    auto* region = app.add_subcommand("region", "boundary curve of J_r(D)");
    add_common(region);
    region->add_option("--r", r, "resolvent parameter")->required();
    region->add_option("--eps", eps, "curve margin in [1e-6, 1e-2]");
    region->add_option("--points", points, "curve points (>= 64)");
    region->add_option("--format", cfg.format, "csv (default) or svg")->check(CLI::IsMember({"csv", "svg"}));

    auto* verify = app.add_subcommand("verify", "grid verification of the geometry of J_r");
    add_common(verify);
    verify->add_option("--r", r, "resolvent parameter")->required();
    verify->add_option("--suite", suite, "nw, starlike, ms, inclusion, convexity or all")
        ->check(CLI::IsMember({"nw", "starlike", "ms", "inclusion", "convexity", "all"}));
    verify->add_option("--s", s_param, "smaller parameter for the inclusion chain (default r/2)");
    verify->add_option("--pairs", pairs, "geodesic pairs for the convexity test");

    auto* loewner = app.add_subcommand("loewner", "Herglotz field, chain identities and qc bound");
    add_common(loewner);

    auto* boundary = app.add_subcommand("boundary", "boundary regular fixed points, or the BFID with --bfid");
    add_common(boundary);
    boundary->add_option("--r", r, "resolvent parameter");
    boundary->add_option("--zeta", zeta_angle, "boundary point as an angle in radians");
    boundary->add_flag("--bfid", bfid, "negative-r resolvent on the BFID of z(1-z)");
    boundary->add_option("--format", cfg.format, "json, svg or csv")->check(CLI::IsMember({"json", "svg", "csv"}));

    auto* figures = app.add_subcommand("figures", "regenerate the resolvent image figures");
    figures->add_option("--out", cfg.output, "output directory");

    std::vector<const char*> argv{"resolvent_lab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return success;
        err << app.help();
        return usage_error;
    }

    try {
        cfg.validate();
        if (figures->parsed()) {
            const std::string dir = cfg.output.empty() ? "figures" : cfg.output;
            json files = write_figures(dir);
            out << json{{"command", "figures"}, {"directory", dir}, {"files", files}}.dump(2) << '\n';
            return success;
        }

        const DiskGrid grid = cfg.grid();
        GeneratorSpec gen;
        try {
            gen = resolve_generator(gen_text, grid);
        } catch (const parse_error& e) {
            err << "--gen: " << e.what() << '\n';
            return usage_error;
        }

        if (resolve->parsed()) {
            const cplx w = parse_complex_literal(w_text);
            const ResolventSolve sol = solve(gen, r, w, !no_certify);
            json doc{{"command", "resolve"},
                     {"generator", gen.name},
                     {"r", r},
                     {"w", to_json(w)},
                     {"z", to_json(sol.z)},
                     {"residual", sol.residual},
                     {"iterations", sol.iterations},
                     {"continuation_steps", sol.continuation_steps},
                     {"winding", sol.winding ? json(*sol.winding) : json(nullptr)}};
            detail::emit_json(doc, cfg.output, out);
            const bool ok = sol.residual < cfg.solver_tolerance && (!sol.winding || *sol.winding == 1);
            return ok ? success : property_failure;
        }

        if (flow_cmd->parsed()) {
            if (samples < 1) throw contract_error("--samples must be positive");
            std::vector<double> times;
            for (int k = 0; k <= samples; ++k) times.push_back(t * k / samples);
            const FlowTrajectory traj = trajectory(gen, parse_complex_literal(z_text), times);
            detail::emit(cfg.output, out, [&](std::ostream& os) { io::write_trajectory_csv(os, traj.times, traj.values); });
            return success;
        }

        if (expf->parsed()) {
            const cplx z0 = parse_complex_literal(z_text);
            const ExponentialFormula ef = exponential_formula(gen, z0, t, n);
            if (cfg.format == "json") {
                detail::emit_json(json{{"command", "expformula"},
                                       {"generator", gen.name},
                                       {"t", t},
                                       {"n", n},
                                       {"approx", to_json(ef.approx)},
                                       {"flow", to_json(flow(gen, z0, t))},
                                       {"error", ef.error}},
                                  cfg.output, out);
            } else {
                std::vector<double> times;
                for (int k = 0; k <= n; ++k) times.push_back(t * k / n);
                detail::emit(cfg.output, out,
                             [&](std::ostream& os) { io::write_trajectory_csv(os, times, ef.iterates); });
            }
            return success;
        }

        if (region->parsed()) {
            const RegionBoundary b = region_boundary(gen, r, points, eps);
            detail::emit(cfg.output, out, [&](std::ostream& os) {
                if (cfg.format == "svg")
                    io::write_svg(os, {io::SvgCurve{b.points, "black", "#c8c8c8", 0.008, true}});
                else
                    io::write_curve_csv(os, b.angles, b.points);
            });
            return success;
        }

        if (verify->parsed()) {
            json reports = json::array();
            bool pass = true;
            auto add = [&](const PropertyReport& rep) {
                pass = pass && rep.pass;
                reports.push_back(to_json(rep));
            };
            const bool all = suite == "all";
            if (all || suite == "nw") add(check_NW(gen, r, grid));
            if (all || suite == "starlike") add(check_starlike_half(gen, r, grid));
            if (all || suite == "ms") add(check_marx_strohhacker(gen, r, grid));
            if (all || suite == "inclusion") add(check_inclusion_chain(gen, s_param < 0.0 ? r / 2 : s_param, r, grid));
            if (all || suite == "convexity") add(check_hyperbolic_convexity(gen, r, pairs, cfg.margin));
            detail::emit_json(json{{"command", "verify"},
                                   {"generator", gen.name},
                                   {"r", r},
                                   {"suite", suite},
                                   {"pass", pass},
                                   {"reports", reports}},
                              cfg.output, out);
            return pass ? success : property_failure;
        }

        if (loewner->parsed()) {
            const std::vector<double> r_list{0.1, 0.6, 1.0, 2.0, 10.0};
            const SectorReport sector = sector_report(gen, r_list, grid);
            const PropertyReport positivity = herglotz_positivity(gen, r_list, grid);
            double divergence_defect = 0.0, chain_defect = 0.0, pde = 0.0;
            for (double T : {1.0, 10.0, 100.0}) {
                const DivergenceIntegral d = divergence_integral(gen, T);
                divergence_defect = std::max(divergence_defect, std::abs(d.numeric - d.exact));
                chain_defect = std::max(chain_defect, chain_derivative_identity(gen, T));
            }
            for (double rr : {0.6, 1.0, 2.0})
                for (cplx w : {cplx{0.3, 0.0}, cplx{0.0, 0.5}, cplx{-0.4, 0.2}})
                    pde = std::max(pde, pde_residual(gen, rr, w, 1e-4));
            const bool pass = sector.p_sector_ok && positivity.pass && divergence_defect < 1e-8 &&
                              chain_defect < 1e-8 && pde < 1e-6;
            detail::emit_json(json{{"command", "loewner"},
                                   {"generator", gen.name},
                                   {"alpha_hat", sector.alpha_hat},
                                   {"k", sector.k ? json(*sector.k) : json(nullptr)},
                                   {"sup_arg_p", sector.sup_arg_p},
                                   {"p_sector_ok", sector.p_sector_ok},
                                   {"min_re_p", positivity.worst_value},
                                   {"divergence_defect", divergence_defect},
                                   {"chain_defect", chain_defect},
                                   {"max_pde_residual", pde},
                                   {"pass", pass}},
                              cfg.output, out);
            return pass ? success : property_failure;
        }

        if (boundary->parsed()) {
            if (bfid) {
                const BfidRegion reg = bfid_region_check(gen, r);
                detail::emit(cfg.output, out, [&](std::ostream& os) {
                    if (cfg.format == "csv") {
                        os << "curve,index,re,im\n";
                        for (const auto& [name, curve] :
                             {std::pair{"omega", &reg.omega_boundary}, std::pair{"image", &reg.image_boundary}})
                            for (std::size_t i = 0; i < curve->size(); ++i)
                                os << name << ',' << i << ',' << io::full((*curve)[i].real()) << ','
                                   << io::full((*curve)[i].imag()) << '\n';
                    } else {
                        io::write_svg(os, {io::SvgCurve{reg.image_boundary, "black", "#c8c8c8", 0.008, true},
                                           io::SvgCurve{reg.omega_boundary, "black", "none", 0.008, true}});
                    }
                });
                return reg.report.pass ? success : property_failure;
            }
            const BrfpClassification c = classify_brfp(gen, r, std::polar(1.0, zeta_angle));
            const auto& a = c.generator;
            detail::emit_json(json{{"command", "boundary"},
                                   {"generator", gen.name},
                                   {"r", r},
                                   {"zeta", to_json(a.zeta)},
                                   {"f_angular_value", to_json(a.f_angular_value)},
                                   {"f_angular_deriv", to_json(a.f_angular_deriv)},
                                   {"is_brnp", a.is_brnp},
                                   {"r_threshold", a.r_threshold ? json(*a.r_threshold) : json(nullptr)},
                                   {"predicted", c.predicted},
                                   {"predicted_deriv", to_json(c.predicted_deriv)},
                                   {"observed", c.observed},
                                   {"observed_limit", to_json(c.observed_limit)},
                                   {"observed_deriv", to_json(c.observed_deriv)},
                                   {"inconclusive", c.inconclusive},
                                   {"agree", c.agree}},
                              cfg.output, out);
            return c.agree || c.inconclusive ? success : property_failure;
        }
    } catch (const contract_error& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return property_failure;
    } catch (const std::invalid_argument& e) {
        err << "error: malformed number: " << e.what() << '\n';
        return usage_error;
    }
    return usage_error;
}

}  // namespace reslab::cli
