#pragma once

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vpipe/config.hpp"
#include "vpipe/dynamics.hpp"
#include "vpipe/explorer.hpp"
#include "vpipe/stability.hpp"
#include "vpipe/statics.hpp"
#include "vpipe/studies.hpp"
#include "vpipe/transmission.hpp"
#include "vpipe/units.hpp"

namespace vpipe {
namespace cli {

// Exit codes: 0 success, 1 usage/validation error, 2 numerical/model error.

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

inline RunConfig load_or_default(const std::string& config_path) {
    if (config_path.empty()) {
        RunConfig cfg;
        cfg.validate();
        return cfg;
    }
    return load_config(config_path);
}

inline std::string resolve_out_dir(const std::string& cli_out, const RunConfig& cfg) {
    if (!cli_out.empty()) {
        return cli_out;
    }
    if (!cfg.output_dir.empty()) {
        return cfg.output_dir;
    }
    if (const char* env = std::getenv("VPIPE_OUTPUT_DIR")) {
        if (*env) {
            return env;
        }
    }
    return "out";
}

inline void print_geometry(std::ostream& out, const RunConfig& cfg) {
    const Configuration c = solve_configuration(cfg.mechanism);
    const Configuration b = solve_configuration(cfg.mechanism.zero_separation());
    out << "mechanism: L1=" << cfg.mechanism.l1 << " L2=" << cfg.mechanism.l2
        << " a=" << cfg.mechanism.a << " b=" << cfg.mechanism.b << " n=" << cfg.mechanism.n
        << " Wo=" << cfg.mechanism.wo << " Ro=" << cfg.mechanism.ro
        << " Rs=" << cfg.mechanism.rs << " Dp=" << cfg.mechanism.dp << " [mm]\n";
    out << "Hwp = " << fmt("%.3f", c.hwp) << " mm, Hs = " << fmt("%.3f", c.hs) << " mm\n";
    out << "alpha1 = " << fmt("%.3f", rad_to_deg(c.alpha1))
        << " deg, alpha2 = " << fmt("%.3f", rad_to_deg(c.alpha2))
        << " deg, theta = " << fmt("%.3f", rad_to_deg(c.theta)) << " deg\n";
    out << "contact angle alpha = " << fmt("%.3f", rad_to_deg(c.alpha)) << " deg\n";
    out << "zero-separation baseline alpha = " << fmt("%.1f", rad_to_deg(b.alpha)) << " deg\n";
    out << "roll efficiency cos(alpha) = " << fmt("%.4f", roll_efficiency(c.alpha)) << "\n";
}

inline void print_statics(std::ostream& out, const RunConfig& cfg, const std::string& out_dir) {
    const Configuration c = solve_configuration(cfg.mechanism);
    const double mj = joint_torque(cfg.spring, c);
    const ContactForces f =
        solve_normal_forces(cfg.mechanism, cfg.masses.resolve(cfg.mechanism, c), mj);
    out << "joint torque MJ = " << fmt("%.3f", mj) << " N*mm\n";
    out << "FN0 = " << fmt("%.3f", f.fn0) << " N, FN1 = " << fmt("%.3f", f.fn1)
        << " N, FN2 = " << fmt("%.3f", f.fn2) << " N\n";
    const double total = f.total();
    out << "shares: " << fmt("%.4f", f.fn0 / total) << " / " << fmt("%.4f", f.fn1 / total)
        << " / " << fmt("%.4f", f.fn2 / total) << "\n";
    if (f.separation) {
        out << "warning: contact separation (a normal force is negative)\n";
    }
    std::filesystem::create_directories(out_dir);
    const StudyRecord rec = run_force_sweep_study(cfg, out_dir);
    out << "force sweep: " << rec.rows << " rows -> " << rec.output_files[0] << ", "
        << rec.output_files[1] << "\n";
}

inline void print_stability(std::ostream& out, const RunConfig& cfg,
                            const std::string& out_dir, double calibrate_target,
                            double report_margin) {
    const MechanismParams params = cfg.mechanism.zero_separation();
    SpringModel spring = cfg.spring;
    if (calibrate_target > 0.0) {
        spring.preload_deg = calibrate_preload(params, cfg.masses, cfg.friction,
                                               calibrate_target, spring.stiffness);
        out << "calibrated preload = " << fmt("%.6f", spring.preload_deg) << " deg\n";
    }
    const StabilityResult r = evaluate_stability(params, cfg.masses, spring, cfg.friction);
    out << "zero-separation module at mu_s = " << cfg.friction.mu_s
        << ", K = " << spring.stiffness << " N*mm/deg:\n";
    out << "f_max = " << fmt("%.3f", r.f_max_total) << " N, S = " << fmt("%.4f", r.s)
        << ", traction reserve = " << fmt("%.4f", r.reserve)
        << (r.stable ? " (stable)" : " (unstable)") << "\n";
    out << "design margin S >= " << fmt("%.2f", report_margin) << ": "
        << (r.s >= report_margin ? "met" : "not met") << "\n";
    std::filesystem::create_directories(out_dir);
    RunConfig study_cfg = cfg;
    study_cfg.spring = spring;
    const StudyRecord rec = run_stability_study(study_cfg, out_dir);
    out << "stability map: " << rec.rows << " rows -> ";
    for (std::size_t i = 0; i < rec.output_files.size(); ++i) {
        out << (i ? ", " : "") << rec.output_files[i];
    }
    out << "\n";
}

inline void print_surface(std::ostream& out, const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const StudyRecord rec = run_alpha_surface_study(cfg, out_dir);
    out << "alpha surface: " << rec.rows << " rows -> " << rec.output_files[0] << ", "
        << rec.output_files[1] << "\n";
    const Configuration c = solve_configuration(cfg.mechanism);
    out << "marked mounting point: a = " << cfg.mechanism.a
        << " mm, n - b = " << (cfg.mechanism.n - cfg.mechanism.b)
        << " mm, alpha = " << fmt("%.3f", rad_to_deg(c.alpha)) << " deg\n";
}

inline void print_simulate(std::ostream& out, const RunConfig& cfg, const std::string& out_dir,
                           const std::string& configs_csv) {
    const auto& sim = cfg.studies.simulation;
    const Configuration baseline_cfg = solve_configuration(cfg.mechanism.zero_separation());
    const Configuration mounted_cfg = solve_configuration(cfg.mechanism);
    const BodyModel body =
        make_body_model(cfg.mechanism, baseline_cfg, cfg.total_mass_kg, cfg.gravity);
    const TransmissionMatrix baseline = build_transmission(
        cfg.mechanism, cfg.drivetrain.gp, cfg.drivetrain.n_wheels, baseline_cfg.alpha);
    const TransmissionMatrix optimized = build_transmission(
        cfg.mechanism, cfg.drivetrain.gp, cfg.drivetrain.n_wheels, mounted_cfg.alpha);
    const TransmissionMatrix stress =
        stress_test_matrix(baseline, sim.stress_kappa, sim.stress_kappa);

    std::vector<NamedTransmission> selected;
    std::string token;
    std::stringstream ss(configs_csv);
    while (std::getline(ss, token, ',')) {
        if (token == "optimized") {
            selected.push_back({token, optimized});
        } else if (token == "baseline") {
            selected.push_back({token, baseline});
        } else if (token == "stress") {
            selected.push_back({token, stress});
        } else {
            throw ValidationError("unknown_simulation_config",
                                  "unknown simulation config '" + token +
                                      "' (expected optimized, baseline or stress)");
        }
    }
    const RollTrajectory traj = generate_roll_trajectory(
        deg_to_rad(sim.roll_angle_deg), sim.duration_s, sim.sample_rate_hz);
    const ComparisonReport report = compare_configurations(body, selected, traj);
    for (const auto& entry : report.entries) {
        out << entry.name << ": tau_p mean = " << fmt("%.4f", entry.trace.propulsion.mean)
            << " N*mm, std = " << fmt("%.6f", entry.trace.propulsion.std_dev)
            << " N*mm; tau_r std = " << fmt("%.4f", entry.trace.roll.std_dev) << " N*mm\n";
    }
    std::filesystem::create_directories(out_dir);
    const StudyRecord rec = run_simulation_study(cfg, out_dir);
    out << "traces -> ";
    for (std::size_t i = 0; i < rec.output_files.size(); ++i) {
        out << (i ? ", " : "") << rec.output_files[i];
    }
    out << "\n";
}

inline void print_optimize(std::ostream& out, const RunConfig& cfg) {
    const auto& op = cfg.studies.optimize;
    DesignBounds bounds;
    bounds.a_min = op.a_min;
    bounds.a_max = op.a_max;
    bounds.b_min = op.b_min;
    bounds.b_max = op.b_max;
    bounds.n_min = op.n_min;
    bounds.n_max = op.n_max;
    bounds.grid_resolution = op.grid_resolution;
    bounds.tolerance_deg = op.tolerance_deg;
    const MountingPoint best = minimize_contact_angle(cfg.mechanism, bounds);
    out << "best mounting point: a = " << fmt("%.4f", best.a) << " mm, b = "
        << fmt("%.4f", best.b) << " mm, n = " << fmt("%.4f", best.n) << " mm\n";
    out << "contact angle alpha = " << fmt("%.4f", rad_to_deg(best.alpha)) << " deg\n";
}

}  // namespace detail

/// Dispatches one CLI invocation. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"design analysis for a V-shaped in-pipe robot with a decoupled roll drive"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir_flag;
    app.add_option("--config", config_path, "JSON config file (omit for built-in defaults)");
    app.add_option("--out", out_dir_flag,
                   "output directory (default: config, then $VPIPE_OUTPUT_DIR, then ./out)");

    auto* cmd_check = app.add_subcommand("config-check", "validate a config and echo it");
    auto* cmd_geometry =
        app.add_subcommand("geometry", "solve the end-view configuration and contact angle");
    auto* cmd_statics =
        app.add_subcommand("statics", "normal forces and the link-ratio force sweep");
    double calibrate_target = -1.0;
    double report_margin = 1.5;
    auto* cmd_stability =
        app.add_subcommand("stability", "stability map, critical boundary and margin");
    cmd_stability->add_option("--calibrate", calibrate_target,
                              "recalibrate the spring preload to this safety margin");
    cmd_stability->add_option("--margin", report_margin,
                              "report whether the design meets this margin (default 1.5)");
    auto* cmd_surface =
        app.add_subcommand("alpha-surface", "contact-angle surface over mounting offsets");
    std::string sim_configs = "optimized,baseline,stress";
    auto* cmd_simulate =
        app.add_subcommand("simulate", "inverse-dynamics comparison on the roll maneuver");
    cmd_simulate->add_option("--configs", sim_configs,
                             "comma-separated subset of optimized,baseline,stress");
    auto* cmd_optimize =
        app.add_subcommand("optimize", "minimize |alpha| over the mounting bounds");
    auto* cmd_studies = app.add_subcommand("studies", "run all canonical studies");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << "\n";
        return 1;
    }

    if (app.get_subcommands().empty()) {
        out << app.help();
        return 1;
    }

    try {
        const RunConfig cfg = detail::load_or_default(config_path);
        const std::string out_dir = detail::resolve_out_dir(out_dir_flag, cfg);
        if (cmd_check->parsed()) {
            out << "config ok\n" << config_to_json(cfg).dump(2) << "\n";
        } else if (cmd_geometry->parsed()) {
            detail::print_geometry(out, cfg);
        } else if (cmd_statics->parsed()) {
            detail::print_statics(out, cfg, out_dir);
        } else if (cmd_stability->parsed()) {
            detail::print_stability(out, cfg, out_dir, calibrate_target, report_margin);
        } else if (cmd_surface->parsed()) {
            detail::print_surface(out, cfg, out_dir);
        } else if (cmd_simulate->parsed()) {
            detail::print_simulate(out, cfg, out_dir, sim_configs);
        } else if (cmd_optimize->parsed()) {
            detail::print_optimize(out, cfg);
        } else if (cmd_studies->parsed()) {
            const StudyBundle bundle = run_canonical_studies(cfg, out_dir);
            out << "config hash: " << bundle.config_hash << "\n";
            for (const auto& rec : bundle.studies) {
                out << rec.name << ": " << rec.rows << " rows\n";
            }
            out << "manifest: " << bundle.manifest_path << "\n";
        }
    } catch (const ValidationError& e) {
        err << "error: validation: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const ModelError& e) {
        err << "error: model: " << e.code() << ": " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace cli
}  // namespace vpipe
