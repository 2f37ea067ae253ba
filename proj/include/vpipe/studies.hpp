#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vpipe/config.hpp"
#include "vpipe/csv.hpp"
#include "vpipe/dynamics.hpp"
#include "vpipe/explorer.hpp"
#include "vpipe/stability.hpp"
#include "vpipe/statics.hpp"
#include "vpipe/svg.hpp"
#include "vpipe/transmission.hpp"

namespace vpipe {

struct StudyRecord {
    std::string name;
    std::size_t rows = 0;
    std::vector<std::string> output_files;
};

struct StudyBundle {
    std::string config_hash;
    std::vector<StudyRecord> studies;
    std::string manifest_path;
};

namespace detail {

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hash_hex(const std::string& data) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

inline std::vector<double> sweep_ratios(const ForceSweepSettings& s) {
    std::vector<double> ratios;
    const auto count = static_cast<std::size_t>(
                           std::llround((s.ratio_max - s.ratio_min) / s.ratio_step)) +
                       1;
    ratios.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        ratios.push_back(s.ratio_min + static_cast<double>(i) * s.ratio_step);
    }
    return ratios;
}

}  // namespace detail

/// Link-length-ratio force study: CSV table plus a two-panel plot of the
/// normal forces and their shares.
inline StudyRecord run_force_sweep_study(const RunConfig& cfg, const std::string& out_dir) {
    const auto ratios = detail::sweep_ratios(cfg.studies.force_sweep);
    const SweepResult sweep =
        normal_force_sweep(cfg.mechanism, cfg.masses, cfg.spring, ratios);

    StudyRecord rec;
    rec.name = "force_sweep";
    const std::string csv_path = out_dir + "/force_sweep.csv";
    CsvWriter csv(csv_path);
    csv.header({"ratio", "FN0_N", "FN1_N", "FN2_N", "share0", "share1", "share2"});
    std::vector<double> xs, f0, f1, f2, s0, s1, s2;
    for (const auto& row : sweep.rows) {
        csv.row({csv_number(row.ratio), csv_number(row.fn0), csv_number(row.fn1),
                 csv_number(row.fn2), csv_number(row.share0), csv_number(row.share1),
                 csv_number(row.share2)});
        xs.push_back(row.ratio);
        f0.push_back(row.fn0);
        f1.push_back(row.fn1);
        f2.push_back(row.fn2);
        s0.push_back(row.share0);
        s1.push_back(row.share1);
        s2.push_back(row.share2);
    }
    rec.rows = csv.rows();
    if (xs.empty()) {
        throw ModelError("empty_sweep", "no reachable configuration in the ratio range");
    }

    svg::Document doc(720, 640);
    double fmax = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fmax = std::max({fmax, f0[i], f1[i], f2[i]});
    }
    svg::Frame top{80, 40, 560, 230, xs.front(), xs.back(), 0.0, fmax * 1.1};
    doc.add(svg::polyline(top, xs, f0, "#1f77b4", 2.0));
    doc.add(svg::polyline(top, xs, f1, "#2ca02c", 2.0));
    doc.add(svg::polyline(top, xs, f2, "#ff7f0e", 2.0));
    doc.add(svg::axes(top, "L2 / L1", "normal force [N]", "Wheel-pipe normal forces"));
    doc.add(svg::legend_entry(top.px0 + 10, top.py0 + 14, "#1f77b4", "FN0 (spherical)"));
    doc.add(svg::legend_entry(top.px0 + 10, top.py0 + 30, "#2ca02c", "FN1 (link-1 omni)"));
    doc.add(svg::legend_entry(top.px0 + 10, top.py0 + 46, "#ff7f0e", "FN2 (link-2 omni)"));

    svg::Frame bottom{80, 340, 560, 230, xs.front(), xs.back(), 0.0, 1.0};
    doc.add(svg::polyline(bottom, xs, s0, "#1f77b4", 2.0));
    doc.add(svg::polyline(bottom, xs, s1, "#2ca02c", 2.0));
    doc.add(svg::polyline(bottom, xs, s2, "#ff7f0e", 2.0));
    doc.add(svg::line(bottom.x(xs.front()), bottom.y(0.5), bottom.x(xs.back()), bottom.y(0.5),
                      "#999999", 1.0, "4,3"));
    doc.add(svg::axes(bottom, "L2 / L1", "share of total", "Normal-force shares"));
    const std::string svg_path = out_dir + "/force_sweep.svg";
    doc.write(svg_path);

    rec.output_files = {csv_path, svg_path};
    return rec;
}

/// Stability-domain study over (mu_s, K). Follows the nominal analysis in
/// evaluating the zero-separation module. Emits the map CSV, the critical
/// boundary CSV and a heat-map with the S = 1 contour.
inline StudyRecord run_stability_study(const RunConfig& cfg, const std::string& out_dir) {
    const MechanismParams params = cfg.mechanism.zero_separation();
    StabilityGridSpec grid;
    grid.mu_s_min = cfg.studies.stability.mu_s_min;
    grid.mu_s_max = cfg.studies.stability.mu_s_max;
    grid.k_min = cfg.studies.stability.k_min;
    grid.k_max = cfg.studies.stability.k_max;
    grid.mu_s_count = cfg.studies.stability.resolution;
    grid.k_count = cfg.studies.stability.resolution;

    const StabilityMap map =
        stability_domain_map(params, cfg.masses, cfg.spring, cfg.friction.mu_o, grid);
    const auto boundary =
        critical_boundary(params, cfg.masses, cfg.spring, cfg.friction.mu_o, grid);

    StudyRecord rec;
    rec.name = "stability_map";
    const std::string map_path = out_dir + "/stability_map.csv";
    {
        CsvWriter csv(map_path);
        csv.header({"mu_s", "K_Nmm_per_deg", "S", "stable"});
        for (std::size_t i = 0; i < grid.mu_s_count; ++i) {
            for (std::size_t j = 0; j < grid.k_count; ++j) {
                if (map.is_missing(i, j)) {
                    csv.row({csv_number(grid.mu_s_at(i)), csv_number(grid.k_at(j)), "nan", "0"});
                } else {
                    const double s = map.at(i, j);
                    csv.row({csv_number(grid.mu_s_at(i)), csv_number(grid.k_at(j)),
                             csv_number(s), s >= 1.0 ? "1" : "0"});
                }
            }
        }
        rec.rows = csv.rows();
    }
    const std::string boundary_path = out_dir + "/stability_boundary.csv";
    {
        CsvWriter csv(boundary_path);
        csv.header({"mu_s", "K_star_Nmm_per_deg", "saturated"});
        for (const auto& bp : boundary) {
            csv.row({csv_number(bp.mu_s), csv_number(bp.k_star), bp.saturated ? "1" : "0"});
        }
    }

    svg::Document doc(760, 560);
    svg::Frame frame{90, 50, 560, 430, grid.mu_s_min, grid.mu_s_max, grid.k_min, grid.k_max};
    double s_max = 1.0;
    for (double s : map.s) {
        if (std::isfinite(s)) {
            s_max = std::max(s_max, s);
        }
    }
    std::vector<double> mu_values(grid.mu_s_count), k_values(grid.k_count);
    for (std::size_t i = 0; i < grid.mu_s_count; ++i) {
        mu_values[i] = grid.mu_s_at(i);
    }
    for (std::size_t j = 0; j < grid.k_count; ++j) {
        k_values[j] = grid.k_at(j);
    }
    doc.add(svg::heatmap(frame, mu_values, k_values, map.s, [s_max](double s) {
        if (s < 1.0) {
            return svg::blend(0xd6, 0x2c, 0x2c, 0xff, 0xe5, 0xe5, s);  // unstable: red shades
        }
        const double t = (s - 1.0) / (s_max - 1.0);
        return svg::blend(0xff, 0xff, 0xff, 0x41, 0x6f, 0xb0, t);  // stable: white to blue
    }));
    doc.add(svg::draw_contour(frame, svg::contour_segments(mu_values, k_values, map.s, 1.0),
                              "#c00000", 3.0));
    doc.add(svg::circle(frame.x(defaults::kMuSpherical),
                        frame.y(defaults::kSpringStiffnessNmmPerDeg), 5.0, "#ffd700",
                        "#333333"));
    doc.add(svg::axes(frame, "mu_s", "K [N*mm/deg]", "Stability domain, S = 1 boundary in red"));
    const std::string svg_path = out_dir + "/stability_map.svg";
    doc.write(svg_path);

    rec.output_files = {map_path, boundary_path, svg_path};
    return rec;
}

/// Contact-angle surface over the mounting offsets, with the configured
/// mounting point marked.
inline StudyRecord run_alpha_surface_study(const RunConfig& cfg, const std::string& out_dir) {
    const auto& s = cfg.studies.alpha_surface;
    const AlphaSurface surf = alpha_surface(cfg.mechanism, s.a_min, s.a_max, s.nb_min, s.nb_max,
                                            s.resolution, s.resolution);

    StudyRecord rec;
    rec.name = "alpha_surface";
    const std::string csv_path = out_dir + "/alpha_surface.csv";
    {
        CsvWriter csv(csv_path);
        csv.header({"a", "n_minus_b", "alpha_deg"});
        for (std::size_t i = 0; i < surf.a_values.size(); ++i) {
            for (std::size_t j = 0; j < surf.nb_values.size(); ++j) {
                csv.row({csv_number(surf.a_values[i]), csv_number(surf.nb_values[j]),
                         surf.missing[i * surf.nb_values.size() + j] ? "nan"
                                                                     : csv_number(surf.at(i, j))});
            }
        }
        rec.rows = csv.rows();
    }

    svg::Document doc(760, 560);
    svg::Frame frame{90, 50, 560, 430, s.a_min, s.a_max, s.nb_min, s.nb_max};
    double alpha_max = 1.0;
    for (double v : surf.alpha_deg) {
        if (std::isfinite(v)) {
            alpha_max = std::max(alpha_max, v);
        }
    }
    doc.add(svg::heatmap(frame, surf.a_values, surf.nb_values, surf.alpha_deg,
                         [alpha_max](double v) {
                             return svg::blend(0xff, 0xff, 0xff, 0xd6, 0x2c, 0x2c, v / alpha_max);
                         }));
    for (double level : {2.0, 5.0, 10.0, 15.0, 20.0}) {
        doc.add(svg::draw_contour(
            frame, svg::contour_segments(surf.a_values, surf.nb_values, surf.alpha_deg, level),
            "#555555", 1.0));
    }
    doc.add(svg::circle(frame.x(cfg.mechanism.a), frame.y(cfg.mechanism.n - cfg.mechanism.b),
                        5.0, "#ffd700", "#333333"));
    doc.add(svg::axes(frame, "a [mm]", "n - b [mm]",
                      "Contact angle alpha(a, n-b) [deg], mounting point marked"));
    const std::string svg_path = out_dir + "/alpha_surface.svg";
    doc.write(svg_path);

    rec.output_files = {csv_path, svg_path};
    return rec;
}

/// Inverse-dynamics comparison of the optimized, zero-separation baseline
/// and stress-test transmissions on the default roll maneuver.
inline StudyRecord run_simulation_study(const RunConfig& cfg, const std::string& out_dir) {
    const auto& sim = cfg.studies.simulation;
    const Configuration baseline_cfg =
        solve_configuration(cfg.mechanism.zero_separation());
    const Configuration mounted_cfg = solve_configuration(cfg.mechanism);

    const BodyModel body =
        make_body_model(cfg.mechanism, baseline_cfg, cfg.total_mass_kg, cfg.gravity);
    const TransmissionMatrix baseline =
        build_transmission(cfg.mechanism, cfg.drivetrain.gp, cfg.drivetrain.n_wheels,
                           baseline_cfg.alpha);
    const TransmissionMatrix optimized =
        build_transmission(cfg.mechanism, cfg.drivetrain.gp, cfg.drivetrain.n_wheels,
                           mounted_cfg.alpha);
    const TransmissionMatrix stress =
        stress_test_matrix(baseline, sim.stress_kappa, sim.stress_kappa);

    const RollTrajectory traj = generate_roll_trajectory(
        deg_to_rad(sim.roll_angle_deg), sim.duration_s, sim.sample_rate_hz);
    const ComparisonReport report = compare_configurations(
        body, {{"optimized", optimized}, {"baseline", baseline}, {"stress", stress}}, traj);

    StudyRecord rec;
    rec.name = "roll_simulation";
    const std::string csv_path = out_dir + "/roll_simulation.csv";
    {
        CsvWriter csv(csv_path);
        csv.header({"t_s", "tau_p_Nmm", "tau_r_Nmm", "config"});
        for (const auto& entry : report.entries) {
            for (const auto& s : entry.trace.samples) {
                csv.row({csv_number(s.t), csv_number(s.tau_p), csv_number(s.tau_r), entry.name});
            }
        }
        rec.rows = csv.rows();
    }

    const std::string summary_path = out_dir + "/roll_simulation_summary.json";
    {
        nlohmann::json j;
        for (const auto& entry : report.entries) {
            j["configs"][entry.name] = {{"tau_p_mean_Nmm", entry.trace.propulsion.mean},
                                        {"tau_p_std_Nmm", entry.trace.propulsion.std_dev},
                                        {"tau_r_mean_Nmm", entry.trace.roll.mean},
                                        {"tau_r_std_Nmm", entry.trace.roll.std_dev}};
        }
        nlohmann::json order = nlohmann::json::array();
        for (std::size_t idx : report.ranking) {
            order.push_back(report.entries[idx].name);
        }
        j["ranking_by_tau_p_std"] = order;
        std::ofstream out(summary_path, std::ios::binary);
        out << j.dump(2) << '\n';
    }

    svg::Document doc(760, 640);
    const std::vector<std::string> colors = {"#2ca02c", "#1f77b4", "#d62728"};
    double tp_min = 0.0, tp_max = 0.0, tr_min = 0.0, tr_max = 0.0;
    for (const auto& entry : report.entries) {
        for (const auto& s : entry.trace.samples) {
            tp_min = std::min(tp_min, s.tau_p);
            tp_max = std::max(tp_max, s.tau_p);
            tr_min = std::min(tr_min, s.tau_r);
            tr_max = std::max(tr_max, s.tau_r);
        }
    }
    svg::Frame top{90, 40, 560, 230, 0.0, sim.duration_s, tp_min * 1.1 - 1.0, tp_max * 1.1 + 1.0};
    svg::Frame bottom{90, 340, 560, 230, 0.0, sim.duration_s, tr_min * 1.1 - 1.0,
                      tr_max * 1.1 + 1.0};
    for (std::size_t e = 0; e < report.entries.size(); ++e) {
        std::vector<double> ts, tp, tr;
        for (const auto& s : report.entries[e].trace.samples) {
            ts.push_back(s.t);
            tp.push_back(s.tau_p);
            tr.push_back(s.tau_r);
        }
        doc.add(svg::polyline(top, ts, tp, colors[e % colors.size()], 1.6));
        doc.add(svg::polyline(bottom, ts, tr, colors[e % colors.size()], 1.6));
        doc.add(svg::legend_entry(top.px0 + 10, top.py0 + 14 + 16 * static_cast<double>(e),
                                  colors[e % colors.size()], report.entries[e].name));
    }
    doc.add(svg::axes(top, "t [s]", "tau_p [N*mm]", "Propulsion command"));
    doc.add(svg::axes(bottom, "t [s]", "tau_r [N*mm]", "Roll command"));
    const std::string svg_path = out_dir + "/roll_simulation.svg";
    doc.write(svg_path);

    rec.output_files = {csv_path, summary_path, svg_path};
    return rec;
}

/// Runs the four canonical studies into `out_dir` and writes a manifest with
/// the config hash and per-study row counts. Re-running with the same config
/// reproduces every file byte for byte.
inline StudyBundle run_canonical_studies(const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    StudyBundle bundle;
    bundle.config_hash = detail::hash_hex(config_to_json(cfg).dump());
    bundle.studies.push_back(run_force_sweep_study(cfg, out_dir));
    bundle.studies.push_back(run_stability_study(cfg, out_dir));
    bundle.studies.push_back(run_alpha_surface_study(cfg, out_dir));
    bundle.studies.push_back(run_simulation_study(cfg, out_dir));

    nlohmann::json manifest;
    manifest["config_hash"] = bundle.config_hash;
    manifest["studies"] = nlohmann::json::array();
    for (const auto& rec : bundle.studies) {
        nlohmann::json files = nlohmann::json::array();
        for (const auto& f : rec.output_files) {
            files.push_back(std::filesystem::path(f).filename().string());
        }
        manifest["studies"].push_back(
            {{"name", rec.name}, {"rows", rec.rows}, {"output_files", files}});
    }
    bundle.manifest_path = out_dir + "/manifest.json";
    std::ofstream out(bundle.manifest_path, std::ios::binary);
    out << manifest.dump(2) << '\n';
    return bundle;
}

}  // namespace vpipe
