#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vpipe/errors.hpp"
#include "vpipe/mechanism.hpp"
#include "vpipe/stability.hpp"
#include "vpipe/statics.hpp"

namespace vpipe {

struct DrivetrainParams {
    double gp = defaults::kGearGain;
    int n_wheels = defaults::kDrivenWheels;

    void validate() const {
        if (!(gp > 0.0) || n_wheels < 1) {
            throw ValidationError("bad_drivetrain", "need Gp > 0 and N >= 1");
        }
    }
};

struct ForceSweepSettings {
    double ratio_min = 0.5;
    double ratio_max = 1.0;
    double ratio_step = 0.05;
};

struct StabilitySettings {
    double mu_s_min = 0.02, mu_s_max = 0.5;
    double k_min = 1.0, k_max = 30.0;
    std::size_t resolution = 100;
};

struct SurfaceSettings {
    double a_min = 0.0, a_max = 60.0;
    double nb_min = -40.0, nb_max = 40.0;
    std::size_t resolution = 121;
};

struct SimulationSettings {
    double roll_angle_deg = 360.0;
    double duration_s = 4.0;
    double sample_rate_hz = 200.0;
    double stress_kappa = 0.3;
};

struct OptimizeSettings {
    double a_min = 0.0, a_max = 60.0;
    double b_min = 0.0, b_max = 40.0;
    double n_min = 0.0, n_max = 40.0;
    std::size_t grid_resolution = 21;
    double tolerance_deg = 0.01;
};

struct StudySettings {
    ForceSweepSettings force_sweep;
    StabilitySettings stability;
    SurfaceSettings alpha_surface;
    SimulationSettings simulation;
    OptimizeSettings optimize;
};

/// Fully resolved run configuration. Loaded from JSON with the prototype
/// defaults filling every omitted field; see README for the schema.
struct RunConfig {
    MechanismParams mechanism = defaults::mechanism();
    double total_mass_kg = defaults::kTotalMassKg;
    double gravity = defaults::kGravityMps2;
    MassLayout masses =
        default_mass_layout(defaults::kTotalMassKg * defaults::kGravityMps2);
    SpringModel spring{defaults::kSpringStiffnessNmmPerDeg, defaults::kPreloadDeg};
    FrictionModel friction{defaults::kMuSpherical, defaults::kMuOmni};
    DrivetrainParams drivetrain;
    StudySettings studies;
    std::string output_dir;  ///< empty: resolved by the CLI

    void validate() const {
        mechanism.validate();
        spring.validate();
        friction.validate();
        drivetrain.validate();
        if (!(total_mass_kg > 0.0) || !(gravity > 0.0)) {
            throw ValidationError("nonpositive_mass", "total mass and gravity must be > 0");
        }
        masses.validate();
    }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& node, const std::set<std::string>& allowed,
                                const std::string& path) {
    for (auto it = node.begin(); it != node.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ValidationError("unknown_config_key",
                                  "unknown key '" + path + it.key() + "' in config");
        }
    }
}

inline double get_num(const json& node, const char* key, double fallback) {
    if (!node.contains(key)) {
        return fallback;
    }
    if (!node[key].is_number()) {
        throw ValidationError("bad_config_value", std::string(key) + " must be a number");
    }
    return node[key].get<double>();
}

inline std::size_t get_count(const json& node, const char* key, std::size_t fallback) {
    if (!node.contains(key)) {
        return fallback;
    }
    if (!node[key].is_number_unsigned()) {
        throw ValidationError("bad_config_value",
                              std::string(key) + " must be a non-negative integer");
    }
    return node[key].get<std::size_t>();
}

inline std::size_t line_of_offset(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
        }
    }
    return line;
}

}  // namespace detail

/// Parses and validates a config file. An empty file yields the pure
/// defaults. Unknown keys are rejected; parse errors carry the line number.
inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("config_not_found", "cannot open config file: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    RunConfig cfg;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        cfg.masses = default_mass_layout(cfg.total_mass_kg * cfg.gravity);
        cfg.validate();
        return cfg;
    }

    detail::json root;
    try {
        root = detail::json::parse(text);
    } catch (const detail::json::parse_error& e) {
        throw ValidationError("config_parse_error",
                              "config parse error at line " +
                                  std::to_string(detail::line_of_offset(text, e.byte)) + ": " +
                                  e.what());
    }
    if (!root.is_object()) {
        throw ValidationError("config_parse_error", "config root must be a JSON object");
    }
    detail::reject_unknown_keys(root,
                                {"mechanism", "masses", "spring", "friction", "drivetrain",
                                 "gravity_mps2", "studies", "output_dir"},
                                "");

    if (root.contains("mechanism")) {
        const auto& m = root["mechanism"];
        detail::reject_unknown_keys(
            m, {"L1_mm", "L2_mm", "a_mm", "b_mm", "n_mm", "Wo_mm", "Ro_mm", "Rs_mm", "Dp_mm"},
            "mechanism.");
        cfg.mechanism.l1 = detail::get_num(m, "L1_mm", cfg.mechanism.l1);
        cfg.mechanism.l2 = detail::get_num(m, "L2_mm", cfg.mechanism.l2);
        cfg.mechanism.a = detail::get_num(m, "a_mm", cfg.mechanism.a);
        cfg.mechanism.b = detail::get_num(m, "b_mm", cfg.mechanism.b);
        cfg.mechanism.n = detail::get_num(m, "n_mm", cfg.mechanism.n);
        cfg.mechanism.wo = detail::get_num(m, "Wo_mm", cfg.mechanism.wo);
        cfg.mechanism.ro = detail::get_num(m, "Ro_mm", cfg.mechanism.ro);
        cfg.mechanism.rs = detail::get_num(m, "Rs_mm", cfg.mechanism.rs);
        cfg.mechanism.dp = detail::get_num(m, "Dp_mm", cfg.mechanism.dp);
    }
    cfg.gravity = detail::get_num(root, "gravity_mps2", cfg.gravity);
    if (root.contains("masses")) {
        const auto& m = root["masses"];
        detail::reject_unknown_keys(m, {"total_kg", "components"}, "masses.");
        cfg.total_mass_kg = detail::get_num(m, "total_kg", cfg.total_mass_kg);
        if (m.contains("components")) {
            if (!m["components"].is_array()) {
                throw ValidationError("bad_config_value", "masses.components must be an array");
            }
            cfg.masses.placements.clear();
            for (const auto& c : m["components"]) {
                detail::reject_unknown_keys(c, {"index", "share", "side", "fraction"},
                                            "masses.components.");
                MassPlacement pl;
                pl.index = static_cast<int>(detail::get_num(c, "index", 0.0));
                pl.share = detail::get_num(c, "share", 0.0);
                pl.fraction = detail::get_num(c, "fraction", 0.5);
                const std::string side = c.contains("side") ? c["side"].get<std::string>() : "link1";
                if (side == "link1") {
                    pl.side = ArmSide::kLink1;
                } else if (side == "link2") {
                    pl.side = ArmSide::kLink2;
                } else {
                    throw ValidationError("bad_config_value",
                                          "component side must be 'link1' or 'link2'");
                }
                cfg.masses.placements.push_back(pl);
            }
        }
    }
    if (root.contains("spring")) {
        const auto& s = root["spring"];
        detail::reject_unknown_keys(s, {"K_Nmm_per_deg", "preload_deg"}, "spring.");
        cfg.spring.stiffness = detail::get_num(s, "K_Nmm_per_deg", cfg.spring.stiffness);
        cfg.spring.preload_deg = detail::get_num(s, "preload_deg", cfg.spring.preload_deg);
    }
    if (root.contains("friction")) {
        const auto& f = root["friction"];
        detail::reject_unknown_keys(f, {"mu_s", "mu_o"}, "friction.");
        cfg.friction.mu_s = detail::get_num(f, "mu_s", cfg.friction.mu_s);
        cfg.friction.mu_o = detail::get_num(f, "mu_o", cfg.friction.mu_o);
    }
    if (root.contains("drivetrain")) {
        const auto& d = root["drivetrain"];
        detail::reject_unknown_keys(d, {"Gp", "N"}, "drivetrain.");
        cfg.drivetrain.gp = detail::get_num(d, "Gp", cfg.drivetrain.gp);
        cfg.drivetrain.n_wheels = static_cast<int>(
            detail::get_num(d, "N", static_cast<double>(cfg.drivetrain.n_wheels)));
    }
    if (root.contains("studies")) {
        const auto& s = root["studies"];
        detail::reject_unknown_keys(
            s, {"force_sweep", "stability", "alpha_surface", "simulation", "optimize"},
            "studies.");
        if (s.contains("force_sweep")) {
            const auto& fs = s["force_sweep"];
            detail::reject_unknown_keys(fs, {"ratio_min", "ratio_max", "ratio_step"},
                                        "studies.force_sweep.");
            auto& t = cfg.studies.force_sweep;
            t.ratio_min = detail::get_num(fs, "ratio_min", t.ratio_min);
            t.ratio_max = detail::get_num(fs, "ratio_max", t.ratio_max);
            t.ratio_step = detail::get_num(fs, "ratio_step", t.ratio_step);
        }
        if (s.contains("stability")) {
            const auto& st = s["stability"];
            detail::reject_unknown_keys(
                st, {"mu_s_min", "mu_s_max", "k_min", "k_max", "resolution"},
                "studies.stability.");
            auto& t = cfg.studies.stability;
            t.mu_s_min = detail::get_num(st, "mu_s_min", t.mu_s_min);
            t.mu_s_max = detail::get_num(st, "mu_s_max", t.mu_s_max);
            t.k_min = detail::get_num(st, "k_min", t.k_min);
            t.k_max = detail::get_num(st, "k_max", t.k_max);
            t.resolution = detail::get_count(st, "resolution", t.resolution);
        }
        if (s.contains("alpha_surface")) {
            const auto& su = s["alpha_surface"];
            detail::reject_unknown_keys(su, {"a_min", "a_max", "nb_min", "nb_max", "resolution"},
                                        "studies.alpha_surface.");
            auto& t = cfg.studies.alpha_surface;
            t.a_min = detail::get_num(su, "a_min", t.a_min);
            t.a_max = detail::get_num(su, "a_max", t.a_max);
            t.nb_min = detail::get_num(su, "nb_min", t.nb_min);
            t.nb_max = detail::get_num(su, "nb_max", t.nb_max);
            t.resolution = detail::get_count(su, "resolution", t.resolution);
        }
        if (s.contains("simulation")) {
            const auto& si = s["simulation"];
            detail::reject_unknown_keys(
                si, {"roll_angle_deg", "duration_s", "sample_rate_hz", "stress_kappa"},
                "studies.simulation.");
            auto& t = cfg.studies.simulation;
            t.roll_angle_deg = detail::get_num(si, "roll_angle_deg", t.roll_angle_deg);
            t.duration_s = detail::get_num(si, "duration_s", t.duration_s);
            t.sample_rate_hz = detail::get_num(si, "sample_rate_hz", t.sample_rate_hz);
            t.stress_kappa = detail::get_num(si, "stress_kappa", t.stress_kappa);
        }
        if (s.contains("optimize")) {
            const auto& op = s["optimize"];
            detail::reject_unknown_keys(op,
                                        {"a_min", "a_max", "b_min", "b_max", "n_min", "n_max",
                                         "grid_resolution", "tolerance_deg"},
                                        "studies.optimize.");
            auto& t = cfg.studies.optimize;
            t.a_min = detail::get_num(op, "a_min", t.a_min);
            t.a_max = detail::get_num(op, "a_max", t.a_max);
            t.b_min = detail::get_num(op, "b_min", t.b_min);
            t.b_max = detail::get_num(op, "b_max", t.b_max);
            t.n_min = detail::get_num(op, "n_min", t.n_min);
            t.n_max = detail::get_num(op, "n_max", t.n_max);
            t.grid_resolution = detail::get_count(op, "grid_resolution", t.grid_resolution);
            t.tolerance_deg = detail::get_num(op, "tolerance_deg", t.tolerance_deg);
        }
    }
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string()) {
            throw ValidationError("bad_config_value", "output_dir must be a string");
        }
        cfg.output_dir = root["output_dir"].get<std::string>();
    }

    cfg.masses.total_weight = cfg.total_mass_kg * cfg.gravity;
    cfg.validate();
    return cfg;
}

/// Canonical JSON rendering of a resolved config; also the hashing input for
/// the study manifest.
inline nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["mechanism"] = {{"L1_mm", cfg.mechanism.l1}, {"L2_mm", cfg.mechanism.l2},
                      {"a_mm", cfg.mechanism.a},   {"b_mm", cfg.mechanism.b},
                      {"n_mm", cfg.mechanism.n},   {"Wo_mm", cfg.mechanism.wo},
                      {"Ro_mm", cfg.mechanism.ro}, {"Rs_mm", cfg.mechanism.rs},
                      {"Dp_mm", cfg.mechanism.dp}};
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& pl : cfg.masses.placements) {
        comps.push_back({{"index", pl.index},
                         {"share", pl.share},
                         {"side", pl.side == ArmSide::kLink1 ? "link1" : "link2"},
                         {"fraction", pl.fraction}});
    }
    j["masses"] = {{"total_kg", cfg.total_mass_kg}, {"components", comps}};
    j["spring"] = {{"K_Nmm_per_deg", cfg.spring.stiffness},
                   {"preload_deg", cfg.spring.preload_deg}};
    j["friction"] = {{"mu_s", cfg.friction.mu_s}, {"mu_o", cfg.friction.mu_o}};
    j["drivetrain"] = {{"Gp", cfg.drivetrain.gp}, {"N", cfg.drivetrain.n_wheels}};
    j["gravity_mps2"] = cfg.gravity;
    j["studies"] = {
        {"force_sweep",
         {{"ratio_min", cfg.studies.force_sweep.ratio_min},
          {"ratio_max", cfg.studies.force_sweep.ratio_max},
          {"ratio_step", cfg.studies.force_sweep.ratio_step}}},
        {"stability",
         {{"mu_s_min", cfg.studies.stability.mu_s_min},
          {"mu_s_max", cfg.studies.stability.mu_s_max},
          {"k_min", cfg.studies.stability.k_min},
          {"k_max", cfg.studies.stability.k_max},
          {"resolution", cfg.studies.stability.resolution}}},
        {"alpha_surface",
         {{"a_min", cfg.studies.alpha_surface.a_min},
          {"a_max", cfg.studies.alpha_surface.a_max},
          {"nb_min", cfg.studies.alpha_surface.nb_min},
          {"nb_max", cfg.studies.alpha_surface.nb_max},
          {"resolution", cfg.studies.alpha_surface.resolution}}},
        {"simulation",
         {{"roll_angle_deg", cfg.studies.simulation.roll_angle_deg},
          {"duration_s", cfg.studies.simulation.duration_s},
          {"sample_rate_hz", cfg.studies.simulation.sample_rate_hz},
          {"stress_kappa", cfg.studies.simulation.stress_kappa}}},
        {"optimize",
         {{"a_min", cfg.studies.optimize.a_min},
          {"a_max", cfg.studies.optimize.a_max},
          {"b_min", cfg.studies.optimize.b_min},
          {"b_max", cfg.studies.optimize.b_max},
          {"n_min", cfg.studies.optimize.n_min},
          {"n_max", cfg.studies.optimize.n_max},
          {"grid_resolution", cfg.studies.optimize.grid_resolution},
          {"tolerance_deg", cfg.studies.optimize.tolerance_deg}}}};
    return j;
}

}  // namespace vpipe
