#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "vpipe/errors.hpp"
#include "vpipe/statics.hpp"

namespace vpipe {

/// Static friction coefficients at the two contact types.
struct FrictionModel {
    double mu_s = defaults::kMuSpherical;  ///< spherical wheel vs pipe wall
    double mu_o = defaults::kMuOmni;       ///< effective axial value for the omni wheels

    void validate() const {
        if (!(mu_s > 0.0 && mu_s <= 2.0) || !(mu_o > 0.0 && mu_o <= 2.0)) {
            throw ValidationError("friction_out_of_range",
                                  "friction coefficients must lie in (0, 2]");
        }
    }
};

struct StabilityResult {
    double f_max_total = 0.0;  ///< max total static friction along the pipe axis [N]
    double s = 0.0;            ///< safety margin f_max_total / G_total
    double reserve = 0.0;      ///< 1 - 1/S, -inf when S = 0
    bool stable = false;       ///< S >= 1
};

/// Upper bound of the total axial static friction: mu_s FN0 + mu_o (FN1 + FN2).
/// Separated contacts (negative normal force) must be resolved upstream.
inline double max_static_friction(const ContactForces& forces, const FrictionModel& fric) {
    fric.validate();
    if (forces.fn0 < 0.0 || forces.fn1 < 0.0 || forces.fn2 < 0.0) {
        throw ModelError("contact_separation",
                         "negative normal force; friction envelope undefined");
    }
    return fric.mu_s * forces.fn0 + fric.mu_o * (forces.fn1 + forces.fn2);
}

/// Safety margin S = f_max / G_total and the traction reserve 1 - 1/S.
inline StabilityResult safety_margin(double f_max, double g_total) {
    if (!(g_total > 0.0)) {
        throw ValidationError("nonpositive_total_weight", "G_total must be > 0");
    }
    StabilityResult r;
    r.f_max_total = f_max;
    r.s = f_max / g_total;
    r.reserve = (r.s > 0.0) ? 1.0 - 1.0 / r.s : -std::numeric_limits<double>::infinity();
    r.stable = r.s >= 1.0;
    return r;
}

/// Margin of one design point: solve the configuration, the spring torque
/// and the normal forces, then form S against the layout's total weight.
inline StabilityResult evaluate_stability(const MechanismParams& params,
                                          const MassLayout& layout, const SpringModel& spring,
                                          const FrictionModel& fric) {
    const Configuration c = solve_configuration(params);
    const double mj = joint_torque(spring, c);
    const ContactForces f = solve_normal_forces(params, layout.resolve(params, c), mj);
    return safety_margin(max_static_friction(f, fric), layout.total_weight);
}

/// Grid over (mu_s, K) for the stability-domain map.
struct StabilityGridSpec {
    double mu_s_min = 0.02, mu_s_max = 0.5;
    double k_min = 1.0, k_max = 30.0;  ///< N*mm/deg
    std::size_t mu_s_count = 100, k_count = 100;

    void validate() const {
        if (mu_s_count < 2 || k_count < 2) {
            throw ValidationError("grid_too_small", "need at least 2 nodes per axis");
        }
        if (!(mu_s_min < mu_s_max) || !(k_min < k_max)) {
            throw ValidationError("bad_grid_range", "grid min must be below grid max");
        }
    }

    double mu_s_at(std::size_t i) const {
        return mu_s_min + (mu_s_max - mu_s_min) * static_cast<double>(i) /
                              static_cast<double>(mu_s_count - 1);
    }
    double k_at(std::size_t j) const {
        return k_min +
               (k_max - k_min) * static_cast<double>(j) / static_cast<double>(k_count - 1);
    }
};

/// S sampled on the (mu_s, K) grid. Row index = mu_s node, column = K node.
struct StabilityMap {
    StabilityGridSpec grid;
    std::vector<double> s;      ///< row-major, NaN where missing
    std::vector<bool> missing;  ///< per node

    double at(std::size_t i, std::size_t j) const { return s[i * grid.k_count + j]; }
    bool is_missing(std::size_t i, std::size_t j) const {
        return missing[i * grid.k_count + j];
    }
};

/// Evaluates S at every grid node, holding the spring preload fixed while K
/// varies. Nodes that fail to solve are recorded as missing, not fatal.
/// Nodes are independent; output ordering is fixed by the grid.
inline StabilityMap stability_domain_map(const MechanismParams& params,
                                         const MassLayout& layout,
                                         const SpringModel& spring_template, double mu_o,
                                         const StabilityGridSpec& grid) {
    grid.validate();
    StabilityMap map;
    map.grid = grid;
    map.s.assign(grid.mu_s_count * grid.k_count, std::numeric_limits<double>::quiet_NaN());
    map.missing.assign(grid.mu_s_count * grid.k_count, true);

    for (std::size_t i = 0; i < grid.mu_s_count; ++i) {
        const FrictionModel fric{grid.mu_s_at(i), mu_o};
        for (std::size_t j = 0; j < grid.k_count; ++j) {
            SpringModel spring = spring_template;
            spring.stiffness = grid.k_at(j);
            try {
                const StabilityResult r = evaluate_stability(params, layout, spring, fric);
                map.s[i * grid.k_count + j] = r.s;
                map.missing[i * grid.k_count + j] = false;
            } catch (const ModelError&) {
                // left as missing
            }
        }
    }
    return map;
}

struct BoundaryPoint {
    double mu_s = 0.0;
    double k_star = 0.0;   ///< smallest stiffness with S = 1 [N*mm/deg]
    bool saturated = false;  ///< S >= 1 already at k_min
};

/// Critical boundary K*(mu_s) with S(mu_s, K*) = 1, found by bisection on K
/// to |S - 1| < 1e-6. A column that is stable across the whole K range is
/// reported saturated at k_min; a column that never reaches S = 1 is an
/// error.
inline std::vector<BoundaryPoint> critical_boundary(const MechanismParams& params,
                                                    const MassLayout& layout,
                                                    const SpringModel& spring_template,
                                                    double mu_o,
                                                    const StabilityGridSpec& grid) {
    grid.validate();
    auto margin_at = [&](double mu_s, double k) {
        SpringModel spring = spring_template;
        spring.stiffness = k;
        return evaluate_stability(params, layout, spring, FrictionModel{mu_s, mu_o}).s;
    };

    std::vector<BoundaryPoint> boundary;
    boundary.reserve(grid.mu_s_count);
    for (std::size_t i = 0; i < grid.mu_s_count; ++i) {
        const double mu_s = grid.mu_s_at(i);
        const double s_lo = margin_at(mu_s, grid.k_min);
        const double s_hi = margin_at(mu_s, grid.k_max);
        if (s_lo >= 1.0) {
            boundary.push_back({mu_s, grid.k_min, true});
            continue;
        }
        if (s_hi < 1.0) {
            throw NoCrossingError("S stays below 1 across the whole K range");
        }
        double lo = grid.k_min, hi = grid.k_max;
        double mid = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            mid = 0.5 * (lo + hi);
            const double s = margin_at(mu_s, mid);
            if (std::abs(s - 1.0) < 1e-8) {  // well inside the 1e-6 contract
                break;
            }
            (s < 1.0 ? lo : hi) = mid;
        }
        boundary.push_back({mu_s, mid, false});
    }
    return boundary;
}

/// Finds the spring preload that pins the safety margin to `target_s` at the
/// given design point, by bisection over [0, 90] deg until |S - target| < 1e-6.
/// S grows monotonically with preload, so an out-of-bracket target is
/// unachievable.
inline double calibrate_preload(const MechanismParams& params, const MassLayout& layout,
                                const FrictionModel& fric, double target_s,
                                double stiffness = defaults::kSpringStiffnessNmmPerDeg) {
    constexpr double kLo = 0.0, kHi = 90.0, kTol = 1e-6;
    auto margin_at = [&](double preload) {
        return evaluate_stability(params, layout, SpringModel{stiffness, preload}, fric).s;
    };
    const double s_lo = margin_at(kLo);
    const double s_hi = margin_at(kHi);
    if (std::abs(s_lo - target_s) < kTol) {
        return kLo;
    }
    if (std::abs(s_hi - target_s) < kTol) {
        return kHi;
    }
    if (target_s < s_lo || target_s > s_hi) {
        throw UnachievableTargetError(
            "target safety margin lies outside the preload range [0, 90] deg");
    }
    double lo = kLo, hi = kHi;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double s = margin_at(mid);
        if (std::abs(s - target_s) < kTol) {
            break;
        }
        (s < target_s ? lo : hi) = mid;
    }
    return mid;
}

}  // namespace vpipe
