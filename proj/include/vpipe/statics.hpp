#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "vpipe/errors.hpp"
#include "vpipe/geometry.hpp"
#include "vpipe/mechanism.hpp"
#include "vpipe/units.hpp"

namespace vpipe {

// End-view frame used throughout the static model: origin at the V-arm
// joint O, +x along the pipe axis toward the link-1 arm, +y along the
// diameter toward the spherical-wheel wall, z out of plane. Moments are
// counter-clockwise positive. In a vertical pipe gravity acts along the
// pipe axis; we take its direction as -x.

inline Eigen::Vector2d gravity_direction() { return {-1.0, 0.0}; }

/// Signed moment arm of a unit force along `normal_dir` applied at `r`
/// (both in the end-view frame, r relative to O): (r x n) . e_z.
inline double moment_arm(const Eigen::Vector2d& r, const Eigen::Vector2d& normal_dir) {
    if (std::abs(normal_dir.norm() - 1.0) > 1e-12) {
        throw ValidationError("normal_not_unit", "normal direction must be a unit vector");
    }
    return r.x() * normal_dir.y() - r.y() * normal_dir.x();
}

/// One lumped component of the module: index k in {0..4}, weight in N,
/// center-of-mass position in mm relative to O.
struct MassComponent {
    int index = 0;
    double weight = 0.0;
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
};

/// Resolved mass model. Components 0, 1, 3 belong to the link-1 subsystem,
/// components 2, 4 to the link-2 subsystem.
struct MassModel {
    std::vector<MassComponent> components;
    double total_weight = 0.0;  ///< N

    void validate() const {
        double sum = 0.0;
        std::array<bool, 5> seen{};
        for (const auto& c : components) {
            if (c.index < 0 || c.index > 4) {
                throw ValidationError("bad_component_index",
                                      "component index must be in 0..4");
            }
            if (seen[static_cast<std::size_t>(c.index)]) {
                throw ValidationError("duplicate_component_index",
                                      "component index listed twice");
            }
            seen[static_cast<std::size_t>(c.index)] = true;
            if (c.weight < 0.0) {
                throw ValidationError("negative_weight", "component weights must be >= 0");
            }
            sum += c.weight;
        }
        if (std::abs(sum - total_weight) > 1e-9) {
            throw ValidationError("weight_sum_mismatch",
                                  "component weights must sum to the total weight");
        }
    }
};

/// Which arm a component rides on.
enum class ArmSide { kLink1, kLink2 };

/// Configuration-independent mass description: weight shares placed at a
/// fraction along one of the arms. Resolved into a MassModel once the
/// configuration (and hence the arm directions) is known.
struct MassPlacement {
    int index = 0;
    double share = 0.0;
    ArmSide side = ArmSide::kLink1;
    double fraction = 0.5;  ///< position along the arm, 0 = joint, 1 = wheel
};

struct MassLayout {
    double total_weight = 0.0;  ///< N
    std::vector<MassPlacement> placements;

    void validate() const {
        if (!(total_weight > 0.0)) {
            throw ValidationError("nonpositive_total_weight", "total weight must be > 0");
        }
        double share_sum = 0.0;
        std::array<bool, 5> seen{};
        for (const auto& pl : placements) {
            if (pl.index < 0 || pl.index > 4) {
                throw ValidationError("bad_component_index",
                                      "component index must be in 0..4");
            }
            if (seen[static_cast<std::size_t>(pl.index)]) {
                throw ValidationError("duplicate_component_index",
                                      "component index listed twice");
            }
            seen[static_cast<std::size_t>(pl.index)] = true;
            if (pl.share < 0.0) {
                throw ValidationError("negative_weight", "component shares must be >= 0");
            }
            if (pl.fraction < 0.0 || pl.fraction > 1.0) {
                throw ValidationError("fraction_out_of_range",
                                      "arm fraction must lie in [0, 1]");
            }
            share_sum += pl.share;
        }
        if (std::abs(share_sum - 1.0) > 1e-9) {
            throw ValidationError("mass_shares_must_sum_to_one", "mass shares must sum to 1");
        }
    }

    MassModel resolve(const MechanismParams& p, const Configuration& c) const {
        const Eigen::Vector2d u1(std::cos(c.alpha1), -std::sin(c.alpha1));
        const Eigen::Vector2d u2(-std::cos(c.alpha2), -std::sin(c.alpha2));
        MassModel m;
        m.total_weight = total_weight;
        m.components.reserve(placements.size());
        for (const auto& pl : placements) {
            MassComponent comp;
            comp.index = pl.index;
            comp.weight = pl.share * total_weight;
            comp.position = (pl.side == ArmSide::kLink1) ? Eigen::Vector2d(pl.fraction * p.l1 * u1)
                                                         : Eigen::Vector2d(pl.fraction * p.l2 * u2);
            m.components.push_back(comp);
        }
        m.validate();
        return m;
    }
};

/// Default split of the module weight. The data sheet gives only the total;
/// this documented, overridable partition places the drive unit (45%),
/// link-1 arm (15%) and battery/electronics (10%) on the link-1 side and the
/// roll unit (20%) and link-2 arm (10%) on the link-2 side, all with
/// centroids at the arm midpoints.
inline MassLayout default_mass_layout(double total_weight_newton) {
    MassLayout layout;
    layout.total_weight = total_weight_newton;
    layout.placements = {
        {0, 0.45, ArmSide::kLink1, 0.5},  // drive unit
        {1, 0.15, ArmSide::kLink1, 0.5},  // link-1 arm
        {2, 0.20, ArmSide::kLink2, 0.5},  // roll unit
        {3, 0.10, ArmSide::kLink1, 0.5},  // battery / electronics
        {4, 0.10, ArmSide::kLink2, 0.5},  // link-2 arm
    };
    return layout;
}

/// Torsion spring at the V-arm joint. The spring is relaxed with the arms
/// folded together (theta = 0) and winds up as the V opens, so its total
/// deflection at a configuration is preload + theta.
struct SpringModel {
    double stiffness = 0.0;     ///< K [N*mm/deg]
    double preload_deg = 0.0;   ///< deflection already present at theta = 0

    void validate() const {
        if (!(stiffness > 0.0)) {
            throw ValidationError("nonpositive_stiffness", "spring stiffness must be > 0");
        }
        if (preload_deg < 0.0) {
            throw ValidationError("negative_preload", "spring preload must be >= 0");
        }
    }
};

/// Joint torque at a configuration, N*mm. The stiffness is specified in
/// N*mm/deg and converted to N*mm/rad internally.
inline double joint_torque(const SpringModel& spring, const Configuration& c) {
    spring.validate();
    const double k_per_rad = spring.stiffness * 180.0 / kPi;
    return k_per_rad * (deg_to_rad(spring.preload_deg) + c.theta);
}

/// Contact points and signed moment arms of the three wheel-pipe contacts.
struct EndView {
    Eigen::Vector2d spherical_center;  ///< rel. O
    Eigen::Vector2d omni1_center;      ///< rel. O
    Eigen::Vector2d omni2_center;      ///< rel. O
    double arm_n0 = 0.0;               ///< moment arm of FN0 about O [mm]
    double arm_n1 = 0.0;               ///< moment arm of FN1 about O [mm]
    double arm_n2 = 0.0;               ///< moment arm of FN2 about O [mm]
    double joint_height = 0.0;         ///< absolute y of O, pipe center at 0
    double omni_line = 0.0;            ///< absolute y of the omni centerline
};

/// Builds the end-view layout for a solved configuration. The spherical
/// wheel presses the +y wall (inward normal (0,-1)); both omni pairs press
/// the -y wall (inward normal (0,+1)), so each moment arm reduces to the
/// axial offset of the force line of action.
inline EndView end_view(const MechanismParams& p, const Configuration& c) {
    EndView ev;
    const Eigen::Vector2d u1(std::cos(c.alpha1), -std::sin(c.alpha1));
    const Eigen::Vector2d v1(std::sin(c.alpha1), std::cos(c.alpha1));
    ev.spherical_center = (p.n - p.b) * u1 + p.a * v1;
    ev.omni1_center = p.l1 * u1;
    ev.omni2_center = Eigen::Vector2d(-p.l2 * std::cos(c.alpha2), -p.l2 * std::sin(c.alpha2));

    ev.arm_n0 = moment_arm(ev.spherical_center, Eigen::Vector2d(0.0, -1.0));
    ev.arm_n1 = moment_arm(ev.omni1_center, Eigen::Vector2d(0.0, 1.0));
    ev.arm_n2 = moment_arm(ev.omni2_center, Eigen::Vector2d(0.0, 1.0));

    ev.joint_height = (p.dp / 2.0 - p.rs) - ev.spherical_center.y();
    ev.omni_line = -p.dp / 2.0 + c.hwp + p.ro;
    return ev;
}

/// Wheel-pipe normal forces with the quantities that produced them.
struct ContactForces {
    double fn0 = 0.0;  ///< spherical wheel [N]
    double fn1 = 0.0;  ///< link-1 omni pair [N]
    double fn2 = 0.0;  ///< link-2 omni pair [N]
    double arm_n0 = 0.0, arm_n1 = 0.0, arm_n2 = 0.0;  ///< [mm]
    std::array<double, 5> gravity_moments{};          ///< MG0..MG4 [N*mm]
    double joint_torque = 0.0;                        ///< MJ [N*mm]
    bool separation = false;                          ///< any FNi < 0

    double total() const { return fn0 + fn1 + fn2; }
};

/// Closed-form solution of the subsystem moment balances.
///
/// Lateral balance:      FN1 + FN2 - FN0 = 0
/// Link-1 side about O:  lN0 FN0 + lN1 FN1 + MG0 + MG1 + MG3 - MJ = 0
/// Link-2 side about O:  lN2 FN2 + MG2 + MG4 + MJ = 0
///
/// The spring applies equal and opposite torques to the two arms, hence the
/// opposite MJ signs. Solving back to front:
///   FN2 = -(MG2 + MG4 + MJ) / lN2
///   FN1 = (MJ - (MG0 + MG1 + MG3) - lN0 FN2) / (lN0 + lN1)
///   FN0 = FN1 + FN2
///
/// Negative normal forces are reported via the separation flag, never
/// clamped; separation is design feedback.
inline ContactForces solve_normal_forces(const MechanismParams& p, const MassModel& masses,
                                         double mj) {
    masses.validate();
    const Configuration c = solve_configuration(p);
    const EndView ev = end_view(p, c);

    if (std::abs(ev.arm_n2) < 1e-9 || std::abs(ev.arm_n0 + ev.arm_n1) < 1e-9) {
        throw SingularConfigurationError("normal-force moment arm vanishes");
    }

    ContactForces f;
    f.arm_n0 = ev.arm_n0;
    f.arm_n1 = ev.arm_n1;
    f.arm_n2 = ev.arm_n2;
    f.joint_torque = mj;
    const Eigen::Vector2d g = gravity_direction();
    for (const auto& comp : masses.components) {
        f.gravity_moments[static_cast<std::size_t>(comp.index)] =
            comp.weight * moment_arm(comp.position, g);
    }
    const double mg_link1 = f.gravity_moments[0] + f.gravity_moments[1] + f.gravity_moments[3];
    const double mg_link2 = f.gravity_moments[2] + f.gravity_moments[4];

    f.fn2 = -(mg_link2 + mj) / ev.arm_n2;
    f.fn1 = (mj - mg_link1 - ev.arm_n0 * f.fn2) / (ev.arm_n0 + ev.arm_n1);
    f.fn0 = f.fn1 + f.fn2;
    f.separation = (f.fn0 < 0.0) || (f.fn1 < 0.0) || (f.fn2 < 0.0);
    return f;
}

struct SweepRow {
    double ratio = 0.0;  ///< L2 / L1
    double fn0 = 0.0, fn1 = 0.0, fn2 = 0.0;
    double share0 = 0.0, share1 = 0.0, share2 = 0.0;
};

struct SkippedRow {
    double ratio = 0.0;
    std::string reason;
};

struct SweepResult {
    std::vector<SweepRow> rows;        ///< in input order
    std::vector<SkippedRow> skipped;   ///< unreachable or singular ratios
};

/// Normal-force distribution as a function of the link length ratio L2/L1.
/// L1 stays fixed at params.l1; each ratio re-solves the configuration and
/// re-resolves the mass layout. Rows that fail to solve are reported and
/// skipped, not fatal. Rows are independent of each other.
inline SweepResult normal_force_sweep(const MechanismParams& params, const MassLayout& layout,
                                      const SpringModel& spring,
                                      const std::vector<double>& ratios) {
    SweepResult result;
    result.rows.reserve(ratios.size());
    for (double ratio : ratios) {
        const MechanismParams p = params.with_link2(ratio * params.l1);
        try {
            const Configuration c = solve_configuration(p);
            const double mj = joint_torque(spring, c);
            const ContactForces f = solve_normal_forces(p, layout.resolve(p, c), mj);
            SweepRow row;
            row.ratio = ratio;
            row.fn0 = f.fn0;
            row.fn1 = f.fn1;
            row.fn2 = f.fn2;
            const double total = f.total();
            row.share0 = f.fn0 / total;
            row.share1 = f.fn1 / total;
            row.share2 = f.fn2 / total;
            result.rows.push_back(row);
        } catch (const ModelError& e) {
            result.skipped.push_back({ratio, e.what()});
        }
    }
    return result;
}

}  // namespace vpipe
