#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "vpipe/errors.hpp"
#include "vpipe/geometry.hpp"
#include "vpipe/mechanism.hpp"
#include "vpipe/transmission.hpp"
#include "vpipe/units.hpp"

namespace vpipe {

/// Two-link rigid-body model in generalized coordinates q = [z, phi]
/// (axial displacement, roll angle about the pipe axis). SI units except the
/// lengths, which keep the module's millimetre convention and are converted
/// where used.
struct BodyModel {
    double m1 = 0.0, m2 = 0.0;  ///< link-side masses [kg]
    double l1 = 0.0, l2 = 0.0;  ///< link lengths [mm]
    double theta1 = 0.0, theta2 = 0.0;  ///< arm configuration angles [rad]
    double g = defaults::kGravityMps2;  ///< m/s^2
    double ro = 0.0;            ///< omni-wheel radius [mm]
    double m_total = 0.0;       ///< kg
    bool vertical = true;       ///< vertical pipe: gravity along the axis

    void validate() const {
        if (std::abs(m1 + m2 - m_total) > 1e-9) {
            throw ValidationError("mass_sum_mismatch", "m1 + m2 must equal m_total");
        }
        if (!(m_total > 0.0) || !(l1 > 0.0) || !(l2 > 0.0) || !(ro > 0.0)) {
            throw ValidationError("nonpositive_length", "body masses and lengths must be > 0");
        }
    }
};

/// Splits the module mass across the links in proportion to their lengths.
inline BodyModel make_body_model(const MechanismParams& p, const Configuration& c,
                                 double total_mass_kg, double g = defaults::kGravityMps2,
                                 bool vertical = true) {
    BodyModel body;
    body.m_total = total_mass_kg;
    body.m1 = total_mass_kg * p.l1 / (p.l1 + p.l2);
    body.m2 = total_mass_kg - body.m1;
    body.l1 = p.l1;
    body.l2 = p.l2;
    body.theta1 = c.theta1;
    body.theta2 = c.theta2;
    body.g = g;
    body.ro = p.ro;
    body.vertical = vertical;
    body.validate();
    return body;
}

/// Rigid-body inertia matrix in the [z, phi] coordinates:
///
///   M = diag( m1 + m2,  sum_i m_i (L_i^2/4 sin^2(theta_i) + L_i^2/12) )
///
/// The off-diagonal entries are identically zero: the structure carries no
/// translation-rotation inertial crosstalk. M[0][0] in kg, M[1][1] in kg*m^2.
inline Eigen::Matrix2d inertia_matrix(const BodyModel& body) {
    body.validate();
    const double l1 = mm_to_m(body.l1);
    const double l2 = mm_to_m(body.l2);
    const double s1 = std::sin(body.theta1);
    const double s2 = std::sin(body.theta2);
    const double i_roll = body.m1 * (l1 * l1 / 4.0 * s1 * s1 + l1 * l1 / 12.0) +
                          body.m2 * (l2 * l2 / 4.0 * s2 * s2 + l2 * l2 / 12.0);
    Eigen::Matrix2d m;
    m << body.m1 + body.m2, 0.0, 0.0, i_roll;
    return m;
}

/// Velocity-dependent and gravity loads, already harmonized to torque units
/// [N*m, N*m]: the translational channel carries R_o as lever arm, so the
/// generalized force vector matches the transmission matrix's output side.
/// The inertia matrix is configuration-constant in a straight pipe, so the
/// Coriolis/centrifugal contribution is identically zero and the load does
/// not depend on q or q_dot. In a vertical pipe gravity loads only the
/// propulsion channel.
inline Eigen::Vector2d generalized_load(const BodyModel& body, const Eigen::Vector2d& /*q*/,
                                        const Eigen::Vector2d& /*q_dot*/) {
    body.validate();
    const double gravity_torque =
        body.vertical ? body.m_total * body.g * mm_to_m(body.ro) : 0.0;
    return {gravity_torque, 0.0};
}

struct TrajectorySample {
    double t = 0.0;         ///< s
    double phi = 0.0;       ///< rad
    double phi_dot = 0.0;   ///< rad/s
    double phi_ddot = 0.0;  ///< rad/s^2
};

/// Station-keeping roll maneuver: z is held constant while phi follows a
/// smooth S-shaped profile with zero boundary velocity and acceleration.
struct RollTrajectory {
    std::vector<TrajectorySample> samples;
    double total_angle = 0.0;  ///< rad
    double duration = 0.0;     ///< s
};

/// Quintic smoothstep profile phi(u) = Phi (6u^5 - 15u^4 + 10u^3), u = t/T.
/// Velocity peaks at 15/8 * Phi/T mid-trajectory; phi is monotone.
inline RollTrajectory generate_roll_trajectory(double total_angle, double duration,
                                               double sample_rate) {
    if (!(duration > 0.0)) {
        throw ValidationError("nonpositive_duration", "trajectory duration must be > 0");
    }
    if (!(sample_rate >= 50.0)) {
        throw ValidationError("sample_rate_too_low", "need a sample rate of at least 50 Hz");
    }
    RollTrajectory traj;
    traj.total_angle = total_angle;
    traj.duration = duration;
    const auto count = static_cast<std::size_t>(std::llround(duration * sample_rate)) + 1;
    traj.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(count - 1);
        TrajectorySample& s = traj.samples[i];
        s.t = u * duration;
        s.phi = total_angle * (((6.0 * u - 15.0) * u + 10.0) * u * u * u);
        s.phi_dot = total_angle / duration * 30.0 * u * u * (1.0 - u) * (1.0 - u);
        s.phi_ddot = total_angle / (duration * duration) * 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
    }
    return traj;
}

struct TorqueSample {
    double t = 0.0;      ///< s
    double tau_p = 0.0;  ///< N*mm
    double tau_r = 0.0;  ///< N*mm
};

struct ChannelStats {
    double mean = 0.0;
    double std_dev = 0.0;
};

struct TorqueTrace {
    std::vector<TorqueSample> samples;
    ChannelStats propulsion;
    ChannelStats roll;
};

namespace detail {

inline ChannelStats channel_stats(const std::vector<double>& values) {
    ChannelStats st;
    if (values.empty()) {
        return st;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    st.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) {
        sq += (v - st.mean) * (v - st.mean);
    }
    st.std_dev = std::sqrt(sq / static_cast<double>(values.size()));
    return st;
}

}  // namespace detail

/// Required motor commands for the prescribed roll with axial station
/// keeping (z_dd = z_d = 0):
///
///   tau_cmd = T_A^{-1} (M q_dd + G)
///
/// with q_dd = (0, phi_dd). Torques are reported in N*mm.
inline TorqueTrace inverse_dynamics(const BodyModel& body, const TransmissionMatrix& ta,
                                    const RollTrajectory& traj) {
    const Eigen::Matrix2d inv = ta.inverse();
    const Eigen::Matrix2d m = inertia_matrix(body);
    const Eigen::Vector2d load =
        generalized_load(body, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero());

    TorqueTrace trace;
    trace.samples.resize(traj.samples.size());
    std::vector<double> taup(traj.samples.size());
    std::vector<double> taur(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const Eigen::Vector2d q_ddot(0.0, traj.samples[i].phi_ddot);
        const Eigen::Vector2d tau = inv * (m * q_ddot + load);
        if (!std::isfinite(tau.x()) || !std::isfinite(tau.y())) {
            throw NonFiniteError("inverse dynamics produced a non-finite torque");
        }
        trace.samples[i] = {traj.samples[i].t, nm_to_nmm(tau.x()), nm_to_nmm(tau.y())};
        taup[i] = trace.samples[i].tau_p;
        taur[i] = trace.samples[i].tau_r;
    }
    trace.propulsion = detail::channel_stats(taup);
    trace.roll = detail::channel_stats(taur);
    return trace;
}

struct NamedTransmission {
    std::string name;
    TransmissionMatrix matrix;
};

struct ComparisonEntry {
    std::string name;
    TorqueTrace trace;
};

struct ComparisonReport {
    std::vector<ComparisonEntry> entries;    ///< in input order
    std::vector<std::size_t> ranking;        ///< indices sorted by tau_p std, ascending
};

/// Runs the same maneuver through each transmission configuration and ranks
/// them by propulsion-channel disturbance. Deterministic: ties keep input
/// order.
inline ComparisonReport compare_configurations(const BodyModel& body,
                                               const std::vector<NamedTransmission>& configs,
                                               const RollTrajectory& traj) {
    if (configs.empty()) {
        throw ValidationError("no_configurations", "need at least one configuration");
    }
    ComparisonReport report;
    report.entries.reserve(configs.size());
    for (const auto& cfg : configs) {
        report.entries.push_back({cfg.name, inverse_dynamics(body, cfg.matrix, traj)});
    }
    report.ranking.resize(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        report.ranking[i] = i;
    }
    std::stable_sort(report.ranking.begin(), report.ranking.end(),
                     [&](std::size_t lhs, std::size_t rhs) {
                         return report.entries[lhs].trace.propulsion.std_dev <
                                report.entries[rhs].trace.propulsion.std_dev;
                     });
    return report;
}

}  // namespace vpipe
