#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "vpipe/errors.hpp"
#include "vpipe/geometry.hpp"
#include "vpipe/mechanism.hpp"
#include "vpipe/units.hpp"

namespace vpipe {

/// Dimensionless 2x2 map from commanded motor torques (propulsion, roll) to
/// body-level generalized torques:
///
///   [Mp]   [kpp  kpr] [tau_p]
///   [Mr] = [krp  krr] [tau_r]
///
/// kpp = Gp * N, krr = (Rp/Rs) cos(alpha), kpr = (Ro/Rs) sin(alpha). kpr is
/// the roll-to-propulsion leakage; krp has no geometric formula here and is
/// a free parameter (default 0), exercised only by the stress test.
struct TransmissionMatrix {
    double kpp = 0.0, kpr = 0.0, krp = 0.0, krr = 0.0;
    double alpha = 0.0;       ///< contact angle used [rad]
    double gp = 1.0;          ///< propulsion gear gain
    int n_wheels = 0;         ///< driven omni wheels
    double rp = 0.0, rs = 0.0, ro = 0.0;  ///< lever radii [mm]

    double determinant() const { return kpp * krr - kpr * krp; }

    /// Singular when the determinant vanishes relative to the entry scale.
    bool singular() const {
        const double scale = std::abs(kpp * krr) + std::abs(kpr * krp);
        return std::abs(determinant()) <= 1e-12 * std::max(scale, 1e-300);
    }

    Eigen::Matrix2d matrix() const {
        Eigen::Matrix2d m;
        m << kpp, kpr, krp, krr;
        return m;
    }

    /// Closed-form inverse; the build functions guarantee a nonzero determinant.
    Eigen::Matrix2d inverse() const {
        if (singular()) {
            throw SingularConfigurationError("transmission matrix is singular");
        }
        const double det = determinant();
        Eigen::Matrix2d m;
        m << krr / det, -kpr / det, -krp / det, kpp / det;
        return m;
    }
};

/// Splits a roll-motor torque into its effective rolling component and the
/// leakage-induced propulsive component: (tau_r cos(alpha), tau_r sin(alpha)).
inline std::pair<double, double> roll_projection(double tau_r, double alpha) {
    return {tau_r * std::cos(alpha), tau_r * std::sin(alpha)};
}

/// Fraction of the roll-motor torque that produces useful rolling: cos(alpha).
inline double roll_efficiency(double alpha) {
    if (alpha < 0.0 || alpha > kPi / 2.0) {
        throw ValidationError("alpha_out_of_range", "alpha must lie in [0, pi/2]");
    }
    return std::cos(alpha);
}

/// Assembles the transmission matrix from the wheel radii and contact angle.
/// The rolling lever arm is the pipe radius Rp = Dp/2.
inline TransmissionMatrix build_transmission(const MechanismParams& p, double gp, int n_wheels,
                                             double alpha, double krp = 0.0) {
    p.validate();
    if (n_wheels <= 0 || !(gp > 0.0)) {
        throw ValidationError("bad_drivetrain", "need Gp > 0 and N >= 1");
    }
    TransmissionMatrix t;
    t.alpha = alpha;
    t.gp = gp;
    t.n_wheels = n_wheels;
    t.rp = p.dp / 2.0;
    t.rs = p.rs;
    t.ro = p.ro;
    t.kpp = gp * static_cast<double>(n_wheels);
    t.krr = (t.rp / t.rs) * std::cos(alpha);
    t.kpr = (t.ro / t.rs) * std::sin(alpha);
    t.krp = krp;
    if (t.singular()) {
        throw SingularConfigurationError("transmission matrix is singular");
    }
    return t;
}

/// Stress-test variant: keeps the baseline diagonal and imposes normalized
/// leakage ratios kappa_pr = |kpr|/krr and kappa_rp = |krp|/kpp, both with
/// positive sign.
inline TransmissionMatrix stress_test_matrix(const TransmissionMatrix& baseline,
                                             double kappa_pr, double kappa_rp) {
    if (kappa_pr < 0.0 || kappa_pr >= 1.0 || kappa_rp < 0.0 || kappa_rp >= 1.0) {
        throw ValidationError("kappa_out_of_range", "leakage ratios must lie in [0, 1)");
    }
    TransmissionMatrix t = baseline;
    t.kpr = kappa_pr * baseline.krr;
    t.krp = kappa_rp * baseline.kpp;
    if (t.singular()) {
        throw SingularConfigurationError("stress-test matrix is singular");
    }
    return t;
}

/// Contact angle sampled over the mounting-offset plane (a, n - b).
struct AlphaSurface {
    std::vector<double> a_values;        ///< mm
    std::vector<double> nb_values;       ///< n - b, mm
    std::vector<double> alpha_deg;       ///< row-major [a][nb], NaN where missing
    std::vector<bool> missing;

    double at(std::size_t ia, std::size_t inb) const {
        return alpha_deg[ia * nb_values.size() + inb];
    }
};

/// Sweeps alpha(a, n - b) with all other parameters taken from the template.
/// Negative lateral offsets are realized through b, positive ones through n;
/// alpha depends on the two only through their difference. Unreachable nodes
/// are marked missing.
inline AlphaSurface alpha_surface(const MechanismParams& params_template, double a_min,
                                  double a_max, double nb_min, double nb_max,
                                  std::size_t a_count, std::size_t nb_count) {
    if (a_count < 2 || nb_count < 2) {
        throw ValidationError("grid_too_small", "need at least 2 nodes per axis");
    }
    if (!(a_min <= a_max) || !(nb_min <= nb_max)) {
        throw ValidationError("bad_grid_range", "grid min must not exceed grid max");
    }
    AlphaSurface surf;
    surf.a_values.resize(a_count);
    surf.nb_values.resize(nb_count);
    for (std::size_t i = 0; i < a_count; ++i) {
        surf.a_values[i] =
            a_min + (a_max - a_min) * static_cast<double>(i) / static_cast<double>(a_count - 1);
    }
    for (std::size_t j = 0; j < nb_count; ++j) {
        surf.nb_values[j] = nb_min + (nb_max - nb_min) * static_cast<double>(j) /
                                         static_cast<double>(nb_count - 1);
    }
    surf.alpha_deg.assign(a_count * nb_count, std::numeric_limits<double>::quiet_NaN());
    surf.missing.assign(a_count * nb_count, true);

    for (std::size_t i = 0; i < a_count; ++i) {
        for (std::size_t j = 0; j < nb_count; ++j) {
            MechanismParams p = params_template;
            p.a = surf.a_values[i];
            const double nb = surf.nb_values[j];
            p.n = nb >= 0.0 ? nb : 0.0;
            p.b = nb >= 0.0 ? 0.0 : -nb;
            try {
                surf.alpha_deg[i * nb_count + j] = rad_to_deg(contact_angle(p));
                surf.missing[i * nb_count + j] = false;
            } catch (const ModelError&) {
                // left as missing
            }
        }
    }
    return surf;
}

}  // namespace vpipe
