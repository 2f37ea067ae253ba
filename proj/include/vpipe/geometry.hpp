#pragma once

#include <algorithm>
#include <cmath>

#include "vpipe/errors.hpp"
#include "vpipe/mechanism.hpp"
#include "vpipe/units.hpp"

namespace vpipe {

/// Solved end-view state of the module inside the pipe. Angles in radians.
struct Configuration {
    double hwp = 0.0;     ///< omni-wheel-to-wall clearance [mm]
    double hs = 0.0;      ///< omni centerline to spherical-wheel-center offset [mm]
    double alpha1 = 0.0;  ///< link-1 angle vs the pipe axis
    double alpha2 = 0.0;  ///< link-2 angle vs the pipe axis
    double theta1 = 0.0;  ///< pi/2 - alpha1
    double theta2 = 0.0;  ///< pi/2 - alpha2
    double theta = 0.0;   ///< total V-opening angle theta1 + theta2
    double alpha = 0.0;   ///< spherical-wheel contact angle (= alpha1)
};

namespace detail {

/// Arcsine-domain guard: absorbs rounding up to 1e-9 past +-1, anything
/// beyond is a genuinely unreachable design.
inline double clamp_unit_interval(double x, const char* what) {
    constexpr double kTol = 1e-9;
    if (x > 1.0) {
        if (x > 1.0 + kTol) {
            throw UnreachableConfigurationError(what);
        }
        return 1.0;
    }
    if (x < -1.0) {
        if (x < -1.0 - kTol) {
            throw UnreachableConfigurationError(what);
        }
        return -1.0;
    }
    return x;
}

}  // namespace detail

/// Clearance between an omni wheel of the pair (spacing wo) and the pipe
/// wall, measured along the diameter: (Dp - sqrt(Dp^2 - Wo^2)) / 2.
inline double wheel_wall_clearance(double dp, double wo) {
    if (wo < 0.0 || !(wo < dp)) {
        throw ValidationError("wheel_spacing_exceeds_pipe",
                              "need 0 <= Wo < Dp for the wall clearance");
    }
    return 0.5 * (dp - std::sqrt(dp * dp - wo * wo));
}

/// Diametral distance from the omni-wheel centerline to the spherical-wheel
/// center: Hs = Dp - Rs - Hwp - Ro. Must come out positive.
inline double spherical_center_offset(double dp, double rs, double ro, double hwp) {
    const double hs = dp - rs - hwp - ro;
    if (!(hs > 0.0)) {
        throw InvalidGeometryError("spherical wheel does not fit: Hs <= 0");
    }
    return hs;
}

/// Solves the full end-view configuration.
///
/// Link 1 spans from the joint down to the omni centerline; the spherical
/// wheel sits at offset (n - b) along link 1 and a perpendicular to it.
/// Requiring the spherical wheel to touch the opposite wall gives
///   (L1 - n + b) sin(alpha1) + a cos(alpha1) = Hs
/// whose principal solution is
///   alpha1 = asin(Hs / sqrt((L1-n+b)^2 + a^2)) - atan(a / (L1-n+b)),
/// and requiring both omni pairs on one centerline gives
///   alpha2 = asin(L1 sin(alpha1) / L2).
/// Principal values are kept in [0, pi/2]; a negative raw alpha1 is clamped
/// at the 0 boundary.
///
/// Pure function; safe to call concurrently.
inline Configuration solve_configuration(const MechanismParams& p) {
    p.validate();

    Configuration c;
    c.hwp = wheel_wall_clearance(p.dp, p.wo);
    c.hs = spherical_center_offset(p.dp, p.rs, p.ro, c.hwp);

    const double denom = p.l1 - p.n + p.b;
    const double reach = std::hypot(denom, p.a);
    const double s1 = detail::clamp_unit_interval(
        c.hs / reach, "spherical wheel cannot reach the wall (Hs exceeds arm reach)");
    const double alpha1_raw = std::asin(s1) - std::atan2(p.a, denom);
    c.alpha1 = std::clamp(alpha1_raw, 0.0, kPi / 2.0);

    const double s2 = detail::clamp_unit_interval(
        p.l1 * std::sin(c.alpha1) / p.l2,
        "link 2 cannot reach the omni centerline (L1 sin(alpha1) > L2)");
    c.alpha2 = std::asin(s2);

    c.theta1 = kPi / 2.0 - c.alpha1;
    c.theta2 = kPi / 2.0 - c.alpha2;
    c.theta = c.theta1 + c.theta2;
    c.alpha = c.alpha1;
    return c;
}

/// Contact angle of the spherical wheel for the given design, radians.
inline double contact_angle(const MechanismParams& p) {
    return solve_configuration(p).alpha;
}

}  // namespace vpipe
