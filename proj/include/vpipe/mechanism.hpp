#pragma once

#include <cmath>
#include <string>

#include "vpipe/errors.hpp"

namespace vpipe {

/// Structural design parameters of one robot module plus the pipe it runs in.
/// All lengths in millimetres. See README for the end-view frame conventions.
struct MechanismParams {
    double l1 = 0.0;   ///< link-1 length
    double l2 = 0.0;   ///< link-2 length
    double a = 0.0;    ///< spherical-wheel mounting offset, perpendicular to link 1
    double b = 0.0;    ///< lateral mounting offset (enters as n - b)
    double n = 0.0;    ///< lateral mounting offset (enters as n - b)
    double wo = 0.0;   ///< omni-wheel pair spacing across the pipe section
    double ro = 0.0;   ///< omni-wheel radius
    double rs = 0.0;   ///< spherical-wheel radius
    double dp = 0.0;   ///< pipe inner diameter

    /// Throws ValidationError naming the violated invariant.
    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0)) {
                throw ValidationError("nonpositive_length",
                                      std::string(name) + " must be strictly positive");
            }
        };
        positive(l1, "L1");
        positive(l2, "L2");
        positive(wo, "Wo");
        positive(ro, "Ro");
        positive(rs, "Rs");
        positive(dp, "Dp");
        if (a < 0.0 || b < 0.0 || n < 0.0) {
            throw ValidationError("negative_offset",
                                  "mounting offsets a, b, n must be >= 0");
        }
        if (!(wo < dp)) {
            throw ValidationError("wheel_spacing_exceeds_pipe",
                                  "Wo must be smaller than the pipe diameter Dp");
        }
        if (!(l1 - n + b > 0.0)) {
            throw ValidationError("link1_offset_denominator",
                                  "L1 - n + b must be strictly positive");
        }
        if (!(rs + ro < dp)) {
            throw ValidationError("wheels_exceed_pipe",
                                  "Rs + Ro must be smaller than the pipe diameter Dp");
        }
    }

    /// Same module with the spherical-wheel mount moved onto the joint axis.
    MechanismParams zero_separation() const {
        MechanismParams p = *this;
        p.a = p.b = p.n = 0.0;
        return p;
    }

    MechanismParams with_link2(double new_l2) const {
        MechanismParams p = *this;
        p.l2 = new_l2;
        return p;
    }
};

/// Prototype module constants. Values not on the data sheet are derived and
/// frozen here; see README ("Default parameter set") for how each was pinned.
namespace defaults {

inline constexpr double kLink1Mm = 105.0;
inline constexpr double kLink2Mm = 75.0;
inline constexpr double kOmniRadiusMm = 30.0;
inline constexpr double kSphericalRadiusMm = 22.5;
inline constexpr double kPipeDiameterMm = 100.0;
inline constexpr double kSpringStiffnessNmmPerDeg = 10.06;
inline constexpr double kTotalMassKg = 0.75;
inline constexpr double kGravityMps2 = 9.81;

/// Omni-wheel spacing chosen so the zero-separation module meets the quoted
/// 21 deg contact angle (exact back-solve gives 59.6554 mm).
inline constexpr double kOmniSpacingMm = 59.7;

/// Spherical-wheel mounting point recovered from the two published anchors:
/// contact angle 1.6 deg and a 20% link-2 wheel force share at L2/L1 = 0.71.
inline constexpr double kMountAMm = 35.589;
inline constexpr double kMountBMm = 0.0;
inline constexpr double kMountNMm = 32.045;

/// Spring preload calibrated so the zero-separation module holds a safety
/// margin of 2.3 at (mu_s = 0.1, mu_o = 0.3, K = 10.06 N*mm/deg).
inline constexpr double kPreloadDeg = 33.930573279218512;

inline constexpr double kMuSpherical = 0.1;
inline constexpr double kMuOmni = 0.3;
inline constexpr double kGearGain = 1.0;
inline constexpr int kDrivenWheels = 4;

inline MechanismParams mechanism() {
    MechanismParams p;
    p.l1 = kLink1Mm;
    p.l2 = kLink2Mm;
    p.a = kMountAMm;
    p.b = kMountBMm;
    p.n = kMountNMm;
    p.wo = kOmniSpacingMm;
    p.ro = kOmniRadiusMm;
    p.rs = kSphericalRadiusMm;
    p.dp = kPipeDiameterMm;
    return p;
}

}  // namespace defaults

}  // namespace vpipe
