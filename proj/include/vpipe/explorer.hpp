#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "vpipe/errors.hpp"
#include "vpipe/geometry.hpp"
#include "vpipe/mechanism.hpp"
#include "vpipe/units.hpp"

namespace vpipe {

/// Search box for the mounting parameters, with the coarse grid resolution
/// and the refinement stopping tolerance on |alpha|.
struct DesignBounds {
    double a_min = 0.0, a_max = 60.0;
    double b_min = 0.0, b_max = 40.0;
    double n_min = 0.0, n_max = 40.0;
    std::size_t grid_resolution = 21;  ///< nodes per axis
    double tolerance_deg = 0.01;

    void validate() const {
        if (a_min > a_max || b_min > b_max || n_min > n_max) {
            throw ValidationError("bad_bounds", "axis minimum exceeds maximum");
        }
        if (grid_resolution < 1) {
            throw ValidationError("bad_bounds", "grid resolution must be >= 1");
        }
        if (!(tolerance_deg > 0.0)) {
            throw ValidationError("bad_bounds", "refinement tolerance must be > 0");
        }
    }
};

struct MountingPoint {
    double a = 0.0, b = 0.0, n = 0.0;  ///< mm
    double alpha = 0.0;                ///< rad
};

namespace detail {

inline std::optional<double> try_alpha(const MechanismParams& tpl, double a, double b,
                                       double n) {
    MechanismParams p = tpl;
    p.a = a;
    p.b = b;
    p.n = n;
    try {
        return std::abs(contact_angle(p));
    } catch (const Error&) {
        return std::nullopt;
    }
}

/// Golden-section minimization of |alpha| along one axis; unreachable points
/// evaluate to +inf. Deterministic.
inline double refine_axis(const MechanismParams& tpl, const MountingPoint& at, int axis,
                          double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    auto value_at = [&](double x) {
        const double a = axis == 0 ? x : at.a;
        const double b = axis == 1 ? x : at.b;
        const double n = axis == 2 ? x : at.n;
        const auto alpha = try_alpha(tpl, a, b, n);
        return alpha ? *alpha : std::numeric_limits<double>::infinity();
    };
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = value_at(x1);
    double f2 = value_at(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = value_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = value_at(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

}  // namespace detail

/// Minimizes |alpha| over the mounting box: exhaustive coarse grid scan,
/// then per-axis golden-section refinement around the best node until the
/// improvement per sweep drops below the tolerance. Never returns a point
/// worse than the best grid node, and is deterministic for fixed bounds.
inline MountingPoint minimize_contact_angle(const MechanismParams& params_template,
                                            const DesignBounds& bounds) {
    bounds.validate();
    const std::size_t res = bounds.grid_resolution;
    auto axis_value = [&](double lo, double hi, std::size_t i) {
        if (res == 1) {
            return lo;
        }
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(res - 1);
    };

    MountingPoint best;
    double best_alpha = std::numeric_limits<double>::infinity();
    for (std::size_t ia = 0; ia < res; ++ia) {
        const double a = axis_value(bounds.a_min, bounds.a_max, ia);
        for (std::size_t ib = 0; ib < res; ++ib) {
            const double b = axis_value(bounds.b_min, bounds.b_max, ib);
            for (std::size_t in = 0; in < res; ++in) {
                const double n = axis_value(bounds.n_min, bounds.n_max, in);
                const auto alpha = detail::try_alpha(params_template, a, b, n);
                if (alpha && *alpha < best_alpha) {
                    best_alpha = *alpha;
                    best = {a, b, n, *alpha};
                }
            }
        }
    }
    if (!std::isfinite(best_alpha)) {
        throw NoFeasiblePointError("no reachable configuration inside the design bounds");
    }

    const double tol = deg_to_rad(bounds.tolerance_deg);
    const std::array<double, 3> step = {
        res > 1 ? (bounds.a_max - bounds.a_min) / static_cast<double>(res - 1) : 0.0,
        res > 1 ? (bounds.b_max - bounds.b_min) / static_cast<double>(res - 1) : 0.0,
        res > 1 ? (bounds.n_max - bounds.n_min) / static_cast<double>(res - 1) : 0.0,
    };
    const std::array<std::pair<double, double>, 3> axis_bounds = {
        std::pair{bounds.a_min, bounds.a_max},
        std::pair{bounds.b_min, bounds.b_max},
        std::pair{bounds.n_min, bounds.n_max},
    };
    for (int sweep = 0; sweep < 50; ++sweep) {
        const double before = best.alpha;
        for (int axis = 0; axis < 3; ++axis) {
            if (step[static_cast<std::size_t>(axis)] <= 0.0) {
                continue;
            }
            const double x0 = axis == 0 ? best.a : axis == 1 ? best.b : best.n;
            const double lo = std::max(axis_bounds[static_cast<std::size_t>(axis)].first,
                                       x0 - step[static_cast<std::size_t>(axis)]);
            const double hi = std::min(axis_bounds[static_cast<std::size_t>(axis)].second,
                                       x0 + step[static_cast<std::size_t>(axis)]);
            const double x = detail::refine_axis(params_template, best, axis, lo, hi);
            const double a = axis == 0 ? x : best.a;
            const double b = axis == 1 ? x : best.b;
            const double n = axis == 2 ? x : best.n;
            const auto alpha = detail::try_alpha(params_template, a, b, n);
            if (alpha && *alpha < best.alpha) {
                best = {a, b, n, *alpha};
            }
        }
        if (before - best.alpha < tol) {
            break;
        }
    }
    return best;
}

/// Recovers the omni-wheel spacing from a target contact angle by bisection;
/// alpha decreases monotonically with Wo. Succeeds when |alpha - target|
/// drops below 1e-4 rad, otherwise the target is unachievable.
inline double backsolve_wheel_spacing(const MechanismParams& params_template,
                                      double target_alpha) {
    constexpr double kAlphaTol = 1e-4;
    auto alpha_at = [&](double wo) -> std::optional<double> {
        MechanismParams p = params_template;
        p.wo = wo;
        try {
            return contact_angle(p);
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    // Find a feasible bracket: scan for reachable spacings enclosing the target.
    constexpr int kScan = 256;
    const double wo_lo = 1e-6;
    const double wo_hi = params_template.dp * (1.0 - 1e-9);
    double lo = std::numeric_limits<double>::quiet_NaN();
    double hi = std::numeric_limits<double>::quiet_NaN();
    double prev_wo = std::numeric_limits<double>::quiet_NaN();
    double prev_alpha = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i <= kScan; ++i) {
        const double wo =
            wo_lo + (wo_hi - wo_lo) * static_cast<double>(i) / static_cast<double>(kScan);
        const auto alpha = alpha_at(wo);
        if (!alpha) {
            continue;
        }
        if (std::isfinite(prev_alpha) && (prev_alpha - target_alpha) >= 0.0 &&
            (*alpha - target_alpha) <= 0.0) {
            lo = prev_wo;
            hi = wo;
            break;
        }
        prev_wo = wo;
        prev_alpha = *alpha;
    }
    if (!std::isfinite(lo)) {
        throw UnachievableTargetError("no omni-wheel spacing reaches the target angle");
    }

    for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto alpha = alpha_at(mid);
        if (!alpha) {
            lo = mid;
            continue;
        }
        ((*alpha - target_alpha) >= 0.0 ? lo : hi) = mid;
    }
    const double wo = 0.5 * (lo + hi);
    const auto alpha = alpha_at(wo);
    if (!alpha || std::abs(*alpha - target_alpha) > kAlphaTol) {
        throw UnachievableTargetError("bisection did not converge to the target angle");
    }
    return wo;
}

}  // namespace vpipe
