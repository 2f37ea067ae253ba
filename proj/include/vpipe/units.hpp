#pragma once

namespace vpipe {

// Angles are radians and lengths are millimetres inside the library;
// degrees and millimetres appear at I/O boundaries, SI (kg, m, s, N*m)
// inside the dynamics module. These helpers mark every conversion site.

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

constexpr double mm_to_m(double mm) { return mm * 1e-3; }
constexpr double m_to_mm(double m) { return m * 1e3; }

/// Torques: N*mm <-> N*m.
constexpr double nmm_to_nm(double nmm) { return nmm * 1e-3; }
constexpr double nm_to_nmm(double nm) { return nm * 1e3; }

}  // namespace vpipe
