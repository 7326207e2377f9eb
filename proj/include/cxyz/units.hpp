#pragma once

namespace cxyz {

// hbar = 1 everywhere; every frequency inside the library is angular (rad/s).
// Configuration files and CLI output speak plain Hz; the conversion happens
// exactly once, at the parsing / writing boundary.
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline constexpr double hz_to_angular(double f_hz) { return kTwoPi * f_hz; }
inline constexpr double angular_to_hz(double omega) { return omega / kTwoPi; }

}  // namespace cxyz
