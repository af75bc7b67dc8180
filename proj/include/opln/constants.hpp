#pragma once

namespace opln {

// c = 299792458 m/s expressed in micrometers per femtosecond; all internal
// angular frequencies are rad/fs so that k [rad/um] * c stays O(1).
inline constexpr double speed_of_light_um_fs = 0.299792458;

inline constexpr double pi = 3.14159265358979323846;

}  // namespace opln
