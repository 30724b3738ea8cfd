#pragma once

#include <cmath>
#include <stdexcept>

namespace lawnsim {

inline constexpr double speed_of_light = 3e8;  // m/s, per the channel model convention
inline constexpr double pi = 3.14159265358979323846;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

}  // namespace lawnsim
