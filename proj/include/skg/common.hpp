#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace skg {

using cx = std::complex<double>;

/// Invalid configuration (bad parameters, malformed config files). CLI exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Numeric domain violation (negative distances, non-positive log arguments,
/// covariances outside the physically valid range). CLI exit code 3.
class DomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double log2_safe(double x, const char* what) {
    if (!(x > 0.0)) {
        throw DomainError(std::string(what) + ": non-positive log argument");
    }
    return std::log2(x);
}

}  // namespace skg
