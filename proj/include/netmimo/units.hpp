#pragma once
// dB and linear-scale conversions. Propagation constants and thresholds are
// quoted in dB while all throughput math runs on linear power ratios, so the
// two views get distinct types to keep the unit of every constant explicit.

#include <cmath>
#include <stdexcept>

namespace netmimo {

struct Decibel {
  double value = 0.0;
};

struct LinearRatio {
  double value = 0.0;
};

inline LinearRatio db_to_linear(Decibel x) {
  if (!std::isfinite(x.value)) {
    throw std::domain_error("db_to_linear: non-finite input");
  }
  return {std::pow(10.0, x.value / 10.0)};
}

inline Decibel linear_to_db(LinearRatio x) {
  if (!(x.value > 0.0) || !std::isfinite(x.value)) {
    throw std::domain_error("linear_to_db: input must be positive and finite");
  }
  return {10.0 * std::log10(x.value)};
}

// dBm is dB referenced to 1 mW; absolute powers are carried in watts.
inline double dbm_to_watts(double dbm) {
  if (!std::isfinite(dbm)) {
    throw std::domain_error("dbm_to_watts: non-finite input");
  }
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

inline double watts_to_dbm(double watts) {
  if (!(watts > 0.0) || !std::isfinite(watts)) {
    throw std::domain_error("watts_to_dbm: input must be positive and finite");
  }
  return 10.0 * std::log10(watts) + 30.0;
}

}  // namespace netmimo
