#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

namespace gex {

/// Screening precision.
using Fast = double;

/// Confirmation precision: 50 significant decimal digits, software arithmetic.
/// Expression templates are off so `auto` behaves like it does for double.
using Confirm = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                              boost::multiprecision::et_off>;

template <typename T>
struct PrecisionTraits;

template <>
struct PrecisionTraits<Fast> {
  static constexpr double kDefaultEps = 1e-10;
  static constexpr const char* kName = "fast";
};

template <>
struct PrecisionTraits<Confirm> {
  static constexpr double kDefaultEps = 1e-24;
  static constexpr const char* kName = "confirm";
};

template <typename T>
concept RealType = std::is_same_v<T, Fast> || std::is_same_v<T, Confirm>;

template <typename T>
inline T pi() {
  return boost::math::constants::pi<T>();
}

template <typename T>
inline T degrees(const T& d) {
  return d * pi<T>() / T(180);
}

template <typename T>
inline bool is_finite(const T& x) {
  using std::isfinite;
  using boost::multiprecision::isfinite;
  return isfinite(x);
}

template <typename To, typename From>
inline To real_cast(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else {
    return static_cast<To>(x);
  }
}

/// Decimal literal to T. Confirm parses the text directly, so "0.1" is exact to 50 digits.
template <typename T>
T parse_real(const std::string& text) {
  if constexpr (std::is_same_v<T, Fast>) {
    return std::stod(text);
  } else {
    return T(text);
  }
}

inline double to_double(const Fast& x) { return x; }
inline double to_double(const Confirm& x) { return x.convert_to<double>(); }

}  // namespace gex
