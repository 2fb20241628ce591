#pragma once

#include <complex>

#include "tinregion/model.hpp"

namespace fixture {

// Reference realization with unit noise; also shipped as data/reference_channel.json.
inline tin::ChannelRealization reference_channel() {
  return tin::ChannelRealization::from_coefficients(
      std::polar(2.0310, -0.6858), std::polar(1.4766, 2.6452), std::polar(0.7280, 1.9726),
      std::polar(0.9935, -0.6676), 1.0, 1.0);
}

inline constexpr tin::PowerBudget kBudget{10.0, 10.0};

// Reference operating points of this channel at P = (10, 10).
inline constexpr double kIntercept1 = 5.40086611903573;
inline constexpr double kIntercept2 = 3.44236388446505;
inline constexpr double kSymmetricTs = 2.54494936027933;
inline constexpr double kSymmetricPure = 1.41831003656675;

}  // namespace fixture
