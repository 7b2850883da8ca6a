#pragma once

#include <numbers>

namespace dsea {

inline constexpr double pi = std::numbers::pi;
inline constexpr double pi2 = pi * pi;
inline constexpr double pi3 = pi2 * pi;
inline constexpr double pi4 = pi2 * pi2;
inline constexpr double pi5 = pi4 * pi;
inline constexpr double pi6 = pi3 * pi3;
inline constexpr double pi10 = pi5 * pi5;

// 1 / (2^16 pi^10): prefactor of the quartic pair-integral sum.
inline constexpr double quartic_prefactor = 1.0 / (65536.0 * pi10);

// 1 / (32 pi^3): common prefactor of the convolution kernels.
inline constexpr double convolution_prefactor = 1.0 / (32.0 * pi3);

inline constexpr double reduced_c0_factor = pi6 / 512.0;
inline constexpr double reduced_c1_factor = 128.0 / pi6;

inline constexpr double euler_gamma = std::numbers::egamma;

}  // namespace dsea
