#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace shaderevo::glsl {

// Hash constants shared by the emitted helpers and the CPU noise reference.
inline constexpr std::uint32_t kHashMul1 = 0x7feb352du;
inline constexpr std::uint32_t kHashMul2 = 0x846ca68bu;
inline constexpr std::uint32_t kCellMulX = 0x8da6b343u;
inline constexpr std::uint32_t kCellMulY = 0xd8163841u;
inline constexpr std::uint32_t kValueSeed = 0x68e31da4u;
inline constexpr std::uint32_t kGradientSeed = 0xb5297a4du;
inline constexpr std::uint32_t kVoronoiSeedX = 0x1b56c4e9u;
inline constexpr std::uint32_t kVoronoiSeedY = 0x7f4a7c15u;
inline constexpr double kCellClamp = 1.0e9;

/// Helper identifiers in emission order.
enum class Helper {
    Hash,
    ValueNoise,
    SimpleNoise,
    GradientNoise,
    Voronoi,
    SmoothStep1,
    SmoothStep2,
    SmoothStep3,
    SmoothStep4,
    Rotate,
    DefaultTangent,
    Shade,
};

inline constexpr int kHelperCount = static_cast<int>(Helper::Shade) + 1;

/// GLSL source of a helper (without its dependencies).
std::string helper_source(Helper helper);

}  // namespace shaderevo::glsl
