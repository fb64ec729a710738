#include "noise.hpp"

#include <cmath>
#include <numbers>

#include "glsl_library.hpp"
#include "vecmath.hpp"

namespace shaderevo::noise {

using vm::gfract;
using vm::gmix;

std::uint32_t hash_u32(std::uint32_t x) {
    x ^= x >> 16;
    x *= glsl::kHashMul1;
    x ^= x >> 15;
    x *= glsl::kHashMul2;
    x ^= x >> 16;
    return x;
}

std::uint32_t hash_cell(std::int32_t x, std::int32_t y, std::uint32_t seed) {
    return hash_u32((static_cast<std::uint32_t>(x) * glsl::kCellMulX) ^
                    (static_cast<std::uint32_t>(y) * glsl::kCellMulY) ^ seed);
}

double unit(std::uint32_t h) {
    return static_cast<double>(h >> 8) * (1.0 / 16777216.0);
}

std::int32_t cell_coord(double floored) {
    const double c = vm::gclamp(floored, -glsl::kCellClamp, glsl::kCellClamp);
    if (std::isnan(c)) return 0;
    return static_cast<std::int32_t>(c);
}

double value_noise(double u, double v) {
    const double iu = std::floor(u);
    const double iv = std::floor(v);
    double fu = gfract(u);
    double fv = gfract(v);
    fu = fu * fu * (3.0 - 2.0 * fu);
    fv = fv * fv * (3.0 - 2.0 * fv);
    const std::int32_t cx = cell_coord(iu);
    const std::int32_t cy = cell_coord(iv);
    const double a = unit(hash_cell(cx, cy, glsl::kValueSeed));
    const double b = unit(hash_cell(cx + 1, cy, glsl::kValueSeed));
    const double d = unit(hash_cell(cx, cy + 1, glsl::kValueSeed));
    const double e = unit(hash_cell(cx + 1, cy + 1, glsl::kValueSeed));
    return gmix(gmix(a, b, fu), gmix(d, e, fu), fv);
}

double simple_noise(double u, double v, double scale) {
    double t = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double freq = std::exp2(static_cast<double>(k));
        const double amp = std::exp2(-static_cast<double>(3 - k));
        t = t + value_noise(u * scale / freq, v * scale / freq) * amp;
    }
    return t;
}

namespace {

struct Grad {
    double x;
    double y;
};

Grad gradient(std::int32_t cx, std::int32_t cy) {
    const std::uint32_t h = hash_cell(cx, cy, glsl::kGradientSeed) & 7u;
    const double sx = (h & 1u) == 0u ? 1.0 : -1.0;
    const double sy = (h & 2u) == 0u ? 1.0 : -1.0;
    if (h < 4u) return {sx, sy};
    if (h < 6u) return {sx, 0.0};
    return {0.0, sx};
}

double fade(double f) {
    return f * f * f * (f * (f * 6.0 - 15.0) + 10.0);
}

}  // namespace

double gradient_noise(double u, double v, double scale) {
    const double pu = u * scale;
    const double pv = v * scale;
    const double iu = std::floor(pu);
    const double iv = std::floor(pv);
    const double fu = gfract(pu);
    const double fv = gfract(pv);
    const std::int32_t cx = cell_coord(iu);
    const std::int32_t cy = cell_coord(iv);
    const double wu = fade(fu);
    const double wv = fade(fv);
    const Grad g00 = gradient(cx, cy);
    const Grad g10 = gradient(cx + 1, cy);
    const Grad g01 = gradient(cx, cy + 1);
    const Grad g11 = gradient(cx + 1, cy + 1);
    const double n00 = g00.x * fu + g00.y * fv;
    const double n10 = g10.x * (fu - 1.0) + g10.y * (fv - 0.0);
    const double n01 = g01.x * (fu - 0.0) + g01.y * (fv - 1.0);
    const double n11 = g11.x * (fu - 1.0) + g11.y * (fv - 1.0);
    return gmix(gmix(n00, n10, wu), gmix(n01, n11, wu), wv) * 0.5 + 0.5;
}

VoronoiSample voronoi(double u, double v, double angle_offset, double cell_density) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    const double pu = u * cell_density;
    const double pv = v * cell_density;
    const double fu = gfract(pu);
    const double fv = gfract(pv);
    const std::int32_t cx = cell_coord(std::floor(pu));
    const std::int32_t cy = cell_coord(std::floor(pv));
    VoronoiSample best{8.0, 0.0};
    for (int y = -1; y <= 1; ++y) {
        for (int x = -1; x <= 1; ++x) {
            const std::int32_t nx = cx + x;
            const std::int32_t ny = cy + y;
            const double hx = unit(hash_cell(nx, ny, glsl::kVoronoiSeedX));
            const double hy = unit(hash_cell(nx, ny, glsl::kVoronoiSeedY));
            const double ox = std::sin(hy * kTwoPi + angle_offset) * 0.5 + 0.5;
            const double oy = std::cos(hx * kTwoPi + angle_offset) * 0.5 + 0.5;
            const double dx = static_cast<double>(x) + ox - fu;
            const double dy = static_cast<double>(y) + oy - fv;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d < best.distance) best = {d, hx};
        }
    }
    return best;
}

}  // namespace shaderevo::noise
