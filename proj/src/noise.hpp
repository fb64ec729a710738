#pragma once

#include <cstdint>

namespace shaderevo::noise {

std::uint32_t hash_u32(std::uint32_t x);
std::uint32_t hash_cell(std::int32_t x, std::int32_t y, std::uint32_t seed);
double unit(std::uint32_t h);
/// Lattice coordinate of an already-floored value (clamped to +-1e9, NaN -> 0).
std::int32_t cell_coord(double floored);

double value_noise(double u, double v);
double simple_noise(double u, double v, double scale);
double gradient_noise(double u, double v, double scale);

struct VoronoiSample {
    double distance;
    double cell;
};
VoronoiSample voronoi(double u, double v, double angle_offset, double cell_density);

}  // namespace shaderevo::noise
