#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string_view>

namespace shaderevo {

enum class SemanticType { Float, Vec2, Vec3, Vec4, DynamicVector };

/// Component count of a concrete type; 0 for DynamicVector.
constexpr int dimension(SemanticType type) {
    switch (type) {
        case SemanticType::Float: return 1;
        case SemanticType::Vec2: return 2;
        case SemanticType::Vec3: return 3;
        case SemanticType::Vec4: return 4;
        case SemanticType::DynamicVector: return 0;
    }
    return 0;
}

SemanticType type_for_dimension(int dim);
std::string_view to_string(SemanticType type);
std::optional<SemanticType> semantic_type_from_string(std::string_view name);

/// GLSL spelling of a float type with `dim` components.
std::string_view glsl_type(int dim);

/// Float broadcasts to every width; wider vectors truncate to narrower slots.
constexpr bool coercible(int from_dim, int to_dim) {
    return from_dim == 1 || from_dim >= to_dim;
}

/// Small float vector (1..4 components), double precision.
struct Value {
    int dim = 1;
    std::array<double, 4> c{};

    static Value scalar(double x) { return Value{1, {x, 0.0, 0.0, 0.0}}; }
    static Value of(std::initializer_list<double> xs);
    static Value splat(int dim, double x);

    double operator[](std::size_t i) const { return c[i]; }
    double& operator[](std::size_t i) { return c[i]; }

    /// Applies the coercion rules; throws IncompatibleDimensions when illegal.
    Value coerced(int to_dim) const;

    bool all_finite() const;
    bool operator==(const Value& other) const;
};

/// A numeric parameter or slot default together with the range it may take.
struct RangedValue {
    Value value;
    double min = 0.0;
    double max = 1.0;

    bool in_range() const;
    bool operator==(const RangedValue&) const = default;
};

}  // namespace shaderevo
