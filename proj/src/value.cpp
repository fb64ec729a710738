#include "shaderevo/value.hpp"

#include <cmath>
#include <string>

#include "shaderevo/error.hpp"

namespace shaderevo {

SemanticType type_for_dimension(int dim) {
    switch (dim) {
        case 1: return SemanticType::Float;
        case 2: return SemanticType::Vec2;
        case 3: return SemanticType::Vec3;
        case 4: return SemanticType::Vec4;
        default: throw Error(ErrorCode::IncompatibleDimensions, "no vector type of dimension " + std::to_string(dim));
    }
}

std::string_view to_string(SemanticType type) {
    switch (type) {
        case SemanticType::Float: return "Float";
        case SemanticType::Vec2: return "Vec2";
        case SemanticType::Vec3: return "Vec3";
        case SemanticType::Vec4: return "Vec4";
        case SemanticType::DynamicVector: return "DynamicVector";
    }
    return "?";
}

std::optional<SemanticType> semantic_type_from_string(std::string_view name) {
    for (auto t : {SemanticType::Float, SemanticType::Vec2, SemanticType::Vec3, SemanticType::Vec4,
                   SemanticType::DynamicVector}) {
        if (to_string(t) == name) return t;
    }
    return std::nullopt;
}

std::string_view glsl_type(int dim) {
    switch (dim) {
        case 1: return "float";
        case 2: return "vec2";
        case 3: return "vec3";
        case 4: return "vec4";
        default: return "?";
    }
}

Value Value::of(std::initializer_list<double> xs) {
    Value v;
    v.dim = static_cast<int>(xs.size());
    std::size_t i = 0;
    for (double x : xs) v.c[i++] = x;
    return v;
}

Value Value::splat(int dim, double x) {
    Value v;
    v.dim = dim;
    for (int i = 0; i < dim; ++i) v.c[i] = x;
    return v;
}

Value Value::coerced(int to_dim) const {
    if (to_dim == dim) return *this;
    if (dim == 1) return splat(to_dim, c[0]);
    if (dim > to_dim) {
        Value v;
        v.dim = to_dim;
        for (int i = 0; i < to_dim; ++i) v.c[i] = c[i];
        return v;
    }
    throw Error(ErrorCode::IncompatibleDimensions,
                "cannot coerce " + std::string(glsl_type(dim)) + " to " + std::string(glsl_type(to_dim)));
}

bool Value::all_finite() const {
    for (int i = 0; i < dim; ++i) {
        if (!std::isfinite(c[i])) return false;
    }
    return true;
}

bool Value::operator==(const Value& other) const {
    if (dim != other.dim) return false;
    for (int i = 0; i < dim; ++i) {
        if (c[i] != other.c[i]) return false;
    }
    return true;
}

bool RangedValue::in_range() const {
    if (!(min <= max) || value.dim < 1 || value.dim > 4) return false;
    for (int i = 0; i < value.dim; ++i) {
        if (!(value.c[i] >= min && value.c[i] <= max)) return false;
    }
    return true;
}

}  // namespace shaderevo
