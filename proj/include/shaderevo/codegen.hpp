#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shaderevo/genome.hpp"
#include "shaderevo/value.hpp"

namespace shaderevo {

enum class UniformRole { UserInput, Time, Light };

std::string_view to_string(UniformRole role);

struct UniformInfo {
    std::string name;
    SemanticType type = SemanticType::Float;
    Value default_value;
    UniformRole role = UniformRole::UserInput;

    bool operator==(const UniformInfo&) const = default;
};

/// Compiled GLSL ES 3.00 vertex/fragment pair plus the uniform manifest.
///
/// Attribute and uniform contract shared with clients:
///   attributes  a_position (vec3), a_normal (vec3), a_uv (vec2)
///   uniforms    u_model, u_viewProj (mat4), u_cameraPos (vec3), u_time (float),
///               u_lightDir, u_lightColor (vec3, lit only), u_n<id> (constant nodes)
///   varyings    v_uv, v_objectPos, v_worldNormal, v_worldTangent, v_viewDir
///   output      fragColor (vec4)
struct ShaderBundle {
    std::string vertex_src;
    std::string fragment_src;
    std::vector<UniformInfo> uniforms;
    bool lit = true;
    bool alpha_clip = false;

    bool operator==(const ShaderBundle&) const = default;
};

/// Throws UnsupportedGenome when the genome does not validate.
ShaderBundle compile(const Genome& genome);

/// Variable holding output `slot` of node `id`: `n<id>_<slot>`.
std::string variable_name(NodeId id, std::string_view slot);

/// GLSL float literal with the shortest round-trip digits ("1.0", "0.25", "1e+30").
std::string glsl_float(double x);

/// Whether the bundle enables alpha clipping for this genome.
bool alpha_clip_enabled(const Genome& genome);

/// One sample point. Fragment inputs are the context's interpolated values;
/// the vertex stage reads the same values as mesh attributes (identity model).
struct EvalContext {
    Value uv = Value::of({0.0, 0.0});
    Value object_position = Value::of({0.0, 0.0, 0.0});
    Value world_normal = Value::of({0.0, 0.0, 1.0});
    Value view_direction = Value::of({0.0, 0.0, 1.0});
    double time = 0.0;
    /// Defaults to the tangent derived from world_normal.
    std::optional<Value> world_tangent;
    /// Overrides for uniforms by name (e.g. "u_n3").
    std::map<std::string, Value> uniforms;
};

/// Tangent derived deterministically from a normal (matches the emitted helper).
Value default_tangent(const Value& normal);

inline constexpr double kNonFiniteSentinel = 1e30;

struct Evaluation {
    /// BaseColor, NormalTS, Metallic, Smoothness, Occlusion, Emission, Alpha, AlphaClipThreshold.
    std::map<std::string, Value> fragment;
    /// Position, Normal, Tangent.
    std::map<std::string, Value> vertex;
    bool lit = true;
    bool alpha_clip = false;
    /// Some node produced inf/NaN; it was replaced by kNonFiniteSentinel.
    bool non_finite = false;
};

/// Reference interpreter with the same node semantics as the emitted code.
/// Throws UnsupportedGenome when the genome does not validate.
Evaluation interpret(const Genome& genome, const EvalContext& ctx);

struct LightParams {
    Value direction = Value::of({0.5, 1.0, 0.3});  // towards the light
    Value color = Value::of({1.0, 1.0, 1.0});
};

struct ShadeResult {
    std::array<double, 4> rgba{};
    bool discarded = false;
    bool non_finite = false;
};

/// Final fragment colour for interpreted outputs at `ctx`:
///   lit   occlusion*0.03*albedo + lightColor*(albedo*diffuse*(1-metallic) + spec) + emission
///   unlit (BaseColor, Alpha)
/// Fragments with Alpha < AlphaClipThreshold are discarded when clipping is on.
ShadeResult shade(const Evaluation& outputs, const EvalContext& ctx, const LightParams& light = {});

}  // namespace shaderevo
