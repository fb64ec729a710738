#include "glsl_library.hpp"

#include <cstdint>

namespace shaderevo::glsl {

namespace {

constexpr std::string_view kHash = R"(uint sg_hash_u32(uint x) {
    x ^= x >> 16u;
    x *= 0x7feb352du;
    x ^= x >> 15u;
    x *= 0x846ca68bu;
    x ^= x >> 16u;
    return x;
}

uint sg_hash_cell(ivec2 p, uint seed) {
    return sg_hash_u32((uint(p.x) * 0x8da6b343u) ^ (uint(p.y) * 0xd8163841u) ^ seed);
}

float sg_unit(uint h) {
    return float(h >> 8u) * (1.0 / 16777216.0);
}

ivec2 sg_cell(vec2 p) {
    return ivec2(clamp(p, -1.0e9, 1.0e9));
}
)";

constexpr std::string_view kValueNoise = R"(float sg_value_noise(vec2 uv) {
    vec2 i = floor(uv);
    vec2 f = fract(uv);
    f = f * f * (3.0 - 2.0 * f);
    ivec2 c = sg_cell(i);
    float a = sg_unit(sg_hash_cell(c, 0x68e31da4u));
    float b = sg_unit(sg_hash_cell(c + ivec2(1, 0), 0x68e31da4u));
    float d = sg_unit(sg_hash_cell(c + ivec2(0, 1), 0x68e31da4u));
    float e = sg_unit(sg_hash_cell(c + ivec2(1, 1), 0x68e31da4u));
    return mix(mix(a, b, f.x), mix(d, e, f.x), f.y);
}
)";

constexpr std::string_view kSimpleNoise = R"(float sg_simple_noise(vec2 uv, float scale) {
    float t = 0.0;
    for (int k = 0; k < 3; k++) {
        float freq = exp2(float(k));
        float amp = exp2(-float(3 - k));
        t += sg_value_noise(uv * scale / freq) * amp;
    }
    return t;
}
)";

constexpr std::string_view kGradientNoise = R"(vec2 sg_gradient(ivec2 c) {
    uint h = sg_hash_cell(c, 0xb5297a4du) & 7u;
    float sx = (h & 1u) == 0u ? 1.0 : -1.0;
    float sy = (h & 2u) == 0u ? 1.0 : -1.0;
    if (h < 4u) {
        return vec2(sx, sy);
    }
    if (h < 6u) {
        return vec2(sx, 0.0);
    }
    return vec2(0.0, sx);
}

float sg_gradient_noise(vec2 uv, float scale) {
    vec2 p = uv * scale;
    vec2 i = floor(p);
    vec2 f = fract(p);
    ivec2 c = sg_cell(i);
    vec2 u = f * f * f * (f * (f * 6.0 - 15.0) + 10.0);
    float n00 = dot(sg_gradient(c), f);
    float n10 = dot(sg_gradient(c + ivec2(1, 0)), f - vec2(1.0, 0.0));
    float n01 = dot(sg_gradient(c + ivec2(0, 1)), f - vec2(0.0, 1.0));
    float n11 = dot(sg_gradient(c + ivec2(1, 1)), f - vec2(1.0, 1.0));
    return mix(mix(n00, n10, u.x), mix(n01, n11, u.x), u.y) * 0.5 + 0.5;
}
)";

constexpr std::string_view kVoronoi = R"(vec2 sg_voronoi(vec2 uv, float angleOffset, float cellDensity) {
    vec2 p = uv * cellDensity;
    vec2 i = floor(p);
    vec2 f = fract(p);
    ivec2 c = sg_cell(i);
    float best = 8.0;
    float cell = 0.0;
    for (int y = -1; y <= 1; y++) {
        for (int x = -1; x <= 1; x++) {
            ivec2 n = c + ivec2(x, y);
            float hx = sg_unit(sg_hash_cell(n, 0x1b56c4e9u));
            float hy = sg_unit(sg_hash_cell(n, 0x7f4a7c15u));
            vec2 o = vec2(sin(hy * 6.283185307179586 + angleOffset), cos(hx * 6.283185307179586 + angleOffset)) * 0.5 + 0.5;
            float d = length(vec2(float(x), float(y)) + o - f);
            if (d < best) {
                best = d;
                cell = hx;
            }
        }
    }
    return vec2(best, cell);
}
)";

std::string smoothstep_source(std::string_view type) {
    std::string s;
    s += type;
    s += " sg_smoothstep(";
    s += type;
    s += " e0, ";
    s += type;
    s += " e1, ";
    s += type;
    s += " x) {\n    ";
    s += type;
    s += " t = clamp((x - e0) / (e1 - e0), 0.0, 1.0);\n    return t * t * (3.0 - 2.0 * t);\n}\n";
    return s;
}

constexpr std::string_view kRotate = R"(vec2 sg_rotate(vec2 uv, vec2 center, float rotation) {
    vec2 d = uv - center;
    float s = sin(rotation);
    float c = cos(rotation);
    return vec2(c * d.x - s * d.y, s * d.x + c * d.y) + center;
}
)";

constexpr std::string_view kDefaultTangent = R"(vec3 sg_default_tangent(vec3 n) {
    vec3 up = abs(n.y) < 0.999 ? vec3(0.0, 1.0, 0.0) : vec3(1.0, 0.0, 0.0);
    return normalize(cross(up, n));
}
)";

constexpr std::string_view kShade = R"(vec3 sg_shade(vec3 baseColor, vec3 normalTS, float metallic, float smoothness, float occlusion, vec3 emission) {
    vec3 n0 = normalize(v_worldNormal);
    vec3 t0 = normalize(v_worldTangent);
    vec3 t = normalize(t0 - n0 * dot(n0, t0));
    vec3 b = cross(n0, t);
    vec3 nts = normalTS * 2.0 - 1.0;
    vec3 n = normalize(t * nts.x + b * nts.y + n0 * nts.z);
    vec3 l = normalize(u_lightDir);
    vec3 v = normalize(v_viewDir);
    vec3 h = normalize(l + v);
    float diffuse = max(dot(n, l), 0.0);
    float spec = pow(max(dot(n, h), 0.0), exp2(1.0 + 10.0 * smoothness)) * mix(0.04, 1.0, metallic);
    return occlusion * 0.03 * baseColor + u_lightColor * (baseColor * diffuse * (1.0 - metallic) + spec) + emission;
}
)";

}  // namespace

std::string helper_source(Helper helper) {
    switch (helper) {
        case Helper::Hash: return std::string(kHash);
        case Helper::ValueNoise: return std::string(kValueNoise);
        case Helper::SimpleNoise: return std::string(kSimpleNoise);
        case Helper::GradientNoise: return std::string(kGradientNoise);
        case Helper::Voronoi: return std::string(kVoronoi);
        case Helper::SmoothStep1: return smoothstep_source("float");
        case Helper::SmoothStep2: return smoothstep_source("vec2");
        case Helper::SmoothStep3: return smoothstep_source("vec3");
        case Helper::SmoothStep4: return smoothstep_source("vec4");
        case Helper::Rotate: return std::string(kRotate);
        case Helper::DefaultTangent: return std::string(kDefaultTangent);
        case Helper::Shade: return std::string(kShade);
    }
    return {};
}

}  // namespace shaderevo::glsl
