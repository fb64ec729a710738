#include "shaderevo/codegen.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <numbers>
#include <set>
#include <sstream>

#include "glsl_library.hpp"
#include "shaderevo/error.hpp"

namespace shaderevo {

namespace {

using glsl::Helper;

constexpr double kDegreesToRadians = std::numbers::pi / 180.0;
constexpr char kComponents[] = {'x', 'y', 'z', 'w'};

struct StageBindings {
    std::string_view uv;
    std::string_view object_position;
    std::string_view world_normal;
    std::string_view view_direction;
    std::string_view object_normal;
    std::string_view object_tangent;
};

constexpr StageBindings kVertexBindings{
    "a_uv",
    "a_position",
    "normalize(mat3(u_model) * a_normal)",
    "normalize(u_cameraPos - (u_model * vec4(a_position, 1.0)).xyz)",
    "a_normal",
    "sg_default_tangent(a_normal)",
};

constexpr StageBindings kFragmentBindings{
    "v_uv", "v_objectPos", "normalize(v_worldNormal)", "normalize(v_viewDir)", "v_worldNormal", "v_worldTangent",
};

std::string literal(const Value& v) {
    if (v.dim == 1) return glsl_float(v[0]);
    std::string s(glsl_type(v.dim));
    s += '(';
    for (int i = 0; i < v.dim; ++i) {
        if (i) s += ", ";
        s += glsl_float(v[i]);
    }
    s += ')';
    return s;
}

std::string coerce_expr(const std::string& expr, int from, int to) {
    if (from == to) return expr;
    if (from == 1) return std::string(glsl_type(to)) + "(" + expr + ")";
    return expr + "." + std::string(kComponents, kComponents + to);
}

class StageEmitter {
public:
    StageEmitter(const Genome& genome, const std::map<NodeId, ResolvedSignature>& types, Stage stage,
                 std::set<Helper>& helpers, std::map<std::string, UniformInfo>& uniforms)
        : genome_(genome),
          types_(types),
          bindings_(stage == Stage::Vertex ? kVertexBindings : kFragmentBindings),
          helpers_(helpers),
          uniforms_(uniforms) {}

    std::string binding_expr(SlotBinding binding) {
        switch (binding) {
            case SlotBinding::UV: return std::string(bindings_.uv);
            case SlotBinding::ObjectPosition: return std::string(bindings_.object_position);
            case SlotBinding::WorldNormal: return std::string(bindings_.world_normal);
            case SlotBinding::ViewDirection: return std::string(bindings_.view_direction);
            case SlotBinding::ObjectNormal: return std::string(bindings_.object_normal);
            case SlotBinding::ObjectTangent:
                helpers_.insert(Helper::DefaultTangent);
                return std::string(bindings_.object_tangent);
            case SlotBinding::None: break;
        }
        return {};
    }

    /// Expression feeding input `slot` of `node`, coerced to `want` components.
    std::string input_expr(const NodeInstance& node, const SlotSpec& slot, int want) {
        if (auto src = genome_.source_of(SlotRef{node.id, slot.name})) {
            const auto& src_spec = NodeCatalog::instance().lookup(genome_.at(src->node).kind);
            const int from = types_.at(src->node).output_dims[src_spec.output_index(src->slot)];
            return coerce_expr(variable_name(src->node, src->slot), from, want);
        }
        if (slot.binding != SlotBinding::None) {
            return coerce_expr(binding_expr(slot.binding), std::max(1, dimension(slot.type)), want);
        }
        const Value& def = node.slot_defaults.at(slot.name).value;
        return literal(def.coerced(want));
    }

    void emit_node(const NodeInstance& node, const std::set<std::string>& used_outputs, std::ostringstream& out) {
        const auto& spec = NodeCatalog::instance().lookup(node.kind);
        const auto& sig = types_.at(node.id);
        std::vector<std::string> in;
        in.reserve(spec.inputs.size());
        for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
            in.push_back(input_expr(node, spec.inputs[i], sig.input_dims[i]));
        }
        for (std::size_t k = 0; k < spec.outputs.size(); ++k) {
            const auto& slot = spec.outputs[k];
            if (!used_outputs.count(slot.name)) continue;
            out << "    " << glsl_type(sig.output_dims[k]) << ' ' << variable_name(node.id, slot.name) << " = "
                << expression(node, spec, sig, in, k) << ";\n";
        }
    }

private:
    std::string expression(const NodeInstance& node, const NodeSpec& spec, const ResolvedSignature& sig,
                           const std::vector<std::string>& in, std::size_t output) {
        const std::string& kind = spec.kind;
        const int dim = sig.output_dims[output];

        if (!node.numbers.empty() && spec.category == Category::Input) {
            const std::string name = "u_n" + node.id.str();
            const auto& value = node.numbers.at("Value").value;
            uniforms_[name] = UniformInfo{name, type_for_dimension(value.dim), value, UniformRole::UserInput};
            return name;
        }
        if (kind == "Time") return "u_time";
        if (kind == "UV") return std::string(bindings_.uv);
        if (kind == "ObjectPosition") return std::string(bindings_.object_position);
        if (kind == "WorldNormal") return std::string(bindings_.world_normal);
        if (kind == "ViewDirection") return std::string(bindings_.view_direction);

        if (kind == "Add") return in[0] + " + " + in[1];
        if (kind == "Subtract") return in[0] + " - " + in[1];
        if (kind == "Multiply") return in[0] + " * " + in[1];
        if (kind == "Divide") return in[0] + " / " + in[1];
        if (kind == "Power") return "pow(abs(" + in[0] + "), " + in[1] + ")";
        if (kind == "Sin") return "sin(" + in[0] + ")";
        if (kind == "Cos") return "cos(" + in[0] + ")";
        if (kind == "Abs") return "abs(" + in[0] + ")";
        if (kind == "Fract") return "fract(" + in[0] + ")";
        if (kind == "Floor") return "floor(" + in[0] + ")";
        if (kind == "OneMinus") return "1.0 - " + in[0];
        if (kind == "Saturate") return "clamp(" + in[0] + ", 0.0, 1.0)";
        if (kind == "Clamp") return "min(max(" + in[0] + ", " + in[1] + "), " + in[2] + ")";
        if (kind == "Lerp") return "mix(" + in[0] + ", " + in[1] + ", " + in[2] + ")";
        if (kind == "Step") return "step(" + in[0] + ", " + in[1] + ")";
        if (kind == "SmoothStep") {
            helpers_.insert(static_cast<Helper>(static_cast<int>(Helper::SmoothStep1) + dim - 1));
            return "sg_smoothstep(" + in[0] + ", " + in[1] + ", " + in[2] + ")";
        }
        if (kind == "Remap") {
            const auto& x = in[0];
            const auto& i = in[1];
            const auto& o = in[2];
            return o + ".x + (" + x + " - " + i + ".x) * (" + o + ".y - " + o + ".x) / (" + i + ".y - " + i + ".x)";
        }
        if (kind == "Dot") return "dot(" + in[0] + ", " + in[1] + ")";
        if (kind == "Cross") return "cross(" + in[0] + ", " + in[1] + ")";
        if (kind == "Normalize") return "normalize(" + in[0] + ")";
        if (kind == "Length") return "length(" + in[0] + ")";
        if (kind == "Distance") return "distance(" + in[0] + ", " + in[1] + ")";

        if (kind == "Split") {
            const int width = sig.input_dims[0];
            if (static_cast<int>(output) >= width) return "0.0";
            if (width == 1) return in[0];
            return in[0] + "." + kComponents[output];
        }
        if (kind == "Combine") {
            if (spec.outputs[output].name == "RGBA") return "vec4(" + in[0] + ", " + in[1] + ", " + in[2] + ", " + in[3] + ")";
            if (spec.outputs[output].name == "RGB") return "vec3(" + in[0] + ", " + in[1] + ", " + in[2] + ")";
            return "vec2(" + in[0] + ", " + in[1] + ")";
        }
        if (kind == "Swizzle") return in[0] + "." + node.presets.at("Mask");

        if (kind == "TilingAndOffset") return in[0] + " * " + in[1] + " + " + in[2];
        if (kind == "Rotate") {
            helpers_.insert(Helper::Rotate);
            std::string angle = in[2];
            if (node.presets.at("Unit") == "Degrees") angle += " * " + glsl_float(kDegreesToRadians);
            return "sg_rotate(" + in[0] + ", " + in[1] + ", " + angle + ")";
        }
        if (kind == "Panner") return in[0] + " + " + in[1] + " * u_time";

        if (kind == "GradientNoise") {
            helpers_.insert(Helper::GradientNoise);
            return "sg_gradient_noise(" + in[0] + ", " + in[1] + ")";
        }
        if (kind == "SimpleNoise") {
            helpers_.insert(Helper::SimpleNoise);
            return "sg_simple_noise(" + in[0] + ", " + in[1] + ")";
        }
        if (kind == "Voronoi") {
            helpers_.insert(Helper::Voronoi);
            return "sg_voronoi(" + in[0] + ", " + in[1] + ", " + in[2] + ")." + (output == 0 ? "x" : "y");
        }

        if (kind == "Fresnel") {
            return "pow(1.0 - clamp(dot(normalize(" + in[0] + "), normalize(" + in[1] + ")), 0.0, 1.0), " + in[2] + ")";
        }
        if (kind == "Posterize") {
            return "floor(" + in[0] + " / (1.0 / " + in[1] + ")) * (1.0 / " + in[1] + ")";
        }
        throw Error(ErrorCode::UnsupportedGenome, "no template for node kind " + kind);
    }

    const Genome& genome_;
    const std::map<NodeId, ResolvedSignature>& types_;
    StageBindings bindings_;
    std::set<Helper>& helpers_;
    std::map<std::string, UniformInfo>& uniforms_;
};

bool slot_active(const Genome& g, const SlotSpec& slot) {
    return g.lit || slot.unlit_legal;
}

struct StagePlan {
    std::vector<NodeId> nodes;                          // topo order
    std::map<NodeId, std::set<std::string>> used;       // outputs consumed within the stage
};

StagePlan plan_stage(const Genome& g, const std::vector<NodeId>& order, Stage stage, bool alpha_clip) {
    const auto& master_spec = NodeCatalog::instance().master();
    std::set<NodeId> needed;
    std::set<SlotRef> consumers;  // input slots evaluated in this stage
    for (const auto& slot : master_spec.inputs) {
        if (slot.stage != stage || !slot_active(g, slot)) continue;
        if (slot.name == "AlphaClipThreshold" && !alpha_clip) continue;
        SlotRef ref{kMasterId, slot.name};
        if (auto src = g.source_of(ref)) {
            consumers.insert(ref);
            needed.insert(src->node);
            const auto up = upstream_set(g, src->node);
            needed.insert(up.begin(), up.end());
        }
    }
    StagePlan plan;
    for (NodeId id : order) {
        if (needed.count(id)) plan.nodes.push_back(id);
    }
    for (const auto& [to, from] : g.inputs) {
        if (needed.count(to.node) || consumers.count(to)) plan.used[from.node].insert(from.slot);
    }
    return plan;
}

std::string master_expr(StageEmitter& emitter, const Genome& g, const SlotSpec& slot) {
    return emitter.input_expr(g.master(), slot, dimension(slot.type));
}

void write_helpers(std::ostringstream& out, std::set<Helper> helpers) {
    if (helpers.count(Helper::SimpleNoise)) helpers.insert(Helper::ValueNoise);
    if (helpers.count(Helper::ValueNoise) || helpers.count(Helper::GradientNoise) || helpers.count(Helper::Voronoi)) {
        helpers.insert(Helper::Hash);
    }
    for (int h = 0; h < glsl::kHelperCount; ++h) {
        if (helpers.count(static_cast<Helper>(h))) out << glsl::helper_source(static_cast<Helper>(h)) << '\n';
    }
}

void write_uniform_decls(std::ostringstream& out, const std::map<std::string, UniformInfo>& stage_uniforms) {
    std::vector<const UniformInfo*> sorted;
    for (const auto& [name, u] : stage_uniforms) sorted.push_back(&u);
    std::sort(sorted.begin(), sorted.end(), [](const UniformInfo* a, const UniformInfo* b) {
        if (a->name.size() != b->name.size()) return a->name.size() < b->name.size();
        return a->name < b->name;
    });
    for (const auto* u : sorted) out << "uniform " << glsl_type(u->default_value.dim) << ' ' << u->name << ";\n";
}

constexpr std::string_view kHeader = "#version 300 es\nprecision highp float;\nprecision highp int;\n\n";

std::string vertex_source(const Genome& g, const std::vector<NodeId>& order,
                          const std::map<NodeId, ResolvedSignature>& types,
                          std::map<std::string, UniformInfo>& manifest) {
    std::set<Helper> helpers;
    std::map<std::string, UniformInfo> stage_uniforms;
    StageEmitter emitter(g, types, Stage::Vertex, helpers, stage_uniforms);
    const auto plan = plan_stage(g, order, Stage::Vertex, false);

    std::ostringstream body;
    for (NodeId id : plan.nodes) emitter.emit_node(g.at(id), plan.used.at(id), body);
    const auto& master_spec = NodeCatalog::instance().master();
    for (const char* name : {"Position", "Normal", "Tangent"}) {
        const SlotSpec& slot = *master_spec.input(name);
        const std::string expr = slot_active(g, slot) ? master_expr(emitter, g, slot) : emitter.binding_expr(slot.binding);
        body << "    vec3 vert_" << name << " = " << expr << ";\n";
    }

    std::ostringstream out;
    out << kHeader;
    out << "in vec3 a_position;\nin vec3 a_normal;\nin vec2 a_uv;\n\n";
    out << "uniform mat4 u_model;\nuniform mat4 u_viewProj;\nuniform vec3 u_cameraPos;\nuniform float u_time;\n";
    write_uniform_decls(out, stage_uniforms);
    out << "\nout vec2 v_uv;\nout vec3 v_objectPos;\nout vec3 v_worldNormal;\nout vec3 v_worldTangent;\nout vec3 v_viewDir;\n\n";
    write_helpers(out, helpers);
    out << "void main() {\n" << body.str();
    out << "    vec4 world = u_model * vec4(vert_Position, 1.0);\n"
           "    v_uv = a_uv;\n"
           "    v_objectPos = vert_Position;\n"
           "    v_worldNormal = normalize(mat3(u_model) * vert_Normal);\n"
           "    v_worldTangent = normalize(mat3(u_model) * vert_Tangent);\n"
           "    v_viewDir = u_cameraPos - world.xyz;\n"
           "    gl_Position = u_viewProj * world;\n"
           "}\n";
    manifest.insert(stage_uniforms.begin(), stage_uniforms.end());
    return out.str();
}

std::string fragment_source(const Genome& g, const std::vector<NodeId>& order,
                            const std::map<NodeId, ResolvedSignature>& types, bool alpha_clip,
                            std::map<std::string, UniformInfo>& manifest) {
    std::set<Helper> helpers;
    std::map<std::string, UniformInfo> stage_uniforms;
    StageEmitter emitter(g, types, Stage::Fragment, helpers, stage_uniforms);
    const auto plan = plan_stage(g, order, Stage::Fragment, alpha_clip);

    std::ostringstream body;
    for (NodeId id : plan.nodes) emitter.emit_node(g.at(id), plan.used.at(id), body);
    const auto& master_spec = NodeCatalog::instance().master();
    for (const auto& slot : master_spec.inputs) {
        if (slot.stage != Stage::Fragment || !slot_active(g, slot)) continue;
        if (slot.name == "AlphaClipThreshold" && !alpha_clip) continue;
        body << "    " << glsl_type(dimension(slot.type)) << " surf_" << slot.name << " = "
             << master_expr(emitter, g, slot) << ";\n";
    }
    if (alpha_clip) {
        body << "    if (surf_Alpha < surf_AlphaClipThreshold) {\n        discard;\n    }\n";
    }
    if (g.lit) {
        helpers.insert(Helper::Shade);
        body << "    fragColor = vec4(sg_shade(surf_BaseColor, surf_NormalTS, surf_Metallic, surf_Smoothness, "
                "surf_Occlusion, surf_Emission), surf_Alpha);\n";
    } else {
        body << "    fragColor = vec4(surf_BaseColor, surf_Alpha);\n";
    }

    std::ostringstream out;
    out << kHeader;
    out << "uniform float u_time;\n";
    if (g.lit) out << "uniform vec3 u_lightDir;\nuniform vec3 u_lightColor;\n";
    write_uniform_decls(out, stage_uniforms);
    out << "\nin vec2 v_uv;\nin vec3 v_objectPos;\nin vec3 v_worldNormal;\nin vec3 v_worldTangent;\nin vec3 v_viewDir;\n\n";
    out << "out vec4 fragColor;\n\n";
    write_helpers(out, helpers);
    out << "void main() {\n" << body.str() << "}\n";
    manifest.insert(stage_uniforms.begin(), stage_uniforms.end());
    return out.str();
}

}  // namespace

std::string_view to_string(UniformRole role) {
    switch (role) {
        case UniformRole::UserInput: return "user-input";
        case UniformRole::Time: return "time";
        case UniformRole::Light: return "light";
    }
    return "?";
}

std::string variable_name(NodeId id, std::string_view slot) {
    return "n" + id.str() + "_" + std::string(slot);
}

std::string glsl_float(double x) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    std::string s(buf.data(), end);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

bool alpha_clip_enabled(const Genome& g) {
    const SlotRef ref{kMasterId, "AlphaClipThreshold"};
    if (g.connected(ref)) return true;
    return g.master().slot_defaults.at("AlphaClipThreshold").value[0] > 0.0;
}

ShaderBundle compile(const Genome& genome) {
    const auto report = validate(genome);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw Error(ErrorCode::UnsupportedGenome, "genome does not validate: " + std::string(to_string(v.kind)) +
                                                      " at " + v.subject + " (" + v.detail + ")");
    }
    const auto order = topo_order(genome);
    const auto types = resolve_types(genome);

    ShaderBundle bundle;
    bundle.lit = genome.lit;
    bundle.alpha_clip = alpha_clip_enabled(genome);

    std::map<std::string, UniformInfo> user;
    bundle.vertex_src = vertex_source(genome, order, types, user);
    bundle.fragment_src = fragment_source(genome, order, types, bundle.alpha_clip, user);

    bundle.uniforms.push_back(UniformInfo{"u_time", SemanticType::Float, Value::scalar(0.0), UniformRole::Time});
    if (genome.lit) {
        const LightParams light;
        bundle.uniforms.push_back(UniformInfo{"u_lightDir", SemanticType::Vec3, light.direction, UniformRole::Light});
        bundle.uniforms.push_back(UniformInfo{"u_lightColor", SemanticType::Vec3, light.color, UniformRole::Light});
    }
    std::vector<UniformInfo> sorted;
    for (auto& [name, u] : user) sorted.push_back(u);
    std::sort(sorted.begin(), sorted.end(), [](const UniformInfo& a, const UniformInfo& b) {
        if (a.name.size() != b.name.size()) return a.name.size() < b.name.size();
        return a.name < b.name;
    });
    bundle.uniforms.insert(bundle.uniforms.end(), sorted.begin(), sorted.end());
    return bundle;
}

}  // namespace shaderevo
