#include "shaderevo/catalog.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "shaderevo/error.hpp"

namespace shaderevo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SlotSpec in(std::string name, SemanticType type, Value def, double lo, double hi) {
    SlotSpec s;
    s.name = std::move(name);
    s.direction = SlotDirection::Input;
    s.type = type;
    s.default_value = def;
    s.min = lo;
    s.max = hi;
    return s;
}

// DynamicVector inputs store a scalar default.
SlotSpec dyn(std::string name, double def, double lo, double hi) {
    return in(std::move(name), SemanticType::DynamicVector, Value::scalar(def), lo, hi);
}

SlotSpec flt(std::string name, double def, double lo, double hi) {
    return in(std::move(name), SemanticType::Float, Value::scalar(def), lo, hi);
}

SlotSpec bound(std::string name, SemanticType type, SlotBinding binding) {
    SlotSpec s = in(std::move(name), type, Value::splat(dimension(type), 0.0), -1.0, 1.0);
    s.binding = binding;
    s.ephemeral = false;
    return s;
}

SlotSpec out(std::string name, SemanticType type) {
    SlotSpec s;
    s.name = std::move(name);
    s.direction = SlotDirection::Output;
    s.type = type;
    s.default_value = Value::splat(type == SemanticType::DynamicVector ? 1 : dimension(type), 0.0);
    return s;
}

NodeSpec node(std::string kind, Category category, std::vector<SlotSpec> inputs, std::vector<SlotSpec> outputs) {
    NodeSpec n;
    n.kind = std::move(kind);
    n.category = category;
    n.inputs = std::move(inputs);
    n.outputs = std::move(outputs);
    return n;
}

NodeSpec constant(std::string kind, SemanticType type, Value def) {
    NodeSpec n = node(std::move(kind), Category::Input, {}, {out("Out", type)});
    n.numbers.push_back(NumericParamSpec{"Value", type, def, 0.0, 1.0});
    n.emits_code = false;
    return n;
}

NodeSpec source(std::string kind, SemanticType type) {
    NodeSpec n = node(std::move(kind), Category::Input, {}, {out("Out", type)});
    n.emits_code = false;
    return n;
}

NodeSpec unary(std::string kind, double def = 0.0, double lo = -1.0, double hi = 1.0) {
    return node(std::move(kind), Category::Math, {dyn("In", def, lo, hi)},
                {out("Out", SemanticType::DynamicVector)});
}

NodeSpec binary(std::string kind, double a, double b, double lo_a, double hi_a, double lo_b, double hi_b) {
    return node(std::move(kind), Category::Math, {dyn("A", a, lo_a, hi_a), dyn("B", b, lo_b, hi_b)},
                {out("Out", SemanticType::DynamicVector)});
}

SlotSpec master_slot(std::string name, SemanticType type, Value def, double lo, double hi, Stage stage,
                     bool unlit_legal, bool ephemeral, SlotBinding binding = SlotBinding::None) {
    SlotSpec s = in(std::move(name), type, def, lo, hi);
    s.stage = stage;
    s.unlit_legal = unlit_legal;
    s.ephemeral = ephemeral;
    s.binding = binding;
    return s;
}

std::vector<NodeSpec> build_catalog() {
    using T = SemanticType;
    std::vector<NodeSpec> c;

    // Inputs.
    c.push_back(constant("FloatConstant", T::Float, Value::scalar(0.5)));
    c.push_back(constant("Vec2Constant", T::Vec2, Value::of({0.5, 0.5})));
    c.push_back(constant("Vec3Constant", T::Vec3, Value::of({0.5, 0.5, 0.5})));
    c.push_back(constant("Vec4Constant", T::Vec4, Value::of({0.5, 0.5, 0.5, 0.5})));
    c.push_back(constant("ColorConstant", T::Vec4, Value::of({0.5, 0.5, 0.5, 1.0})));
    c.push_back(source("Time", T::Float));
    c.push_back(source("UV", T::Vec2));
    c.push_back(source("ObjectPosition", T::Vec3));
    c.push_back(source("WorldNormal", T::Vec3));
    c.push_back(source("ViewDirection", T::Vec3));

    // Math.
    c.push_back(binary("Add", 0.0, 0.0, -1.0, 1.0, -0.5, 0.5));
    c.push_back(binary("Subtract", 0.0, 0.0, -1.0, 1.0, -0.5, 0.5));
    c.push_back(binary("Multiply", 1.0, 1.0, 0.0, 2.0, 0.0, 2.0));
    c.push_back(binary("Divide", 1.0, 2.0, 0.0, 2.0, 0.5, 4.0));
    c.push_back(binary("Power", 1.0, 2.0, 0.0, 2.0, 0.5, 4.0));
    c.push_back(unary("Sin"));
    c.push_back(unary("Cos"));
    c.push_back(unary("Abs"));
    c.push_back(unary("Fract"));
    c.push_back(unary("Floor"));
    c.push_back(unary("OneMinus", 0.0, 0.0, 1.0));
    c.push_back(unary("Saturate"));
    c.push_back(node("Clamp", Category::Math,
                     {dyn("In", 0.0, -1.0, 1.0), dyn("Min", 0.0, 0.0, 0.5), dyn("Max", 1.0, 0.5, 1.0)},
                     {out("Out", T::DynamicVector)}));
    c.push_back(node("Lerp", Category::Math,
                     {dyn("A", 0.0, 0.0, 1.0), dyn("B", 1.0, 0.0, 1.0), dyn("T", 0.5, 0.0, 1.0)},
                     {out("Out", T::DynamicVector)}));
    c.push_back(node("Step", Category::Math, {dyn("Edge", 0.5, 0.0, 1.0), dyn("In", 0.0, 0.0, 1.0)},
                     {out("Out", T::DynamicVector)}));
    c.push_back(node("SmoothStep", Category::Math,
                     {dyn("Edge1", 0.0, 0.0, 0.5), dyn("Edge2", 1.0, 0.5, 1.0), dyn("In", 0.0, 0.0, 1.0)},
                     {out("Out", T::DynamicVector)}));
    c.push_back(node("Remap", Category::Math,
                     {dyn("In", 0.0, -1.0, 1.0), in("InMinMax", T::Vec2, Value::of({-1.0, 1.0}), -1.0, 1.0),
                      in("OutMinMax", T::Vec2, Value::of({0.0, 1.0}), 0.0, 1.0)},
                     {out("Out", T::DynamicVector)}));
    c.push_back(node("Dot", Category::Math, {dyn("A", 1.0, -1.0, 1.0), dyn("B", 1.0, -1.0, 1.0)},
                     {out("Out", T::Float)}));
    c.push_back(node("Cross", Category::Math,
                     {in("A", T::Vec3, Value::of({1.0, 0.0, 0.0}), -1.0, 1.0),
                      in("B", T::Vec3, Value::of({0.0, 1.0, 0.0}), -1.0, 1.0)},
                     {out("Out", T::Vec3)}));
    c.push_back(unary("Normalize", 1.0, 0.1, 1.0));
    c.push_back(node("Length", Category::Math, {dyn("In", 1.0, -1.0, 1.0)}, {out("Out", T::Float)}));
    c.push_back(node("Distance", Category::Math, {dyn("A", 0.0, -1.0, 1.0), dyn("B", 1.0, -1.0, 1.0)},
                     {out("Out", T::Float)}));

    // Channel.
    c.push_back(node("Split", Category::Channel, {dyn("In", 0.0, 0.0, 1.0)},
                     {out("R", T::Float), out("G", T::Float), out("B", T::Float), out("A", T::Float)}));
    c.push_back(node("Combine", Category::Channel,
                     {flt("R", 0.0, 0.0, 1.0), flt("G", 0.0, 0.0, 1.0), flt("B", 0.0, 0.0, 1.0),
                      flt("A", 1.0, 0.0, 1.0)},
                     {out("RGBA", T::Vec4), out("RGB", T::Vec3), out("RG", T::Vec2)}));
    {
        NodeSpec swizzle = node("Swizzle", Category::Channel,
                                {in("In", T::Vec3, Value::of({0.0, 0.0, 0.0}), 0.0, 1.0)}, {out("Out", T::Vec2)});
        swizzle.presets.push_back(
            PresetSpec{"Mask", {"xx", "xy", "xz", "yx", "yy", "yz", "zx", "zy", "zz"}, "xy"});
        c.push_back(std::move(swizzle));
    }

    // UV.
    c.push_back(node("TilingAndOffset", Category::Uv,
                     {bound("UV", T::Vec2, SlotBinding::UV), in("Tiling", T::Vec2, Value::of({1.0, 1.0}), 0.5, 8.0),
                      in("Offset", T::Vec2, Value::of({0.0, 0.0}), 0.0, 1.0)},
                     {out("Out", T::Vec2)}));
    {
        NodeSpec rotate = node("Rotate", Category::Uv,
                               {bound("UV", T::Vec2, SlotBinding::UV),
                                in("Center", T::Vec2, Value::of({0.5, 0.5}), 0.0, 1.0),
                                flt("Rotation", 0.0, 0.0, kTwoPi)},
                               {out("Out", T::Vec2)});
        rotate.presets.push_back(PresetSpec{"Unit", {"Radians", "Degrees"}, "Radians"});
        c.push_back(std::move(rotate));
    }
    c.push_back(node("Panner", Category::Uv,
                     {bound("UV", T::Vec2, SlotBinding::UV), in("Speed", T::Vec2, Value::of({0.1, 0.0}), -1.0, 1.0)},
                     {out("Out", T::Vec2)}));

    // Noise.
    c.push_back(node("GradientNoise", Category::Noise,
                     {bound("UV", T::Vec2, SlotBinding::UV), flt("Scale", 10.0, 1.0, 50.0)}, {out("Out", T::Float)}));
    c.push_back(node("SimpleNoise", Category::Noise,
                     {bound("UV", T::Vec2, SlotBinding::UV), flt("Scale", 10.0, 1.0, 50.0)}, {out("Out", T::Float)}));
    c.push_back(node("Voronoi", Category::Noise,
                     {bound("UV", T::Vec2, SlotBinding::UV), flt("AngleOffset", 2.0, 0.0, kTwoPi),
                      flt("CellDensity", 5.0, 1.0, 20.0)},
                     {out("Out", T::Float), out("Cells", T::Float)}));

    // Artistic.
    c.push_back(node("Fresnel", Category::Artistic,
                     {bound("Normal", T::Vec3, SlotBinding::WorldNormal),
                      bound("ViewDir", T::Vec3, SlotBinding::ViewDirection), flt("Power", 1.0, 0.5, 8.0)},
                     {out("Out", T::Float)}));
    c.push_back(node("Posterize", Category::Artistic, {dyn("In", 0.0, 0.0, 1.0), dyn("Steps", 4.0, 1.0, 16.0)},
                     {out("Out", T::DynamicVector)}));

    // Master.
    {
        NodeSpec m;
        m.kind = std::string(kMasterKind);
        m.category = Category::Master;
        m.emits_code = false;
        const Value zero3 = Value::of({0.0, 0.0, 0.0});
        m.inputs = {
            master_slot("Position", T::Vec3, zero3, -1.0, 1.0, Stage::Vertex, true, false,
                        SlotBinding::ObjectPosition),
            master_slot("Normal", T::Vec3, zero3, -1.0, 1.0, Stage::Vertex, false, false, SlotBinding::ObjectNormal),
            master_slot("Tangent", T::Vec3, zero3, -1.0, 1.0, Stage::Vertex, false, false,
                        SlotBinding::ObjectTangent),
            master_slot("BaseColor", T::Vec3, Value::of({0.5, 0.5, 0.5}), 0.0, 1.0, Stage::Fragment, true, true),
            master_slot("NormalTS", T::Vec3, Value::of({0.5, 0.5, 1.0}), 0.0, 1.0, Stage::Fragment, false, false),
            master_slot("Metallic", T::Float, Value::scalar(0.0), 0.0, 1.0, Stage::Fragment, false, true),
            master_slot("Smoothness", T::Float, Value::scalar(0.5), 0.0, 1.0, Stage::Fragment, false, true),
            master_slot("Occlusion", T::Float, Value::scalar(1.0), 0.0, 1.0, Stage::Fragment, false, true),
            master_slot("Emission", T::Vec3, zero3, 0.0, 0.25, Stage::Fragment, false, true),
            master_slot("Alpha", T::Float, Value::scalar(1.0), 0.0, 1.0, Stage::Fragment, true, false),
            master_slot("AlphaClipThreshold", T::Float, Value::scalar(0.0), 0.0, 1.0, Stage::Fragment, true, false),
        };
        c.push_back(std::move(m));
    }

    std::sort(c.begin(), c.end(), [](const NodeSpec& a, const NodeSpec& b) { return a.kind < b.kind; });
    return c;
}

}  // namespace

std::string_view to_string(Category category) {
    switch (category) {
        case Category::Input: return "input";
        case Category::Math: return "math";
        case Category::Channel: return "channel";
        case Category::Uv: return "uv";
        case Category::Noise: return "noise";
        case Category::Artistic: return "artistic";
        case Category::Master: return "master";
    }
    return "?";
}

std::optional<Category> category_from_string(std::string_view name) {
    for (auto c : {Category::Input, Category::Math, Category::Channel, Category::Uv, Category::Noise,
                   Category::Artistic, Category::Master}) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

std::string_view to_string(SlotBinding binding) {
    switch (binding) {
        case SlotBinding::None: return "none";
        case SlotBinding::UV: return "uv";
        case SlotBinding::ObjectPosition: return "object_position";
        case SlotBinding::WorldNormal: return "world_normal";
        case SlotBinding::ViewDirection: return "view_direction";
        case SlotBinding::ObjectNormal: return "object_normal";
        case SlotBinding::ObjectTangent: return "object_tangent";
    }
    return "?";
}

std::string_view to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::GradientNoise: return "GradientNoise";
        case NoiseKind::SimpleNoise: return "SimpleNoise";
        case NoiseKind::Voronoi: return "Voronoi";
    }
    return "?";
}

std::optional<NoiseKind> noise_kind_from_string(std::string_view kind) {
    for (auto k : kAllNoiseKinds) {
        if (to_string(k) == kind) return k;
    }
    return std::nullopt;
}

const SlotSpec* NodeSpec::input(std::string_view name) const {
    for (const auto& s : inputs) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

const SlotSpec* NodeSpec::output(std::string_view name) const {
    for (const auto& s : outputs) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

const PresetSpec* NodeSpec::preset(std::string_view name) const {
    for (const auto& p : presets) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

const NumericParamSpec* NodeSpec::number(std::string_view name) const {
    for (const auto& p : numbers) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

int NodeSpec::input_index(std::string_view name) const {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

int NodeSpec::output_index(std::string_view name) const {
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (outputs[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

NodeCatalog::NodeCatalog() : specs_(build_catalog()) {}

const NodeCatalog& NodeCatalog::instance() {
    static const NodeCatalog catalog;
    return catalog;
}

const NodeSpec* NodeCatalog::find(std::string_view kind) const {
    auto it = std::lower_bound(specs_.begin(), specs_.end(), kind,
                               [](const NodeSpec& s, std::string_view k) { return s.kind < k; });
    if (it == specs_.end() || it->kind != kind) return nullptr;
    return &*it;
}

const NodeSpec& NodeCatalog::lookup(std::string_view kind) const {
    if (const NodeSpec* spec = find(kind)) return *spec;
    throw Error(ErrorCode::UnknownKind, "no node kind named '" + std::string(kind) + "'");
}

std::vector<std::string> NodeCatalog::list_kinds(std::optional<Category> category) const {
    std::vector<std::string> kinds;
    for (const auto& s : specs_) {
        if (!category || s.category == *category) kinds.push_back(s.kind);
    }
    return kinds;
}

ResolvedSignature resolve_dynamic(const NodeSpec& spec, std::span<const int> input_dims) {
    if (input_dims.size() != spec.inputs.size()) {
        throw Error(ErrorCode::IncompatibleDimensions,
                    spec.kind + ": expected " + std::to_string(spec.inputs.size()) + " input dimensions");
    }
    int widest = 1;
    for (std::size_t i = 0; i < input_dims.size(); ++i) {
        if (input_dims[i] < 1 || input_dims[i] > 4) {
            throw Error(ErrorCode::IncompatibleDimensions, spec.kind + "." + spec.inputs[i].name + ": dimension out of range");
        }
        if (spec.inputs[i].type == SemanticType::DynamicVector) widest = std::max(widest, input_dims[i]);
    }

    ResolvedSignature sig;
    sig.input_dims.reserve(spec.inputs.size());
    for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
        const auto& slot = spec.inputs[i];
        const int target = slot.type == SemanticType::DynamicVector ? widest : dimension(slot.type);
        if (!coercible(input_dims[i], target)) {
            throw Error(ErrorCode::IncompatibleDimensions,
                        spec.kind + "." + slot.name + ": " + std::string(glsl_type(input_dims[i])) +
                            " source cannot feed " + std::string(glsl_type(target)));
        }
        sig.input_dims.push_back(target);
    }
    for (const auto& slot : spec.outputs) {
        sig.output_dims.push_back(slot.type == SemanticType::DynamicVector ? widest : dimension(slot.type));
    }
    return sig;
}

}  // namespace shaderevo
