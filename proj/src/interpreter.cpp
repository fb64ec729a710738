#include <cmath>
#include <numbers>

#include "noise.hpp"
#include "shaderevo/codegen.hpp"
#include "shaderevo/error.hpp"
#include "vecmath.hpp"

namespace shaderevo {

namespace {

using vm::map;

constexpr double kDegreesToRadians = std::numbers::pi / 180.0;

class Interpreter {
public:
    Interpreter(const Genome& g, const EvalContext& ctx) : g_(g), ctx_(ctx), types_(resolve_types(g)) {}

    Evaluation run() {
        Evaluation result;
        result.lit = g_.lit;
        result.alpha_clip = alpha_clip_enabled(g_);
        for (NodeId id : topo_order(g_)) {
            if (id != kMasterId) eval_node(g_.at(id));
        }
        const auto& master_spec = NodeCatalog::instance().master();
        for (const auto& slot : master_spec.inputs) {
            Value v = (g_.lit || slot.unlit_legal) ? input(g_.master(), slot, dimension(slot.type))
                                                   : inactive_slot_value(g_.master(), slot);
            (slot.stage == Stage::Vertex ? result.vertex : result.fragment)[slot.name] = v;
        }
        result.non_finite = non_finite_;
        return result;
    }

private:
    Value binding(SlotBinding b) const {
        switch (b) {
            case SlotBinding::UV: return ctx_.uv;
            case SlotBinding::ObjectPosition: return ctx_.object_position;
            case SlotBinding::WorldNormal: return vm::normalize(ctx_.world_normal);
            case SlotBinding::ViewDirection: return vm::normalize(ctx_.view_direction);
            case SlotBinding::ObjectNormal: return ctx_.world_normal;
            case SlotBinding::ObjectTangent: return default_tangent(ctx_.world_normal);
            case SlotBinding::None: break;
        }
        return Value{};
    }

    Value inactive_slot_value(const NodeInstance& node, const SlotSpec& slot) const {
        if (slot.binding != SlotBinding::None) return binding(slot.binding);
        return node.slot_defaults.at(slot.name).value;
    }

    Value input(const NodeInstance& node, const SlotSpec& slot, int want) const {
        if (auto src = g_.source_of(SlotRef{node.id, slot.name})) return outputs_.at(*src).coerced(want);
        if (slot.binding != SlotBinding::None) return binding(slot.binding).coerced(want);
        return node.slot_defaults.at(slot.name).value.coerced(want);
    }

    Value uniform(const NodeInstance& node) const {
        const Value& value = node.numbers.at("Value").value;
        if (auto it = ctx_.uniforms.find("u_n" + node.id.str()); it != ctx_.uniforms.end() && it->second.dim == value.dim) {
            return it->second;
        }
        return value;
    }

    void store(NodeId id, const std::string& slot, Value v) {
        if (!v.all_finite()) {
            non_finite_ = true;
            for (int i = 0; i < v.dim; ++i) {
                if (!std::isfinite(v.c[i])) v.c[i] = std::signbit(v.c[i]) ? -kNonFiniteSentinel : kNonFiniteSentinel;
            }
        }
        outputs_[SlotRef{id, slot}] = v;
    }

    void eval_node(const NodeInstance& node) {
        const auto& spec = NodeCatalog::instance().lookup(node.kind);
        const auto& sig = types_.at(node.id);
        std::vector<Value> in;
        for (std::size_t i = 0; i < spec.inputs.size(); ++i) in.push_back(input(node, spec.inputs[i], sig.input_dims[i]));
        for (std::size_t k = 0; k < spec.outputs.size(); ++k) {
            Value v = evaluate(node, spec, sig, in, k);
            store(node.id, spec.outputs[k].name, v);
        }
    }

    Value evaluate(const NodeInstance& node, const NodeSpec& spec, const ResolvedSignature& sig,
                   const std::vector<Value>& in, std::size_t output) const {
        const std::string& kind = spec.kind;
        if (spec.category == Category::Input) {
            if (!node.numbers.empty()) return uniform(node);
            if (kind == "Time") return Value::scalar(ctx_.time);
            if (kind == "UV") return binding(SlotBinding::UV);
            if (kind == "ObjectPosition") return binding(SlotBinding::ObjectPosition);
            if (kind == "WorldNormal") return binding(SlotBinding::WorldNormal);
            if (kind == "ViewDirection") return binding(SlotBinding::ViewDirection);
        }

        if (kind == "Add") return vm::add(in[0], in[1]);
        if (kind == "Subtract") return vm::sub(in[0], in[1]);
        if (kind == "Multiply") return vm::mul(in[0], in[1]);
        if (kind == "Divide") return vm::div(in[0], in[1]);
        if (kind == "Power") return map(in[0], in[1], [](double a, double b) { return std::pow(std::abs(a), b); });
        if (kind == "Sin") return map(in[0], [](double x) { return std::sin(x); });
        if (kind == "Cos") return map(in[0], [](double x) { return std::cos(x); });
        if (kind == "Abs") return map(in[0], [](double x) { return std::abs(x); });
        if (kind == "Fract") return map(in[0], vm::gfract);
        if (kind == "Floor") return map(in[0], [](double x) { return std::floor(x); });
        if (kind == "OneMinus") return map(in[0], [](double x) { return 1.0 - x; });
        if (kind == "Saturate") return map(in[0], [](double x) { return vm::gclamp(x, 0.0, 1.0); });
        if (kind == "Clamp") {
            return map(in[0], in[1], in[2], [](double x, double lo, double hi) { return vm::gmin(vm::gmax(x, lo), hi); });
        }
        if (kind == "Lerp") return map(in[0], in[1], in[2], vm::gmix);
        if (kind == "Step") return map(in[0], in[1], vm::gstep);
        if (kind == "SmoothStep") {
            return map(in[0], in[1], in[2], [](double e0, double e1, double x) {
                const double t = vm::gclamp((x - e0) / (e1 - e0), 0.0, 1.0);
                return t * t * (3.0 - 2.0 * t);
            });
        }
        if (kind == "Remap") {
            const Value& r_in = in[1];
            const Value& r_out = in[2];
            return map(in[0], [&](double x) {
                return r_out[0] + (x - r_in[0]) * (r_out[1] - r_out[0]) / (r_in[1] - r_in[0]);
            });
        }
        if (kind == "Dot") return Value::scalar(vm::dot(in[0], in[1]));
        if (kind == "Cross") return vm::cross(in[0], in[1]);
        if (kind == "Normalize") return vm::normalize(in[0]);
        if (kind == "Length") return Value::scalar(vm::length(in[0]));
        if (kind == "Distance") return Value::scalar(vm::length(vm::sub(in[0], in[1])));

        if (kind == "Split") {
            const int width = sig.input_dims[0];
            return Value::scalar(static_cast<int>(output) < width ? in[0][output] : 0.0);
        }
        if (kind == "Combine") {
            const auto& name = spec.outputs[output].name;
            if (name == "RGBA") return Value::of({in[0][0], in[1][0], in[2][0], in[3][0]});
            if (name == "RGB") return Value::of({in[0][0], in[1][0], in[2][0]});
            return Value::of({in[0][0], in[1][0]});
        }
        if (kind == "Swizzle") {
            const std::string& mask = node.presets.at("Mask");
            Value r;
            r.dim = static_cast<int>(mask.size());
            for (std::size_t i = 0; i < mask.size(); ++i) r.c[i] = in[0][static_cast<std::size_t>(mask[i] - 'x')];
            return r;
        }

        if (kind == "TilingAndOffset") return vm::add(vm::mul(in[0], in[1]), in[2]);
        if (kind == "Rotate") {
            double angle = in[2][0];
            if (node.presets.at("Unit") == "Degrees") angle = angle * kDegreesToRadians;
            const double dx = in[0][0] - in[1][0];
            const double dy = in[0][1] - in[1][1];
            const double s = std::sin(angle);
            const double c = std::cos(angle);
            return Value::of({c * dx - s * dy + in[1][0], s * dx + c * dy + in[1][1]});
        }
        if (kind == "Panner") return vm::add(in[0], vm::mul(in[1], Value::scalar(ctx_.time)));

        if (kind == "GradientNoise") return Value::scalar(noise::gradient_noise(in[0][0], in[0][1], in[1][0]));
        if (kind == "SimpleNoise") return Value::scalar(noise::simple_noise(in[0][0], in[0][1], in[1][0]));
        if (kind == "Voronoi") {
            const auto s = noise::voronoi(in[0][0], in[0][1], in[1][0], in[2][0]);
            return Value::scalar(output == 0 ? s.distance : s.cell);
        }

        if (kind == "Fresnel") {
            const double facing = vm::gclamp(vm::dot(vm::normalize(in[0]), vm::normalize(in[1])), 0.0, 1.0);
            return Value::scalar(std::pow(1.0 - facing, in[2][0]));
        }
        if (kind == "Posterize") {
            return map(in[0], in[1], [](double x, double steps) {
                return std::floor(x / (1.0 / steps)) * (1.0 / steps);
            });
        }
        throw Error(ErrorCode::UnsupportedGenome, "no reference semantics for node kind " + kind);
    }

    const Genome& g_;
    const EvalContext& ctx_;
    std::map<NodeId, ResolvedSignature> types_;
    std::map<SlotRef, Value> outputs_;
    bool non_finite_ = false;
};

}  // namespace

Value default_tangent(const Value& n) {
    const Value up = std::abs(n[1]) < 0.999 ? Value::of({0.0, 1.0, 0.0}) : Value::of({1.0, 0.0, 0.0});
    return vm::normalize(vm::cross(up, n));
}

Evaluation interpret(const Genome& genome, const EvalContext& ctx) {
    const auto report = validate(genome);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw Error(ErrorCode::UnsupportedGenome, "genome does not validate: " + v.subject + " (" + v.detail + ")");
    }
    return Interpreter(genome, ctx).run();
}

ShadeResult shade(const Evaluation& out, const EvalContext& ctx, const LightParams& light) {
    ShadeResult result;
    const Value& base = out.fragment.at("BaseColor");
    const double alpha = out.fragment.at("Alpha")[0];
    result.discarded = out.alpha_clip && alpha < out.fragment.at("AlphaClipThreshold")[0];

    if (!out.lit) {
        result.rgba = {base[0], base[1], base[2], alpha};
    } else {
        using namespace vm;
        const Value tangent = ctx.world_tangent ? *ctx.world_tangent : default_tangent(ctx.world_normal);
        const Value n0 = normalize(ctx.world_normal);
        const Value t0 = normalize(tangent);
        const Value t = normalize(sub(t0, mul(n0, Value::scalar(dot(n0, t0)))));
        const Value b = cross(n0, t);
        const Value nts = sub(mul(out.fragment.at("NormalTS"), Value::scalar(2.0)), Value::scalar(1.0));
        const Value n = normalize(add(add(mul(t, Value::scalar(nts[0])), mul(b, Value::scalar(nts[1]))),
                                      mul(n0, Value::scalar(nts[2]))));
        const Value l = normalize(light.direction);
        const Value v = normalize(ctx.view_direction);
        const Value h = normalize(add(l, v));
        const double metallic = out.fragment.at("Metallic")[0];
        const double smoothness = out.fragment.at("Smoothness")[0];
        const double occlusion = out.fragment.at("Occlusion")[0];
        const Value& emission = out.fragment.at("Emission");
        const double diffuse = gmax(dot(n, l), 0.0);
        const double spec = std::pow(gmax(dot(n, h), 0.0), std::exp2(1.0 + 10.0 * smoothness)) * gmix(0.04, 1.0, metallic);
        for (int i = 0; i < 3; ++i) {
            result.rgba[i] = occlusion * 0.03 * base[i] + light.color[i] * (base[i] * diffuse * (1.0 - metallic) + spec) +
                             emission[i];
        }
        result.rgba[3] = alpha;
    }
    for (double x : result.rgba) {
        if (!std::isfinite(x)) result.non_finite = true;
    }
    return result;
}

}  // namespace shaderevo
