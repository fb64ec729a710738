#include "shaderevo/json.hpp"

#include <charconv>

#include "shaderevo/error.hpp"

namespace shaderevo {

namespace {

[[noreturn]] void schema(const std::string& message) { throw Error(ErrorCode::SchemaError, message); }

const Json& field(const Json& obj, const char* key, std::string_view where) {
    auto it = obj.find(key);
    if (it == obj.end()) schema(std::string(where) + "." + key + " is missing");
    return *it;
}

void expect_object(const Json& j, std::string_view where) {
    if (!j.is_object()) schema(std::string(where) + " must be an object");
}

double number(const Json& j, std::string_view where) {
    if (!j.is_number()) schema(std::string(where) + " must be a number");
    return j.get<double>();
}

NodeId parse_id(const Json& j, std::string_view where) {
    std::uint64_t v = 0;
    if (j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0)) {
        v = j.get<std::uint64_t>();
    } else if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) schema(std::string(where) + " is not a node id");
    } else {
        schema(std::string(where) + " is not a node id");
    }
    if (v > 0xffffffffULL) schema(std::string(where) + " is out of range");
    return NodeId{static_cast<std::uint32_t>(v)};
}

SlotRef parse_endpoint(const Json& j, std::string_view where) {
    if (!j.is_array() || j.size() != 2 || !j[1].is_string()) schema(std::string(where) + " must be [node, slot]");
    return SlotRef{parse_id(j[0], where), j[1].get<std::string>()};
}

void read_slot_defaults(const Json& j, const NodeSpec& spec, NodeInstance& node, std::string_view where) {
    expect_object(j, where);
    for (const auto& [name, value] : j.items()) {
        const SlotSpec* slot = spec.input(name);
        if (!slot) schema(std::string(where) + " names unknown slot " + name);
        node.slot_defaults[name] = ranged_from_json(value, std::string(where) + "." + name);
    }
}

Json slot_defaults_json(const NodeInstance& node) {
    Json j = Json::object();
    for (const auto& [name, value] : node.slot_defaults) j[name] = ranged_to_json(value);
    return j;
}

[[noreturn]] void bad_config(const std::string& message) { throw Error(ErrorCode::InvalidConfig, message); }

template <class T>
T config_value(const Json& j, const char* key) {
    try {
        return j.get<T>();
    } catch (const Json::exception&) {
        bad_config(std::string("config key ") + key + " has the wrong type");
    }
}

int config_int(const Json& j, const char* key) {
    if (!j.is_number_integer()) bad_config(std::string("config key ") + key + " must be an integer");
    const auto v = j.get<long long>();
    if (v < -1000000 || v > 1000000) bad_config(std::string("config key ") + key + " is out of range");
    return static_cast<int>(v);
}

double config_number(const Json& j, const char* key) {
    if (!j.is_number()) bad_config(std::string("config key ") + key + " must be a number");
    return j.get<double>();
}

Json slot_spec_json(const SlotSpec& s, bool input) {
    Json j{{"name", s.name}, {"type", std::string(to_string(s.type))}};
    if (input) {
        j["default"] = value_to_json(s.default_value);
        j["min"] = s.min;
        j["max"] = s.max;
        j["binding"] = std::string(to_string(s.binding));
        j["ephemeral"] = s.ephemeral;
    }
    return j;
}

}  // namespace

Json value_to_json(const Value& v) {
    Json a = Json::array();
    for (int i = 0; i < v.dim; ++i) a.push_back(v[i]);
    return a;
}

Value value_from_json(const Json& j, std::string_view what) {
    if (j.is_number()) return Value::scalar(j.get<double>());
    if (!j.is_array() || j.empty() || j.size() > 4) schema(std::string(what) + " must hold 1 to 4 numbers");
    Value v;
    v.dim = static_cast<int>(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v.c[i] = number(j[i], what);
    return v;
}

Json ranged_to_json(const RangedValue& v) {
    return Json{{"value", value_to_json(v.value)}, {"min", v.min}, {"max", v.max}};
}

RangedValue ranged_from_json(const Json& j, std::string_view what) {
    expect_object(j, what);
    RangedValue r;
    r.value = value_from_json(field(j, "value", what), std::string(what) + ".value");
    r.min = number(field(j, "min", what), std::string(what) + ".min");
    r.max = number(field(j, "max", what), std::string(what) + ".max");
    return r;
}

namespace {

Json layout_to_json(const LayoutHint& l) { return Json{{"x", l.x}, {"y", l.y}}; }

LayoutHint layout_from_json(const Json& j, const std::string& where) {
    expect_object(j, where);
    return LayoutHint{number(field(j, "x", where), where + ".x"), number(field(j, "y", where), where + ".y")};
}

}  // namespace

Json genome_to_json(const Genome& g) {
    Json j;
    j["format_version"] = 1;
    j["lit"] = g.lit;
    j["next_id"] = g.next_id;
    j["master"] = Json{{"id", kMasterId.str()}, {"slots", slot_defaults_json(g.master())}};
    if (g.master().layout) j["master"]["layout"] = layout_to_json(*g.master().layout);
    Json nodes = Json::array();
    for (const auto& [id, node] : g.nodes) {
        if (id == kMasterId) continue;
        Json n;
        n["id"] = id.str();
        n["kind"] = node.kind;
        Json numbers = Json::object();
        for (const auto& [name, value] : node.numbers) numbers[name] = ranged_to_json(value);
        n["params"] = Json{{"numbers", numbers}, {"presets", node.presets.empty() ? Json::object() : Json(node.presets)}};
        n["slot_defaults"] = slot_defaults_json(node);
        if (node.layout) n["layout"] = layout_to_json(*node.layout);
        nodes.push_back(std::move(n));
    }
    j["nodes"] = std::move(nodes);
    Json edges = Json::array();
    auto list = g.edges();
    std::sort(list.begin(), list.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.to, a.from) < std::tie(b.to, b.from);
    });
    for (const auto& e : list) {
        edges.push_back(Json{{"from", Json::array({e.from.node.str(), e.from.slot})},
                             {"to", Json::array({e.to.node.str(), e.to.slot})}});
    }
    j["edges"] = std::move(edges);
    j["metadata"] = Json{{"generation", g.metadata.generation},
                         {"lineage", g.metadata.lineage},
                         {"created_at", g.metadata.created_at}};
    return j;
}

Genome genome_from_json(const Json& j) {
    expect_object(j, "document");
    const auto& catalog = NodeCatalog::instance();
    const Json& version = field(j, "format_version", "document");
    if (!version.is_number_integer()) schema("document.format_version must be an integer");
    if (version.get<long long>() != 1) {
        throw Error(ErrorCode::VersionError, "unsupported format_version " + version.dump());
    }
    Genome g = Genome::minimal(true);
    const Json& lit = field(j, "lit", "document");
    if (!lit.is_boolean()) schema("document.lit must be a boolean");
    g.lit = lit.get<bool>();

    const Json& master = field(j, "master", "document");
    expect_object(master, "master");
    if (auto it = master.find("id"); it != master.end() && parse_id(*it, "master.id") != kMasterId) {
        schema("master.id must be \"0\"");
    }
    if (auto it = master.find("slots"); it != master.end()) {
        read_slot_defaults(*it, catalog.master(), g.master(), "master.slots");
    }
    if (auto it = master.find("layout"); it != master.end()) {
        g.master().layout = layout_from_json(*it, "master.layout");
    }

    const Json& nodes = field(j, "nodes", "document");
    if (!nodes.is_array()) schema("document.nodes must be an array");
    std::uint32_t max_id = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "nodes[" + std::to_string(i) + "]";
        const Json& n = nodes[i];
        expect_object(n, where);
        const NodeId id = parse_id(field(n, "id", where), where + ".id");
        const Json& kind = field(n, "kind", where);
        if (!kind.is_string()) schema(where + ".kind must be a string");
        const NodeSpec* spec = catalog.find(kind.get<std::string>());
        if (!spec || spec->kind == kMasterKind) schema(where + ".kind: unknown node kind " + kind.get<std::string>());
        if (id == kMasterId || g.nodes.count(id)) schema(where + ".id " + id.str() + " is duplicated");
        NodeInstance node = make_node(*spec, id);
        if (auto pit = n.find("params"); pit != n.end()) {
            expect_object(*pit, where + ".params");
            if (auto nit = pit->find("numbers"); nit != pit->end()) {
                expect_object(*nit, where + ".params.numbers");
                for (const auto& [name, value] : nit->items()) {
                    if (!spec->number(name)) schema(where + ".params.numbers names unknown parameter " + name);
                    node.numbers[name] = ranged_from_json(value, where + ".params.numbers." + name);
                }
            }
            if (auto sit = pit->find("presets"); sit != pit->end()) {
                expect_object(*sit, where + ".params.presets");
                for (const auto& [name, value] : sit->items()) {
                    if (!spec->preset(name)) schema(where + ".params.presets names unknown preset " + name);
                    if (!value.is_string()) schema(where + ".params.presets." + name + " must be a string");
                    node.presets[name] = value.get<std::string>();
                }
            }
        }
        if (auto dit = n.find("slot_defaults"); dit != n.end()) read_slot_defaults(*dit, *spec, node, where + ".slot_defaults");
        if (auto lit2 = n.find("layout"); lit2 != n.end()) {
            node.layout = layout_from_json(*lit2, where + ".layout");
        }
        max_id = std::max(max_id, id.value);
        g.nodes.emplace(id, std::move(node));
    }

    const Json& edges = field(j, "edges", "document");
    if (!edges.is_array()) schema("document.edges must be an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string where = "edges[" + std::to_string(i) + "]";
        expect_object(edges[i], where);
        SlotRef from = parse_endpoint(field(edges[i], "from", where), where + ".from");
        SlotRef to = parse_endpoint(field(edges[i], "to", where), where + ".to");
        const NodeInstance* src = g.find(from.node);
        const NodeInstance* dst = g.find(to.node);
        if (!src) schema(where + ".from references unknown node " + from.node.str());
        if (!dst) schema(where + ".to references unknown node " + to.node.str());
        if (!catalog.lookup(src->kind).output(from.slot)) schema(where + ".from names unknown output " + from.slot);
        if (!catalog.lookup(dst->kind).input(to.slot)) schema(where + ".to names unknown input " + to.slot);
        if (g.connected(to)) schema(where + ".to feeds an input that already has a source");
        g.link(std::move(from), std::move(to));
    }

    g.next_id = max_id + 1;
    if (auto it = j.find("next_id"); it != j.end()) {
        if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() > 0)) {
            schema("document.next_id must be a positive integer");
        }
        const auto next = it->get<std::uint64_t>();
        if (next <= max_id || next > 0xffffffffULL) schema("document.next_id must exceed every node id");
        g.next_id = static_cast<std::uint32_t>(next);
    }

    if (auto it = j.find("metadata"); it != j.end()) {
        expect_object(*it, "metadata");
        if (auto gen = it->find("generation"); gen != it->end()) {
            if (!gen->is_number_unsigned() && !gen->is_number_integer()) schema("metadata.generation must be an integer");
            g.metadata.generation = gen->get<std::uint64_t>();
        }
        if (auto ca = it->find("created_at"); ca != it->end()) {
            if (!ca->is_number_unsigned() && !ca->is_number_integer()) schema("metadata.created_at must be an integer");
            g.metadata.created_at = ca->get<std::uint64_t>();
        }
        if (auto lin = it->find("lineage"); lin != it->end()) {
            if (!lin->is_array()) schema("metadata.lineage must be an array");
            for (const auto& p : *lin) {
                if (!p.is_string()) schema("metadata.lineage entries must be strings");
                g.metadata.lineage.push_back(p.get<std::string>());
            }
        }
    }
    return g;
}

Json bundle_to_json(const ShaderBundle& bundle) {
    Json uniforms = Json::array();
    for (const auto& u : bundle.uniforms) {
        uniforms.push_back(Json{{"name", u.name},
                                {"type", std::string(glsl_type(u.default_value.dim))},
                                {"default", value_to_json(u.default_value)},
                                {"role", std::string(to_string(u.role))}});
    }
    return Json{{"vertex", bundle.vertex_src},
                {"fragment", bundle.fragment_src},
                {"uniforms", std::move(uniforms)},
                {"lit", bundle.lit},
                {"alphaClip", bundle.alpha_clip}};
}

Json evaluation_to_json(const Evaluation& eval) {
    Json fragment = Json::object();
    for (const auto& [name, v] : eval.fragment) fragment[name] = value_to_json(v);
    Json vertex = Json::object();
    for (const auto& [name, v] : eval.vertex) vertex[name] = value_to_json(v);
    return Json{{"fragment", std::move(fragment)},
                {"vertex", std::move(vertex)},
                {"lit", eval.lit},
                {"alpha_clip", eval.alpha_clip},
                {"non_finite", eval.non_finite}};
}

EvalContext eval_context_from_json(const Json& j) {
    expect_object(j, "context");
    EvalContext ctx;
    auto vec = [&](const char* key, Value& out, int dim) {
        if (auto it = j.find(key); it != j.end()) {
            out = value_from_json(*it, key);
            if (out.dim != dim) schema(std::string("context.") + key + " must have " + std::to_string(dim) + " components");
        }
    };
    vec("uv", ctx.uv, 2);
    vec("object_position", ctx.object_position, 3);
    vec("world_normal", ctx.world_normal, 3);
    vec("view_direction", ctx.view_direction, 3);
    if (auto it = j.find("time"); it != j.end()) ctx.time = number(*it, "context.time");
    if (auto it = j.find("world_tangent"); it != j.end() && !it->is_null()) {
        Value t;
        vec("world_tangent", t, 3);
        ctx.world_tangent = t;
    }
    if (auto it = j.find("uniforms"); it != j.end()) {
        expect_object(*it, "context.uniforms");
        for (const auto& [name, value] : it->items()) ctx.uniforms[name] = value_from_json(value, name);
    }
    return ctx;
}

Json eval_context_to_json(const EvalContext& ctx) {
    Json j{{"uv", value_to_json(ctx.uv)},
           {"object_position", value_to_json(ctx.object_position)},
           {"world_normal", value_to_json(ctx.world_normal)},
           {"view_direction", value_to_json(ctx.view_direction)},
           {"time", ctx.time}};
    if (ctx.world_tangent) j["world_tangent"] = value_to_json(*ctx.world_tangent);
    if (!ctx.uniforms.empty()) {
        Json u = Json::object();
        for (const auto& [name, v] : ctx.uniforms) u[name] = value_to_json(v);
        j["uniforms"] = std::move(u);
    }
    return j;
}

Json mutation_config_to_json(const MutationConfig& config) {
    Json weights = Json::object();
    for (auto s : {MutationStrength::Low, MutationStrength::Medium, MutationStrength::High}) {
        const auto& w = config.weights[static_cast<int>(s)];
        weights[std::string(to_string(s))] = Json{{"param_jitter", w.param_jitter},
                                                  {"preset_swap", w.preset_swap},
                                                  {"swap_noise_map", w.swap_noise_map},
                                                  {"expand_subtree", w.expand_subtree},
                                                  {"region_bias", w.region_bias}};
    }
    return Json{{"strength", std::string(to_string(config.strength))},
                {"mutation_count", config.mutation_count},
                {"expansion_enabled", config.expansion_enabled},
                {"expansion_probability", config.expansion_probability},
                {"operator_weights", std::move(weights)}};
}

MutationConfig mutation_config_from_json(const Json& j, const MutationConfig& base) {
    if (!j.is_object()) bad_config("config must be an object");
    MutationConfig c = base;
    for (const auto& [key, value] : j.items()) {
        if (key == "strength") {
            auto s = value.is_string() ? mutation_strength_from_string(value.get<std::string>()) : std::nullopt;
            if (!s) bad_config("strength must be one of low, medium, high");
            c.strength = *s;
        } else if (key == "mutation_count") {
            c.mutation_count = config_int(value, "mutation_count");
        } else if (key == "expansion_enabled") {
            if (!value.is_boolean()) bad_config("config key expansion_enabled must be a boolean");
            c.expansion_enabled = value.get<bool>();
        } else if (key == "expansion_probability") {
            c.expansion_probability = config_number(value, "expansion_probability");
        } else if (key == "operator_weights") {
            if (!value.is_object()) bad_config("operator_weights must be an object");
            for (const auto& [level, table] : value.items()) {
                auto s = mutation_strength_from_string(level);
                if (!s) bad_config("operator_weights has unknown level " + level);
                if (!table.is_object()) bad_config("operator_weights." + level + " must be an object");
                auto& w = c.weights[static_cast<int>(*s)];
                for (const auto& [name, x] : table.items()) {
                    const double v = config_number(x, name.c_str());
                    if (name == "param_jitter") w.param_jitter = v;
                    else if (name == "preset_swap") w.preset_swap = v;
                    else if (name == "swap_noise_map") w.swap_noise_map = v;
                    else if (name == "expand_subtree") w.expand_subtree = v;
                    else if (name == "region_bias") w.region_bias = v;
                    else bad_config("operator_weights." + level + " has unknown key " + name);
                }
            }
        } else {
            bad_config("unknown config key " + key);
        }
    }
    c.check();
    return c;
}

Json evolution_config_to_json(const EvolutionConfig& config) {
    Json j = mutation_config_to_json(config.mutation);
    j["capacity"] = config.capacity;
    j["offspring_count"] = config.offspring_count;
    j["tournament_size"] = config.tournament_size;
    j["lit_probability"] = config.lit_probability;
    j["output_dir"] = config.output_dir;
    return j;
}

EvolutionConfig evolution_config_from_json(const Json& j, const EvolutionConfig& base) {
    if (!j.is_object()) bad_config("config must be an object");
    EvolutionConfig c = base;
    Json mutation = Json::object();
    for (const auto& [key, value] : j.items()) {
        if (key == "capacity") c.capacity = config_int(value, "capacity");
        else if (key == "offspring_count") c.offspring_count = config_int(value, "offspring_count");
        else if (key == "tournament_size") c.tournament_size = config_int(value, "tournament_size");
        else if (key == "lit_probability") c.lit_probability = config_number(value, "lit_probability");
        else if (key == "output_dir") c.output_dir = config_value<std::string>(value, "output_dir");
        else mutation[key] = value;
    }
    c.mutation = mutation_config_from_json(mutation, base.mutation);
    c.check();
    return c;
}

Json catalog_to_json() {
    Json list = Json::array();
    for (const auto& spec : NodeCatalog::instance().all()) {
        Json inputs = Json::array();
        for (const auto& s : spec.inputs) {
            Json slot = slot_spec_json(s, true);
            if (spec.kind == kMasterKind) {
                slot["stage"] = s.stage == Stage::Vertex ? "vertex" : "fragment";
                slot["unlit"] = s.unlit_legal;
            }
            inputs.push_back(std::move(slot));
        }
        Json outputs = Json::array();
        for (const auto& s : spec.outputs) outputs.push_back(slot_spec_json(s, false));
        Json presets = Json::array();
        for (const auto& p : spec.presets) {
            presets.push_back(Json{{"name", p.name}, {"values", p.values}, {"default", p.default_value}});
        }
        Json numbers = Json::array();
        for (const auto& p : spec.numbers) {
            numbers.push_back(Json{{"name", p.name},
                                   {"type", std::string(to_string(p.type))},
                                   {"default", value_to_json(p.default_value)},
                                   {"min", p.min},
                                   {"max", p.max}});
        }
        list.push_back(Json{{"kind", spec.kind},
                            {"category", std::string(to_string(spec.category))},
                            {"inputs", std::move(inputs)},
                            {"outputs", std::move(outputs)},
                            {"presets", std::move(presets)},
                            {"params", std::move(numbers)}});
    }
    return list;
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace shaderevo
