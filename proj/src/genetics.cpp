#include "shaderevo/genetics.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "shaderevo/error.hpp"

namespace shaderevo {

namespace {

const NodeCatalog& catalog() { return NodeCatalog::instance(); }

bool slot_active(const Genome& g, const SlotSpec& slot) { return g.lit || slot.unlit_legal; }

// Uniform choice with an optional preference for focus-region candidates.
template <class T, class InRegion>
const T* pick_biased(const std::vector<T>& all, InRegion in_region, double bias, Rng& rng) {
    if (all.empty()) return nullptr;
    std::vector<const T*> region;
    for (const auto& c : all) {
        if (in_region(c)) region.push_back(&c);
    }
    if (!region.empty() && bias > 0.0 && rng.bernoulli(bias)) return region[rng.index(region.size())];
    return &all[rng.index(all.size())];
}

Value uniform_in(const RangedValue& r, Rng& rng) {
    Value v = r.value;
    for (int i = 0; i < v.dim; ++i) v.c[i] = rng.uniform(r.min, r.max);
    return v;
}

void randomize_node(NodeInstance& node, Rng& rng) {
    const auto& spec = catalog().lookup(node.kind);
    for (auto& [name, value] : node.numbers) value.value = uniform_in(value, rng);
    for (const auto& slot : spec.inputs) {
        if (!slot.ephemeral || slot.binding != SlotBinding::None) continue;
        auto& def = node.slot_defaults.at(slot.name);
        def.value = uniform_in(def, rng);
    }
}

void randomize_presets(NodeInstance& node, Rng& rng) {
    const auto& spec = catalog().lookup(node.kind);
    for (const auto& p : spec.presets) node.presets[p.name] = p.values[rng.index(p.values.size())];
}

bool validates(const Genome& g) { return validate(g).ok(); }

// Which source dimensions an input slot accepts.
struct Requirement {
    int exact = 0;  // when non-zero: d == exact (or scalar if allowed)
    int min = 1;
    bool allow_scalar = true;

    bool accepts(int d) const {
        if (exact) return d == exact || (allow_scalar && d == 1);
        return d == 1 || d >= min;
    }
};

Requirement requirement_for(const SlotSpec& slot, int resolved_dynamic) {
    if (slot.type == SemanticType::DynamicVector) {
        if (resolved_dynamic > 1) return Requirement{resolved_dynamic, 1, true};
        return Requirement{};
    }
    return Requirement{0, dimension(slot.type), true};
}

struct Candidate {
    const NodeSpec* spec;
    std::size_t output;
    int dim;  // dimension of the chosen output; for dynamic outputs also the node's D
};

class SubtreeBuilder {
public:
    SubtreeBuilder(Genome& g, Rng& rng) : g_(g), rng_(rng) {}

    std::optional<SlotRef> build(const Requirement& req, int level) {
        std::map<std::string, std::vector<Candidate>> by_kind;
        for (const auto& spec : catalog().all()) {
            if (spec.kind == kMasterKind) continue;
            for (std::size_t k = 0; k < spec.outputs.size(); ++k) {
                const auto& out = spec.outputs[k];
                if (out.type == SemanticType::DynamicVector) {
                    for (int d = 1; d <= 4; ++d) {
                        if (req.accepts(d) && (level < kMaxSubtreeDepth || d == 1)) {
                            by_kind[spec.kind].push_back({&spec, k, d});
                        }
                    }
                } else if (req.accepts(dimension(out.type))) {
                    by_kind[spec.kind].push_back({&spec, k, dimension(out.type)});
                }
            }
        }
        if (by_kind.empty()) return std::nullopt;
        auto kind_it = std::next(by_kind.begin(), static_cast<long>(rng_.index(by_kind.size())));
        const auto& options = kind_it->second;
        const Candidate chosen = options[rng_.index(options.size())];
        const NodeSpec& spec = *chosen.spec;

        int d_dyn = 1;
        if (spec.outputs[chosen.output].type == SemanticType::DynamicVector) {
            d_dyn = chosen.dim;
        } else if (level < kMaxSubtreeDepth) {
            d_dyn = static_cast<int>(rng_.index(4)) + 1;
        }

        const NodeId id = g_.add(spec.kind);
        NodeInstance& node = g_.at(id);
        randomize_node(node, rng_);
        randomize_presets(node, rng_);

        std::vector<std::size_t> dynamic_inputs;
        for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
            if (spec.inputs[i].type == SemanticType::DynamicVector) dynamic_inputs.push_back(i);
        }
        std::optional<std::size_t> forced;
        if (d_dyn > 1) {
            if (dynamic_inputs.empty()) d_dyn = 1;
            else forced = dynamic_inputs[rng_.index(dynamic_inputs.size())];
        }

        for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
            const auto& slot = spec.inputs[i];
            const bool is_forced = forced && *forced == i;
            if (!is_forced && (level >= kMaxSubtreeDepth || !rng_.bernoulli(kConnectProbability))) continue;
            Requirement child_req = requirement_for(slot, d_dyn);
            if (slot.type == SemanticType::DynamicVector && d_dyn == 1) child_req = Requirement{1, 1, true};
            if (is_forced) child_req = Requirement{d_dyn, 1, false};
            auto child = build(child_req, level + 1);
            if (!child) {
                if (is_forced) return std::nullopt;
                continue;
            }
            g_.link(*child, SlotRef{id, slot.name});
        }
        return SlotRef{id, spec.outputs[chosen.output].name};
    }

private:
    static constexpr double kConnectProbability = 0.5;
    Genome& g_;
    Rng& rng_;
};

struct AttachPoint {
    SlotRef slot;
    Requirement req;
};

std::vector<AttachPoint> attach_points(const Genome& g, bool connected) {
    const auto types = resolve_types(g);
    std::vector<AttachPoint> points;
    for (const auto& [id, node] : g.nodes) {
        const auto& spec = catalog().lookup(node.kind);
        for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
            const auto& slot = spec.inputs[i];
            SlotRef ref{id, slot.name};
            if (g.connected(ref) != connected) continue;
            if (id == kMasterId && !slot_active(g, slot)) continue;
            const int resolved = types.at(id).input_dims[i];
            points.push_back({ref, requirement_for(slot, resolved)});
        }
    }
    return points;
}

// Node that replaces `old` when a noise group switches to `target`.
NodeInstance rewrite_noise(const NodeInstance& old, NoiseKind target) {
    const auto& new_spec = catalog().lookup(to_string(target));
    NodeInstance fresh = make_node(new_spec, old.id);
    fresh.layout = old.layout;
    fresh.slot_defaults.at("UV") = old.slot_defaults.at("UV");
    const bool old_voronoi = old.kind == "Voronoi";
    const bool new_voronoi = target == NoiseKind::Voronoi;
    const std::string from_param = old_voronoi ? "CellDensity" : "Scale";
    const std::string to_param = new_voronoi ? "CellDensity" : "Scale";
    const RangedValue& src = old.slot_defaults.at(from_param);
    RangedValue& dst = fresh.slot_defaults.at(to_param);
    if (old_voronoi == new_voronoi) {
        dst = src;
    } else {
        const double t = src.max > src.min ? (src.value[0] - src.min) / (src.max - src.min) : 0.0;
        dst.value = Value::scalar(std::clamp(dst.min + t * (dst.max - dst.min), dst.min, dst.max));
    }
    return fresh;
}

std::string mapped_input(const std::string& slot, bool old_voronoi, bool new_voronoi) {
    if (old_voronoi == new_voronoi) return slot;
    if (slot == "UV") return slot;
    if (slot == "Scale") return "CellDensity";
    if (slot == "CellDensity") return "Scale";
    return {};  // AngleOffset has no counterpart
}

}  // namespace

std::string_view to_string(MutationStrength strength) {
    switch (strength) {
        case MutationStrength::Low: return "low";
        case MutationStrength::Medium: return "medium";
        case MutationStrength::High: return "high";
    }
    return "?";
}

std::optional<MutationStrength> mutation_strength_from_string(std::string_view name) {
    for (auto s : {MutationStrength::Low, MutationStrength::Medium, MutationStrength::High}) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

std::string_view to_string(MutationOp op) {
    switch (op) {
        case MutationOp::ParamJitter: return "param_jitter";
        case MutationOp::PresetSwap: return "preset_swap";
        case MutationOp::SwapNoiseMap: return "swap_noise_map";
        case MutationOp::ExpandSubtree: return "expand_subtree";
    }
    return "?";
}

std::optional<MutationOp> mutation_op_from_string(std::string_view name) {
    for (auto op : kAllMutationOps) {
        if (to_string(op) == name) return op;
    }
    return std::nullopt;
}

double OperatorWeights::weight(MutationOp op) const {
    switch (op) {
        case MutationOp::ParamJitter: return param_jitter;
        case MutationOp::PresetSwap: return preset_swap;
        case MutationOp::SwapNoiseMap: return swap_noise_map;
        case MutationOp::ExpandSubtree: return expand_subtree;
    }
    return 0.0;
}

std::array<OperatorWeights, 3> default_operator_weights() {
    return {OperatorWeights{0.7, 0.3, 0.0, 0.0, 0.0}, OperatorWeights{0.35, 0.25, 0.2, 0.2, 0.4},
            OperatorWeights{0.15, 0.15, 0.3, 0.4, 0.75}};
}

void MutationConfig::check() const {
    if (mutation_count < 0) throw Error(ErrorCode::InvalidConfig, "mutation_count must be non-negative");
    if (!(expansion_probability >= 0.0 && expansion_probability <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "expansion_probability must lie in [0, 1]");
    }
    for (const auto& w : weights) {
        for (double x : {w.param_jitter, w.preset_swap, w.swap_noise_map, w.expand_subtree}) {
            if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorCode::InvalidConfig, "operator weights must be non-negative");
        }
        if (!(w.region_bias >= 0.0 && w.region_bias <= 1.0)) {
            throw Error(ErrorCode::InvalidConfig, "region_bias must lie in [0, 1]");
        }
    }
}

double jitter_sigma(MutationStrength strength) {
    switch (strength) {
        case MutationStrength::Low: return 0.05;
        case MutationStrength::Medium: return 0.15;
        case MutationStrength::High: return 0.40;
    }
    return 0.0;
}

bool MutationResult::any_applied() const {
    return std::any_of(changes.begin(), changes.end(), [](const ChangeRecord& c) { return c.applied; });
}

std::set<NodeId> focus_region(const Genome& g) {
    std::set<NodeId> region;
    for (const char* slot : {"BaseColor", "NormalTS"}) {
        if (slot == std::string_view("NormalTS") && !g.lit) continue;
        const auto view = subtree_for_slot(g, slot);
        region.insert(view.nodes.begin(), view.nodes.end());
    }
    return region;
}

bool in_focus_region(const std::set<NodeId>& region, const SlotRef& target) {
    if (target.node == kMasterId) return target.slot == "BaseColor" || target.slot == "NormalTS";
    return region.count(target.node) != 0;
}

std::vector<NoiseGroup> noise_groups(const Genome& g) {
    std::vector<NodeId> noise;
    std::map<NodeId, std::set<NodeId>> forward;
    for (const auto& [id, node] : g.nodes) {
        if (catalog().lookup(node.kind).category != Category::Noise) continue;
        noise.push_back(id);
        auto closure = downstream_set(g, id);
        closure.erase(kMasterId);
        closure.insert(id);
        forward[id] = std::move(closure);
    }
    std::vector<std::size_t> parent(noise.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < noise.size(); ++i) {
        for (std::size_t j = i + 1; j < noise.size(); ++j) {
            if (g.at(noise[i]).kind != g.at(noise[j]).kind) continue;
            const auto& a = forward[noise[i]];
            const auto& b = forward[noise[j]];
            const bool overlap = std::any_of(a.begin(), a.end(), [&](NodeId n) { return b.count(n) != 0; });
            if (overlap) parent[find(i)] = find(j);
        }
    }
    std::map<std::size_t, NoiseGroup> groups;
    for (std::size_t i = 0; i < noise.size(); ++i) {
        auto& group = groups[find(i)];
        group.kind = *noise_kind_from_string(g.at(noise[i]).kind);
        group.members.push_back(noise[i]);
    }
    std::vector<NoiseGroup> out;
    for (auto& [root, group] : groups) out.push_back(std::move(group));
    std::sort(out.begin(), out.end(), [](const NoiseGroup& a, const NoiseGroup& b) { return a.members < b.members; });
    return out;
}

OpResult param_jitter(const Genome& genome, MutationStrength strength, Rng& rng, std::optional<double> region_bias) {
    OpResult result{genome};
    const double bias = region_bias.value_or(default_operator_weights()[static_cast<int>(strength)].region_bias);
    struct Target {
        SlotRef ref;
        bool is_number;
    };
    std::vector<Target> targets;
    for (const auto& [id, node] : genome.nodes) {
        const auto& spec = catalog().lookup(node.kind);
        for (const auto& [name, value] : node.numbers) targets.push_back({SlotRef{id, name}, true});
        for (const auto& slot : spec.inputs) {
            if (!slot.ephemeral || slot.binding != SlotBinding::None) continue;
            if (id == kMasterId && !slot_active(genome, slot)) continue;
            if (genome.connected(SlotRef{id, slot.name})) continue;
            targets.push_back({SlotRef{id, slot.name}, false});
        }
    }
    const auto region = focus_region(genome);
    const Target* t = pick_biased(targets, [&](const Target& c) { return in_focus_region(region, c.ref); }, bias, rng);
    if (!t) {
        result.detail = "inapplicable";
        return result;
    }
    NodeInstance& node = result.genome.at(t->ref.node);
    RangedValue& rv = t->is_number ? node.numbers.at(t->ref.slot) : node.slot_defaults.at(t->ref.slot);
    const double sigma = jitter_sigma(strength) * (rv.max - rv.min);
    for (int i = 0; i < rv.value.dim; ++i) {
        rv.value.c[i] = std::clamp(rv.value.c[i] + sigma * rng.normal(), rv.min, rv.max);
    }
    result.applied = true;
    result.touched.push_back(t->ref);
    result.detail = "jitter " + t->ref.node.str() + "." + t->ref.slot;
    return result;
}

OpResult preset_swap(const Genome& genome, Rng& rng, double region_bias) {
    OpResult result{genome};
    std::vector<SlotRef> targets;
    for (const auto& [id, node] : genome.nodes) {
        const auto& spec = catalog().lookup(node.kind);
        for (const auto& p : spec.presets) {
            if (p.values.size() > 1) targets.push_back(SlotRef{id, p.name});
        }
    }
    const auto region = focus_region(genome);
    const SlotRef* t = pick_biased(targets, [&](const SlotRef& r) { return in_focus_region(region, r); }, region_bias, rng);
    if (!t) {
        result.detail = "inapplicable";
        return result;
    }
    NodeInstance& node = result.genome.at(t->node);
    const auto& domain = catalog().lookup(node.kind).preset(t->slot)->values;
    std::vector<std::string> others;
    for (const auto& v : domain) {
        if (v != node.presets.at(t->slot)) others.push_back(v);
    }
    node.presets.at(t->slot) = others[rng.index(others.size())];
    result.applied = true;
    result.touched.push_back(*t);
    result.detail = "preset " + t->node.str() + "." + t->slot + "=" + node.presets.at(t->slot);
    return result;
}

OpResult swap_noise_map(const Genome& genome, Rng& rng, double region_bias) {
    OpResult result{genome};
    const auto groups = noise_groups(genome);
    const auto region = focus_region(genome);
    const NoiseGroup* group = pick_biased(
        groups,
        [&](const NoiseGroup& grp) {
            return std::any_of(grp.members.begin(), grp.members.end(), [&](NodeId n) { return region.count(n) != 0; });
        },
        region_bias, rng);
    if (!group) {
        result.detail = "inapplicable";
        return result;
    }
    std::vector<NoiseKind> others;
    for (auto k : kAllNoiseKinds) {
        if (k != group->kind) others.push_back(k);
    }
    const NoiseKind target = others[rng.index(others.size())];
    const bool old_voronoi = group->kind == NoiseKind::Voronoi;
    const bool new_voronoi = target == NoiseKind::Voronoi;

    Genome& g = result.genome;
    const std::set<NodeId> members(group->members.begin(), group->members.end());
    std::map<SlotRef, SlotRef> rewired;
    for (const auto& [to, from] : g.inputs) {
        SlotRef new_to = to;
        SlotRef new_from = from;
        if (members.count(to.node)) {
            new_to.slot = mapped_input(to.slot, old_voronoi, new_voronoi);
            if (new_to.slot.empty()) continue;
        }
        if (members.count(from.node) && old_voronoi && !new_voronoi) new_from.slot = "Out";
        rewired[new_to] = new_from;
    }
    g.inputs = std::move(rewired);
    for (NodeId id : group->members) {
        g.at(id) = rewrite_noise(genome.at(id), target);
        result.touched.push_back(SlotRef{id, {}});
    }
    g = normalize(g);
    if (!validates(g)) {
        result.genome = genome;
        result.touched.clear();
        result.detail = "inapplicable";
        return result;
    }
    result.applied = true;
    result.detail = "swap " + std::to_string(group->members.size()) + " " + std::string(to_string(group->kind)) + " -> " +
                    std::string(to_string(target));
    return result;
}

OpResult expand_subtree(const Genome& genome, MutationStrength strength, Rng& rng, std::optional<double> region_bias) {
    OpResult result{genome};
    const double bias = region_bias.value_or(default_operator_weights()[static_cast<int>(strength)].region_bias);
    auto points = attach_points(genome, false);
    if (points.empty()) points = attach_points(genome, true);
    const auto region = focus_region(genome);
    for (int attempt = 0; attempt < kMaxAttempts && !points.empty(); ++attempt) {
        const AttachPoint* p =
            pick_biased(points, [&](const AttachPoint& a) { return in_focus_region(region, a.slot); }, bias, rng);
        Genome g = genome;
        SubtreeBuilder builder(g, rng);
        auto root = builder.build(p->req, 1);
        if (!root) continue;
        g.inputs.erase(p->slot);
        g.link(*root, p->slot);
        g = normalize(g);
        if (!validates(g)) continue;
        result.genome = std::move(g);
        result.applied = true;
        result.touched.push_back(p->slot);
        result.detail = "expand " + p->slot.node.str() + "." + p->slot.slot + " <- " +
                        result.genome.at(root->node).kind;
        return result;
    }
    result.detail = "inapplicable";
    return result;
}

MutationResult mutate(const Genome& genome, const MutationConfig& config, Rng& rng) {
    MutationResult result{genome, {}};
    const auto& weights = config.active_weights();
    for (int step = 0; step < config.mutation_count; ++step) {
        std::array<double, 4> w{};
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = weights.weight(kAllMutationOps[i]);
        if (!config.expansion_enabled) w[3] = 0.0;
        while (true) {
            const std::size_t pick = rng.weighted(w);
            if (pick == w.size()) break;
            const MutationOp op = kAllMutationOps[pick];
            if (op == MutationOp::ExpandSubtree && !rng.bernoulli(config.expansion_probability)) {
                w[pick] = 0.0;
                continue;
            }
            OpResult r;
            switch (op) {
                case MutationOp::ParamJitter:
                    r = param_jitter(result.genome, config.strength, rng, weights.region_bias);
                    break;
                case MutationOp::PresetSwap: r = preset_swap(result.genome, rng, weights.region_bias); break;
                case MutationOp::SwapNoiseMap: r = swap_noise_map(result.genome, rng, weights.region_bias); break;
                case MutationOp::ExpandSubtree:
                    r = expand_subtree(result.genome, config.strength, rng, weights.region_bias);
                    break;
            }
            result.changes.push_back(ChangeRecord{op, r.applied, r.touched, r.detail});
            if (r.applied) {
                result.genome = std::move(r.genome);
                break;
            }
            w[pick] = 0.0;
        }
    }
    return result;
}

Genome randomize_defaults(const Genome& genome, Rng& rng) {
    Genome g = genome;
    for (auto& [id, node] : g.nodes) randomize_node(node, rng);
    return g;
}

Genome random_genome(double lit_probability, const MutationConfig& config, Rng& rng) {
    const bool lit = rng.bernoulli(lit_probability);
    Genome g = randomize_defaults(Genome::minimal(lit), rng);
    MutationConfig step = config;
    step.strength = MutationStrength::Medium;
    step.mutation_count = 1;
    const double bias = step.active_weights().region_bias;
    for (int i = 0; i < config.mutation_count; ++i) {
        if (config.expansion_enabled) {
            auto r = expand_subtree(g, MutationStrength::Medium, rng, bias);
            if (r.applied) {
                g = std::move(r.genome);
                continue;
            }
        }
        g = mutate(g, step, rng).genome;
    }
    return g;
}

std::vector<std::string> shared_master_slots(const Genome& a, const Genome& b) {
    std::vector<std::string> slots;
    for (const auto& slot : catalog().master().inputs) {
        if (slot_active(a, slot) && slot_active(b, slot)) slots.push_back(slot.name);
    }
    return slots;
}

namespace {

struct Section {
    SubgraphView view;
    std::optional<SlotRef> root;
    RangedValue slot_default;
};

Section section_of(const Genome& g, const std::string& slot) {
    Section s{subtree_for_slot(g, slot), g.source_of(SlotRef{kMasterId, slot}), g.master().slot_defaults.at(slot)};
    return s;
}

// Structural equality of two sections up to node renumbering.
bool same_section(const Genome& ga, const Section& a, const Genome& gb, const Section& b) {
    if (a.slot_default != b.slot_default) return false;
    if (a.root.has_value() != b.root.has_value()) return false;
    if (!a.root) return true;
    if (a.view.nodes.size() != b.view.nodes.size()) return false;
    std::map<NodeId, NodeId> mapping;
    std::function<bool(const SlotRef&, const SlotRef&)> match = [&](const SlotRef& x, const SlotRef& y) {
        if (x.slot != y.slot) return false;
        if (auto it = mapping.find(x.node); it != mapping.end()) return it->second == y.node;
        const auto& nx = ga.at(x.node);
        const auto& ny = gb.at(y.node);
        if (nx.kind != ny.kind || nx.numbers != ny.numbers || nx.presets != ny.presets ||
            nx.slot_defaults != ny.slot_defaults) {
            return false;
        }
        mapping[x.node] = y.node;
        for (const auto& slot : catalog().lookup(nx.kind).inputs) {
            auto sx = ga.source_of(SlotRef{x.node, slot.name});
            auto sy = gb.source_of(SlotRef{y.node, slot.name});
            if (sx.has_value() != sy.has_value()) return false;
            if (sx && !match(*sx, *sy)) return false;
        }
        return true;
    };
    return match(*a.root, *b.root);
}

// `base` with the master slot section replaced by a fresh copy of `donor`'s.
Genome transplant(const Genome& base, const Genome& donor, const Section& section, const std::string& slot) {
    Genome g = base;
    const SlotRef master_slot{kMasterId, slot};
    g.inputs.erase(master_slot);
    g.master().slot_defaults.at(slot) = section.slot_default;
    if (section.root) {
        std::map<NodeId, NodeId> fresh;
        for (NodeId id : section.view.nodes) {
            const NodeId nid{g.next_id++};
            fresh[id] = nid;
            NodeInstance copy = donor.at(id);
            copy.id = nid;
            g.nodes.emplace(nid, std::move(copy));
        }
        for (const auto& e : section.view.edges) {
            if (e.to.node == kMasterId) continue;
            g.link(SlotRef{fresh.at(e.from.node), e.from.slot}, SlotRef{fresh.at(e.to.node), e.to.slot});
        }
        g.link(SlotRef{fresh.at(section.root->node), section.root->slot}, master_slot);
    }
    return normalize(g);
}

}  // namespace

CrossoverResult crossover(const Genome& parent_a, const Genome& parent_b, Rng& rng, std::string_view id_a,
                          std::string_view id_b) {
    const auto slots = shared_master_slots(parent_a, parent_b);
    if (slots.empty()) throw Error(ErrorCode::NoCompatibleSlot, "parents share no master slot");

    std::vector<std::string> differing;
    std::map<std::string, std::pair<Section, Section>> sections;
    for (const auto& slot : slots) {
        Section a = section_of(parent_a, slot);
        Section b = section_of(parent_b, slot);
        if (!same_section(parent_a, a, parent_b, b)) differing.push_back(slot);
        sections.emplace(slot, std::make_pair(std::move(a), std::move(b)));
    }

    CrossoverResult result{parent_a, parent_b, {}};
    if (!differing.empty()) {
        const std::string& slot = differing[rng.index(differing.size())];
        const auto& [sec_a, sec_b] = sections.at(slot);
        result.child_a = transplant(parent_a, parent_b, sec_b, slot);
        result.child_b = transplant(parent_b, parent_a, sec_a, slot);
        result.slot = slot;
    }
    if (!id_a.empty() || !id_b.empty()) {
        const std::vector<std::string> lineage{std::string(id_a), std::string(id_b)};
        result.child_a.metadata.lineage = lineage;
        result.child_b.metadata.lineage = lineage;
    }
    return result;
}

}  // namespace shaderevo
