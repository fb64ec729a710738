#include <algorithm>
#include <deque>
#include <functional>
#include <queue>

#include "shaderevo/error.hpp"
#include "shaderevo/genome.hpp"

namespace shaderevo {

namespace {

std::string edge_text(const SlotRef& from, const SlotRef& to) {
    return from.node.str() + "." + from.slot + "->" + to.node.str() + "." + to.slot;
}

// Successor lists over edges whose endpoints both exist.
std::map<NodeId, std::vector<NodeId>> successors(const Genome& g) {
    std::map<NodeId, std::vector<NodeId>> succ;
    for (const auto& [to, from] : g.inputs) {
        if (g.nodes.count(from.node) && g.nodes.count(to.node)) succ[from.node].push_back(to.node);
    }
    return succ;
}

std::map<NodeId, std::vector<NodeId>> predecessors(const Genome& g) {
    std::map<NodeId, std::vector<NodeId>> pred;
    for (const auto& [to, from] : g.inputs) {
        if (g.nodes.count(from.node) && g.nodes.count(to.node)) pred[to.node].push_back(from.node);
    }
    return pred;
}

// Kahn's algorithm; returns the (possibly partial) order. Partial means a cycle.
std::vector<NodeId> kahn(const Genome& g) {
    std::map<NodeId, int> indegree;
    for (const auto& [id, node] : g.nodes) indegree[id] = 0;
    const auto succ = successors(g);
    for (const auto& [from, tos] : succ) {
        for (NodeId to : tos) ++indegree[to];
    }
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (const auto& [id, d] : indegree) {
        if (d == 0) ready.push(id);
    }
    std::vector<NodeId> order;
    order.reserve(g.nodes.size());
    while (!ready.empty()) {
        NodeId id = ready.top();
        ready.pop();
        order.push_back(id);
        if (auto it = succ.find(id); it != succ.end()) {
            for (NodeId to : it->second) {
                if (--indegree[to] == 0) ready.push(to);
            }
        }
    }
    return order;
}

std::set<NodeId> closure(const std::map<NodeId, std::vector<NodeId>>& adjacency, NodeId start) {
    std::set<NodeId> seen;
    std::deque<NodeId> frontier{start};
    while (!frontier.empty()) {
        NodeId id = frontier.front();
        frontier.pop_front();
        auto it = adjacency.find(id);
        if (it == adjacency.end()) continue;
        for (NodeId next : it->second) {
            if (next != start && seen.insert(next).second) frontier.push_back(next);
        }
    }
    return seen;
}

int source_dim(const Genome& g, const std::map<NodeId, ResolvedSignature>& types, const NodeInstance& node,
               const SlotSpec& slot) {
    if (auto src = g.source_of(SlotRef{node.id, slot.name})) {
        const auto& src_node = g.at(src->node);
        const auto& src_spec = NodeCatalog::instance().lookup(src_node.kind);
        const int idx = src_spec.output_index(src->slot);
        if (auto it = types.find(src->node); it != types.end() && idx >= 0) return it->second.output_dims[idx];
        return 1;
    }
    if (auto it = node.slot_defaults.find(slot.name); it != node.slot_defaults.end()) {
        const int d = it->second.value.dim;
        if (d >= 1 && d <= 4) return d;
    }
    return slot.type == SemanticType::DynamicVector ? 1 : dimension(slot.type);
}

// Resolves types along `order`; reports failures through `on_error` and falls
// back to declared (or scalar) dimensions so later nodes can still be checked.
void resolve_along(const Genome& g, const std::vector<NodeId>& order, std::map<NodeId, ResolvedSignature>& types,
                   const std::function<void(const NodeInstance&, const std::string&)>& on_error) {
    const auto& catalog = NodeCatalog::instance();
    for (NodeId id : order) {
        const auto& node = g.at(id);
        const NodeSpec* spec = catalog.find(node.kind);
        if (!spec) continue;
        std::vector<int> dims;
        dims.reserve(spec->inputs.size());
        for (const auto& slot : spec->inputs) dims.push_back(source_dim(g, types, node, slot));
        try {
            types[id] = resolve_dynamic(*spec, dims);
        } catch (const Error& e) {
            on_error(node, e.what());
            ResolvedSignature fallback;
            for (const auto& s : spec->inputs) fallback.input_dims.push_back(std::max(1, dimension(s.type)));
            for (const auto& s : spec->outputs) fallback.output_dims.push_back(std::max(1, dimension(s.type)));
            types[id] = std::move(fallback);
        }
    }
}

void check_node_data(const NodeInstance& node, const NodeSpec& spec, std::vector<Violation>& out) {
    const std::string subject = node.id.str();
    for (const auto& p : spec.numbers) {
        auto it = node.numbers.find(p.name);
        if (it == node.numbers.end()) {
            out.push_back({ViolationKind::ParamOutOfRange, subject, "missing parameter " + p.name});
        } else if (it->second.value.dim != dimension(p.type)) {
            out.push_back({ViolationKind::DefaultMismatch, subject, "parameter " + p.name + " has wrong dimension"});
        } else if (!it->second.in_range()) {
            out.push_back({ViolationKind::ParamOutOfRange, subject, "parameter " + p.name + " outside its range"});
        }
    }
    for (const auto& [name, value] : node.numbers) {
        if (!spec.number(name)) out.push_back({ViolationKind::UnknownSlot, subject, "unknown parameter " + name});
    }
    for (const auto& p : spec.presets) {
        auto it = node.presets.find(p.name);
        if (it == node.presets.end() || std::find(p.values.begin(), p.values.end(), it->second) == p.values.end()) {
            out.push_back({ViolationKind::InvalidPreset, subject, "preset " + p.name + " not in its domain"});
        }
    }
    for (const auto& [name, value] : node.presets) {
        if (!spec.preset(name)) out.push_back({ViolationKind::UnknownSlot, subject, "unknown preset " + name});
    }
    for (const auto& slot : spec.inputs) {
        auto it = node.slot_defaults.find(slot.name);
        if (it == node.slot_defaults.end()) {
            out.push_back({ViolationKind::DefaultMismatch, subject, "missing default for slot " + slot.name});
            continue;
        }
        const int want = slot.type == SemanticType::DynamicVector ? 1 : dimension(slot.type);
        if (it->second.value.dim != want) {
            out.push_back({ViolationKind::DefaultMismatch, subject, "default for " + slot.name + " has wrong dimension"});
        } else if (!it->second.in_range()) {
            out.push_back({ViolationKind::ParamOutOfRange, subject, "default for " + slot.name + " outside its range"});
        }
    }
    for (const auto& [name, value] : node.slot_defaults) {
        if (!spec.input(name)) out.push_back({ViolationKind::UnknownSlot, subject, "default for unknown slot " + name});
    }
}

Genome finish_edit(Genome g) {
    g = normalize(g);
    auto report = validate(g);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw Error(ErrorCode::TypeMismatch, v.subject + ": " + v.detail);
    }
    return g;
}

}  // namespace

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Cycle: return "cycle";
        case ViolationKind::TypeMismatch: return "type";
        case ViolationKind::UnknownKind: return "unknown_kind";
        case ViolationKind::UnknownNode: return "unknown_node";
        case ViolationKind::UnknownSlot: return "unknown_slot";
        case ViolationKind::ParamOutOfRange: return "param_range";
        case ViolationKind::InvalidPreset: return "preset";
        case ViolationKind::DefaultMismatch: return "default";
        case ViolationKind::Orphan: return "orphan";
        case ViolationKind::UnlitSlot: return "unlit_slot";
        case ViolationKind::MasterCount: return "master";
    }
    return "?";
}

NodeInstance make_node(const NodeSpec& spec, NodeId id) {
    NodeInstance n;
    n.id = id;
    n.kind = spec.kind;
    for (const auto& p : spec.numbers) n.numbers[p.name] = RangedValue{p.default_value, p.min, p.max};
    for (const auto& p : spec.presets) n.presets[p.name] = p.default_value;
    for (const auto& s : spec.inputs) n.slot_defaults[s.name] = RangedValue{s.default_value, s.min, s.max};
    return n;
}

Genome Genome::minimal(bool lit) {
    Genome g;
    g.lit = lit;
    g.nodes.emplace(kMasterId, make_node(NodeCatalog::instance().master(), kMasterId));
    return g;
}

const NodeInstance& Genome::master() const { return at(kMasterId); }
NodeInstance& Genome::master() { return at(kMasterId); }

const NodeInstance* Genome::find(NodeId id) const {
    auto it = nodes.find(id);
    return it == nodes.end() ? nullptr : &it->second;
}

const NodeInstance& Genome::at(NodeId id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw Error(ErrorCode::UnknownNode, "no node " + id.str());
    return it->second;
}

NodeInstance& Genome::at(NodeId id) {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw Error(ErrorCode::UnknownNode, "no node " + id.str());
    return it->second;
}

std::vector<Edge> Genome::edges() const {
    std::vector<Edge> out;
    out.reserve(inputs.size());
    for (const auto& [to, from] : inputs) out.push_back(Edge{from, to});
    return out;
}

std::optional<SlotRef> Genome::source_of(const SlotRef& input) const {
    auto it = inputs.find(input);
    if (it == inputs.end()) return std::nullopt;
    return it->second;
}

NodeId Genome::add(std::string_view kind) {
    NodeId id{next_id++};
    nodes.emplace(id, make_node(NodeCatalog::instance().lookup(kind), id));
    return id;
}

bool Genome::same_structure(const Genome& other) const {
    return lit == other.lit && nodes == other.nodes && inputs == other.inputs;
}

bool ValidationReport::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate(const Genome& g) {
    ValidationReport report;
    auto& out = report.violations;
    const auto& catalog = NodeCatalog::instance();

    int masters = 0;
    for (const auto& [id, node] : g.nodes) {
        if (node.kind == kMasterKind) ++masters;
    }
    const NodeInstance* master = g.find(kMasterId);
    if (masters != 1 || !master || master->kind != kMasterKind) {
        out.push_back({ViolationKind::MasterCount, kMasterId.str(), "expected exactly one master node with id 0"});
    }

    bool structure_ok = true;
    for (const auto& [id, node] : g.nodes) {
        if (node.id != id) {
            out.push_back({ViolationKind::UnknownNode, id.str(), "node id does not match its key"});
            structure_ok = false;
        }
        if (id.value >= g.next_id && id != kMasterId) {
            out.push_back({ViolationKind::UnknownNode, id.str(), "node id not below next_id"});
        }
        const NodeSpec* spec = catalog.find(node.kind);
        if (!spec) {
            out.push_back({ViolationKind::UnknownKind, id.str(), "unknown kind " + node.kind});
            structure_ok = false;
            continue;
        }
        check_node_data(node, *spec, out);
    }

    for (const auto& [to, from] : g.inputs) {
        const std::string subject = edge_text(from, to);
        const NodeInstance* src = g.find(from.node);
        const NodeInstance* dst = g.find(to.node);
        if (!src || !dst) {
            out.push_back({ViolationKind::UnknownNode, subject, "edge endpoint does not exist"});
            structure_ok = false;
            continue;
        }
        const NodeSpec* src_spec = catalog.find(src->kind);
        const NodeSpec* dst_spec = catalog.find(dst->kind);
        if (!src_spec || !dst_spec) continue;
        if (!src_spec->output(from.slot) || !dst_spec->input(to.slot)) {
            out.push_back({ViolationKind::UnknownSlot, subject, "edge references a missing slot"});
            structure_ok = false;
            continue;
        }
        if (!g.lit && to.node == kMasterId && !dst_spec->input(to.slot)->unlit_legal) {
            out.push_back({ViolationKind::UnlitSlot, subject, "slot " + to.slot + " is not available on unlit genomes"});
        }
    }
    if (!structure_ok) return report;

    const auto order = kahn(g);
    if (order.size() != g.nodes.size()) {
        std::set<NodeId> placed(order.begin(), order.end());
        for (const auto& [id, node] : g.nodes) {
            if (!placed.count(id)) out.push_back({ViolationKind::Cycle, id.str(), "node lies on a cycle"});
        }
        return report;
    }

    std::map<NodeId, ResolvedSignature> types;
    resolve_along(g, order, types, [&](const NodeInstance& node, const std::string& what) {
        out.push_back({ViolationKind::TypeMismatch, node.id.str(), what});
    });

    if (master) {
        const auto reaching = upstream_set(g, kMasterId);
        for (const auto& [id, node] : g.nodes) {
            if (id != kMasterId && !reaching.count(id)) {
                out.push_back({ViolationKind::Orphan, id.str(), "node does not reach the master"});
            }
        }
    }
    return report;
}

std::map<NodeId, ResolvedSignature> resolve_types(const Genome& g) {
    const auto order = topo_order(g);
    std::map<NodeId, ResolvedSignature> types;
    resolve_along(g, order, types, [](const NodeInstance& node, const std::string& what) {
        throw Error(ErrorCode::TypeMismatch, "node " + node.id.str() + ": " + what);
    });
    return types;
}

std::vector<NodeId> topo_order(const Genome& g) {
    auto order = kahn(g);
    if (order.size() != g.nodes.size()) throw Error(ErrorCode::CyclicGraph, "genome contains a cycle");
    return order;
}

std::set<NodeId> upstream_set(const Genome& g, NodeId id) {
    if (!g.find(id)) throw Error(ErrorCode::UnknownNode, "no node " + id.str());
    return closure(predecessors(g), id);
}

std::set<NodeId> downstream_set(const Genome& g, NodeId id) {
    if (!g.find(id)) throw Error(ErrorCode::UnknownNode, "no node " + id.str());
    return closure(successors(g), id);
}

SubgraphView subtree_for_slot(const Genome& g, std::string_view master_slot) {
    if (!NodeCatalog::instance().master().input(master_slot)) {
        throw Error(ErrorCode::UnknownSlot, "master has no slot " + std::string(master_slot));
    }
    SubgraphView view;
    auto root = g.source_of(SlotRef{kMasterId, std::string(master_slot)});
    if (!root) return view;
    view.nodes = upstream_set(g, root->node);
    view.nodes.insert(root->node);
    for (const auto& [to, from] : g.inputs) {
        if (view.nodes.count(to.node) && view.nodes.count(from.node)) view.edges.push_back(Edge{from, to});
    }
    view.edges.push_back(Edge{*root, SlotRef{kMasterId, std::string(master_slot)}});
    return view;
}

Genome normalize(const Genome& genome) {
    if (!genome.find(kMasterId)) return genome;
    Genome g = genome;
    auto keep = upstream_set(g, kMasterId);
    keep.insert(kMasterId);
    for (auto it = g.nodes.begin(); it != g.nodes.end();) {
        it = keep.count(it->first) ? std::next(it) : g.nodes.erase(it);
    }
    for (auto it = g.inputs.begin(); it != g.inputs.end();) {
        const bool live = keep.count(it->first.node) && keep.count(it->second.node);
        it = live ? std::next(it) : g.inputs.erase(it);
    }
    return g;
}

Genome connect(const Genome& genome, const SlotRef& from, const SlotRef& to) {
    const auto& catalog = NodeCatalog::instance();
    const auto& src = genome.at(from.node);
    const auto& dst = genome.at(to.node);
    if (!catalog.lookup(src.kind).output(from.slot)) {
        throw Error(ErrorCode::UnknownSlot, "node " + from.node.str() + " has no output " + from.slot);
    }
    const SlotSpec* dst_slot = catalog.lookup(dst.kind).input(to.slot);
    if (!dst_slot) throw Error(ErrorCode::UnknownSlot, "node " + to.node.str() + " has no input " + to.slot);
    if (from.node == to.node || upstream_set(genome, from.node).count(to.node)) {
        throw Error(ErrorCode::WouldCycle, edge_text(from, to));
    }
    if (!genome.lit && to.node == kMasterId && !dst_slot->unlit_legal) {
        throw Error(ErrorCode::TypeMismatch, "slot " + to.slot + " is not available on unlit genomes");
    }
    Genome g = genome;
    g.link(from, to);
    return finish_edit(std::move(g));
}

Genome disconnect(const Genome& genome, const SlotRef& to) {
    const auto& dst = genome.at(to.node);
    if (!NodeCatalog::instance().lookup(dst.kind).input(to.slot)) {
        throw Error(ErrorCode::UnknownSlot, "node " + to.node.str() + " has no input " + to.slot);
    }
    Genome g = genome;
    g.inputs.erase(to);
    return finish_edit(std::move(g));
}

Genome add_node(const Genome& genome, std::string_view kind, std::string_view output, const SlotRef& to,
                NodeId* new_id) {
    const auto& spec = NodeCatalog::instance().lookup(kind);
    if (!spec.output(output)) throw Error(ErrorCode::UnknownSlot, std::string(kind) + " has no output " + std::string(output));
    Genome g = genome;
    const NodeId id = g.add(kind);
    if (new_id) *new_id = id;
    const SlotSpec* dst_slot = NodeCatalog::instance().lookup(g.at(to.node).kind).input(to.slot);
    if (!dst_slot) throw Error(ErrorCode::UnknownSlot, "node " + to.node.str() + " has no input " + to.slot);
    if (!g.lit && to.node == kMasterId && !dst_slot->unlit_legal) {
        throw Error(ErrorCode::TypeMismatch, "slot " + to.slot + " is not available on unlit genomes");
    }
    g.link(SlotRef{id, std::string(output)}, to);
    return finish_edit(std::move(g));
}

Genome remove_node(const Genome& genome, NodeId id) {
    if (id == kMasterId) throw Error(ErrorCode::CannotRemoveMaster, "the master node cannot be removed");
    genome.at(id);
    Genome g = genome;
    g.nodes.erase(id);
    for (auto it = g.inputs.begin(); it != g.inputs.end();) {
        const bool incident = it->first.node == id || it->second.node == id;
        it = incident ? g.inputs.erase(it) : std::next(it);
    }
    return finish_edit(std::move(g));
}

}  // namespace shaderevo
