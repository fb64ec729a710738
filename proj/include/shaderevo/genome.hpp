#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "shaderevo/catalog.hpp"
#include "shaderevo/value.hpp"

namespace shaderevo {

/// Per-genome node identifier, rendered as a decimal string.
struct NodeId {
    std::uint32_t value = 0;

    std::string str() const { return std::to_string(value); }
    auto operator<=>(const NodeId&) const = default;
};

inline constexpr NodeId kMasterId{0};

struct SlotRef {
    NodeId node;
    std::string slot;

    auto operator<=>(const SlotRef&) const = default;
};

struct Edge {
    SlotRef from;  // output slot
    SlotRef to;    // input slot

    bool operator==(const Edge&) const = default;
};

struct LayoutHint {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const LayoutHint&) const = default;
};

struct NodeInstance {
    NodeId id;
    std::string kind;
    std::map<std::string, RangedValue> numbers;
    std::map<std::string, std::string> presets;
    /// One entry per input slot; kept (but unused) while the slot is connected.
    std::map<std::string, RangedValue> slot_defaults;
    std::optional<LayoutHint> layout;

    bool operator==(const NodeInstance&) const = default;
};

/// Instance of `spec` with catalog defaults.
NodeInstance make_node(const NodeSpec& spec, NodeId id);

struct GenomeMetadata {
    /// Logical timestamp (population event counter).
    std::uint64_t created_at = 0;
    std::uint64_t generation = 0;
    std::vector<std::string> lineage;

    bool operator==(const GenomeMetadata&) const = default;
};

/// A shader graph: a forest of subtrees feeding the master node (id 0).
/// Plain value type; the free functions below return edited copies.
struct Genome {
    bool lit = true;
    std::map<NodeId, NodeInstance> nodes;
    /// Edges keyed by destination input slot (one source per input).
    std::map<SlotRef, SlotRef> inputs;
    GenomeMetadata metadata;
    std::uint32_t next_id = 1;

    /// Master-only genome with catalog defaults.
    static Genome minimal(bool lit = true);

    const NodeInstance& master() const;
    NodeInstance& master();
    const NodeInstance* find(NodeId id) const;
    const NodeInstance& at(NodeId id) const;
    NodeInstance& at(NodeId id);

    std::vector<Edge> edges() const;
    std::optional<SlotRef> source_of(const SlotRef& input) const;
    bool connected(const SlotRef& input) const { return inputs.count(input) != 0; }

    // Raw builders: no validation, callers are expected to validate afterwards.
    NodeId add(std::string_view kind);
    void link(SlotRef from, SlotRef to) { inputs[std::move(to)] = std::move(from); }

    /// Structural equality ignoring metadata.
    bool same_structure(const Genome& other) const;
    bool operator==(const Genome&) const = default;
};

enum class ViolationKind {
    Cycle,
    TypeMismatch,
    UnknownKind,
    UnknownNode,
    UnknownSlot,
    ParamOutOfRange,
    InvalidPreset,
    DefaultMismatch,
    Orphan,
    UnlitSlot,
    MasterCount,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string subject;  // node id or "from->to" edge text
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(ViolationKind kind) const;
};

ValidationReport validate(const Genome& genome);

/// Resolved slot dimensions for every node. Throws CyclicGraph or TypeMismatch.
std::map<NodeId, ResolvedSignature> resolve_types(const Genome& genome);

/// Kahn order, ties broken by ascending id. Throws CyclicGraph.
std::vector<NodeId> topo_order(const Genome& genome);

/// Nodes with a directed path to `id` (excluding itself). Throws UnknownNode.
std::set<NodeId> upstream_set(const Genome& genome, NodeId id);
/// Nodes reachable from `id` (excluding itself). Throws UnknownNode.
std::set<NodeId> downstream_set(const Genome& genome, NodeId id);

struct SubgraphView {
    std::set<NodeId> nodes;
    std::vector<Edge> edges;
};

/// Everything reachable backwards from a master input slot. Throws UnknownSlot.
SubgraphView subtree_for_slot(const Genome& genome, std::string_view master_slot);

/// Drops nodes that do not reach the master, together with their edges.
Genome normalize(const Genome& genome);

// Editing primitives. Each returns a normalized genome that validates, or throws
// (WouldCycle, TypeMismatch, UnknownNode, UnknownSlot, CannotRemoveMaster).
Genome connect(const Genome& genome, const SlotRef& from, const SlotRef& to);
Genome disconnect(const Genome& genome, const SlotRef& to);
/// Adds a `kind` node and wires its `output` slot into `to`.
Genome add_node(const Genome& genome, std::string_view kind, std::string_view output, const SlotRef& to,
                NodeId* new_id = nullptr);
Genome remove_node(const Genome& genome, NodeId id);

}  // namespace shaderevo
