#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shaderevo/genome.hpp"
#include "shaderevo/rng.hpp"

namespace shaderevo {

enum class MutationStrength { Low, Medium, High };

std::string_view to_string(MutationStrength strength);
/// Accepts "low", "medium", "high".
std::optional<MutationStrength> mutation_strength_from_string(std::string_view name);

enum class MutationOp { ParamJitter, PresetSwap, SwapNoiseMap, ExpandSubtree };

inline constexpr MutationOp kAllMutationOps[] = {MutationOp::ParamJitter, MutationOp::PresetSwap,
                                                 MutationOp::SwapNoiseMap, MutationOp::ExpandSubtree};

std::string_view to_string(MutationOp op);
std::optional<MutationOp> mutation_op_from_string(std::string_view name);

/// Operator weights for one strength level plus the probability that a
/// targeting operator restricts itself to the BaseColor/NormalTS region.
struct OperatorWeights {
    double param_jitter = 0.0;
    double preset_swap = 0.0;
    double swap_noise_map = 0.0;
    double expand_subtree = 0.0;
    double region_bias = 0.0;

    double weight(MutationOp op) const;
    bool operator==(const OperatorWeights&) const = default;
};

/// Built-in table indexed by MutationStrength.
std::array<OperatorWeights, 3> default_operator_weights();

struct MutationConfig {
    MutationStrength strength = MutationStrength::Medium;
    int mutation_count = 3;
    bool expansion_enabled = true;
    double expansion_probability = 1.0;
    std::array<OperatorWeights, 3> weights = default_operator_weights();

    const OperatorWeights& active_weights() const { return weights[static_cast<int>(strength)]; }
    /// Throws InvalidConfig.
    void check() const;
    bool operator==(const MutationConfig&) const = default;
};

/// Jitter standard deviation as a fraction of the parameter range.
double jitter_sigma(MutationStrength strength);

/// Outcome of a single operator application.
struct OpResult {
    Genome genome;
    bool applied = false;
    /// Targets that were modified: (node, param or slot name); the slot is
    /// empty when a whole node was rewritten.
    std::vector<SlotRef> touched;
    std::string detail;
};

struct ChangeRecord {
    MutationOp op;
    bool applied = false;
    std::vector<SlotRef> touched;
    std::string detail;  // "inapplicable" when nothing could be changed
};

struct MutationResult {
    Genome genome;
    std::vector<ChangeRecord> changes;

    bool any_applied() const;
};

/// Nodes upstream of the master BaseColor and NormalTS slots.
std::set<NodeId> focus_region(const Genome& genome);
/// Whether a touched target lies in the focus region (master BaseColor/NormalTS count).
bool in_focus_region(const std::set<NodeId>& region, const SlotRef& target);

struct NoiseGroup {
    std::vector<NodeId> members;
    NoiseKind kind;
};

/// Partition of the noise nodes: same kind and overlapping inclusive forward
/// closures (master excluded), closed transitively.
std::vector<NoiseGroup> noise_groups(const Genome& genome);

/// Gaussian perturbation of one numeric parameter or unconnected default.
OpResult param_jitter(const Genome& genome, MutationStrength strength, Rng& rng,
                      std::optional<double> region_bias = std::nullopt);
OpResult preset_swap(const Genome& genome, Rng& rng, double region_bias = 0.0);
/// Rewrites one noise group to a single different noise kind.
OpResult swap_noise_map(const Genome& genome, Rng& rng, double region_bias = 0.0);
/// Attaches a random typed subtree (depth <= 3) to an attachment point.
OpResult expand_subtree(const Genome& genome, MutationStrength strength, Rng& rng,
                        std::optional<double> region_bias = std::nullopt);

inline constexpr int kMaxSubtreeDepth = 3;
inline constexpr int kMaxAttempts = 16;

MutationResult mutate(const Genome& genome, const MutationConfig& config, Rng& rng);

Genome random_genome(double lit_probability, const MutationConfig& config, Rng& rng);

/// Redraws every ephemeral, unbound default and numeric parameter uniformly in range.
Genome randomize_defaults(const Genome& genome, Rng& rng);

struct CrossoverResult {
    Genome child_a;
    Genome child_b;
    std::string slot;  // master slot exchanged; empty when the parents were interchangeable
};

/// Exchanges one master-slot section between the parents. Lineage of both
/// children is {id_a, id_b} when ids are given. Throws NoCompatibleSlot.
CrossoverResult crossover(const Genome& parent_a, const Genome& parent_b, Rng& rng, std::string_view id_a = {},
                          std::string_view id_b = {});

/// Master slots legal for both genomes.
std::vector<std::string> shared_master_slots(const Genome& a, const Genome& b);

}  // namespace shaderevo
