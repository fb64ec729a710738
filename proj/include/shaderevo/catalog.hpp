#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shaderevo/value.hpp"

namespace shaderevo {

enum class Category { Input, Math, Channel, Uv, Noise, Artistic, Master };

std::string_view to_string(Category category);
std::optional<Category> category_from_string(std::string_view name);

enum class SlotDirection { Input, Output };

/// Value an unconnected input slot reads instead of its stored default.
enum class SlotBinding { None, UV, ObjectPosition, WorldNormal, ViewDirection, ObjectNormal, ObjectTangent };

std::string_view to_string(SlotBinding binding);

enum class Stage { Vertex, Fragment };

struct SlotSpec {
    std::string name;
    SlotDirection direction = SlotDirection::Input;
    SemanticType type = SemanticType::Float;
    Value default_value;
    double min = 0.0;
    double max = 1.0;
    SlotBinding binding = SlotBinding::None;
    /// Whether random generation and jitter may rewrite the default.
    bool ephemeral = true;
    // Master-only attributes.
    Stage stage = Stage::Fragment;
    bool unlit_legal = true;
};

struct PresetSpec {
    std::string name;
    std::vector<std::string> values;
    std::string default_value;
};

struct NumericParamSpec {
    std::string name;
    SemanticType type = SemanticType::Float;
    Value default_value;
    double min = 0.0;
    double max = 1.0;
};

struct NodeSpec {
    std::string kind;
    Category category = Category::Math;
    std::vector<SlotSpec> inputs;
    std::vector<SlotSpec> outputs;
    std::vector<PresetSpec> presets;
    std::vector<NumericParamSpec> numbers;
    /// Input nodes only reference uniforms/varyings and never call helpers.
    bool emits_code = true;

    const SlotSpec* input(std::string_view name) const;
    const SlotSpec* output(std::string_view name) const;
    const PresetSpec* preset(std::string_view name) const;
    const NumericParamSpec* number(std::string_view name) const;
    int input_index(std::string_view name) const;
    int output_index(std::string_view name) const;
};

enum class NoiseKind { GradientNoise, SimpleNoise, Voronoi };

inline constexpr NoiseKind kAllNoiseKinds[] = {NoiseKind::GradientNoise, NoiseKind::SimpleNoise, NoiseKind::Voronoi};

std::string_view to_string(NoiseKind kind);
std::optional<NoiseKind> noise_kind_from_string(std::string_view kind);

inline constexpr std::string_view kMasterKind = "MasterNode";

/// Immutable registry of every node kind. Built once; safe for concurrent reads.
class NodeCatalog {
public:
    static const NodeCatalog& instance();

    /// Throws UnknownKind.
    const NodeSpec& lookup(std::string_view kind) const;
    const NodeSpec* find(std::string_view kind) const;
    /// Lexicographic; filtered by category when given.
    std::vector<std::string> list_kinds(std::optional<Category> category = std::nullopt) const;
    std::span<const NodeSpec> all() const { return specs_; }
    const NodeSpec& master() const { return lookup(kMasterKind); }

private:
    NodeCatalog();
    std::vector<NodeSpec> specs_;  // sorted by kind
};

struct ResolvedSignature {
    std::vector<int> input_dims;
    std::vector<int> output_dims;
};

/// Resolves DynamicVector slots for the given per-input source dimensions
/// (one entry per input slot, each in 1..4). Dynamic slots take the widest
/// connected dimension; Float sources broadcast. Throws IncompatibleDimensions.
ResolvedSignature resolve_dynamic(const NodeSpec& spec, std::span<const int> input_dims);

}  // namespace shaderevo
