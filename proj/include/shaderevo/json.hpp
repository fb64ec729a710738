#pragma once

// JSON encodings shared by persistence, the service and the command line tool.

#include <json.hpp>

#include "shaderevo/codegen.hpp"
#include "shaderevo/evolution.hpp"
#include "shaderevo/genetics.hpp"
#include "shaderevo/genome.hpp"

namespace shaderevo {

using Json = nlohmann::json;

Json value_to_json(const Value& v);
/// Accepts a number or an array of 1..4 numbers. Throws SchemaError.
Value value_from_json(const Json& j, std::string_view what);

Json ranged_to_json(const RangedValue& v);
RangedValue ranged_from_json(const Json& j, std::string_view what);

/// Genome document (format_version 1). Parsing checks the schema, kinds and
/// edge endpoints; graph semantics are left to validate().
Json genome_to_json(const Genome& g);
Genome genome_from_json(const Json& j);

Json bundle_to_json(const ShaderBundle& bundle);
Json evaluation_to_json(const Evaluation& eval);
EvalContext eval_context_from_json(const Json& j);
Json eval_context_to_json(const EvalContext& ctx);

Json mutation_config_to_json(const MutationConfig& config);
/// Missing keys keep the values of `base`. Throws InvalidConfig.
MutationConfig mutation_config_from_json(const Json& j, const MutationConfig& base = {});

Json evolution_config_to_json(const EvolutionConfig& config);
EvolutionConfig evolution_config_from_json(const Json& j, const EvolutionConfig& base = {});

Json catalog_to_json();

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Json& j);

}  // namespace shaderevo
