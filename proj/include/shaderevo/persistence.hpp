#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "shaderevo/evolution.hpp"
#include "shaderevo/genome.hpp"

namespace shaderevo {

inline constexpr int kFormatVersion = 1;

/// Canonical genome document text. Throws UnsupportedGenome when the genome does not validate.
std::string serialize_genome(const Genome& genome);
/// Throws ParseError (with line/column), SchemaError, VersionError.
Genome parse_genome(std::string_view text);

/// FNV-1a 64-bit hash, used for manifest integrity checks.
std::uint64_t fnv1a64(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file and an atomic rename. Throws StorageFailure.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

struct StoredPopulation {
    Population population;
    EvolutionConfig config;
};

/// One `<id>.sgraph.json` per individual plus `population.json`, written last.
void write_population(const std::filesystem::path& dir, const Population& population, const EvolutionConfig& config);
/// Throws StorageFailure, ManifestMismatch, ParseError, SchemaError, VersionError.
StoredPopulation load_population(const std::filesystem::path& dir);

}  // namespace shaderevo
