#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shaderevo/genetics.hpp"
#include "shaderevo/genome.hpp"
#include "shaderevo/rng.hpp"

namespace shaderevo {

enum class Score : int { Down = -1, Unscored = 0, Up = 1 };

std::optional<Score> score_from_int(long long value);

struct Individual {
    std::string id;
    Genome genome;
    Score score = Score::Unscored;
    bool saved = false;
    std::uint64_t born_generation = 0;

    bool operator==(const Individual&) const = default;
};

struct EvolutionConfig {
    int capacity = 8;
    int offspring_count = 2;
    int tournament_size = 3;
    double lit_probability = 0.5;
    MutationConfig mutation;
    std::string output_dir = "out";

    /// Throws InvalidConfig.
    void check() const;
    bool operator==(const EvolutionConfig&) const = default;
};

/// Random state of a run: every action draws stream `counter` of `seed`.
struct RngState {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    bool operator==(const RngState&) const = default;
};

struct Population {
    std::vector<Individual> individuals;
    int capacity = 0;
    std::uint64_t generation = 0;
    RngState rng;
    std::uint64_t next_individual = 1;

    const Individual* find(std::string_view id) const;
    /// Throws UnknownIndividual.
    const Individual& at(std::string_view id) const;
    Individual& at(std::string_view id);
    /// Next independent random stream (advances the counter).
    Rng draw_stream();
    std::string allocate_id();

    bool operator==(const Population&) const = default;
};

/// Seeds plus mutated variants (round-robin) up to capacity, or random genomes
/// when there are no seeds. Throws TooManySeeds, InvalidConfig.
Population start_run(const EvolutionConfig& config, const std::vector<Genome>& seeds, std::uint64_t seed);

/// Throws UnknownIndividual.
Population set_score(const Population& population, std::string_view id, Score score);

/// Two tournaments of `tournament_size` distinct individuals; max score wins,
/// ties broken uniformly. The second tournament is redrawn up to 8 times to
/// avoid returning the same individual twice.
std::pair<std::string, std::string> select_parents_tournament(const Population& population, int tournament_size,
                                                              Rng& rng);

/// Index of a single tournament winner.
std::size_t tournament_winner(const Population& population, int tournament_size, Rng& rng);

struct BreedResult {
    Population population;
    std::vector<std::string> new_ids;
    std::vector<std::string> culled_ids;
    std::vector<std::pair<std::string, std::string>> parents;
};

/// One steady-state cycle. Manual mode when `parents` is given.
/// Throws UnknownIndividual, IdenticalParents.
BreedResult breed(const Population& population, const EvolutionConfig& config, Rng& rng,
                  const std::optional<std::pair<std::string, std::string>>& parents = std::nullopt);

/// Marks the individual saved and writes `<output_dir>/saved/<id>.sgraph.json`.
/// Returns the written path. Throws UnknownIndividual, StorageFailure.
std::string save_individual(Population& population, std::string_view id, const std::string& output_dir);

/// Interactive run plus its append-only action log (one JSON object per line).
/// Replaying the log on a fresh session reproduces the same population.
class Session {
public:
    Session() = default;
    explicit Session(EvolutionConfig config) : config_(std::move(config)) {}

    bool active() const { return population_.has_value(); }
    const Population& population() const;
    const EvolutionConfig& config() const { return config_; }
    const std::vector<std::string>& log() const { return log_; }

    /// When set, every log line is also appended to this file.
    void set_log_file(std::string path) { log_file_ = std::move(path); }

    const Population& start(const std::vector<Genome>& seeds, std::uint64_t seed);
    void score(std::string_view id, Score score);
    BreedResult breed(const std::optional<std::pair<std::string, std::string>>& parents = std::nullopt);
    std::string save(std::string_view id);
    void set_config(const EvolutionConfig& config);

    /// Rebuilds a session from log lines. When `perform_saves` is false, save
    /// events only set the flag without touching the disk.
    static Session replay(const std::vector<std::string>& lines, bool perform_saves = false);

private:
    void append(const std::string& line);

    EvolutionConfig config_;
    std::optional<Population> population_;
    std::vector<std::string> log_;
    std::string log_file_;
};

}  // namespace shaderevo
