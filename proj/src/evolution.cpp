#include "shaderevo/evolution.hpp"

#include <algorithm>
#include <fstream>

#include "shaderevo/error.hpp"
#include "shaderevo/json.hpp"
#include "shaderevo/persistence.hpp"

namespace shaderevo {

namespace {

constexpr int kSecondTournamentRedraws = 8;

Individual make_individual(Population& pop, Genome genome, std::uint64_t generation, std::uint64_t created_at) {
    genome.metadata.generation = generation;
    genome.metadata.created_at = created_at;
    Individual ind;
    ind.id = pop.allocate_id();
    ind.genome = std::move(genome);
    ind.born_generation = generation;
    return ind;
}

std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);
    idx.resize(k);
    return idx;
}

}  // namespace

std::optional<Score> score_from_int(long long value) {
    if (value < -1 || value > 1) return std::nullopt;
    return static_cast<Score>(value);
}

void EvolutionConfig::check() const {
    if (capacity < 2) throw Error(ErrorCode::InvalidConfig, "capacity must be at least 2");
    if (offspring_count < 2 || offspring_count % 2 != 0) {
        throw Error(ErrorCode::InvalidConfig, "offspring_count must be a positive even number");
    }
    if (offspring_count >= capacity + 1) throw Error(ErrorCode::InvalidConfig, "offspring_count must not exceed capacity");
    if (tournament_size < 2 || tournament_size > capacity) {
        throw Error(ErrorCode::InvalidConfig, "tournament_size must lie in [2, capacity]");
    }
    if (!(lit_probability >= 0.0 && lit_probability <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "lit_probability must lie in [0, 1]");
    }
    mutation.check();
}

const Individual* Population::find(std::string_view id) const {
    auto it = std::find_if(individuals.begin(), individuals.end(), [&](const Individual& i) { return i.id == id; });
    return it == individuals.end() ? nullptr : &*it;
}

const Individual& Population::at(std::string_view id) const {
    if (const auto* ind = find(id)) return *ind;
    throw Error(ErrorCode::UnknownIndividual, "no individual " + std::string(id));
}

Individual& Population::at(std::string_view id) {
    return const_cast<Individual&>(static_cast<const Population&>(*this).at(id));
}

Rng Population::draw_stream() { return Rng(rng.seed, rng.counter++); }

std::string Population::allocate_id() { return std::to_string(next_individual++); }

Population start_run(const EvolutionConfig& config, const std::vector<Genome>& seeds, std::uint64_t seed) {
    config.check();
    if (seeds.size() > static_cast<std::size_t>(config.capacity)) {
        throw Error(ErrorCode::TooManySeeds, std::to_string(seeds.size()) + " seeds exceed capacity " +
                                                 std::to_string(config.capacity));
    }
    for (const auto& s : seeds) {
        const auto report = validate(s);
        if (!report.ok()) {
            throw Error(ErrorCode::UnsupportedGenome, "seed genome does not validate: " + report.violations.front().detail);
        }
    }
    Population pop;
    pop.capacity = config.capacity;
    pop.rng = RngState{seed, 0};
    const std::uint64_t stamp = pop.rng.counter;
    Rng rng = pop.draw_stream();
    for (const auto& s : seeds) {
        Individual ind;
        ind.id = pop.allocate_id();
        ind.genome = s;
        pop.individuals.push_back(std::move(ind));
    }
    for (std::size_t i = 0; pop.individuals.size() < static_cast<std::size_t>(config.capacity); ++i) {
        Genome g = seeds.empty() ? random_genome(config.lit_probability, config.mutation, rng)
                                 : mutate(seeds[i % seeds.size()], config.mutation, rng).genome;
        pop.individuals.push_back(make_individual(pop, std::move(g), 0, stamp));
    }
    return pop;
}

Population set_score(const Population& population, std::string_view id, Score score) {
    Population p = population;
    p.at(id).score = score;
    return p;
}

std::size_t tournament_winner(const Population& population, int tournament_size, Rng& rng) {
    const std::size_t n = population.individuals.size();
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, tournament_size)), n);
    const auto entrants = sample_distinct(n, k, rng);
    int best = -2;
    std::vector<std::size_t> tied;
    for (std::size_t i : entrants) {
        const int s = static_cast<int>(population.individuals[i].score);
        if (s > best) {
            best = s;
            tied.assign(1, i);
        } else if (s == best) {
            tied.push_back(i);
        }
    }
    return tied[rng.index(tied.size())];
}

std::pair<std::string, std::string> select_parents_tournament(const Population& population, int tournament_size,
                                                              Rng& rng) {
    const std::size_t a = tournament_winner(population, tournament_size, rng);
    std::size_t b = tournament_winner(population, tournament_size, rng);
    for (int i = 0; i < kSecondTournamentRedraws && b == a; ++i) b = tournament_winner(population, tournament_size, rng);
    return {population.individuals[a].id, population.individuals[b].id};
}

BreedResult breed(const Population& population, const EvolutionConfig& config, Rng& rng,
                  const std::optional<std::pair<std::string, std::string>>& parents) {
    if (parents) {
        population.at(parents->first);
        population.at(parents->second);
        if (parents->first == parents->second) {
            throw Error(ErrorCode::IdenticalParents, "manual breeding needs two distinct parents");
        }
    }
    BreedResult result{population, {}, {}, {}};
    Population& pop = result.population;
    const std::uint64_t born = pop.generation + 1;
    const std::uint64_t stamp = pop.rng.counter;

    std::vector<Individual> offspring;
    for (int pair = 0; pair < config.offspring_count / 2; ++pair) {
        const auto chosen = parents ? *parents : select_parents_tournament(population, config.tournament_size, rng);
        result.parents.push_back(chosen);
        const auto& a = population.at(chosen.first);
        const auto& b = population.at(chosen.second);
        auto children = crossover(a.genome, b.genome, rng, a.id, b.id);
        for (Genome* child : {&children.child_a, &children.child_b}) {
            Genome g = mutate(*child, config.mutation, rng).genome;
            g.metadata.lineage = {a.id, b.id};
            offspring.push_back(make_individual(pop, std::move(g), born, stamp));
        }
    }

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < pop.individuals.size(); ++i) {
        if (!pop.individuals[i].saved) candidates.push_back(i);
    }
    const auto cull = static_cast<std::size_t>(config.offspring_count);
    if (candidates.size() < cull) {
        for (std::size_t i = 0; i < pop.individuals.size(); ++i) {
            if (pop.individuals[i].saved) candidates.push_back(i);
        }
    }
    std::vector<std::size_t> doomed;
    for (std::size_t pick : sample_distinct(candidates.size(), std::min(cull, candidates.size()), rng)) {
        doomed.push_back(candidates[pick]);
    }
    std::sort(doomed.begin(), doomed.end());
    for (std::size_t i : doomed) result.culled_ids.push_back(pop.individuals[i].id);
    for (auto it = doomed.rbegin(); it != doomed.rend(); ++it) {
        pop.individuals.erase(pop.individuals.begin() + static_cast<long>(*it));
    }
    for (auto& child : offspring) {
        result.new_ids.push_back(child.id);
        pop.individuals.push_back(std::move(child));
    }
    pop.generation = born;
    return result;
}

std::string save_individual(Population& population, std::string_view id, const std::string& output_dir) {
    Individual& ind = population.at(id);
    const auto path = std::filesystem::path(output_dir) / "saved" / (ind.id + ".sgraph.json");
    write_file_atomic(path, serialize_genome(ind.genome));
    ind.saved = true;
    return path.string();
}

const Population& Session::population() const {
    if (!population_) throw Error(ErrorCode::InvalidConfig, "no run is active");
    return *population_;
}

void Session::append(const std::string& line) {
    log_.push_back(line);
    if (log_file_.empty()) return;
    std::filesystem::path p(log_file_);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::app | std::ios::binary);
    out << line << '\n';
    if (!out) throw Error(ErrorCode::StorageFailure, "cannot append to action log " + log_file_);
}

const Population& Session::start(const std::vector<Genome>& seeds, std::uint64_t seed) {
    Population pop = start_run(config_, seeds, seed);
    Json event{{"event", "start"}, {"seed", seed}, {"config", evolution_config_to_json(config_)}};
    Json seed_docs = Json::array();
    for (const auto& g : seeds) seed_docs.push_back(genome_to_json(g));
    event["seeds"] = std::move(seed_docs);
    population_ = std::move(pop);
    log_.clear();
    append(event.dump());
    return *population_;
}

void Session::score(std::string_view id, Score value) {
    *population_ = set_score(population(), id, value);
    append(Json{{"event", "score"}, {"id", id}, {"score", static_cast<int>(value)}}.dump());
}

BreedResult Session::breed(const std::optional<std::pair<std::string, std::string>>& parents) {
    Population pop = population();
    const std::uint64_t stream = pop.rng.counter;
    Rng rng = pop.draw_stream();
    BreedResult result = shaderevo::breed(pop, config_, rng, parents);
    Json event{{"event", "breed"}, {"mode", parents ? "manual" : "auto"}, {"stream", stream},
               {"new", result.new_ids}, {"culled", result.culled_ids}};
    if (parents) event["parents"] = Json::array({parents->first, parents->second});
    population_ = result.population;
    append(event.dump());
    return result;
}

std::string Session::save(std::string_view id) {
    Population pop = population();
    const std::string path = save_individual(pop, id, config_.output_dir);
    population_ = std::move(pop);
    append(Json{{"event", "save"}, {"id", id}}.dump());
    return path;
}

void Session::set_config(const EvolutionConfig& config) {
    config.check();
    if (population_ && config.capacity != population_->capacity) {
        throw Error(ErrorCode::InvalidConfig, "capacity cannot change while a run is active");
    }
    config_ = config;
    append(Json{{"event", "config"}, {"config", evolution_config_to_json(config_)}}.dump());
}

Session Session::replay(const std::vector<std::string>& lines, bool perform_saves) {
    Session s;
    for (const auto& line : lines) {
        if (line.empty()) continue;
        const Json event = Json::parse(line);
        const std::string kind = event.at("event").get<std::string>();
        if (kind == "start") {
            s.config_ = evolution_config_from_json(event.at("config"));
            std::vector<Genome> seeds;
            for (const auto& doc : event.at("seeds")) seeds.push_back(genome_from_json(doc));
            s.start(seeds, event.at("seed").get<std::uint64_t>());
        } else if (kind == "score") {
            s.score(event.at("id").get<std::string>(), *score_from_int(event.at("score").get<int>()));
        } else if (kind == "breed") {
            std::optional<std::pair<std::string, std::string>> parents;
            if (event.at("mode") == "manual") {
                parents = std::make_pair(event.at("parents")[0].get<std::string>(), event.at("parents")[1].get<std::string>());
            }
            s.breed(parents);
        } else if (kind == "save") {
            const auto id = event.at("id").get<std::string>();
            if (perform_saves) {
                s.save(id);
            } else {
                s.population_->at(id).saved = true;
                s.append(line);
            }
        } else if (kind == "config") {
            s.set_config(evolution_config_from_json(event.at("config")));
        } else {
            throw Error(ErrorCode::SchemaError, "unknown action log event " + kind);
        }
    }
    return s;
}

}  // namespace shaderevo
