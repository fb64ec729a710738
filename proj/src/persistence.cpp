#include "shaderevo/persistence.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "shaderevo/error.hpp"
#include "shaderevo/json.hpp"

namespace fs = std::filesystem;

namespace shaderevo {

namespace {

constexpr const char* kManifestName = "population.json";
constexpr const char* kGenomeSuffix = ".sgraph.json";

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Json parse_text(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                               ": malformed JSON");
    }
}

[[noreturn]] void mismatch(const std::string& message) { throw Error(ErrorCode::ManifestMismatch, message); }

}  // namespace

std::string serialize_genome(const Genome& genome) {
    const auto report = validate(genome);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw Error(ErrorCode::UnsupportedGenome, "cannot serialize an invalid genome: " + v.subject + " " + v.detail);
    }
    return canonical_dump(genome_to_json(genome));
}

Genome parse_genome(std::string_view text) { return genome_from_json(parse_text(text)); }

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::StorageFailure, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw Error(ErrorCode::StorageFailure, "cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            throw Error(ErrorCode::StorageFailure, "cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::StorageFailure, "cannot rename into " + path.string());
    }
}

void write_population(const fs::path& dir, const Population& population, const EvolutionConfig& config) {
    Json entries = Json::array();
    std::set<std::string> files;
    for (const auto& ind : population.individuals) {
        const std::string file = ind.id + kGenomeSuffix;
        const std::string text = serialize_genome(ind.genome);
        write_file_atomic(dir / file, text);
        files.insert(file);
        entries.push_back(Json{{"id", ind.id},
                               {"file", file},
                               {"score", static_cast<int>(ind.score)},
                               {"saved", ind.saved},
                               {"born_generation", ind.born_generation},
                               {"hash", hex64(fnv1a64(text))}});
    }
    Json manifest{{"format_version", kFormatVersion},
                  {"capacity", population.capacity},
                  {"generation", population.generation},
                  {"next_individual", population.next_individual},
                  {"rng", Json{{"seed", population.rng.seed}, {"counter", population.rng.counter}}},
                  {"config", evolution_config_to_json(config)},
                  {"individuals", std::move(entries)}};
    write_file_atomic(dir / kManifestName, canonical_dump(manifest));

    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.ends_with(kGenomeSuffix) && !files.count(name)) fs::remove(entry.path(), ec);
    }
}

StoredPopulation load_population(const fs::path& dir) {
    const Json manifest = parse_text(read_file(dir / kManifestName));
    try {
        if (manifest.at("format_version").get<int>() != kFormatVersion) {
            throw Error(ErrorCode::VersionError, "unsupported manifest format_version");
        }
        StoredPopulation stored;
        Population& pop = stored.population;
        pop.capacity = manifest.at("capacity").get<int>();
        pop.generation = manifest.at("generation").get<std::uint64_t>();
        pop.next_individual = manifest.at("next_individual").get<std::uint64_t>();
        pop.rng.seed = manifest.at("rng").at("seed").get<std::uint64_t>();
        pop.rng.counter = manifest.at("rng").at("counter").get<std::uint64_t>();
        stored.config = evolution_config_from_json(manifest.at("config"));
        std::set<std::string> ids;
        for (const auto& e : manifest.at("individuals")) {
            const std::string file = e.at("file").get<std::string>();
            const fs::path path = dir / file;
            if (!fs::exists(path)) mismatch("referenced genome file " + file + " is missing");
            const std::string text = read_file(path);
            if (hex64(fnv1a64(text)) != e.at("hash").get<std::string>()) mismatch("hash of " + file + " does not match");
            Individual ind;
            ind.id = e.at("id").get<std::string>();
            if (!ids.insert(ind.id).second) mismatch("individual " + ind.id + " is listed twice");
            ind.genome = parse_genome(text);
            auto score = score_from_int(e.at("score").get<long long>());
            if (!score) throw Error(ErrorCode::SchemaError, "individual " + ind.id + " has an invalid score");
            ind.score = *score;
            ind.saved = e.at("saved").get<bool>();
            ind.born_generation = e.at("born_generation").get<std::uint64_t>();
            pop.individuals.push_back(std::move(ind));
        }
        return stored;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::SchemaError, std::string("population manifest: ") + e.what());
    }
}

}  // namespace shaderevo
