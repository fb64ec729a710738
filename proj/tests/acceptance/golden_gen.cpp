// Writes the golden genome/bundle snapshot pairs: golden_gen <dir> [count]

#include <cstdio>
#include <filesystem>
#include <string>

#include "oracles.hpp"
#include "shaderevo/codegen.hpp"
#include "shaderevo/json.hpp"
#include "shaderevo/persistence.hpp"

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: golden_gen <dir> [count]\n");
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    const int count = argc > 2 ? std::stoi(argv[2]) : 50;
    using namespace shaderevo;
    int written = 0;
    for (const auto& c : oracle::closed_form_cases()) {
        if (written >= count) break;
        char stem[32];
        std::snprintf(stem, sizeof stem, "g%02d", written++);
        write_file_atomic(dir / (std::string(stem) + ".sgraph.json"), serialize_genome(c.genome));
        write_file_atomic(dir / (std::string(stem) + ".bundle.json"), canonical_dump(bundle_to_json(compile(c.genome))));
    }
    for (int i = 0; written < count; ++i) {
        Rng rng(1000 + static_cast<std::uint64_t>(i));
        const Genome g = oracle::generate_genome(rng, i % 6);
        char stem[32];
        std::snprintf(stem, sizeof stem, "g%02d", written++);
        write_file_atomic(dir / (std::string(stem) + ".sgraph.json"), serialize_genome(g));
        write_file_atomic(dir / (std::string(stem) + ".bundle.json"), canonical_dump(bundle_to_json(compile(g))));
    }
    std::printf("wrote %d snapshot pairs to %s\n", written, dir.string().c_str());
    return 0;
}
