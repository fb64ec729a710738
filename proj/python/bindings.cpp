#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shaderevo/codegen.hpp"
#include "shaderevo/error.hpp"
#include "shaderevo/evolution.hpp"
#include "shaderevo/genetics.hpp"
#include "shaderevo/json.hpp"
#include "shaderevo/persistence.hpp"

namespace py = pybind11;
using namespace shaderevo;

// Documents cross the boundary as JSON text; the Python package decodes them.
namespace {

std::string dump(const Json& j) { return j.dump(); }

Json population_json(const Population& pop) {
    Json list = Json::array();
    for (const auto& ind : pop.individuals) {
        list.push_back({{"id", ind.id},
                        {"score", static_cast<int>(ind.score)},
                        {"saved", ind.saved},
                        {"born_generation", ind.born_generation},
                        {"genome", genome_to_json(ind.genome)}});
    }
    return {{"capacity", pop.capacity}, {"generation", pop.generation}, {"individuals", list}};
}

MutationStrength strength_arg(const std::string& name) {
    if (auto s = mutation_strength_from_string(name)) return *s;
    throw Error(ErrorCode::InvalidConfig, "unknown mutation strength '" + name + "'");
}

Score score_arg(long long value) {
    if (auto s = score_from_int(value)) return *s;
    throw Error(ErrorCode::SchemaError, "score must be -1, 0 or 1");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    m.def("catalog", [] { return dump(catalog_to_json()); });
    m.def("minimal_genome", [](bool lit) { return serialize_genome(Genome::minimal(lit)); }, py::arg("lit") = true);
    m.def("normalize", [](const std::string& g) { return serialize_genome(normalize(parse_genome(g))); });
    m.def("validate", [](const std::string& g) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& v : validate(parse_genome(g)).violations) {
            out.emplace_back(std::string(to_string(v.kind)), v.subject + ": " + v.detail);
        }
        return out;
    });
    m.def("compile", [](const std::string& g) { return dump(bundle_to_json(compile(parse_genome(g)))); });
    m.def("interpret", [](const std::string& g, const std::string& ctx) {
        return dump(evaluation_to_json(interpret(parse_genome(g), eval_context_from_json(Json::parse(ctx)))));
    });
    m.def("random_genome", [](std::uint64_t seed, double lit_probability) {
        Rng rng(seed);
        return serialize_genome(random_genome(lit_probability, MutationConfig{}, rng));
    }, py::arg("seed"), py::arg("lit_probability") = 0.5);
    m.def("mutate", [](const std::string& g, std::uint64_t seed, const std::string& strength) {
        Rng rng(seed);
        MutationConfig config;
        config.strength = strength_arg(strength);
        return serialize_genome(mutate(parse_genome(g), config, rng).genome);
    }, py::arg("genome"), py::arg("seed"), py::arg("strength") = "medium");
    m.def("crossover", [](const std::string& a, const std::string& b, std::uint64_t seed) {
        Rng rng(seed);
        const auto r = crossover(parse_genome(a), parse_genome(b), rng);
        return std::make_tuple(serialize_genome(r.child_a), serialize_genome(r.child_b), r.slot);
    });

    py::class_<Session>(m, "Session")
        .def(py::init([](const std::string& config) {
                 return Session(config.empty() ? EvolutionConfig{} : evolution_config_from_json(Json::parse(config)));
             }),
             py::arg("config") = "")
        .def("start", [](Session& s, std::uint64_t seed) { s.start({}, seed); })
        .def("score", [](Session& s, const std::string& id, long long v) { s.score(id, score_arg(v)); })
        .def("breed",
             [](Session& s, std::optional<std::pair<std::string, std::string>> parents) {
                 const auto r = s.breed(parents);
                 return std::make_pair(r.new_ids, r.culled_ids);
             },
             py::arg("parents") = std::nullopt)
        .def("save", &Session::save)
        .def("population", [](const Session& s) { return dump(population_json(s.population())); })
        .def("config", [](const Session& s) { return dump(evolution_config_to_json(s.config())); })
        .def("log", &Session::log)
        .def_static("replay", [](const std::vector<std::string>& lines) { return Session::replay(lines); });
}
