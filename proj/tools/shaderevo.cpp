#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "shaderevo/codegen.hpp"
#include "shaderevo/error.hpp"
#include "shaderevo/genetics.hpp"
#include "shaderevo/json.hpp"
#include "shaderevo/persistence.hpp"
#include "shaderevo/service.hpp"

using namespace shaderevo;

namespace {

HttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file_atomic(out_path, text);
    }
}

int run_check(const std::string& path) {
    const Genome g = parse_genome(read_file(path));
    const auto report = validate(g);
    Json violations = Json::array();
    for (const auto& v : report.violations) {
        violations.push_back(Json{{"kind", std::string(to_string(v.kind))}, {"subject", v.subject}, {"detail", v.detail}});
    }
    std::cout << canonical_dump(Json{{"ok", report.ok()}, {"violations", violations}});
    return report.ok() ? 0 : 1;
}

EvolutionConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    const Json j = Json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::ParseError, "config file " + path + " is not valid JSON");
    return evolution_config_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interactive shader-graph evolution: compile, evaluate and serve genomes"};
    app.require_subcommand(1);

    std::string genome_path;
    std::string out_path;
    std::string ctx_path;

    auto* compile_cmd = app.add_subcommand("compile", "Compile a genome file to a GLSL ES 3.00 bundle (JSON)");
    compile_cmd->add_option("genome", genome_path, "Genome document")->required();
    compile_cmd->add_option("-o,--output", out_path, "Write the bundle here instead of stdout");

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a genome with the reference interpreter");
    eval_cmd->add_option("genome", genome_path, "Genome document")->required();
    eval_cmd->add_option("--ctx", ctx_path, "Evaluation context JSON (defaults when omitted)");

    auto* check_cmd = app.add_subcommand("check", "Validate a genome file; exit status 1 on violations");
    check_cmd->add_option("genome", genome_path, "Genome document")->required();

    std::uint64_t seed = 1;
    double lit_probability = 0.5;
    auto* random_cmd = app.add_subcommand("random", "Write a random valid genome");
    random_cmd->add_option("--seed", seed, "Random seed");
    random_cmd->add_option("--lit-probability", lit_probability, "Probability of a lit genome");
    random_cmd->add_option("-o,--output", out_path, "Output file (stdout when omitted)");

    std::string log_path;
    std::string replay_dir;
    auto* replay_cmd = app.add_subcommand("replay", "Replay an action log and write the resulting population");
    replay_cmd->add_option("log", log_path, "Action log (JSON lines)")->required();
    replay_cmd->add_option("--out-dir", replay_dir, "Population directory to write")->required();

    int port = 8080;
    std::string host = "127.0.0.1";
    std::string serve_out;
    std::string config_path;
    std::string static_dir = "webui/dist";
    bool headless = false;
    auto* serve_cmd = app.add_subcommand("serve", "Run the REST service");
    serve_cmd->add_option("--port", port, "TCP port (0 picks a free one)");
    serve_cmd->add_option("--host", host, "Bind address");
    serve_cmd->add_option("--out-dir", serve_out, "Output directory (falls back to $SHADEREVO_OUT_DIR)");
    serve_cmd->add_option("--config", config_path, "Evolution config JSON");
    serve_cmd->add_option("--seed", seed, "Run seed");
    serve_cmd->add_option("--static-dir", static_dir, "UI bundle served under /");
    serve_cmd->add_flag("--headless", headless, "Serve the API only");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compile_cmd) {
            emit(canonical_dump(bundle_to_json(compile(parse_genome(read_file(genome_path))))), out_path);
        } else if (*eval_cmd) {
            const Genome g = parse_genome(read_file(genome_path));
            EvalContext ctx;
            if (!ctx_path.empty()) {
                const Json j = Json::parse(read_file(ctx_path), nullptr, false);
                if (j.is_discarded()) throw Error(ErrorCode::ParseError, "context file is not valid JSON");
                ctx = eval_context_from_json(j);
            }
            const Evaluation e = interpret(g, ctx);
            const ShadeResult s = shade(e, ctx);
            Json out = evaluation_to_json(e);
            out["color"] = s.rgba;
            out["discarded"] = s.discarded;
            std::cout << canonical_dump(out);
        } else if (*check_cmd) {
            return run_check(genome_path);
        } else if (*random_cmd) {
            Rng rng(seed);
            emit(serialize_genome(random_genome(lit_probability, MutationConfig{}, rng)), out_path);
        } else if (*replay_cmd) {
            std::vector<std::string> lines;
            std::ifstream in(log_path);
            if (!in) throw Error(ErrorCode::StorageFailure, "cannot read " + log_path);
            for (std::string line; std::getline(in, line);) lines.push_back(line);
            const Session s = Session::replay(lines);
            write_population(replay_dir, s.population(), s.config());
            std::cout << "replayed " << lines.size() << " actions into " << replay_dir << "\n";
        } else if (*serve_cmd) {
            if (serve_out.empty()) {
                if (const char* env = std::getenv("SHADEREVO_OUT_DIR")) serve_out = env;
            }
            ServiceOptions options{load_config(config_path), seed, serve_out};
            Service service(options);
            HttpServer server(service, ServerOptions{host, port, headless ? std::string() : static_dir});
            const int bound = server.bind();
            if (bound < 0) {
                std::cerr << "cannot bind " << host << ":" << port << "\n";
                return 1;
            }
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on http://" << host << ":" << bound << "\n";
            server.listen();
            g_server = nullptr;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
