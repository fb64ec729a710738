#include "shaderevo/service.hpp"

#include <httplib.h>

#include <charconv>
#include <filesystem>

#include "shaderevo/codegen.hpp"
#include "shaderevo/error.hpp"
#include "shaderevo/json.hpp"
#include "shaderevo/persistence.hpp"

namespace shaderevo {

namespace {

HttpResponse json_response(int status, const Json& body) { return HttpResponse{status, body.dump(), "application/json"}; }

HttpResponse error_response(int status, std::string_view code, const std::string& message) {
    return json_response(status, Json{{"error", Json{{"code", code}, {"message", message}}}});
}

HttpResponse from_error(const Error& e) {
    int status = 400;
    switch (e.code()) {
        case ErrorCode::UnknownIndividual: status = 404; break;
        case ErrorCode::StorageFailure: status = 500; break;
        default: break;
    }
    return error_response(status, to_string(e.code()), e.what());
}

HttpResponse no_run() { return error_response(409, "NoRun", "no run is active"); }

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        const auto slash = path.find('/', start);
        const auto end = slash == std::string::npos ? path.size() : slash;
        if (end > start) parts.push_back(path.substr(start, end - start));
        if (slash == std::string::npos) break;
        start = slash + 1;
    }
    return parts;
}

Json parse_body(const std::string& body) {
    if (body.empty()) return Json::object();
    Json j = Json::parse(body, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::ParseError, "request body is not valid JSON");
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, "request body must be a JSON object");
    return j;
}

std::optional<long long> query_int(const HttpRequest& request, const char* key) {
    auto it = request.query.find(key);
    if (it == request.query.end()) return std::nullopt;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (ec != std::errc{} || ptr != it->second.data() + it->second.size() || v < 0) {
        throw Error(ErrorCode::SchemaError, std::string("query parameter ") + key + " must be a non-negative integer");
    }
    return v;
}

}  // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)) {
    if (!options_.out_dir.empty()) options_.config.output_dir = options_.out_dir;
    options_.config.check();
    session_ = Session(options_.config);
    publish();
    worker_ = std::thread([this] { worker_loop(); });
}

Service::~Service() {
    {
        std::lock_guard lock(queue_mutex_);
        stopping_ = true;
    }
    queue_cv_.notify_all();
    if (worker_.joinable()) worker_.join();
}

std::string Service::action_log_path() const {
    return (std::filesystem::path(snapshot()->config.output_dir) / "actions.jsonl").string();
}

std::shared_ptr<const Service::Snapshot> Service::snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return snapshot_;
}

void Service::publish() {
    auto snap = std::make_shared<Snapshot>();
    if (session_.active()) snap->population = session_.population();
    snap->config = session_.config();
    snap->log = session_.log();
    std::lock_guard lock(snapshot_mutex_);
    snapshot_ = std::move(snap);
}

void Service::worker_loop() {
    while (true) {
        std::packaged_task<HttpResponse()> task;
        {
            std::unique_lock lock(queue_mutex_);
            queue_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
            if (queue_.empty()) return;
            task = std::move(queue_.front());
            queue_.pop_front();
        }
        task();
    }
}

HttpResponse Service::run_serialized(std::function<HttpResponse()> task) {
    std::packaged_task<HttpResponse()> packaged([this, task = std::move(task)] {
        HttpResponse r;
        try {
            r = task();
        } catch (const Error& e) {
            r = from_error(e);
        } catch (const std::exception& e) {
            r = error_response(500, "Internal", e.what());
        }
        publish();
        return r;
    });
    auto result = packaged.get_future();
    {
        std::lock_guard lock(queue_mutex_);
        queue_.push_back(std::move(packaged));
    }
    queue_cv_.notify_one();
    return result.get();
}

HttpResponse Service::handle(const HttpRequest& request) {
    try {
        return route(request);
    } catch (const Error& e) {
        return from_error(e);
    } catch (const std::exception& e) {
        return error_response(500, "Internal", e.what());
    }
}

HttpResponse Service::route(const HttpRequest& request) {
    const auto parts = split_path(request.path);
    if (parts.size() < 3 || parts[0] != "api" || parts[1] != "v1") {
        return error_response(404, "NotFound", "no route " + request.path);
    }
    const std::string& resource = parts[2];
    const std::string& method = request.method;
    if (parts.size() == 3) {
        if (resource == "run" && method == "POST") return run_serialized([&] { return start_run(request); });
        if (resource == "population" && method == "GET") return population(request);
        if (resource == "breed" && method == "POST") return run_serialized([&] { return breed(request); });
        if (resource == "config" && method == "GET") return json_response(200, evolution_config_to_json(snapshot()->config));
        if (resource == "config" && method == "PUT") return run_serialized([&] { return put_config(request); });
        if (resource == "catalog" && method == "GET") return json_response(200, catalog_to_json());
    }
    if (parts.size() == 5 && resource == "individuals") {
        const std::string& id = parts[3];
        const std::string& action = parts[4];
        if (action == "shader" && method == "GET") return shader(id);
        if (action == "graph" && method == "GET") return graph(id);
        if (action == "score" && method == "POST") return run_serialized([&] { return score(id, request); });
        if (action == "save" && method == "POST") return run_serialized([&] { return save(id); });
    }
    return error_response(404, "NotFound", "no route " + method + " " + request.path);
}

std::string Service::compiled_bundle(const Genome& genome) {
    const std::uint64_t key = fnv1a64(genome_to_json(genome).dump());
    {
        std::lock_guard lock(cache_mutex_);
        if (auto it = bundle_cache_.find(key); it != bundle_cache_.end()) return it->second;
    }
    std::string body = bundle_to_json(compile(genome)).dump();
    std::lock_guard lock(cache_mutex_);
    return bundle_cache_.emplace(key, std::move(body)).first->second;
}

HttpResponse Service::start_run(const HttpRequest& request) {
    const Json body = parse_body(request.body);
    const bool restart = body.value("restart", false);
    if (session_.active() && !restart) return error_response(409, "RunActive", "a run is already active");

    EvolutionConfig config = session_.config();
    if (auto it = body.find("config"); it != body.end()) config = evolution_config_from_json(*it, config);
    if (!options_.out_dir.empty()) config.output_dir = options_.out_dir;

    std::vector<Genome> seeds;
    if (auto it = body.find("seeds"); it != body.end() && !(it->is_string() && *it == "random")) {
        if (!it->is_array()) throw Error(ErrorCode::SchemaError, "seeds must be \"random\" or an array");
        for (const auto& s : *it) {
            if (s.is_string()) seeds.push_back(parse_genome(read_file(s.get<std::string>())));
            else seeds.push_back(genome_from_json(s));
        }
    }
    std::uint64_t seed = options_.seed;
    if (auto it = body.find("seed"); it != body.end()) {
        if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
            throw Error(ErrorCode::SchemaError, "seed must be a non-negative integer");
        }
        seed = it->get<std::uint64_t>();
    }

    Session fresh(config);
    const auto log_path = std::filesystem::path(config.output_dir) / "actions.jsonl";
    write_file_atomic(log_path, "");
    fresh.set_log_file(log_path.string());
    fresh.start(seeds, seed);
    session_ = std::move(fresh);

    const auto& pop = session_.population();
    Json ids = Json::array();
    for (const auto& ind : pop.individuals) ids.push_back(ind.id);
    return json_response(200, Json{{"capacity", pop.capacity}, {"generation", pop.generation}, {"ids", ids},
                                   {"seed", seed}});
}

HttpResponse Service::population(const HttpRequest& request) {
    const auto snap = snapshot();
    if (!snap->population) return no_run();
    const auto& pop = *snap->population;
    const std::size_t total = pop.individuals.size();
    const auto page = static_cast<std::size_t>(query_int(request, "page").value_or(0));
    auto per_page = static_cast<std::size_t>(query_int(request, "per_page").value_or(static_cast<long long>(total)));
    if (per_page == 0) per_page = total == 0 ? 1 : total;
    Json entries = Json::array();
    for (std::size_t i = page * per_page; i < total && i < (page + 1) * per_page; ++i) {
        const auto& ind = pop.individuals[i];
        const Json bundle = Json::parse(compiled_bundle(ind.genome));
        entries.push_back(Json{{"id", ind.id},
                               {"score", static_cast<int>(ind.score)},
                               {"saved", ind.saved},
                               {"generation", ind.born_generation},
                               {"lit", ind.genome.lit},
                               {"uniforms", bundle.at("uniforms")}});
    }
    return json_response(200, Json{{"individuals", std::move(entries)},
                                   {"total", total},
                                   {"page", page},
                                   {"per_page", per_page},
                                   {"generation", pop.generation}});
}

HttpResponse Service::shader(const std::string& id) {
    const auto snap = snapshot();
    if (!snap->population) return no_run();
    return HttpResponse{200, compiled_bundle(snap->population->at(id).genome), "application/json"};
}

HttpResponse Service::graph(const std::string& id) {
    const auto snap = snapshot();
    if (!snap->population) return no_run();
    return json_response(200, genome_to_json(snap->population->at(id).genome));
}

HttpResponse Service::score(const std::string& id, const HttpRequest& request) {
    if (!session_.active()) return no_run();
    session_.population().at(id);
    const Json body = parse_body(request.body);
    auto it = body.find("score");
    std::optional<Score> value;
    if (it != body.end() && it->is_number_integer()) value = score_from_int(it->get<long long>());
    if (!value) return error_response(400, "InvalidScore", "score must be -1, 0 or 1");
    session_.score(id, *value);
    return json_response(200, Json{{"id", id}, {"score", static_cast<int>(*value)}});
}

HttpResponse Service::breed(const HttpRequest& request) {
    if (!session_.active()) return no_run();
    const Json body = parse_body(request.body);
    const std::string mode = body.value("mode", std::string("auto"));
    std::optional<std::pair<std::string, std::string>> parents;
    if (mode == "manual") {
        auto it = body.find("parents");
        if (it == body.end() || !it->is_array() || it->size() != 2 || !(*it)[0].is_string() || !(*it)[1].is_string()) {
            return error_response(400, "InvalidParents", "manual breeding needs two parent ids");
        }
        parents = std::make_pair((*it)[0].get<std::string>(), (*it)[1].get<std::string>());
        const auto& pop = session_.population();
        if (parents->first == parents->second || !pop.find(parents->first) || !pop.find(parents->second)) {
            return error_response(400, "InvalidParents", "manual breeding needs two distinct existing parents");
        }
    } else if (mode != "auto") {
        return error_response(400, "InvalidMode", "mode must be auto or manual");
    }
    const auto result = session_.breed(parents);
    Json pairs = Json::array();
    for (const auto& [a, b] : result.parents) pairs.push_back(Json::array({a, b}));
    return json_response(200, Json{{"new_ids", result.new_ids},
                                   {"culled_ids", result.culled_ids},
                                   {"parents", std::move(pairs)},
                                   {"generation", result.population.generation}});
}

HttpResponse Service::save(const std::string& id) {
    if (!session_.active()) return no_run();
    session_.population().at(id);
    return json_response(200, Json{{"id", id}, {"file", session_.save(id)}});
}

HttpResponse Service::put_config(const HttpRequest& request) {
    const Json body = parse_body(request.body);
    EvolutionConfig config = evolution_config_from_json(body, session_.config());
    if (!options_.out_dir.empty()) config.output_dir = options_.out_dir;
    session_.set_config(config);
    return json_response(200, evolution_config_to_json(session_.config()));
}

struct HttpServer::Impl {
    Impl(Service& s, ServerOptions o) : service(s), options(std::move(o)) {}
    Service& service;
    ServerOptions options;
    httplib::Server server;
};

HttpServer::HttpServer(Service& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        HttpRequest r{req.method, req.path, {}, req.body};
        for (const auto& [k, v] : req.params) r.query[k] = v;
        const HttpResponse out = impl_->service.handle(r);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    auto& s = impl_->server;
    s.Get("/api/v1/.*", handler);
    s.Post("/api/v1/.*", handler);
    s.Put("/api/v1/.*", handler);
    if (!impl_->options.static_dir.empty()) s.set_mount_point("/", impl_->options.static_dir);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    auto& s = impl_->server;
    if (impl_->options.port == 0) return s.bind_to_any_port(impl_->options.host);
    return s.bind_to_port(impl_->options.host, impl_->options.port) ? impl_->options.port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace shaderevo
