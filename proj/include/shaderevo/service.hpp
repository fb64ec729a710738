#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "shaderevo/evolution.hpp"

namespace shaderevo {

struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

struct ServiceOptions {
    EvolutionConfig config;
    std::uint64_t seed = 1;
    /// Directory holding the action log and saved genomes; overrides config.output_dir when set.
    std::string out_dir;
};

/// REST facade over one evolution session. `handle` is thread-safe: reads are
/// answered from an immutable snapshot, mutations run in FIFO order on a
/// single worker thread.
class Service {
public:
    explicit Service(ServiceOptions options);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    HttpResponse handle(const HttpRequest& request);

    struct Snapshot {
        std::optional<Population> population;
        EvolutionConfig config;
        std::vector<std::string> log;
    };
    std::shared_ptr<const Snapshot> snapshot() const;
    std::string action_log_path() const;

private:
    HttpResponse route(const HttpRequest& request);
    HttpResponse run_serialized(std::function<HttpResponse()> task);
    void worker_loop();
    void publish();

    HttpResponse start_run(const HttpRequest& request);
    HttpResponse population(const HttpRequest& request);
    HttpResponse shader(const std::string& id);
    HttpResponse graph(const std::string& id);
    HttpResponse score(const std::string& id, const HttpRequest& request);
    HttpResponse breed(const HttpRequest& request);
    HttpResponse save(const std::string& id);
    HttpResponse put_config(const HttpRequest& request);
    std::string compiled_bundle(const Genome& genome);

    ServiceOptions options_;
    Session session_;  // touched only by the worker thread

    mutable std::mutex snapshot_mutex_;
    std::shared_ptr<const Snapshot> snapshot_;

    std::mutex cache_mutex_;
    std::map<std::uint64_t, std::string> bundle_cache_;

    std::mutex queue_mutex_;
    std::condition_variable queue_cv_;
    std::deque<std::packaged_task<HttpResponse()>> queue_;
    bool stopping_ = false;
    std::thread worker_;
};

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    /// Directory served under `/`; empty disables static files (headless).
    std::string static_dir;
};

/// HTTP front end for a Service (cpp-httplib underneath).
class HttpServer {
public:
    HttpServer(Service& service, ServerOptions options);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the socket; port 0 picks a free port. Returns the bound port or -1.
    int bind();
    /// Serves until stop(); requires a successful bind().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace shaderevo
