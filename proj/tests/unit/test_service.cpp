#include <doctest.h>

#include <httplib.h>

#include <filesystem>
#include <thread>

#include "shaderevo/json.hpp"
#include "shaderevo/service.hpp"

using namespace shaderevo;

namespace {

struct Fixture {
    std::filesystem::path dir = std::filesystem::temp_directory_path() / "shaderevo_unit_service";
    Service service;

    Fixture() : service(ServiceOptions{EvolutionConfig{}, 5, dir.string()}) {}
    ~Fixture() { std::filesystem::remove_all(dir); }

    std::pair<int, Json> call(const std::string& method, const std::string& path, const Json& body = nullptr,
                              std::map<std::string, std::string> query = {}) {
        HttpRequest r{method, path, std::move(query), body.is_null() ? "" : body.dump()};
        const auto res = service.handle(r);
        return {res.status, Json::parse(res.body)};
    }
};

}  // namespace

TEST_CASE("service requires a run before population access") {
    Fixture f;
    auto [status, body] = f.call("GET", "/api/v1/population");
    CHECK(status == 409);
    CHECK(body.at("error").at("code") == "NoRun");
    CHECK(f.call("POST", "/api/v1/breed", Json::object()).first == 409);
    CHECK(f.call("GET", "/api/v1/nope").first == 404);
    CHECK(f.call("GET", "/api/v1/catalog").first == 200);
    CHECK(f.call("GET", "/api/v1/config").second.at("capacity") == 8);
}

TEST_CASE("service run, score, breed and save") {
    Fixture f;
    auto [status, run] = f.call("POST", "/api/v1/run", Json{{"seeds", "random"}, {"seed", 3}});
    REQUIRE(status == 200);
    CHECK(run.at("ids").size() == 8);
    CHECK(f.call("POST", "/api/v1/run", Json::object()).first == 409);

    auto [ps, page] = f.call("GET", "/api/v1/population", nullptr, {{"page", "1"}, {"per_page", "3"}});
    CHECK(ps == 200);
    CHECK(page.at("individuals").size() == 3);
    CHECK(page.at("total") == 8);
    CHECK(f.call("GET", "/api/v1/population", nullptr, {{"page", "x"}}).first == 400);

    const std::string id = run.at("ids")[0];
    auto [ss, shader] = f.call("GET", "/api/v1/individuals/" + id + "/shader");
    CHECK(ss == 200);
    for (const char* key : {"vertex", "fragment", "uniforms", "lit", "alphaClip"}) CHECK(shader.contains(key));
    for (const auto& u : shader.at("uniforms")) {
        for (const char* key : {"name", "type", "default", "role"}) CHECK(u.contains(key));
    }
    CHECK(f.call("GET", "/api/v1/individuals/" + id + "/graph").second.at("format_version") == 1);
    CHECK(f.call("GET", "/api/v1/individuals/999/graph").first == 404);

    CHECK(f.call("POST", "/api/v1/individuals/" + id + "/score", Json{{"score", 1}}).first == 200);
    CHECK(f.call("POST", "/api/v1/individuals/" + id + "/score", Json{{"score", 5}}).first == 400);
    CHECK(f.call("POST", "/api/v1/individuals/" + id + "/score", Json{{"score", "up"}}).first == 400);
    CHECK(f.call("POST", "/api/v1/individuals/999/score", Json{{"score", 1}}).first == 404);

    auto [bs, bred] = f.call("POST", "/api/v1/breed", Json{{"mode", "auto"}});
    CHECK(bs == 200);
    CHECK(bred.at("new_ids").size() == 2);
    CHECK(bred.at("generation") == 1);
    const std::string other = run.at("ids")[1];
    CHECK(f.call("POST", "/api/v1/breed", Json{{"mode", "manual"}, {"parents", {id, id}}}).first == 400);
    CHECK(f.call("POST", "/api/v1/breed", Json{{"mode", "manual"}}).first == 400);
    CHECK(f.call("POST", "/api/v1/breed", Json{{"mode", "sideways"}}).first == 400);

    const auto snap = f.service.snapshot();
    const std::string alive_a = snap->population->individuals[0].id;
    const std::string alive_b = snap->population->individuals[1].id;
    CHECK(f.call("POST", "/api/v1/breed", Json{{"mode", "manual"}, {"parents", {alive_a, alive_b}}}).first == 200);

    auto [vs, saved] = f.call("POST", "/api/v1/individuals/" + alive_a + "/save");
    CHECK(vs == 200);
    CHECK(std::filesystem::exists(saved.at("file").get<std::string>()));

    CHECK(f.service.snapshot()->population->individuals.size() == 8);
    CHECK(std::filesystem::exists(f.service.action_log_path()));
    const Session replayed = Session::replay(f.service.snapshot()->log);
    CHECK(replayed.population() == *f.service.snapshot()->population);
}

TEST_CASE("service config updates") {
    Fixture f;
    CHECK(f.call("PUT", "/api/v1/config", Json{{"strength", "high"}}).first == 200);
    CHECK(f.call("GET", "/api/v1/config").second.at("strength") == "high");
    CHECK(f.call("PUT", "/api/v1/config", Json{{"offspring_count", 3}}).first == 400);
    CHECK(f.call("PUT", "/api/v1/config", Json{{"bogus", 1}}).first == 400);
    REQUIRE(f.call("POST", "/api/v1/run", Json::object()).first == 200);
    CHECK(f.call("PUT", "/api/v1/config", Json{{"capacity", 10}}).first == 400);
    CHECK(f.call("PUT", "/api/v1/config", Json{{"mutation_count", 2}}).first == 200);
    CHECK(f.call("POST", "/api/v1/run", Json{{"restart", true}, {"config", {{"capacity", 6}}}}).second.at("capacity") == 6);
}

TEST_CASE("service over HTTP") {
    Fixture f;
    HttpServer server(f.service, ServerOptions{"127.0.0.1", 0, ""});
    const int port = server.bind();
    REQUIRE(port > 0);
    std::thread t([&] { server.listen(); });
    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/api/v1/run", R"({"seed": 2})", "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    res = client.Get("/api/v1/population?per_page=2");
    REQUIRE(res);
    CHECK(Json::parse(res->body).at("individuals").size() == 2);
    res = client.Get("/api/v1/individuals/1/shader");
    REQUIRE(res);
    CHECK(res->get_header_value("Content-Type").find("application/json") == 0);
    server.stop();
    t.join();
}
