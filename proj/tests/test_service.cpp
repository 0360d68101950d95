#include "creditsort/service.hpp"

#include <catch_amalgamated.hpp>

#include <httplib.h>
#include <json.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <thread>

using namespace creditsort;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kData = CREDITSORT_DATA_DIR;

std::string fixture(const std::string& name = "case_study.json")
{
    return io::read_text_file(kData / name);
}

json body_of(const service::Response& r)
{
    return json::parse(r.body);
}

std::vector<smaa::AcceptabilityReport> reports_of(const json& j)
{
    return io::parse_report_json(json{{"schema_version", io::kSchemaVersion}, {"reports", j}}.dump());
}

json wait_for(const service::Service& s, const std::string& run_id)
{
    for (int i = 0; i < 6000; ++i) {
        const auto r = s.get_run(run_id);
        REQUIRE(r.status == 200);
        auto j = body_of(r);
        if (j["status"] == "done" || j["status"] == "failed") {
            return j;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    FAIL("run " << run_id << " did not finish");
    return {};
}

std::string cli_stdout(const std::string& args)
{
    const std::string command = std::string("\"") + CREDITSORT_CLI + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        out.append(buffer.data(), n);
    }
    REQUIRE(pclose(pipe) == 0);
    return out;
}

} // namespace

TEST_CASE("project store lifecycle")
{
    service::Service s;
    const auto created = s.create_project(fixture(), std::string("case"));
    CHECK(created.status == 201);
    CHECK(body_of(created)["id"] == "case");
    CHECK(s.create_project(fixture(), std::string("case")).status == 200);

    const auto anonymous = s.create_project(fixture(), std::nullopt);
    CHECK(anonymous.status == 201);
    CHECK(body_of(anonymous)["id"] != "case");

    CHECK(s.create_project(fixture(), std::string("../etc")).status == 400);
    CHECK(s.get_project("nope").status == 404);
    CHECK(s.get_run("r999").status == 404);
    CHECK(s.start_run("nope", "{}").status == 404);
    CHECK(s.whatif("nope", "{}").status == 404);

    const auto fetched = s.get_project("case");
    REQUIRE(fetched.status == 200);
    CHECK(io::parse_project(fetched.body) == io::parse_project(fixture()));
}

TEST_CASE("validation faults come back as a report")
{
    service::Service s;
    auto j = json::parse(fixture());
    j["decision_makers"][0]["weights"]["g4_6"] = 0.096;
    const auto r = s.create_project(j.dump(), std::nullopt);
    CHECK(r.status == 400);
    const auto body = body_of(r);
    REQUIRE(body["violations"].is_array());
    CHECK(body["violations"][0]["location"].get<std::string>().find("decision_makers[DM1]") !=
          std::string::npos);

    CHECK(s.create_project("{ not json", std::nullopt).status == 400);
    s.create_project(fixture(), std::string("case"));
    CHECK(s.start_run("case", R"({"draws": 10, "colour": 1})").status == 400);
    CHECK(s.start_run("case", R"({"dm": "DM9"})").status == 400);
    CHECK(s.start_run("case", R"({"lambda": [0.9, 0.8]})").status == 202); // fails at run time
}

TEST_CASE("asynchronous runs match the command line")
{
    service::Service s;
    s.create_project(fixture(), std::string("case"));
    const auto started = s.start_run("case", R"({"all_dms": true, "draws": 3000, "seed": 17})");
    REQUIRE(started.status == 202);
    const auto handle = body_of(started);
    CHECK(handle["status"] == "queued");
    const auto done = wait_for(s, handle["id"]);
    REQUIRE(done["status"] == "done");

    const auto http = reports_of(done["reports"]);
    const auto cli = io::parse_report_json(cli_stdout(
        "run \"" + (kData / "case_study.json").string() +
        "\" --all-dms --draws 3000 --seed 17 --format json"));
    CHECK(http == cli);
}

TEST_CASE("failed runs carry their error")
{
    service::Service s;
    s.create_project(fixture(), std::string("case"));
    const auto started = body_of(s.start_run("case", R"({"lambda": [0.9, 0.8]})"));
    const auto done = wait_for(s, started["id"]);
    CHECK(done["status"] == "failed");
    CHECK_FALSE(done.contains("reports"));
    CHECK(done["error"].get<std::string>().find("lambda") != std::string::npos);
}

TEST_CASE("replacing a project with an active run conflicts")
{
    service::Service s;
    s.create_project(fixture(), std::string("case"));
    const auto started =
        body_of(s.start_run("case", R"({"group": true, "draws": 2000000, "workers": 1})"));
    CHECK(s.create_project(fixture(), std::string("case")).status == 409);
    CHECK(wait_for(s, started["id"])["status"] == "done");
    CHECK(s.create_project(fixture(), std::string("case")).status == 200);
}

TEST_CASE("what-if with an empty patch equals a plain run")
{
    service::Service s;
    s.create_project(fixture(), std::string("case"));
    const auto before = s.get_project("case").body;

    const auto whatif = s.whatif("case", R"({"dm": "DM1", "seed": 5, "patch": {}})");
    REQUIRE(whatif.status == 200);
    const auto plain = wait_for(s, body_of(s.start_run("case", R"({"dm": "DM1", "seed": 5, "draws": 2000})"))["id"]);
    CHECK(reports_of(body_of(whatif)["reports"]) == reports_of(plain["reports"]));
    CHECK(s.get_project("case").body == before);

    // draws above the interactive cap are clipped
    const auto capped = body_of(s.whatif("case", R"({"dm": "DM1", "draws": 50000})"));
    CHECK(capped["reports"][0]["draws"] == service::kWhatIfDraws);
}

TEST_CASE("what-if veto on the unit-pilot criterion")
{
    service::Service s;
    s.create_project(fixture(), std::string("case"));
    const auto before = s.get_project("case").body;
    const auto plain = body_of(s.whatif("case", R"({"dm": "DM1", "seed": 8})"));
    const auto vetoed = body_of(s.whatif("case", R"({"dm": "DM1", "seed": 8, "patch": {"veto": {"g4_6": 0.5}}})"));
    CHECK(s.get_project("case").body == before);

    const auto base = reports_of(plain["reports"]).at(0);
    const auto veto = reports_of(vetoed["reports"]).at(0);
    // A and B have no unit pilot (0 on a 0/1 scale). Only b4 has one, so the
    // veto removes their C5 mass but leaves them far above C1.
    for (const char* id : {"A", "B"}) {
        INFO(id);
        CHECK(veto.row(id).acceptability[4] == 0.0);
        CHECK(veto.row(id).acceptability[0] == 0.0);
    }
    for (const char* id : {"C", "D"}) {
        CHECK(veto.row(id) == base.row(id));
    }

    const auto& diag = vetoed["breakpoints"]["DM1"]["A"];
    REQUIRE(diag["intervals"].is_array());
    CHECK(diag["intervals"].back()["hi"] == 1.0);
    CHECK(diag.contains("fragile"));
}

TEST_CASE("what-if with interval evaluations samples them")
{
    service::Service s;
    s.create_project(fixture(), std::string("case"));
    const auto r = s.whatif(
        "case", R"({"dm": "DM1", "patch": {"evaluations": {"A": {"g2_3": [3, 5]}}, "lambda": [0.7, 0.7], "rule": "optimistic"}})");
    REQUIRE(r.status == 200);
    CHECK(body_of(r)["breakpoints"].empty());
    CHECK(s.whatif("case", R"({"patch": {"evaluations": {"Z": {"g2_3": 3}}}})").status == 400);
    CHECK(s.whatif("case", R"({"patch": {"veto": {"g4_6": -1.0}}})").status == 400);
}

TEST_CASE("simos endpoint")
{
    service::Service s;
    const auto deck = json::parse(fixture("dm1_deck.json"));
    const auto r = s.simos(deck.dump());
    REQUIRE(r.status == 200);
    const auto j = body_of(r);
    CHECK(j["total"].get<double>() == Catch::Approx(447.0 / 11));
    CHECK(j["spacing"] == 11);
    CHECK(j["weights"]["g4_6"].get<double>() == Catch::Approx(88.0 / 447));
    CHECK(j["preorder"].get<std::string>().rfind("g1_1 ~ g1_2 < ", 0) == 0);

    auto bad = deck;
    bad["z"] = 1;
    CHECK(s.simos(bad.dump()).status == 400);
    bad.erase("z");
    CHECK(s.simos(bad.dump()).status == 400);
}

TEST_CASE("projects persist in the service directory")
{
    const auto dir = fs::temp_directory_path() / "creditsort_service_store";
    fs::remove_all(dir);
    fs::create_directories(dir);
    io::write_text_file(dir / "junk.json", "{");
    {
        service::Service s(dir);
        CHECK(s.project_ids().empty());
        CHECK(s.create_project(fixture(), std::string("saved")).status == 201);
    }
    CHECK(fs::exists(dir / "saved.json"));
    service::Service reopened(dir);
    CHECK(reopened.project_ids() == std::vector<std::string>{"saved"});
}

TEST_CASE("listen address from the environment")
{
    unsetenv("CREDITSORT_BIND");
    unsetenv("CREDITSORT_PORT");
    CHECK(service::listen_address_from_env() == std::pair<std::string, int>{"127.0.0.1", 8080});
    setenv("CREDITSORT_BIND", "0.0.0.0", 1);
    setenv("CREDITSORT_PORT", "9001", 1);
    CHECK(service::listen_address_from_env() == std::pair<std::string, int>{"0.0.0.0", 9001});
    unsetenv("CREDITSORT_BIND");
    unsetenv("CREDITSORT_PORT");
}

TEST_CASE("endpoints over HTTP")
{
    service::Service s;
    httplib::Server server;
    s.mount(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::jthread listener([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto created = client.Post("/projects?id=web", fixture(), "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    CHECK(client.Get("/projects/web")->status == 200);
    CHECK(client.Get("/projects/none")->status == 404);
    CHECK(client.Get("/runs/none")->status == 404);

    auto run = client.Post("/projects/web/runs", R"({"dm": "DM2", "draws": 1000})", "application/json");
    REQUIRE(run);
    CHECK(run->status == 202);
    const auto done = wait_for(s, json::parse(run->body)["id"]);
    CHECK(done["status"] == "done");
    const auto polled = client.Get("/runs/" + done["id"].get<std::string>());
    CHECK(json::parse(polled->body)["status"] == "done");

    auto whatif = client.Post("/projects/web/whatif", R"({"dm": "DM2"})", "application/json");
    CHECK(whatif->status == 200);
    auto simos = client.Post("/weights/simos", fixture("dm1_deck.json"), "application/json");
    CHECK(simos->status == 200);
    auto invalid = client.Post("/projects", "[]", "application/json");
    CHECK(invalid->status == 400);

    server.stop();
}
