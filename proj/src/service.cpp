#include "creditsort/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <regex>

namespace creditsort::service {

using json = nlohmann::ordered_json;

namespace {

Response json_response(int status, const json& body)
{
    return {status, body.dump(2) + "\n"};
}

Response error_response(int status, const std::string& message)
{
    return json_response(status, {{"error", message}});
}

Response validation_response(const ValidationReport& report)
{
    json violations = json::array();
    for (const auto& v : report.violations) {
        violations.push_back({{"location", v.location}, {"message", v.message}});
    }
    return json_response(400, {{"error", "validation failed"}, {"violations", violations}});
}

/// Maps the engine's fault types onto HTTP status codes.
template <typename F>
Response guarded(F&& body)
{
    try {
        return body();
    } catch (const ValidationError& e) {
        return validation_response(e.report());
    } catch (const ParseError& e) {
        return error_response(400, e.what());
    } catch (const ConfigurationError& e) {
        return error_response(400, e.what());
    } catch (const UnsupportedInputError& e) {
        return error_response(400, e.what());
    } catch (const InsufficientDataError& e) {
        return error_response(400, e.what());
    } catch (const json::exception& e) {
        return error_response(400, e.what());
    }
}

json parse_body(const std::string& body)
{
    if (body.find_first_not_of(" \t\r\n") == std::string::npos) {
        return json::object();
    }
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw ConfigurationError(std::string("malformed JSON body: ") + e.what());
    }
}

void only_fields(const json& j, std::initializer_list<std::string_view> allowed)
{
    if (!j.is_object()) {
        throw ConfigurationError("request body must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigurationError("unknown field '" + key + "'");
        }
    }
}

bool valid_id(const std::string& id)
{
    static const std::regex pattern("[A-Za-z0-9_.-]{1,64}");
    return std::regex_match(id, pattern) && id != "." && id != "..";
}

Evaluation evaluation_from(const json& j, const std::string& where)
{
    if (j.is_number()) {
        return Evaluation::point(j.get<double>());
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return Evaluation::interval(j[0].get<double>(), j[1].get<double>());
    }
    throw ConfigurationError(where + ": expected a number or [lo, hi]");
}

LambdaSpec lambda_from(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigurationError("lambda: expected [lo, hi]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

/// Selection and run parameters; anything not given falls back to the
/// project's stored run configuration.
pipeline::RunRequest run_request_from(const json& j, const io::ProjectFile& file)
{
    pipeline::RunRequest request;
    request.config = file.run;
    const int scopes = static_cast<int>(j.contains("dm")) + static_cast<int>(j.contains("group")) +
                       static_cast<int>(j.contains("all_dms"));
    if (scopes > 1) {
        throw ConfigurationError("give at most one of \"dm\", \"group\", \"all_dms\"");
    }
    if (j.contains("dm")) {
        request.scope = pipeline::Scope::single_dm;
        request.dm = j.at("dm").get<std::string>();
        file.decision_maker(request.dm);
    } else if (j.contains("all_dms") && j.at("all_dms").get<bool>()) {
        request.scope = pipeline::Scope::all_dms;
    } else {
        request.scope = pipeline::Scope::group;
    }
    if (j.contains("draws")) {
        request.config.draws = j.at("draws").get<std::uint64_t>();
    }
    if (j.contains("seed")) {
        request.config.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("lambda")) {
        request.config.lambda = lambda_from(j.at("lambda"));
    }
    if (j.contains("rule")) {
        request.config.rule = electre::rule_from_string(j.at("rule").get<std::string>());
    }
    if (j.contains("evaluation_sampling")) {
        request.config.evaluation_sampling = j.at("evaluation_sampling").get<bool>();
    }
    if (j.contains("cutoff")) {
        request.config.cutoff = j.at("cutoff").is_null()
                                    ? std::nullopt
                                    : std::optional<int>(j.at("cutoff").get<int>());
    }
    if (j.contains("workers")) {
        request.config.workers = j.at("workers").get<unsigned>();
    }
    return request;
}

WhatIfPatch patch_from(const json& j)
{
    only_fields(j, {"veto", "evaluations", "lambda", "rule"});
    WhatIfPatch patch;
    if (j.contains("veto")) {
        for (const auto& [id, v] : j.at("veto").items()) {
            patch.veto[id] = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
        }
    }
    if (j.contains("evaluations")) {
        for (const auto& [alt, cells] : j.at("evaluations").items()) {
            for (const auto& [id, value] : cells.items()) {
                patch.evaluations[alt][id] =
                    evaluation_from(value, "patch.evaluations." + alt + "." + id);
            }
        }
    }
    if (j.contains("lambda")) {
        patch.lambda = lambda_from(j.at("lambda"));
    }
    if (j.contains("rule")) {
        patch.rule = electre::rule_from_string(j.at("rule").get<std::string>());
    }
    return patch;
}

json reports_json(const std::vector<smaa::AcceptabilityReport>& reports)
{
    return json::parse(io::report_json(reports)).at("reports");
}

json diagnosis_json(const electre::BreakpointDiagnosis& diagnosis)
{
    json intervals = json::array();
    for (const auto& piece : diagnosis.intervals) {
        intervals.push_back({{"lo", piece.lo},
                             {"hi", piece.hi},
                             {"lo_open", piece.lo_open},
                             {"category", piece.category}});
    }
    return {{"intervals", intervals},
            {"monotone", diagnosis.monotone},
            {"skips_category", diagnosis.skips_category},
            {"fragile", diagnosis.fragile()}};
}

} // namespace

io::ProjectFile apply_patch(const io::ProjectFile& file, const WhatIfPatch& patch)
{
    io::ProjectFile out = file;
    for (const auto& [id, veto] : patch.veto) {
        try {
            out.project.criteria[out.project.criterion_index(id)].thresholds.veto = veto;
        } catch (const std::out_of_range&) {
            throw ConfigurationError("veto patch names unknown criterion '" + id + "'");
        }
    }
    for (const auto& [alt, cells] : patch.evaluations) {
        auto it = std::find_if(out.project.alternatives.begin(), out.project.alternatives.end(),
                               [&](const Alternative& a) { return a.id == alt; });
        if (it == out.project.alternatives.end()) {
            throw ConfigurationError("evaluation patch names unknown alternative '" + alt + "'");
        }
        for (const auto& [id, value] : cells) {
            if (!it->evaluations.count(id)) {
                throw ConfigurationError("evaluation patch names unknown criterion '" + id + "'");
            }
            it->evaluations[id] = value;
        }
    }
    if (patch.lambda) {
        out.run.lambda = *patch.lambda;
    }
    if (patch.rule) {
        out.run.rule = *patch.rule;
    }
    return out;
}

Service::Service(std::optional<std::filesystem::path> project_dir)
    : project_dir_(std::move(project_dir))
{
    if (!project_dir_) {
        return;
    }
    std::filesystem::create_directories(*project_dir_);
    for (const auto& entry : std::filesystem::directory_iterator(*project_dir_)) {
        if (entry.path().extension() != ".json" || !valid_id(entry.path().stem().string())) {
            continue;
        }
        try {
            projects_[entry.path().stem().string()] =
                std::make_shared<const io::ProjectFile>(io::load_project(entry.path()));
        } catch (const std::exception& e) {
            std::cerr << "skipping " << entry.path().filename().string() << ": " << e.what() << '\n';
        }
    }
}

Service::~Service()
{
    std::lock_guard lock(threads_mutex_);
    threads_.clear(); // joins
}

std::shared_ptr<const io::ProjectFile> Service::find_project(const std::string& id) const
{
    std::shared_lock lock(projects_mutex_);
    const auto it = projects_.find(id);
    return it == projects_.end() ? nullptr : it->second;
}

std::vector<std::string> Service::project_ids() const
{
    std::shared_lock lock(projects_mutex_);
    std::vector<std::string> out;
    for (const auto& [id, file] : projects_) {
        out.push_back(id);
    }
    return out;
}

Response Service::create_project(const std::string& body, const std::optional<std::string>& id)
{
    return guarded([&] {
        auto file = std::make_shared<const io::ProjectFile>(io::parse_and_validate(body));
        std::string project_id = id.value_or("");
        if (project_id.empty()) {
            do {
                project_id = "p" + std::to_string(next_project_++);
            } while (find_project(project_id));
        } else if (!valid_id(project_id)) {
            return error_response(400, "project id may only use letters, digits, '.', '_', '-'");
        }

        std::unique_lock lock(projects_mutex_);
        const bool replacing = projects_.count(project_id) > 0;
        if (replacing) {
            std::lock_guard runs(runs_mutex_);
            for (const auto& [run_id, entry] : runs_) {
                if (entry.project == project_id &&
                    (entry.status == "queued" || entry.status == "running")) {
                    return error_response(409, "project '" + project_id + "' has active run " +
                                                   run_id);
                }
            }
        }
        if (project_dir_) {
            io::write_text_file(*project_dir_ / (project_id + ".json"), io::serialize_project(*file));
        }
        projects_[project_id] = std::move(file);
        return json_response(replacing ? 200 : 201, {{"id", project_id}});
    });
}

Response Service::get_project(const std::string& id) const
{
    const auto file = find_project(id);
    if (!file) {
        return error_response(404, "unknown project '" + id + "'");
    }
    return {200, io::serialize_project(*file)};
}

Response Service::start_run(const std::string& project_id, const std::string& body)
{
    auto file = find_project(project_id);
    if (!file) {
        return error_response(404, "unknown project '" + project_id + "'");
    }
    return guarded([&] {
        const json j = parse_body(body);
        only_fields(j, {"dm", "group", "all_dms", "draws", "seed", "lambda", "rule",
                        "evaluation_sampling", "cutoff", "workers"});
        auto request = run_request_from(j, *file);
        const std::string run_id = "r" + std::to_string(next_run_++);
        {
            std::lock_guard lock(runs_mutex_);
            runs_[run_id].project = project_id;
        }
        {
            std::lock_guard lock(threads_mutex_);
            threads_.emplace_back(
                [this, run_id, file, request] { execute(run_id, file, request); });
        }
        return json_response(202, {{"id", run_id}, {"project", project_id}, {"status", "queued"}});
    });
}

void Service::execute(const std::string& run_id, std::shared_ptr<const io::ProjectFile> file,
                      pipeline::RunRequest request)
{
    {
        std::lock_guard lock(runs_mutex_);
        runs_[run_id].status = "running";
    }
    try {
        auto reports = pipeline::run(*file, request);
        std::lock_guard lock(runs_mutex_);
        runs_[run_id].reports = std::move(reports);
        runs_[run_id].status = "done";
    } catch (const std::exception& e) {
        std::lock_guard lock(runs_mutex_);
        runs_[run_id].error = e.what();
        runs_[run_id].status = "failed";
    }
}

Response Service::get_run(const std::string& run_id) const
{
    std::lock_guard lock(runs_mutex_);
    const auto it = runs_.find(run_id);
    if (it == runs_.end()) {
        return error_response(404, "unknown run '" + run_id + "'");
    }
    const auto& entry = it->second;
    json out = {{"id", run_id}, {"project", entry.project}, {"status", entry.status}};
    if (entry.reports) {
        out["reports"] = reports_json(*entry.reports);
    }
    if (!entry.error.empty()) {
        out["error"] = entry.error;
    }
    return json_response(200, out);
}

Response Service::whatif(const std::string& project_id, const std::string& body) const
{
    const auto stored = find_project(project_id);
    if (!stored) {
        return error_response(404, "unknown project '" + project_id + "'");
    }
    return guarded([&] {
        json j = parse_body(body);
        only_fields(j, {"dm", "group", "all_dms", "draws", "seed", "lambda", "rule",
                        "evaluation_sampling", "cutoff", "workers", "patch"});
        const WhatIfPatch patch = j.contains("patch") ? patch_from(j.at("patch")) : WhatIfPatch{};
        j.erase("patch");
        const io::ProjectFile patched = apply_patch(*stored, patch);
        if (auto report = io::validate_project_file(patched); !report.ok()) {
            throw ValidationError(std::move(report));
        }
        auto request = run_request_from(j, patched);
        if (!j.contains("draws")) {
            request.config.draws = kWhatIfDraws;
        }
        request.config.draws = std::min(request.config.draws, kWhatIfDraws);

        const electre::SortingProblem problem(patched.project);
        if (!problem.all_point()) {
            request.config.evaluation_sampling = true;
        }
        const auto reports = pipeline::run(patched, request);

        json breakpoints = json::object();
        if (problem.all_point()) {
            std::vector<std::string> ids;
            for (const auto& c : patched.project.criteria) {
                ids.push_back(c.id);
            }
            for (const auto& report : reports) {
                if (report.label == pipeline::kGroupLabel) {
                    continue;
                }
                const auto weights = io::point_weights(patched.decision_maker(report.label), ids);
                if (!weights) {
                    continue;
                }
                const auto w = problem.align(*weights);
                json per_alt = json::object();
                for (std::size_t i = 0; i < problem.alternative_count(); ++i) {
                    per_alt[problem.alternative_id(i)] = diagnosis_json(
                        electre::diagnose_breakpoints(problem.scores(i, w), request.config.rule));
                }
                breakpoints[report.label] = std::move(per_alt);
            }
        }
        return json_response(200, {{"reports", reports_json(reports)},
                                   {"breakpoints", breakpoints}});
    });
}

Response Service::simos(const std::string& body) const
{
    return guarded([&] {
        const json j = parse_body(body);
        only_fields(j, {"ranks", "white_cards", "z", "criteria"});
        CardDeck deck;
        deck.ranks = j.at("ranks").get<std::vector<std::vector<std::string>>>();
        if (j.contains("white_cards")) {
            deck.white_cards = j.at("white_cards").get<std::vector<int>>();
        }
        if (!j.contains("z") || !j.at("z").is_number()) {
            throw ConfigurationError("z: a numeric ratio is required");
        }
        deck.z = j.at("z").get<double>();
        std::vector<std::string> criteria;
        if (j.contains("criteria")) {
            criteria = j.at("criteria").get<std::vector<std::string>>();
        }
        const auto result = simos_resolve(deck, criteria);
        json weights = json::object();
        for (const auto& rank : deck.ranks) {
            for (const auto& id : rank) {
                weights[id] = result.weights.at(id);
            }
        }
        return json_response(200, {{"k", result.rank_weights},
                                   {"rank_totals", result.rank_totals},
                                   {"total", result.total},
                                   {"unit", result.unit},
                                   {"spacing", result.spacing},
                                   {"weights", weights},
                                   {"preorder", ImportancePreorder(deck.ranks).describe()}});
    });
}

void Service::mount(httplib::Server& server)
{
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    server.Post("/projects", [this, reply](const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string> id;
        if (req.has_param("id")) {
            id = req.get_param_value("id");
        }
        reply(res, create_project(req.body, id));
    });
    server.Get(R"(/projects/([^/]+))", [this, reply](const httplib::Request& req,
                                                     httplib::Response& res) {
        reply(res, get_project(req.matches[1]));
    });
    server.Post(R"(/projects/([^/]+)/runs)", [this, reply](const httplib::Request& req,
                                                          httplib::Response& res) {
        reply(res, start_run(req.matches[1], req.body));
    });
    server.Get(R"(/runs/([^/]+))", [this, reply](const httplib::Request& req,
                                                 httplib::Response& res) {
        reply(res, get_run(req.matches[1]));
    });
    server.Post(R"(/projects/([^/]+)/whatif)", [this, reply](const httplib::Request& req,
                                                            httplib::Response& res) {
        reply(res, whatif(req.matches[1], req.body));
    });
    server.Post("/weights/simos", [this, reply](const httplib::Request& req,
                                                httplib::Response& res) {
        reply(res, simos(req.body));
    });
}

std::pair<std::string, int> listen_address_from_env()
{
    std::string host = "127.0.0.1";
    int port = 8080;
    if (const char* bind = std::getenv("CREDITSORT_BIND"); bind && *bind) {
        host = bind;
    }
    if (const char* p = std::getenv("CREDITSORT_PORT"); p && *p) {
        port = std::atoi(p);
    }
    return {host, port};
}

bool serve(Service& service, const std::string& host, int port)
{
    httplib::Server server;
    service.mount(server);
    return server.listen(host, port);
}

} // namespace creditsort::service
