// creditsort: command-line front end for the credit-risk sorting engine.
//
// Exit codes: 0 success, 1 invalid input data, 2 invalid configuration.

#include "creditsort/pipeline.hpp"
#include "creditsort/service.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace cs = creditsort;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfiguration = 2;

cs::LambdaSpec parse_lambda(const std::string& text)
{
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            return cs::LambdaSpec::fixed(std::stod(text));
        }
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::logic_error&) {
        throw cs::ConfigurationError("--lambda expects lo:hi or a single value, got '" + text + "'");
    }
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::logic_error&) {
            throw cs::ConfigurationError("cannot parse number '" + item + "'");
        }
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        cs::io::write_text_file(out_path, text);
    }
}

struct RunOptions {
    std::string project;
    std::string dm;
    bool group = false;
    bool all_dms = false;
    std::optional<std::uint64_t> draws;
    std::optional<std::uint64_t> seed;
    std::string lambda;
    std::string rule;
    std::string intervals;
    std::optional<int> cutoff;
    unsigned workers = 0;
    std::string out;
    std::string format = "csv";
};

cs::pipeline::RunRequest make_request(const RunOptions& opt, const cs::io::ProjectFile& file)
{
    cs::pipeline::RunRequest request;
    request.config = file.run;
    if (!opt.dm.empty()) {
        request.scope = cs::pipeline::Scope::single_dm;
        request.dm = opt.dm;
    } else if (opt.all_dms) {
        request.scope = cs::pipeline::Scope::all_dms;
    } else {
        request.scope = cs::pipeline::Scope::group;
    }
    if (opt.draws) {
        request.config.draws = *opt.draws;
    }
    if (opt.seed) {
        request.config.seed = *opt.seed;
    }
    if (!opt.lambda.empty()) {
        request.config.lambda = parse_lambda(opt.lambda);
    }
    if (auto report = cs::validate_lambda(request.config.lambda); !report.ok()) {
        throw cs::ConfigurationError("--lambda: " + report.violations.front().message);
    }
    if (!opt.rule.empty()) {
        request.config.rule = cs::electre::rule_from_string(opt.rule);
    }
    if (opt.intervals == "on") {
        request.config.evaluation_sampling = true;
    } else if (opt.intervals == "off") {
        request.config.evaluation_sampling = false;
    } else if (!opt.intervals.empty()) {
        throw cs::ConfigurationError("--intervals expects on or off");
    }
    if (opt.cutoff) {
        request.config.cutoff = *opt.cutoff;
    }
    request.config.workers = opt.workers;
    return request;
}

int cmd_run(const RunOptions& opt)
{
    const auto format = cs::io::format_from_string(opt.format);
    const auto file = cs::io::load_project(opt.project);
    const auto reports = cs::pipeline::run(file, make_request(opt, file));
    emit(format == cs::io::ReportFormat::csv ? cs::io::report_csv(reports)
                                             : cs::io::report_json(reports),
         opt.out);
    return 0;
}

int cmd_validate(const std::string& path)
{
    const auto file = cs::io::load_project(path);
    std::cout << "ok: " << file.project.alternatives.size() << " alternatives, "
              << file.project.criteria.size() << " criteria, "
              << file.project.scheme.category_count() << " categories, "
              << file.decision_makers.size() << " decision makers\n";
    return 0;
}

cs::CardDeck load_deck(const std::string& path)
{
    const auto j = nlohmann::json::parse(cs::io::read_text_file(path));
    cs::CardDeck deck;
    deck.ranks = j.at("ranks").get<std::vector<std::vector<std::string>>>();
    deck.white_cards = j.value("white_cards", std::vector<int>{});
    deck.z = j.value("z", 0.0);
    return deck;
}

int cmd_weights(const std::string& path, std::optional<double> z, const std::string& format)
{
    auto deck = load_deck(path);
    if (z) {
        deck.z = *z;
    }
    const auto result = cs::simos_resolve(deck);
    if (format == "json") {
        nlohmann::ordered_json weights = nlohmann::ordered_json::object();
        for (const auto& rank : deck.ranks) {
            for (const auto& id : rank) {
                weights[id] = result.weights.at(id);
            }
        }
        nlohmann::ordered_json out = {{"k", result.rank_weights},
                                      {"total", result.total},
                                      {"weights", weights}};
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    if (format != "table") {
        throw cs::ConfigurationError("--format expects table or json");
    }
    std::printf("z = %g, e = %d, u = %.6f\n", deck.z, result.spacing, result.unit);
    std::printf("%-5s %-28s %6s %10s %8s %12s %12s\n", "rank", "criteria", "white", "k(r)",
                "cards", "total", "weight");
    for (std::size_t r = 0; r < deck.ranks.size(); ++r) {
        std::string names;
        for (const auto& id : deck.ranks[r]) {
            names += (names.empty() ? "" : " ") + id;
        }
        const std::string white =
            r < deck.white_cards.size() ? std::to_string(deck.white_cards[r]) : "";
        std::printf("%-5zu %-28s %6s %10.5f %8zu %12.5f %12.6f\n", r + 1, names.c_str(),
                    white.c_str(), result.rank_weights[r], deck.ranks[r].size(),
                    result.rank_totals[r], result.weights.at(deck.ranks[r].front()));
    }
    std::printf("K' = %.5f\n", result.total);
    std::printf("preorder: %s\n", cs::ImportancePreorder(deck.ranks).describe().c_str());
    return 0;
}

std::map<std::string, cs::finance::CashFlowSeries> load_cash_flows(const std::string& path)
{
    const std::string text = cs::io::read_text_file(path);
    const auto j = nlohmann::json::parse(text);
    if (j.contains("schema_version")) {
        return cs::io::parse_project(text).cash_flows;
    }
    std::map<std::string, cs::finance::CashFlowSeries> out;
    for (const auto& [id, flows] : j.items()) {
        out[id] = {flows.get<std::vector<double>>()};
    }
    return out;
}

int cmd_npv(const std::string& path, double rate, const std::string& scenarios,
            const std::string& reference_path)
{
    if (!(rate > -1.0)) {
        throw cs::ConfigurationError("--rate must exceed -1");
    }
    std::vector<double> severities{0.0};
    for (double s : parse_list(scenarios)) {
        if (s != 0.0) {
            severities.push_back(s);
        }
    }
    std::optional<cs::pipeline::ReferenceTables> reference;
    if (!reference_path.empty()) {
        reference = cs::pipeline::load_reference(reference_path);
    }
    const auto flows = load_cash_flows(path);
    std::printf("rate = %g\n", rate);
    std::printf("%-12s %-9s %18s %18s\n", "alternative", "scenario", "npv", "reference");
    for (const auto& [id, series] : flows) {
        for (double s : severities) {
            const auto lowered = cs::finance::apply_scenario(series, {s});
            const double value = cs::finance::npv(lowered, rate);
            std::string ref = "-";
            if (reference && reference->npv_rate == rate && reference->npv.count(id)) {
                const auto& scen = reference->npv_scenarios;
                const auto it = std::find(scen.begin(), scen.end(), s);
                if (it != scen.end()) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.2f",
                                  reference->npv.at(id)[static_cast<std::size_t>(it - scen.begin())]);
                    ref = buf;
                }
            }
            std::string flows_text;
            for (double f : lowered.flows) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%s%.2f", flows_text.empty() ? "" : " ", f);
                flows_text += buf;
            }
            std::printf("%-12s %-9g %18.2f %18s   [%s]\n", id.c_str(), s, value, ref.c_str(),
                        flows_text.c_str());
        }
    }
    return 0;
}

int cmd_deviations(const std::string& project_path, const std::string& reference_path,
                   std::optional<std::uint64_t> draws, std::optional<std::uint64_t> seed,
                   unsigned workers)
{
    const auto file = cs::io::load_project(project_path);
    const auto reference = cs::pipeline::load_reference(reference_path);
    cs::pipeline::RunRequest request;
    request.config = file.run;
    request.config.workers = workers;
    if (draws) {
        request.config.draws = *draws;
    }
    if (seed) {
        request.config.seed = *seed;
    }

    for (auto rule : {cs::electre::AssignmentRule::pessimistic_paper,
                      cs::electre::AssignmentRule::pessimistic_standard,
                      cs::electre::AssignmentRule::optimistic}) {
        request.config.rule = rule;
        request.scope = cs::pipeline::Scope::all_dms;
        auto reports = cs::pipeline::run(file, request);
        request.scope = cs::pipeline::Scope::group;
        const auto group = cs::pipeline::run(file, request);
        reports.insert(reports.end(), group.begin(), group.end());

        std::cout << "== rule " << cs::electre::to_string(rule) << " ==\n";
        std::cout << cs::pipeline::format_deviations(
            cs::pipeline::acceptability_deviations(reports, reference));
        std::cout << "group modal categories:";
        for (const auto& row : group.front().rows) {
            std::cout << ' ' << row.alternative << "=C" << row.modal_category;
        }
        std::cout << "\n\n";
    }
    std::cout << "== net present values ==\n";
    std::cout << cs::pipeline::format_deviations(cs::pipeline::npv_deviations(file, reference));
    return 0;
}

int cmd_serve(const std::string& dir, std::string bind, int port)
{
    auto [env_host, env_port] = cs::service::listen_address_from_env();
    if (bind.empty()) {
        bind = env_host;
    }
    if (port == 0) {
        port = env_port;
    }
    cs::service::Service service(dir.empty() ? std::nullopt
                                             : std::optional<std::filesystem::path>(dir));
    std::cerr << "creditsort listening on " << bind << ':' << port << " with "
              << service.project_ids().size() << " project(s)\n";
    if (!cs::service::serve(service, bind, port)) {
        throw cs::ConfigurationError("cannot listen on " + bind + ":" + std::to_string(port));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ordinal credit-risk sorting with ELECTRE-TRI and SMAA-TRI"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Monte Carlo category acceptabilities");
    run_cmd->add_option("project", run.project, "Project file")->required();
    auto* dm_opt = run_cmd->add_option("--dm", run.dm, "Single decision maker");
    auto* group_opt = run_cmd->add_flag("--group", run.group, "Interval weights over all DMs (default)");
    auto* all_opt = run_cmd->add_flag("--all-dms", run.all_dms, "One report per decision maker");
    dm_opt->excludes(group_opt)->excludes(all_opt);
    group_opt->excludes(all_opt);
    run_cmd->add_option("--draws", run.draws, "Number of Monte Carlo draws");
    run_cmd->add_option("--seed", run.seed, "64-bit seed");
    run_cmd->add_option("--lambda", run.lambda, "Cutting level range lo:hi (or one value)");
    run_cmd->add_option("--rule", run.rule,
                        "pessimistic-paper | pessimistic-standard | optimistic");
    run_cmd->add_option("--intervals", run.intervals, "Sample interval evaluations: on|off");
    run_cmd->add_option("--cutoff", run.cutoff, "Highest high-risk category for error rates");
    run_cmd->add_option("--workers", run.workers, "Worker threads (0 = all cores)");
    run_cmd->add_option("--out", run.out, "Output path (default stdout)");
    run_cmd->add_option("--format", run.format, "csv | json");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Load and validate a project file");
    validate_cmd->add_option("project", validate_path, "Project file")->required();

    std::string deck_path;
    std::optional<double> z;
    std::string weights_format = "table";
    auto* weights_cmd = app.add_subcommand("weights", "Revised Simos weights from a card deck");
    weights_cmd->add_option("deck", deck_path, "Deck file")->required();
    weights_cmd->add_option("--z", z, "Ratio of the last rank to the first (overrides the file)");
    weights_cmd->add_option("--format", weights_format, "table | json");

    std::string npv_path;
    double rate = 0.0;
    std::string scenarios;
    std::string npv_reference;
    auto* npv_cmd = app.add_subcommand("npv", "Scenario cash flows and net present values");
    npv_cmd->add_option("cashflows", npv_path, "Project file or {id: [flows]} JSON")->required();
    npv_cmd->add_option("--rate", rate, "Discount rate")->required();
    npv_cmd->add_option("--scenarios", scenarios, "Comma-separated severities, e.g. 0.2,0.4");
    npv_cmd->add_option("--reference", npv_reference, "Reference tables to echo");

    std::string dev_project;
    std::string dev_reference;
    std::optional<std::uint64_t> dev_draws;
    std::optional<std::uint64_t> dev_seed;
    unsigned dev_workers = 0;
    auto* dev_cmd = app.add_subcommand("deviations", "Per-cell deltas against reference tables");
    dev_cmd->add_option("project", dev_project, "Project file")->required();
    dev_cmd->add_option("--reference", dev_reference, "Reference tables")->required();
    dev_cmd->add_option("--draws", dev_draws, "Number of Monte Carlo draws");
    dev_cmd->add_option("--seed", dev_seed, "64-bit seed");
    dev_cmd->add_option("--workers", dev_workers, "Worker threads (0 = all cores)");

    std::string serve_dir;
    std::string serve_bind;
    int serve_port = 0;
    auto* serve_cmd = app.add_subcommand("serve", "HTTP+JSON service");
    serve_cmd->add_option("--dir", serve_dir, "Project directory (loaded at start, written through)");
    serve_cmd->add_option("--bind", serve_bind, "Bind address (default $CREDITSORT_BIND or 127.0.0.1)");
    serve_cmd->add_option("--port", serve_port, "Port (default $CREDITSORT_PORT or 8080)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfiguration;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(run);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(validate_path);
        }
        if (weights_cmd->parsed()) {
            return cmd_weights(deck_path, z, weights_format);
        }
        if (npv_cmd->parsed()) {
            return cmd_npv(npv_path, rate, scenarios, npv_reference);
        }
        if (dev_cmd->parsed()) {
            return cmd_deviations(dev_project, dev_reference, dev_draws, dev_seed, dev_workers);
        }
        if (serve_cmd->parsed()) {
            return cmd_serve(serve_dir, serve_bind, serve_port);
        }
    } catch (const cs::ValidationError& e) {
        std::cerr << "validation failed:\n" << e.what() << '\n';
        return kExitValidation;
    } catch (const cs::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const cs::InsufficientDataError& e) {
        std::cerr << "insufficient data: " << e.what() << '\n';
        return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfiguration;
    }
    return kExitConfiguration;
}
