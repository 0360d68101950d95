#include "creditsort/project_io.hpp"

#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

using nlohmann::json;
namespace fs = std::filesystem;
namespace io = creditsort::io;

namespace {

const fs::path kData = CREDITSORT_DATA_DIR;
const std::string kCli = CREDITSORT_CLI;

struct Result {
    int code = -1;
    std::string out;
};

// Runs the CLI with stderr folded into stdout unless `stdout_only`.
Result cli(const std::string& args, bool stdout_only = false)
{
    const std::string command = "\"" + kCli + "\" " + args + (stdout_only ? " 2>/dev/null" : " 2>&1");
    Result r;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        r.out.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name)
{
    return "\"" + (kData / name).string() + "\"";
}

fs::path scratch()
{
    const auto dir = fs::temp_directory_path() / "creditsort_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string quoted(const fs::path& p)
{
    return "\"" + p.string() + "\"";
}

// modal category per alternative from a CSV report with a single label
std::map<std::string, int> modal_by_alternative(const std::string& csv)
{
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',')) {
            header.push_back(cell);
        }
    }
    const auto modal_column = static_cast<std::size_t>(
        std::find(header.begin(), header.end(), "modal") - header.begin());
    std::map<std::string, int> out;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            cells.push_back(cell);
        }
        out[cells.at(0)] = std::stoi(cells.at(modal_column));
    }
    return out;
}

} // namespace

TEST_CASE("validate reports the project's shape")
{
    const auto r = cli("validate " + data("case_study.json"));
    CHECK(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("4 alternatives, 12 criteria, 5 categories"));
}

TEST_CASE("first decision maker, optimistic rule: company A is modal C4")
{
    const auto r = cli("run " + data("case_study.json") +
                           " --dm DM1 --draws 10000 --seed 42 --rule optimistic",
                       true);
    REQUIRE(r.code == 0);
    CHECK(modal_by_alternative(r.out).at("A") == 4);
}

TEST_CASE("inverted lambda range is a configuration fault")
{
    const auto r = cli("run " + data("case_study.json") + " --lambda 0.9:0.8");
    CHECK(r.code == 2);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("0.9"));
    CHECK(cli("run " + data("case_study.json") + " --rule median").code == 2);
    CHECK(cli("run " + data("case_study.json") + " --draws 0").code == 2);
    CHECK(cli("run " + data("case_study.json") + " --no-such-flag").code == 2);
}

TEST_CASE("validation faults exit with 1 and print the report")
{
    auto j = json::parse(io::read_text_file(kData / "case_study.json"));
    j["decision_makers"][1]["weights"]["g3_4"] = 0.074;
    const auto path = scratch() / "bad_weights.json";
    io::write_text_file(path, j.dump(2));
    const auto r = cli("run " + quoted(path));
    CHECK(r.code == 1);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("decision_makers[DM2]"));
    CHECK(cli("validate " + quoted(path)).code == 1);

    io::write_text_file(scratch() / "broken.json", "{ \"name\": ");
    CHECK(cli("validate " + quoted(scratch() / "broken.json")).code == 1);
}

TEST_CASE("identical seeds give byte-identical report files")
{
    const auto dir = scratch();
    for (const char* format : {"csv", "json"}) {
        const auto a = dir / (std::string("first.") + format);
        const auto b = dir / (std::string("second.") + format);
        const std::string common = "run " + data("case_study.json") +
                                   " --all-dms --draws 3000 --seed 9 --format " + format;
        REQUIRE(cli(common + " --workers 1 --out " + quoted(a)).code == 0);
        REQUIRE(cli(common + " --workers 8 --out " + quoted(b)).code == 0);
        CHECK(io::read_text_file(a) == io::read_text_file(b));
    }
    const auto reports = io::parse_report_json(io::read_text_file(dir / "first.json"));
    REQUIRE(reports.size() == 5);
    CHECK(reports.front().label == "DM1");
}

TEST_CASE("group run labels its report")
{
    const auto r = cli("run " + data("case_study.json") + " --group --draws 500 --format json", true);
    REQUIRE(r.code == 0);
    const auto reports = io::parse_report_json(r.out);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].label == "group");
    CHECK(reports[0].rows.size() == 4);
}

TEST_CASE("interval evaluations need sampling switched on")
{
    const auto on = cli("run " + data("case_study_intervals.json") +
                        " --dm DM1 --draws 500 --intervals on");
    CHECK(on.code == 0);
    const auto off = cli("run " + data("case_study_intervals.json") +
                         " --dm DM1 --draws 500 --intervals off");
    CHECK(off.code == 2);
}

TEST_CASE("weights table for the first decision maker's deck")
{
    const auto r = cli("weights " + data("dm1_deck.json"));
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("K' = 40.63"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("0.024609"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("g1_1 ~ g1_2 < g5_8 ~ g5_9"));

    const auto path = scratch() / "flat_deck.json";
    io::write_text_file(path, R"({"ranks": [["a", "b", "c", "d"]], "white_cards": [], "z": 2})");
    const auto flat = cli("weights " + quoted(path) + " --format json", true);
    REQUIRE(flat.code == 0);
    for (const auto& [id, w] : json::parse(flat.out)["weights"].items()) {
        CHECK(w.get<double>() == 0.25);
    }
    CHECK(cli("weights " + data("dm1_deck.json") + " --z 1").code == 2);
}

TEST_CASE("weights printed as JSON reproduce the deck's report")
{
    const auto resolved = cli("weights " + data("dm1_deck.json") + " --format json", true);
    REQUIRE(resolved.code == 0);
    const auto weights = json::parse(resolved.out)["weights"];

    auto base = json::parse(io::read_text_file(kData / "case_study.json"));
    auto via_deck = base;
    auto via_weights = base;
    via_deck["decision_makers"][0] = {{"id", "DM1"},
                                      {"deck", json::parse(io::read_text_file(kData / "dm1_deck.json"))}};
    via_weights["decision_makers"][0] = {{"id", "DM1"}, {"weights", weights}};
    const auto deck_path = scratch() / "via_deck.json";
    const auto weights_path = scratch() / "via_weights.json";
    io::write_text_file(deck_path, via_deck.dump(2));
    io::write_text_file(weights_path, via_weights.dump(2));

    const std::string flags = " --dm DM1 --draws 4000 --seed 3";
    const auto a = cli("run " + quoted(deck_path) + flags, true);
    const auto b = cli("run " + quoted(weights_path) + flags, true);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("npv subcommand")
{
    const auto sums = cli("npv " + data("case_study.json") + " --rate 0", true);
    REQUIRE(sums.code == 0);
    CHECK_THAT(sums.out, Catch::Matchers::ContainsSubstring("153732.50"));

    const auto scen = cli("npv " + data("case_study.json") + " --rate 0.0793 --scenarios 0,0.2,0.4", true);
    REQUIRE(scen.code == 0);
    std::istringstream lines(scen.out);
    std::string line;
    std::map<std::string, std::string> value_by_row;
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string alt;
        std::string s;
        std::string npv;
        cells >> alt >> s >> npv;
        value_by_row[alt + "@" + s] = npv;
    }
    CHECK(value_by_row.at("A@0") == "114033.64");
    CHECK(value_by_row.at("A@0.2") == "75092.75");

    const auto reference = cli("npv " + data("case_study.json") + " --rate 0.0793 --reference " +
                                   data("reference_tables.json"),
                               true);
    CHECK_THAT(reference.out, Catch::Matchers::ContainsSubstring("140275.51"));

    CHECK(cli("npv " + data("case_study.json") + " --rate -1").code == 2);

    const auto plain = scratch() / "flows.json";
    io::write_text_file(plain, R"({"x": [100]})");
    CHECK_THAT(cli("npv " + quoted(plain) + " --rate 0.1", true).out,
               Catch::Matchers::ContainsSubstring("90.91"));
}
