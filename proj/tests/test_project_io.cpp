#include "creditsort/project_io.hpp"
#include "support/case_study.hpp"

#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <filesystem>
#include <random>

using namespace creditsort;
using namespace creditsort::io;
using Catch::Approx;
using nlohmann::json;

namespace fs = std::filesystem;

namespace {

const fs::path kData = CREDITSORT_DATA_DIR;

json fixture_json()
{
    return json::parse(read_text_file(kData / "case_study.json"));
}

fs::path scratch_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("creditsort_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

template <class Fn>
void require_validation_fault(Fn&& fn, const std::string& location_part)
{
    try {
        fn();
        FAIL("expected a validation fault at " << location_part);
    } catch (const ValidationError& e) {
        bool found = false;
        for (const auto& v : e.report().violations) {
            found = found || v.location.find(location_part) != std::string::npos;
        }
        INFO(e.what());
        CHECK(found);
    }
}

smaa::AcceptabilityReport sample_report()
{
    smaa::AcceptabilityReport r;
    r.label = "DM1";
    r.categories = 3;
    r.draws = 7;
    r.cutoff = 1;
    r.rows.push_back({"A", {1.0 / 7, 2.0 / 7, 4.0 / 7}, {0.1322, 0.17, 0.187}, 3, 1.0 / 7, std::nullopt});
    r.rows.push_back({"B", {1.0, 0.0, 0.0}, {0, 0, 0}, 1, std::nullopt, 0.0});
    return r;
}

} // namespace

TEST_CASE("bundled case study matches the independent transcription")
{
    const auto file = load_project(kData / "case_study.json");
    CHECK(file.schema_version == kSchemaVersion);
    CHECK(file.project == case_study::project());
    REQUIRE(file.decision_makers.size() == 5);
    for (const auto& dm : file.decision_makers) {
        const auto* w = std::get_if<WeightVector>(&dm.model);
        REQUIRE(w != nullptr);
        CHECK(*w == case_study::weights(dm.id));
    }
    CHECK(file.run.lambda == LambdaSpec{0.65, 0.85});
    CHECK(file.run.draws == 10'000);
    CHECK(file.run.cutoff == 3);
    CHECK(file.discount_rate == 0.0793);
    CHECK(file.cash_flows.at("A").flows ==
          std::vector<double>{-43534.00, 69616.91, 9178.96, 118470.63});
    CHECK(file.project.alternatives.size() == 4);
    CHECK(file.project.criteria.size() == 12);
    CHECK(file.project.scheme.categories.size() == 5);
}

TEST_CASE("sector samples reproduce the bundled financial profiles")
{
    const auto file = load_project(kData / "case_study.json");
    std::map<std::string, Direction> directions;
    for (const auto& [id, sample] : file.ratio_samples.begin()->second) {
        directions[id] = file.project.criteria[file.project.criterion_index(id)].direction;
    }
    const auto best = finance::cross_sector_best(file.ratio_samples, directions);
    for (const auto& [sector, samples] : file.ratio_samples) {
        const auto columns = finance::profiles_from_quartiles(samples, directions, best);
        for (const auto& [id, column] : columns) {
            const auto& stored = file.project.scheme.overrides.at(sector).at(id);
            for (std::size_t k = 0; k < column.size(); ++k) {
                CHECK(column[k] == Approx(stored[k]).margin(1e-9));
            }
        }
    }
}

TEST_CASE("every bundled project file loads cleanly")
{
    for (const auto& entry : fs::directory_iterator(kData)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("case_study", 0) == 0) {
            INFO(name);
            CHECK_NOTHROW(load_project(entry.path()));
        }
    }
    const auto intervals = load_project(kData / "case_study_intervals.json");
    CHECK(intervals.project.alternatives[0].evaluations.at("g2_3") == Evaluation::interval(3, 5));
}

TEST_CASE("manifest checksums")
{
    CHECK(verify_manifest(kData / "MANIFEST.sha256").ok());

    const auto dir = scratch_dir("manifest");
    write_text_file(dir / "x.txt", "abc");
    CHECK(sha256_hex(dir / "x.txt") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    write_text_file(dir / "MANIFEST.sha256",
                    "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad  x.txt\n"
                    "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad  y.txt\n");
    CHECK(verify_manifest(dir / "MANIFEST.sha256").violations.size() == 1);
    write_text_file(dir / "x.txt", "abd");
    CHECK(verify_manifest(dir / "MANIFEST.sha256").violations.size() == 2);
}

TEST_CASE("syntax faults carry line and column")
{
    CHECK_THROWS_AS(parse_project(""), ParseError);
    try {
        parse_project("{\n  \"name\": \"x\",\n  oops\n}");
        FAIL("no parse error");
    } catch (const ParseError& e) {
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("line 3"));
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("column"));
    }
}

TEST_CASE("unknown fields are rejected with their location")
{
    auto j = fixture_json();
    j["criteria"][2]["colour"] = "red";
    require_validation_fault([&] { parse_project(j.dump()); }, "criteria[2].colour");

    j = fixture_json();
    j["surprise"] = 1;
    require_validation_fault([&] { parse_project(j.dump()); }, "surprise");

    j = fixture_json();
    j["run"]["workers"] = 4;
    require_validation_fault([&] { parse_project(j.dump()); }, "run.workers");
}

TEST_CASE("wrong types are schema faults")
{
    auto j = fixture_json();
    j["criteria"][0]["direction"] = "sideways";
    CHECK_THROWS_AS(parse_project(j.dump()), ValidationError);
    j = fixture_json();
    j["alternatives"][0]["evaluations"]["g1_1"] = "four";
    CHECK_THROWS_AS(parse_project(j.dump()), ValidationError);
    j = fixture_json();
    j["schema_version"] = 99;
    CHECK_THROWS_AS(parse_project(j.dump()), ValidationError);
}

TEST_CASE("a decision maker whose weights sum to 0.9 is named in the fault")
{
    auto j = fixture_json();
    j["decision_makers"][0]["weights"]["g4_6"] = 0.096;
    CHECK_NOTHROW(parse_project(j.dump()));
    require_validation_fault([&] { parse_and_validate(j.dump()); }, "decision_makers[DM1]");
}

TEST_CASE("semantic faults in the project are reported on load")
{
    auto j = fixture_json();
    j["profiles"]["base"][0][0] = 5;
    require_validation_fault([&] { parse_and_validate(j.dump()); }, "b2.g1_1");

    j = fixture_json();
    j["run"]["draws"] = 0;
    CHECK_THROWS_AS(parse_and_validate(j.dump()), ValidationError);

    j = fixture_json();
    j["lambda"] = {0.9, 0.8};
    CHECK_THROWS_AS(parse_and_validate(j.dump()), ValidationError);
}

TEST_CASE("project files round-trip")
{
    for (const char* name : {"case_study.json", "case_study_intervals.json"}) {
        const auto file = load_project(kData / name);
        const auto text = serialize_project(file);
        CHECK(parse_project(text) == file);
        CHECK(serialize_project(parse_project(text)) == text);
    }

    auto file = load_project(kData / "case_study.json");
    file.decision_makers.push_back({"deck", case_study::dm1_deck()});
    smaa::IntervalWeights box;
    for (const auto& id : case_study::kIds) {
        box[id] = {0.0, 0.5};
    }
    file.decision_makers.push_back({"box", box});
    file.run.rule = electre::AssignmentRule::optimistic;
    file.run.evaluation_sampling = true;
    file.run.attempt_budget = 123;
    file.run.cutoff.reset();
    file.discount_rate.reset();
    CHECK(parse_project(serialize_project(file)) == file);
}

TEST_CASE("weight models resolve to samplers")
{
    const DecisionMaker deck{"deck", case_study::dm1_deck()};
    const auto w = point_weights(deck, case_study::kIds);
    REQUIRE(w);
    CHECK(w->at("g1_1") == Approx(11.0 / 447));
    CHECK(std::holds_alternative<smaa::FixedWeights>(sampler_for(deck, case_study::kIds)));

    const DecisionMaker box{"box", smaa::IntervalWeights{{"g1_1", {0, 1}}}};
    CHECK_FALSE(point_weights(box, case_study::kIds));
    CHECK(std::holds_alternative<smaa::BoxedSimplex>(sampler_for(box, case_study::kIds)));

    const auto file = load_project(kData / "case_study.json");
    CHECK_THROWS_AS(file.decision_maker("DM9"), ConfigurationError);
    CHECK(file.decision_maker("DM3").id == "DM3");
}

TEST_CASE("csv reports")
{
    const auto report = sample_report();
    const auto csv = report_csv(std::span(&report, 1));
    std::istringstream lines(csv);
    std::string header;
    std::string a;
    std::string b;
    std::getline(lines, header);
    std::getline(lines, a);
    std::getline(lines, b);
    CHECK(header == "alternative,dm,pi_1,pi_2,pi_3,modal,type_i,type_ii,se_1,se_2,se_3");
    CHECK(a.rfind("A,DM1,0.14285714285714285,0.2857142857142857,0.5714285714285714,3,", 0) == 0);
    CHECK(a.find(",NA,") != std::string::npos);
    CHECK(b.rfind("B,DM1,1,0,0,1,NA,0,", 0) == 0);

    const std::vector<smaa::AcceptabilityReport> none;
    CHECK(report_csv(none).find('\n') == report_csv(none).size() - 1);
}

TEST_CASE("json reports round-trip exactly")
{
    std::vector<smaa::AcceptabilityReport> reports{sample_report(), sample_report()};
    reports[1].label = "group";
    reports[1].cutoff.reset();
    const auto text = report_json(reports);
    CHECK(json::parse(text)["schema_version"] == kSchemaVersion);
    CHECK(parse_report_json(text) == reports);
}

TEST_CASE("report files")
{
    const auto dir = scratch_dir("reports");
    const auto report = sample_report();
    write_report(std::span(&report, 1), ReportFormat::json, dir / "r.json");
    CHECK(parse_report_json(read_text_file(dir / "r.json")).front() == report);
    write_report(std::span(&report, 1), ReportFormat::csv, dir / "r.csv");
    CHECK(read_text_file(dir / "r.csv") == report_csv(std::span(&report, 1)));
    CHECK_THROWS_AS(write_report(std::span(&report, 1), ReportFormat::csv, dir / "no" / "such" / "r.csv"),
                    std::runtime_error);
    CHECK_THROWS_AS(read_text_file(dir / "missing.json"), std::runtime_error);
    CHECK(format_from_string("csv") == ReportFormat::csv);
    CHECK_THROWS_AS(format_from_string("xml"), ConfigurationError);
}

TEST_CASE("random reports keep six significant digits")
{
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> count(0, 10'000);
    for (int trial = 0; trial < 200; ++trial) {
        smaa::AcceptabilityReport r;
        r.label = "x";
        r.categories = 2;
        r.draws = 10'000;
        const double pi = count(rng) / 10'000.0;
        r.rows.push_back({"a", {pi, 1 - pi}, {0.001, 0.001}, pi >= 0.5 ? 1 : 2, {}, {}});
        const auto csv = report_csv(std::span(&r, 1));
        const auto line = csv.substr(csv.find('\n') + 1);
        const double parsed = std::stod(line.substr(line.find(",x,") + 3));
        CHECK(parsed == pi);
    }
}
