#pragma once

#include "creditsort/core_model.hpp"
#include "creditsort/finance.hpp"
#include "creditsort/simos.hpp"
#include "creditsort/smaa.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace creditsort::io {

inline constexpr int kSchemaVersion = 1;

/// How one decision maker's weights are given.
using WeightModel = std::variant<WeightVector, CardDeck, smaa::IntervalWeights>;

struct DecisionMaker {
    std::string id;
    WeightModel model;
    bool operator==(const DecisionMaker&) const = default;
};

/// Run parameters stored with a project. Lambda lives in `run.lambda`;
/// worker count is a property of the machine and is never stored.
struct ProjectFile {
    int schema_version = kSchemaVersion;
    std::string name;
    Project project;
    std::vector<DecisionMaker> decision_makers;
    smaa::RunConfig run;
    std::map<std::string, finance::CashFlowSeries> cash_flows; // alternative id -> series
    std::optional<double> discount_rate;
    std::map<std::string, finance::SectorRatioSamples> ratio_samples; // sector -> samples

    const DecisionMaker& decision_maker(const std::string& id) const; // throws ConfigurationError
    bool operator==(const ProjectFile&) const = default;
};

/// Semantic checks beyond validate_project: decision-maker weight models,
/// run parameters, cash flows. Locations name the decision maker.
ValidationReport validate_project_file(const ProjectFile& file);

/// Parses JSON text. Syntax faults throw ParseError (1-based line/column);
/// schema faults (unknown fields, wrong types) throw ValidationError.
ProjectFile parse_project(const std::string& text);

/// parse_project followed by validate_project_file; throws ValidationError
/// when the report is not empty.
ProjectFile parse_and_validate(const std::string& text);

/// Reads, parses and validates a project file.
ProjectFile load_project(const std::filesystem::path& path);

std::string serialize_project(const ProjectFile& file);

/// Weights a decision maker contributes to a run: fixed vectors verbatim,
/// decks resolved with the revised Simos procedure, intervals as a box.
smaa::WeightSampler sampler_for(const DecisionMaker& dm, std::span<const std::string> criteria);

/// Point weight vector of a decision maker; nullopt for interval models.
std::optional<WeightVector> point_weights(const DecisionMaker& dm,
                                          std::span<const std::string> criteria);

enum class ReportFormat { csv, json };

ReportFormat format_from_string(const std::string& text); // throws ConfigurationError

/// CSV: header `alternative,dm,pi_1..pi_p,modal,type_i,type_ii,se_1..se_p`,
/// one row per (alternative, report). Missing error figures are written NA.
std::string report_csv(std::span<const smaa::AcceptabilityReport> reports);
std::string report_json(std::span<const smaa::AcceptabilityReport> reports);
std::vector<smaa::AcceptabilityReport> parse_report_json(const std::string& text);

/// Throws std::runtime_error when the file cannot be written.
void write_report(std::span<const smaa::AcceptabilityReport> reports, ReportFormat format,
                  const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_hex(const std::filesystem::path& path);

/// Checks every `<hex>  <name>` line of a manifest against the files next to
/// it. Returns one violation per missing or altered file.
ValidationReport verify_manifest(const std::filesystem::path& manifest);

} // namespace creditsort::io
