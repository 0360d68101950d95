#pragma once

#include "creditsort/project_io.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace creditsort::pipeline {

enum class Scope { single_dm, group, all_dms };

struct RunRequest {
    Scope scope = Scope::group;
    std::string dm; // used when scope == single_dm
    smaa::RunConfig config;
};

inline const std::string kGroupLabel = "group";

/// Interval weights spanning every decision maker: point models (fixed or
/// deck) contribute their vector, interval models their bounds.
smaa::IntervalWeights group_weights(const io::ProjectFile& file);

/// One report per selected weight model, labelled by decision-maker id or "group".
std::vector<smaa::AcceptabilityReport> run(const io::ProjectFile& file, const RunRequest& request);

/// Published comparison figures shipped next to the case study. Acceptabilities
/// are stored in percent and converted to fractions on load.
struct ReferenceTables {
    std::map<std::string, std::map<std::string, std::vector<double>>> acceptability; // label -> alt -> pi
    std::map<std::string, smaa::WeightBounds> interval_weights;
    double npv_rate = 0.0;
    std::vector<double> npv_scenarios;
    std::map<std::string, std::vector<double>> npv; // alternative -> one value per scenario
    std::map<std::string, std::map<double, std::vector<double>>> scenario_rows;
    std::vector<double> simos_k;
    double simos_total = 0.0;
    std::map<std::string, int> modal_consensus;
};

ReferenceTables load_reference(const std::filesystem::path& path);

struct CellDeviation {
    std::string table;  // "acceptability" or "npv"
    std::string label;  // decision maker, "group", or scenario severity
    std::string row;    // alternative
    std::string column; // "C3", "s=0.2", ...
    double computed = 0.0;
    double reference = 0.0;
    double delta() const { return computed - reference; }
};

std::vector<CellDeviation> acceptability_deviations(
    const std::vector<smaa::AcceptabilityReport>& reports, const ReferenceTables& reference);

/// NPV of each bundled cash-flow series under every reference scenario, at the
/// reference rate, against the published figures.
std::vector<CellDeviation> npv_deviations(const io::ProjectFile& file,
                                          const ReferenceTables& reference);

/// Plain-text table with one line per cell, plus a summary line per table.
std::string format_deviations(const std::vector<CellDeviation>& cells);

} // namespace creditsort::pipeline
