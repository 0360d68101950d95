#include "creditsort/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace creditsort::pipeline {

namespace {

std::vector<std::string> criterion_ids(const io::ProjectFile& file)
{
    std::vector<std::string> ids;
    for (const auto& c : file.project.criteria) {
        ids.push_back(c.id);
    }
    return ids;
}

std::string format_number(double value, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

} // namespace

smaa::IntervalWeights group_weights(const io::ProjectFile& file)
{
    if (file.decision_makers.empty()) {
        throw ConfigurationError("group run needs at least one decision maker");
    }
    const auto ids = criterion_ids(file);
    std::vector<WeightVector> points;
    std::vector<smaa::IntervalWeights> boxes;
    for (const auto& dm : file.decision_makers) {
        if (auto w = io::point_weights(dm, ids)) {
            points.push_back(std::move(*w));
        } else {
            boxes.push_back(std::get<smaa::IntervalWeights>(dm.model));
        }
    }
    smaa::IntervalWeights out =
        points.empty() ? boxes.front() : smaa::interval_weights_from_dms(points);
    for (const auto& box : boxes) {
        for (const auto& [id, b] : box) {
            auto& target = out[id];
            target.lo = std::min(target.lo, b.lo);
            target.hi = std::max(target.hi, b.hi);
        }
    }
    return out;
}

std::vector<smaa::AcceptabilityReport> run(const io::ProjectFile& file, const RunRequest& request)
{
    const auto ids = criterion_ids(file);
    std::vector<smaa::AcceptabilityReport> out;
    switch (request.scope) {
    case Scope::single_dm: {
        const auto& dm = file.decision_maker(request.dm);
        out.push_back(smaa::run_smaa(file.project, io::sampler_for(dm, ids), request.config, dm.id));
        break;
    }
    case Scope::all_dms:
        if (file.decision_makers.empty()) {
            throw ConfigurationError("project defines no decision makers");
        }
        for (const auto& dm : file.decision_makers) {
            out.push_back(
                smaa::run_smaa(file.project, io::sampler_for(dm, ids), request.config, dm.id));
        }
        break;
    case Scope::group:
        out.push_back(smaa::run_smaa(file.project, smaa::BoxedSimplex{group_weights(file)},
                                     request.config, kGroupLabel));
        break;
    }
    return out;
}

ReferenceTables load_reference(const std::filesystem::path& path)
{
    const auto root = nlohmann::json::parse(io::read_text_file(path));
    ReferenceTables ref;
    for (const auto& [label, rows] : root.at("acceptability_percent").items()) {
        for (const auto& [alt, percents] : rows.items()) {
            auto& target = ref.acceptability[label][alt];
            for (double pct : percents.get<std::vector<double>>()) {
                target.push_back(pct / 100.0);
            }
        }
    }
    for (const auto& [id, pair] : root.at("interval_weights").items()) {
        ref.interval_weights[id] = {pair.at(0).get<double>(), pair.at(1).get<double>()};
    }
    const auto& npv = root.at("npv");
    ref.npv_rate = npv.at("rate").get<double>();
    ref.npv_scenarios = npv.at("scenarios").get<std::vector<double>>();
    for (const auto& [alt, values] : npv.at("values").items()) {
        ref.npv[alt] = values.get<std::vector<double>>();
    }
    for (const auto& [alt, rows] : root.at("scenario_rows").items()) {
        for (const auto& [severity, flows] : rows.items()) {
            ref.scenario_rows[alt][std::stod(severity)] = flows.get<std::vector<double>>();
        }
    }
    ref.simos_k = root.at("simos_dm1").at("k").get<std::vector<double>>();
    ref.simos_total = root.at("simos_dm1").at("total").get<double>();
    for (const auto& [alt, category] : root.at("modal_consensus").items()) {
        ref.modal_consensus[alt] = category.get<int>();
    }
    return ref;
}

std::vector<CellDeviation> acceptability_deviations(
    const std::vector<smaa::AcceptabilityReport>& reports, const ReferenceTables& reference)
{
    std::vector<CellDeviation> out;
    for (const auto& report : reports) {
        const auto table = reference.acceptability.find(report.label);
        if (table == reference.acceptability.end()) {
            continue;
        }
        for (const auto& row : report.rows) {
            const auto ref_row = table->second.find(row.alternative);
            if (ref_row == table->second.end()) {
                continue;
            }
            const std::size_t p = std::min(row.acceptability.size(), ref_row->second.size());
            for (std::size_t k = 0; k < p; ++k) {
                out.push_back({"acceptability", report.label, row.alternative,
                               "C" + std::to_string(k + 1), row.acceptability[k],
                               ref_row->second[k]});
            }
        }
    }
    return out;
}

std::vector<CellDeviation> npv_deviations(const io::ProjectFile& file,
                                          const ReferenceTables& reference)
{
    std::vector<CellDeviation> out;
    for (const auto& [alt, series] : file.cash_flows) {
        const auto ref = reference.npv.find(alt);
        if (ref == reference.npv.end()) {
            continue;
        }
        for (std::size_t s = 0; s < reference.npv_scenarios.size() && s < ref->second.size(); ++s) {
            const double severity = reference.npv_scenarios[s];
            const double value =
                finance::npv(finance::apply_scenario(series, {severity}), reference.npv_rate);
            out.push_back({"npv", "r=" + format_number(reference.npv_rate, 4), alt,
                           "s=" + format_number(severity, 2), value, ref->second[s]});
        }
    }
    return out;
}

std::string format_deviations(const std::vector<CellDeviation>& cells)
{
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-14s %-8s %-4s %-7s %16s %16s %16s\n", "table", "label",
                  "row", "column", "computed", "reference", "delta");
    out += line;
    std::map<std::string, std::pair<double, std::size_t>> worst; // table -> (max |delta|, count)
    for (const auto& c : cells) {
        const int decimals = c.table == "npv" ? 2 : 4;
        std::snprintf(line, sizeof line, "%-14s %-8s %-4s %-7s %16s %16s %16s\n", c.table.c_str(),
                      c.label.c_str(), c.row.c_str(), c.column.c_str(),
                      format_number(c.computed, decimals).c_str(),
                      format_number(c.reference, decimals).c_str(),
                      format_number(c.delta(), decimals).c_str());
        out += line;
        auto& w = worst[c.table];
        w.first = std::max(w.first, std::abs(c.delta()));
        ++w.second;
    }
    for (const auto& [table, w] : worst) {
        std::snprintf(line, sizeof line, "summary %s: %zu cells, max |delta| %s\n", table.c_str(),
                      w.second, format_number(w.first, table == "npv" ? 2 : 4).c_str());
        out += line;
    }
    return out;
}

} // namespace creditsort::pipeline
