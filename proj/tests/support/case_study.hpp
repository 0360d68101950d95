#pragma once

// Hand-built copy of the bundled case study, typed in independently of the
// fixture generator so fixture tests compare two transcriptions.

#include "creditsort/core_model.hpp"
#include "creditsort/simos.hpp"

#include <array>
#include <string>
#include <vector>

namespace case_study {

inline const std::vector<std::string> kIds = {"g1_1", "g1_2", "g2_3", "g3_4",  "g3_5",  "g4_6",
                                              "g4_7", "g5_8", "g5_9", "g5_10", "g5_11", "g5_12"};

inline std::vector<creditsort::CriterionSpec> criteria()
{
    using namespace creditsort;
    std::vector<CriterionSpec> out;
    for (const auto& id : kIds) {
        CriterionSpec c;
        c.id = id;
        c.direction = id == "g5_11" ? Direction::cost : Direction::gain;
        if (id == "g4_6" || id == "g4_7") {
            c.scale = OrdinalScale{0, 1};
        } else if (id[1] != '5') {
            c.scale = OrdinalScale{1, 5};
        } else {
            c.scale = RatioScale{};
        }
        const std::array<const char*, 5> groups = {"development", "technological", "market",
                                                   "production", "financial"};
        c.group = groups[static_cast<std::size_t>(id[1] - '1')];
        out.push_back(c);
    }
    return out;
}

// Evaluation matrix, one row per company.
inline const std::vector<std::pair<std::string, std::vector<double>>> kEvaluations = {
    {"A", {4, 3, 3, 4, 3, 0, 0, .55, .06, .24, .18, .74}},
    {"B", {4, 5, 5, 5, 1, 0, 1, .72, .17, .03, .12, .51}},
    {"C", {5, 3, 5, 2, 5, 1, 1, .18, .05, .94, .3, .56}},
    {"D", {4, 5, 3, 2, 5, 1, 0, .06, .14, .52, .11, .26}},
};

inline const std::vector<std::vector<double>> kQualitativeProfiles = {
    {1, 1, 1, 1, 1, 0, 0},
    {2, 2, 2, 2, 2, 0, 0},
    {3, 3, 3, 3, 3, 0, 1},
    {4, 4, 4, 4, 4, 1, 1},
};

// Sector financial profiles b1..b4 over g5_8 .. g5_12, keyed by company.
inline const std::vector<std::pair<std::string, std::vector<std::vector<double>>>> kFinancialProfiles = {
    {"A", {{0, .03, -.03, 5.44, .02}, {.01, .05, .01, 1.42, .07}, {.2, .07, .05, .14, .18}, {1.34, .1, .1, .14, .21}}},
    {"B", {{0, .03, -.01, 3.72, .01}, {.17, .05, .03, 1.22, .06}, {1.34, .07, .09, .31, .16}, {1.34, .1, .1, .14, .21}}},
    {"C", {{0, .03, -.01, 3.14, .01}, {.09, .05, .04, 1.07, .06}, {.43, .07, .1, .28, .16}, {1.34, .1, .1, .14, .21}}},
    {"D", {{0, .03, -.04, 2.55, .03}, {.07, .05, 0, .67, .08}, {.91, .07, .04, .14, .21}, {1.34, .1, .1, .14, .21}}},
};

inline const std::vector<std::pair<std::string, std::vector<double>>> kWeights = {
    {"DM1", {.025, .025, .165, .056, .056, .196, .181, .04, .04, .072, .072, .072}},
    {"DM2", {.053, .053, .0934, .174, .184, .164, .023, .033, .033, .0632, .0632, .0632}},
    {"DM3", {.112, .112, .139, .019, .019, .072, .06, .046, .046, .125, .125, .125}},
    {"DM4", {.033, .033, .149, .054, .16, .064, .17, .023, .023, .097, .097, .097}},
    {"DM5", {.022, .022, .1, .061, .074, .035, .087, .112, .112, .125, .125, .125}},
};

inline creditsort::WeightVector weights(const std::string& dm)
{
    for (const auto& [id, row] : kWeights) {
        if (id == dm) {
            creditsort::WeightVector out;
            for (std::size_t j = 0; j < kIds.size(); ++j) {
                out[kIds[j]] = row[j];
            }
            return out;
        }
    }
    return {};
}

inline creditsort::CardDeck dm1_deck()
{
    return {{{"g1_1", "g1_2"}, {"g5_8", "g5_9"}, {"g3_4", "g3_5"}, {"g5_10", "g5_11", "g5_12"},
             {"g2_3"}, {"g4_7"}, {"g4_6"}},
            {0, 0, 0, 5, 0, 0},
            8.0};
}

/// Point-evaluation project with per-company sector overrides; base
/// financial columns are company A's sector.
inline creditsort::Project project()
{
    using namespace creditsort;
    Project p;
    p.criteria = criteria();
    p.scheme.categories = {"C1", "C2", "C3", "C4", "C5"};
    for (std::size_t k = 0; k < 4; ++k) {
        auto row = kQualitativeProfiles[k];
        const auto& fin = kFinancialProfiles.front().second[k];
        row.insert(row.end(), fin.begin(), fin.end());
        p.scheme.base_profiles.push_back(row);
    }
    for (const auto& [company, rows] : kFinancialProfiles) {
        ProfileOverride columns;
        for (std::size_t j = 0; j < 5; ++j) {
            for (std::size_t k = 0; k < 4; ++k) {
                columns[kIds[7 + j]].push_back(rows[k][j]);
            }
        }
        p.scheme.overrides["sector_" + company] = columns;
    }
    for (const auto& [id, row] : kEvaluations) {
        Alternative a;
        a.id = id;
        a.sector = "sector_" + id;
        for (std::size_t j = 0; j < kIds.size(); ++j) {
            a.evaluations[kIds[j]] = Evaluation::point(row[j]);
        }
        p.alternatives.push_back(a);
    }
    return p;
}

} // namespace case_study
