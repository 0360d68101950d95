#pragma once

#include "creditsort/core_model.hpp"

#include <map>
#include <string>
#include <vector>

namespace creditsort::finance {

/// Yearly business-plan cash flows; flows[0] falls at t = 1.
struct CashFlowSeries {
    std::vector<double> flows;
    bool operator==(const CashFlowSeries&) const = default;
};

/// Pessimistic scenario: inflows shrink and outflows grow by the severity s.
struct ScenarioSpec {
    double severity = 0.0; // in [0, 1)
};

/// Throws ConfigurationError for an empty series or non-finite flows.
void check_series(const CashFlowSeries& series);

/// Positive flows times (1 - s), negative flows times (1 + s), zeros kept.
/// Throws ConfigurationError unless 0 <= s < 1.
CashFlowSeries apply_scenario(const CashFlowSeries& series, const ScenarioSpec& spec);

/// End-of-year discounting: sum over t of flow_t / (1 + r)^t, t = 1..T, summed
/// in ascending t. Throws ConfigurationError when r <= -1.
double npv(const CashFlowSeries& series, double rate);

/// Quantile by linear interpolation between order statistics (h = (n - 1) q).
/// Throws InsufficientDataError on an empty sample.
double quantile(std::vector<double> sample, double q);

struct Quartiles {
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
};

Quartiles quartiles(const std::vector<double>& sample);

/// Observations of one financial ratio across the firms of a sector.
using SectorRatioSamples = std::map<std::string, std::vector<double>>; // ratio id -> sample

/// Profile columns b_1..b_{p-1} for the listed ratios: quartiles riskiest
/// first, then the cross-sector best as the top profile. Throws
/// InsufficientDataError when a ratio has fewer than 4 observations and
/// ConfigurationError when the cross-sector value is worse than b_3.
ProfileOverride profiles_from_quartiles(const SectorRatioSamples& samples,
                                        const std::map<std::string, Direction>& directions,
                                        const std::map<std::string, double>& cross_sector_best);

/// Best of the safest quartile across sectors: max Q75 for gain ratios, min
/// Q25 for cost ratios.
std::map<std::string, double>
cross_sector_best(const std::map<std::string, SectorRatioSamples>& sectors,
                  const std::map<std::string, Direction>& directions);

} // namespace creditsort::finance
