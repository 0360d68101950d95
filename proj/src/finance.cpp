#include "creditsort/finance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace creditsort::finance {

void check_series(const CashFlowSeries& series)
{
    if (series.flows.empty()) {
        throw ConfigurationError("cash-flow series is empty");
    }
    for (std::size_t t = 0; t < series.flows.size(); ++t) {
        if (!std::isfinite(series.flows[t])) {
            throw ConfigurationError("cash flow at t = " + std::to_string(t + 1) +
                                     " is not finite");
        }
    }
}

CashFlowSeries apply_scenario(const CashFlowSeries& series, const ScenarioSpec& spec)
{
    check_series(series);
    if (!(spec.severity >= 0.0 && spec.severity < 1.0)) {
        std::ostringstream msg;
        msg << "scenario severity " << spec.severity << " outside [0, 1)";
        throw ConfigurationError(msg.str());
    }
    CashFlowSeries out = series;
    for (double& flow : out.flows) {
        if (flow > 0.0) {
            flow *= 1.0 - spec.severity;
        } else if (flow < 0.0) {
            flow *= 1.0 + spec.severity;
        }
    }
    return out;
}

double npv(const CashFlowSeries& series, double rate)
{
    check_series(series);
    if (!(rate > -1.0) || !std::isfinite(rate)) {
        std::ostringstream msg;
        msg << "discount rate " << rate << " must exceed -1";
        throw ConfigurationError(msg.str());
    }
    double total = 0.0;
    for (std::size_t t = 0; t < series.flows.size(); ++t) {
        total += series.flows[t] / std::pow(1.0 + rate, static_cast<double>(t + 1));
    }
    return total;
}

double quantile(std::vector<double> sample, double q)
{
    if (sample.empty()) {
        throw InsufficientDataError("quantile of an empty sample");
    }
    std::sort(sample.begin(), sample.end());
    const double h = static_cast<double>(sample.size() - 1) * q;
    const auto below = static_cast<std::size_t>(std::floor(h));
    const std::size_t above = std::min(below + 1, sample.size() - 1);
    return sample[below] + (h - static_cast<double>(below)) * (sample[above] - sample[below]);
}

Quartiles quartiles(const std::vector<double>& sample)
{
    return {quantile(sample, 0.25), quantile(sample, 0.50), quantile(sample, 0.75)};
}

ProfileOverride profiles_from_quartiles(const SectorRatioSamples& samples,
                                        const std::map<std::string, Direction>& directions,
                                        const std::map<std::string, double>& cross_sector_best)
{
    ProfileOverride out;
    for (const auto& [ratio, sample] : samples) {
        if (sample.size() < 4) {
            throw InsufficientDataError("ratio '" + ratio + "' has " +
                                        std::to_string(sample.size()) +
                                        " observations; quartile profiles need at least 4");
        }
        const auto dir = directions.find(ratio);
        const auto best = cross_sector_best.find(ratio);
        if (dir == directions.end() || best == cross_sector_best.end()) {
            throw ConfigurationError("ratio '" + ratio +
                                     "' lacks a direction or a cross-sector best value");
        }
        const Quartiles q = quartiles(sample);
        std::vector<double> column = dir->second == Direction::gain
                                         ? std::vector<double>{q.q25, q.q50, q.q75}
                                         : std::vector<double>{q.q75, q.q50, q.q25};
        if (oriented(best->second, dir->second) < oriented(column.back(), dir->second)) {
            std::ostringstream msg;
            msg << "cross-sector best " << best->second << " for ratio '" << ratio
                << "' is worse than the sector's safest quartile " << column.back();
            throw ConfigurationError(msg.str());
        }
        column.push_back(best->second);
        out[ratio] = std::move(column);
    }
    return out;
}

std::map<std::string, double>
cross_sector_best(const std::map<std::string, SectorRatioSamples>& sectors,
                  const std::map<std::string, Direction>& directions)
{
    std::map<std::string, double> out;
    for (const auto& [sector, samples] : sectors) {
        for (const auto& [ratio, sample] : samples) {
            const auto dir = directions.find(ratio);
            if (dir == directions.end()) {
                throw ConfigurationError("ratio '" + ratio + "' has no direction");
            }
            const Quartiles q = quartiles(sample);
            const double safest = dir->second == Direction::gain ? q.q75 : q.q25;
            const auto it = out.find(ratio);
            if (it == out.end()) {
                out[ratio] = safest;
            } else if (oriented(safest, dir->second) > oriented(it->second, dir->second)) {
                it->second = safest;
            }
        }
    }
    return out;
}

} // namespace creditsort::finance
