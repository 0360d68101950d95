#include "creditsort/electre_tri.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace creditsort::electre {

const char* to_string(AssignmentRule rule)
{
    switch (rule) {
    case AssignmentRule::pessimistic_standard:
        return "pessimistic-standard";
    case AssignmentRule::pessimistic_paper:
        return "pessimistic-paper";
    case AssignmentRule::optimistic:
        return "optimistic";
    }
    return "?";
}

AssignmentRule rule_from_string(const std::string& text)
{
    if (text == "pessimistic-standard") {
        return AssignmentRule::pessimistic_standard;
    }
    if (text == "pessimistic-paper" || text == "pessimistic") {
        return AssignmentRule::pessimistic_paper;
    }
    if (text == "optimistic") {
        return AssignmentRule::optimistic;
    }
    throw ConfigurationError("unknown assignment rule '" + text +
                             "' (expected pessimistic-standard, pessimistic-paper or optimistic)");
}

double partial_concordance(double a, double b, double q, double p, Direction direction)
{
    const double x = oriented(a, direction);
    const double y = oriented(b, direction);
    if (x >= y - q) {
        return 1.0;
    }
    if (x <= y - p) {
        return 0.0;
    }
    return (x - y + p) / (p - q);
}

double partial_discordance(double a, double b, double p, std::optional<double> v,
                           Direction direction)
{
    if (!v) {
        return 0.0;
    }
    const double x = oriented(a, direction);
    const double y = oriented(b, direction);
    if (x >= y - p) {
        return 0.0;
    }
    if (x <= y - *v) {
        return 1.0;
    }
    return (y - x - p) / (*v - p);
}

void check_weights(std::span<const double> weights)
{
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ConfigurationError("criterion weights must be finite and nonnegative");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "criterion weights must sum to 1 (got " << sum << ")";
        throw ConfigurationError(msg.str());
    }
}

namespace {

double concordance_unchecked(std::span<const double> a, std::span<const double> b,
                             std::span<const CriterionSpec> criteria,
                             std::span<const double> weights)
{
    double c = 0.0;
    for (std::size_t j = 0; j < criteria.size(); ++j) {
        const auto& t = criteria[j].thresholds;
        c += weights[j] *
             partial_concordance(a[j], b[j], t.indifference, t.preference, criteria[j].direction);
    }
    return c;
}

/// A partial discordance lowers the credibility only when it exceeds the
/// concordance by more than rounding noise. A concordance summed to
/// 0.9999999999999999 must not let d = 1 zero out an exact 1. Since d <= 1,
/// a true result also keeps 1 - C away from zero.
bool weakens(double discordance, double concordance)
{
    return discordance > concordance + kCutTolerance;
}

double credibility_unchecked(std::span<const double> a, std::span<const double> b,
                             std::span<const CriterionSpec> criteria,
                             std::span<const double> weights)
{
    const double c = concordance_unchecked(a, b, criteria, weights);
    double sigma = c;
    for (std::size_t j = 0; j < criteria.size(); ++j) {
        const auto& t = criteria[j].thresholds;
        if (!t.veto) {
            continue;
        }
        const double d = partial_discordance(a[j], b[j], t.preference, t.veto, criteria[j].direction);
        if (weakens(d, c)) {
            sigma *= (1.0 - d) / (1.0 - c);
        }
    }
    return sigma;
}

void check_sizes(std::size_t a, std::size_t b, std::size_t criteria, std::size_t weights)
{
    if (a != criteria || b != criteria || weights != criteria) {
        throw ConfigurationError("row, profile and weight sizes must match the criterion count");
    }
}

} // namespace

double concordance(std::span<const double> a, std::span<const double> b,
                   std::span<const CriterionSpec> criteria, std::span<const double> weights)
{
    check_sizes(a.size(), b.size(), criteria.size(), weights.size());
    check_weights(weights);
    return concordance_unchecked(a, b, criteria, weights);
}

double credibility(double concordance, std::span<const double> partial_discordances)
{
    double sigma = concordance;
    for (double d : partial_discordances) {
        if (weakens(d, concordance)) {
            sigma *= (1.0 - d) / (1.0 - concordance);
        }
    }
    return sigma;
}

double outranking_credibility(std::span<const double> a, std::span<const double> b,
                              std::span<const CriterionSpec> criteria,
                              std::span<const double> weights)
{
    check_sizes(a.size(), b.size(), criteria.size(), weights.size());
    check_weights(weights);
    return credibility_unchecked(a, b, criteria, weights);
}

OutrankingScores outranking_scores(std::span<const double> alternative,
                                   const ProfileMatrix& profiles,
                                   std::span<const CriterionSpec> criteria,
                                   std::span<const double> weights)
{
    check_weights(weights);
    OutrankingScores scores;
    scores.sigma_up.reserve(profiles.size());
    scores.sigma_down.reserve(profiles.size());
    for (const auto& profile : profiles) {
        check_sizes(alternative.size(), profile.size(), criteria.size(), weights.size());
        scores.sigma_up.push_back(credibility_unchecked(alternative, profile, criteria, weights));
        scores.sigma_down.push_back(credibility_unchecked(profile, alternative, criteria, weights));
    }
    return scores;
}

namespace {

bool outranks(double sigma, double lambda) { return lambda <= cut_point(sigma); }

int assign_unchecked(const OutrankingScores& s, double lambda, AssignmentRule rule)
{
    const int profiles = static_cast<int>(s.sigma_up.size());
    switch (rule) {
    case AssignmentRule::pessimistic_standard:
        for (int k = profiles; k >= 1; --k) {
            if (outranks(s.sigma_up[k - 1], lambda)) {
                return k + 1;
            }
        }
        return 1;
    case AssignmentRule::pessimistic_paper:
        for (int k = profiles; k >= 1; --k) {
            if (outranks(s.sigma_up[k - 1], lambda) && !outranks(s.sigma_down[k - 1], lambda)) {
                return k + 1;
            }
        }
        return 1;
    case AssignmentRule::optimistic:
        for (int k = 1; k <= profiles; ++k) {
            if (outranks(s.sigma_down[k - 1], lambda) && !outranks(s.sigma_up[k - 1], lambda)) {
                return k;
            }
        }
        return profiles + 1;
    }
    return 1;
}

} // namespace

int assign(const OutrankingScores& scores, double lambda, AssignmentRule rule)
{
    if (!(lambda >= 0.5 && lambda <= 1.0)) {
        std::ostringstream msg;
        msg << "cutting level lambda = " << lambda << " outside [0.5, 1]";
        throw ConfigurationError(msg.str());
    }
    if (scores.sigma_up.size() != scores.sigma_down.size()) {
        throw ConfigurationError("outranking score vectors differ in length");
    }
    return assign_unchecked(scores, lambda, rule);
}

std::vector<LambdaInterval> lambda_breakpoints(const OutrankingScores& scores, AssignmentRule rule)
{
    std::vector<double> cuts;
    for (const auto* sigmas : {&scores.sigma_up, &scores.sigma_down}) {
        for (double sigma : *sigmas) {
            const double t = cut_point(sigma);
            if (t >= 0.5 && t < 1.0) {
                cuts.push_back(t);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(1.0);

    // Every condition has the form lambda <= cut_point(sigma), so the
    // assignment on each piece equals its value at the closed right end.
    std::vector<LambdaInterval> pieces;
    double lo = 0.5;
    bool lo_open = false;
    for (double hi : cuts) {
        const int category = assign(scores, hi, rule);
        if (!pieces.empty() && pieces.back().category == category) {
            pieces.back().hi = hi;
        } else {
            pieces.push_back({lo, hi, lo_open, category});
        }
        lo = hi;
        lo_open = true;
    }
    return pieces;
}

BreakpointDiagnosis diagnose_breakpoints(const OutrankingScores& scores, AssignmentRule rule)
{
    BreakpointDiagnosis diagnosis;
    diagnosis.intervals = lambda_breakpoints(scores, rule);
    for (std::size_t i = 1; i < diagnosis.intervals.size(); ++i) {
        const int before = diagnosis.intervals[i - 1].category;
        const int after = diagnosis.intervals[i].category;
        if (after > before) {
            diagnosis.monotone = false;
        }
        if (std::abs(after - before) > 1) {
            diagnosis.skips_category = true;
        }
    }
    return diagnosis;
}

SortingProblem::SortingProblem(const Project& project)
    : criteria_(project.criteria), categories_(project.scheme.category_count())
{
    for (const auto& alternative : project.alternatives) {
        std::vector<double> lo(criteria_.size());
        std::vector<double> hi(criteria_.size());
        for (std::size_t j = 0; j < criteria_.size(); ++j) {
            const auto it = alternative.evaluations.find(criteria_[j].id);
            if (it == alternative.evaluations.end()) {
                throw ValidationError(ValidationReport{
                    {{"alternatives[" + alternative.id + "].evaluations." + criteria_[j].id,
                      "missing evaluation"}}});
            }
            lo[j] = it->second.lo;
            hi[j] = it->second.hi;
            all_point_ = all_point_ && it->second.is_point();
        }
        ids_.push_back(alternative.id);
        rows_.push_back(std::move(lo));
        upper_.push_back(std::move(hi));
        profiles_.push_back(effective_profiles(project, alternative));
    }
}

std::vector<double> SortingProblem::align(const std::map<std::string, double>& weights) const
{
    std::vector<double> out(criteria_.size());
    for (std::size_t j = 0; j < criteria_.size(); ++j) {
        const auto it = weights.find(criteria_[j].id);
        if (it == weights.end()) {
            throw ConfigurationError("no weight given for criterion '" + criteria_[j].id + "'");
        }
        out[j] = it->second;
    }
    if (weights.size() != criteria_.size()) {
        for (const auto& [id, w] : weights) {
            if (std::none_of(criteria_.begin(), criteria_.end(),
                             [&](const CriterionSpec& c) { return c.id == id; })) {
                throw ConfigurationError("weight given for unknown criterion '" + id + "'");
            }
        }
    }
    return out;
}

OutrankingScores SortingProblem::scores(std::size_t i, std::span<const double> weights) const
{
    return scores(i, rows_[i], weights);
}

OutrankingScores SortingProblem::scores(std::size_t i, std::span<const double> row,
                                        std::span<const double> weights) const
{
    return outranking_scores(row, profiles_[i], criteria_, weights);
}

} // namespace creditsort::electre
