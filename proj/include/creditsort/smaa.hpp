#pragma once

#include "creditsort/core_model.hpp"
#include "creditsort/electre_tri.hpp"
#include "creditsort/random.hpp"
#include "creditsort/simos.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace creditsort::smaa {

struct WeightBounds {
    double lo = 0.0;
    double hi = 1.0;
    bool operator==(const WeightBounds&) const = default;
};

using IntervalWeights = std::map<std::string, WeightBounds>;

struct FixedWeights {
    WeightVector weights;
    bool operator==(const FixedWeights&) const = default;
};
struct SimplexUniform {
    bool operator==(const SimplexUniform&) const = default;
};
struct BoxedSimplex {
    IntervalWeights bounds;
    bool operator==(const BoxedSimplex&) const = default;
};

/// Where each draw's weight vector comes from.
using WeightSampler = std::variant<FixedWeights, SimplexUniform, BoxedSimplex>;

inline constexpr std::uint32_t kDefaultAttemptBudget = 10'000;

/// Throws ConfigurationError when the sampler cannot produce a weight vector
/// over `criteria` (fixed weights not summing to 1, empty box polytope, ...).
void check_sampler(const WeightSampler& sampler, std::span<const std::string> criteria);

/// Sampler bound to a criterion order. Interval mode draws uniformly from the
/// simplex intersected with the box, by rejection from whichever exact proposal
/// has the smaller volume: uniform on the box over n-1 coordinates (last
/// coordinate = 1 - sum) or uniform on the simplex.
class PreparedWeightSampler {
public:
    PreparedWeightSampler(const WeightSampler& sampler, std::span<const std::string> criteria,
                          std::uint32_t attempt_budget = kDefaultAttemptBudget);

    /// Writes one weight vector (criterion order) into `out`.
    void sample(DrawStream& stream, std::span<double> out) const;
    std::size_t size() const { return n_; }
    bool uses_box_proposal() const { return box_proposal_; }

private:
    enum class Mode { fixed, simplex, interval };
    Mode mode_ = Mode::simplex;
    std::size_t n_ = 0;
    std::vector<double> fixed_;
    std::vector<double> lo_;
    std::vector<double> hi_;
    std::size_t free_index_ = 0; // coordinate solved for in the box proposal
    bool box_proposal_ = true;
    std::uint32_t budget_ = kDefaultAttemptBudget;
};

WeightVector sample_weights(const WeightSampler& sampler, std::span<const std::string> criteria,
                            DrawStream& stream);

/// Point evaluations verbatim; ordinal intervals uniform over the integers
/// lo..hi; ratio intervals uniform over [lo, hi].
double sample_evaluation(const Evaluation& evaluation, const Scale& scale, DrawStream& stream);

struct RunConfig {
    std::uint64_t draws = 10'000;
    std::uint64_t seed = 0;
    LambdaSpec lambda;
    electre::AssignmentRule rule = electre::AssignmentRule::pessimistic_paper;
    bool evaluation_sampling = false;
    /// Highest high-risk category for type I/II errors; unset means not reported.
    std::optional<int> cutoff;
    /// Worker threads; 0 picks the hardware concurrency. Never affects results.
    unsigned workers = 0;
    std::uint32_t attempt_budget = kDefaultAttemptBudget;

    bool operator==(const RunConfig&) const = default;
};

struct ErrorRates {
    int modal_category = 1;
    std::optional<double> type_i;  // low-risk modal class, mass on high-risk classes
    std::optional<double> type_ii; // high-risk modal class, mass on low-risk classes
};

/// Categories 1..cutoff are high risk. Throws ConfigurationError unless
/// 1 <= cutoff <= p - 1.
ErrorRates error_rates(std::span<const double> acceptability, int cutoff);

/// Most probable category; ties go to the lower (riskier) category.
int modal_category(std::span<const double> acceptability);

struct AlternativeAcceptability {
    std::string alternative;
    std::vector<double> acceptability;   // pi^1 .. pi^p
    std::vector<double> standard_error;  // sqrt(pi (1 - pi) / draws)
    int modal_category = 1;
    std::optional<double> type_i;
    std::optional<double> type_ii;

    bool operator==(const AlternativeAcceptability&) const = default;
};

struct AcceptabilityReport {
    std::string label; // decision maker id, "group", ...
    std::size_t categories = 0;
    std::uint64_t draws = 0;
    std::optional<int> cutoff;
    std::vector<AlternativeAcceptability> rows;

    const AlternativeAcceptability& row(const std::string& alternative) const;
    bool operator==(const AcceptabilityReport&) const = default;
};

/// Monte Carlo category acceptability indices. Bit-identical for identical
/// (project, sampler, config) whatever `config.workers` is.
AcceptabilityReport run_smaa(const Project& project, const WeightSampler& sampler,
                             const RunConfig& config, std::string label = {});

/// Exact acceptabilities for fixed weights and point evaluations: the
/// fraction of [lo, hi] on which each category is assigned. One vector per
/// alternative, project order. Throws UnsupportedInputError on interval data.
std::vector<std::vector<double>> exact_acceptability(const Project& project,
                                                     const WeightVector& weights,
                                                     const LambdaSpec& lambda,
                                                     electre::AssignmentRule rule);

/// Componentwise min/max over the decision makers' weight vectors.
IntervalWeights interval_weights_from_dms(std::span<const WeightVector> dm_vectors);

} // namespace creditsort::smaa
