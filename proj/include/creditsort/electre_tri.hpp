#pragma once

#include "creditsort/core_model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace creditsort::electre {

/// How an alternative is placed once its credibilities against the profiles
/// are known.
///
/// - pessimistic_standard: scan b_{p-1} .. b_1, first k with sigma(a, b_k) >= lambda
///   gives C_{k+1}, else C_1.
/// - pessimistic_paper: same scan, but the cut also requires sigma(b_k, a) < lambda.
/// - optimistic: scan b_1 .. b_{p-1}, first k with sigma(b_k, a) >= lambda and
///   sigma(a, b_k) < lambda gives C_k, else C_p.
enum class AssignmentRule { pessimistic_standard, pessimistic_paper, optimistic };

const char* to_string(AssignmentRule rule);
AssignmentRule rule_from_string(const std::string& text); // throws ConfigurationError

/// Credibilities of one alternative against the p-1 profiles.
struct OutrankingScores {
    std::vector<double> sigma_up;   // sigma(a, b_k), k = 1..p-1
    std::vector<double> sigma_down; // sigma(b_k, a)

    std::size_t category_count() const { return sigma_up.size() + 1; }
    bool operator==(const OutrankingScores&) const = default;
};

/// c_j(a, b) for "a is at least as good as b" on one criterion. With p == q the
/// function is a step at a = b - q and the ">= -> 1" branch wins.
double partial_concordance(double a, double b, double q, double p, Direction direction);

/// d_j(a, b); identically zero when the criterion has no veto threshold.
double partial_discordance(double a, double b, double p, std::optional<double> v,
                           Direction direction);

/// Throws ConfigurationError unless the weights are nonnegative and sum to 1
/// within 1e-9.
void check_weights(std::span<const double> weights);

/// C(a, b) = sum_j w_j c_j(a_j, b_j). `weights` is aligned with `criteria`.
double concordance(std::span<const double> a, std::span<const double> b,
                   std::span<const CriterionSpec> criteria, std::span<const double> weights);

/// sigma = C * prod over {j : d_j > C} of (1 - d_j) / (1 - C), where d_j > C
/// means d_j exceeds C by more than kCutTolerance.
double credibility(double concordance, std::span<const double> partial_discordances);

/// sigma(a, b) from raw rows.
double outranking_credibility(std::span<const double> a, std::span<const double> b,
                              std::span<const CriterionSpec> criteria,
                              std::span<const double> weights);

OutrankingScores outranking_scores(std::span<const double> alternative,
                                   const ProfileMatrix& profiles,
                                   std::span<const CriterionSpec> criteria,
                                   std::span<const double> weights);

/// Credibilities within this distance of lambda count as equal to it, so the
/// closed ">= lambda" cut survives floating-point noise in sigma.
inline constexpr double kCutTolerance = 1e-12;

/// Largest lambda at which "sigma >= lambda" still holds. assign() and
/// lambda_breakpoints() both compare against this value, so they agree exactly.
inline double cut_point(double sigma) { return sigma + kCutTolerance; }

/// Category index in 1..p. Throws ConfigurationError when lambda is outside [0.5, 1].
int assign(const OutrankingScores& scores, double lambda, AssignmentRule rule);

/// Maximal piece of [0.5, 1] on which the assignment is constant. Pieces are
/// left-open and right-closed except the first, which starts closed at 0.5.
struct LambdaInterval {
    double lo = 0.5;
    double hi = 1.0;
    bool lo_open = false;
    int category = 1;

    bool contains(double lambda) const
    {
        return (lo_open ? lambda > lo : lambda >= lo) && lambda <= hi;
    }
    bool operator==(const LambdaInterval&) const = default;
};

/// Partition of [0.5, 1] into constant-assignment intervals ordered by lambda.
/// Breakpoints are taken from the 2(p-1) credibility values only.
std::vector<LambdaInterval> lambda_breakpoints(const OutrankingScores& scores,
                                               AssignmentRule rule);

struct BreakpointDiagnosis {
    std::vector<LambdaInterval> intervals;
    /// Categories never improve as lambda grows.
    bool monotone = true;
    /// Some lambda step jumps over a category (e.g. C_5 -> C_3).
    bool skips_category = false;

    /// Abrupt or non-monotone reaction to the cutting level: the alternative's
    /// creditworthiness is fragile.
    bool fragile() const { return !monotone || skips_category; }
};

BreakpointDiagnosis diagnose_breakpoints(const OutrankingScores& scores, AssignmentRule rule);

/// Prepared, weight-independent view of a project: criteria, point
/// evaluations and the effective profiles of each alternative, all aligned to
/// the project's criterion order.
class SortingProblem {
public:
    explicit SortingProblem(const Project& project);

    std::size_t alternative_count() const { return rows_.size(); }
    std::size_t criterion_count() const { return criteria_.size(); }
    std::size_t category_count() const { return categories_; }
    std::span<const CriterionSpec> criteria() const { return criteria_; }
    const std::string& alternative_id(std::size_t i) const { return ids_[i]; }
    const ProfileMatrix& profiles(std::size_t i) const { return profiles_[i]; }
    /// Lower/upper evaluation bounds of alternative i, criterion order.
    std::span<const double> lower(std::size_t i) const { return rows_[i]; }
    std::span<const double> upper(std::size_t i) const { return upper_[i]; }
    bool all_point() const { return all_point_; }

    /// Weight map aligned to criterion order; throws ConfigurationError on a
    /// missing or unknown criterion.
    std::vector<double> align(const std::map<std::string, double>& weights) const;

    /// Scores of alternative i evaluated at `row` (defaults to its lower bounds).
    OutrankingScores scores(std::size_t i, std::span<const double> weights) const;
    OutrankingScores scores(std::size_t i, std::span<const double> row,
                            std::span<const double> weights) const;

private:
    std::vector<CriterionSpec> criteria_;
    std::vector<std::string> ids_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::vector<double>> upper_;
    std::vector<ProfileMatrix> profiles_;
    std::size_t categories_ = 0;
    bool all_point_ = true;
};

} // namespace creditsort::electre
