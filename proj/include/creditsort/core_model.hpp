#pragma once

#include "creditsort/errors.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace creditsort {

enum class Direction { gain, cost };

/// Integer-coded qualitative scale, inclusive on both ends.
struct OrdinalScale {
    int min = 1;
    int max = 5;
    bool operator==(const OrdinalScale&) const = default;
};

/// Unitless real-valued ratio (financial indicators).
struct RatioScale {
    bool operator==(const RatioScale&) const = default;
};

using Scale = std::variant<OrdinalScale, RatioScale>;

struct Thresholds {
    double indifference = 0.0; // q
    double preference = 0.0;   // p
    std::optional<double> veto; // v

    bool operator==(const Thresholds&) const = default;
};

struct CriterionSpec {
    std::string id;
    std::string group;
    Direction direction = Direction::gain;
    Scale scale = RatioScale{};
    Thresholds thresholds;

    bool is_ordinal() const { return std::holds_alternative<OrdinalScale>(scale); }
    bool operator==(const CriterionSpec&) const = default;
};

/// Point (lo == hi) or interval performance of an alternative on one criterion.
struct Evaluation {
    double lo = 0.0;
    double hi = 0.0;

    static Evaluation point(double x) { return {x, x}; }
    static Evaluation interval(double lo, double hi) { return {lo, hi}; }
    bool is_point() const { return lo == hi; }
    bool operator==(const Evaluation&) const = default;
};

struct Alternative {
    std::string id;
    std::optional<std::string> sector;
    std::map<std::string, Evaluation> evaluations;

    bool operator==(const Alternative&) const = default;
};

/// Row k holds profile b_{k+1}; columns follow the project's criterion order.
using ProfileMatrix = std::vector<std::vector<double>>;

/// Whole-column replacements keyed by criterion id; each column has p-1 entries.
using ProfileOverride = std::map<std::string, std::vector<double>>;

struct ProfileScheme {
    std::vector<std::string> categories; // C_1 (worst) .. C_p (best)
    ProfileMatrix base_profiles;
    std::map<std::string, ProfileOverride> overrides; // sector id -> columns

    std::size_t category_count() const { return categories.size(); }
    bool operator==(const ProfileScheme&) const = default;
};

/// Range of the credibility cutting level; lo == hi means a fixed lambda.
struct LambdaSpec {
    double lo = 0.65;
    double hi = 0.85;

    static LambdaSpec fixed(double lambda) { return {lambda, lambda}; }
    bool operator==(const LambdaSpec&) const = default;
};

struct Project {
    std::vector<CriterionSpec> criteria;
    std::vector<Alternative> alternatives;
    ProfileScheme scheme;

    std::size_t criterion_index(const std::string& id) const; // throws std::out_of_range
    bool operator==(const Project&) const = default;
};

ValidationReport validate_criterion(const CriterionSpec& criterion, const std::string& location);
ValidationReport validate_lambda(const LambdaSpec& lambda);

/// Mechanical consistency of criteria, evaluations and profiles. Returns an
/// empty report when every invariant holds.
ValidationReport validate_project(const Project& project);

/// Profile dominance only: b_{k+1,j} at least as good as b_{k,j} for all k, j.
ValidationReport check_profile_dominance(std::span<const CriterionSpec> criteria,
                                         const ProfileMatrix& profiles,
                                         const std::string& location);

/// Profiles that apply to an alternative: base profiles with the sector's
/// column overrides (if any) substituted.
ProfileMatrix effective_profiles(const Project& project, const Alternative& alternative);

/// Negates every value on `criterion_id` and toggles its direction. Applying
/// it twice is the identity.
Project flip_direction(const Project& project, const std::string& criterion_id);

/// Flips every cost criterion, so the result has gain criteria only.
Project normalize_to_gain(const Project& project);

/// Value as seen by a gain-direction formula.
inline double oriented(double value, Direction direction)
{
    return direction == Direction::gain ? value : -value;
}

const char* to_string(Direction direction);
Direction direction_from_string(const std::string& text);

} // namespace creditsort
