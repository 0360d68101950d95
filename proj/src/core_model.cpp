#include "creditsort/core_model.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace creditsort {

std::string ValidationReport::to_string() const
{
    if (violations.empty()) {
        return "ok";
    }
    std::ostringstream out;
    for (const auto& v : violations) {
        out << v.location << ": " << v.message << '\n';
    }
    return out.str();
}

const char* to_string(Direction direction)
{
    return direction == Direction::gain ? "gain" : "cost";
}

Direction direction_from_string(const std::string& text)
{
    if (text == "gain") {
        return Direction::gain;
    }
    if (text == "cost") {
        return Direction::cost;
    }
    throw std::invalid_argument("unknown direction '" + text + "' (expected gain or cost)");
}

std::size_t Project::criterion_index(const std::string& id) const
{
    for (std::size_t j = 0; j < criteria.size(); ++j) {
        if (criteria[j].id == id) {
            return j;
        }
    }
    throw std::out_of_range("unknown criterion '" + id + "'");
}

namespace {

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

std::string fmt(double x)
{
    std::ostringstream out;
    out << x;
    return out.str();
}

// b_next at least as good as b_prev under the criterion's direction.
bool at_least_as_good(double next, double prev, Direction direction)
{
    return oriented(next, direction) >= oriented(prev, direction);
}

} // namespace

ValidationReport validate_criterion(const CriterionSpec& criterion, const std::string& location)
{
    ValidationReport report;
    const auto& t = criterion.thresholds;
    if (criterion.id.empty()) {
        report.add(location, "criterion id is empty");
    }
    if (!std::isfinite(t.indifference) || t.indifference < 0.0) {
        report.add(location + ".q", "indifference threshold must be >= 0");
    }
    if (!std::isfinite(t.preference) || t.preference < t.indifference) {
        report.add(location + ".p", "preference threshold must be >= indifference threshold");
    }
    if (t.veto && (!std::isfinite(*t.veto) || *t.veto < t.preference)) {
        report.add(location + ".v", "veto threshold must be >= preference threshold");
    }
    if (const auto* ordinal = std::get_if<OrdinalScale>(&criterion.scale)) {
        if (ordinal->min >= ordinal->max) {
            report.add(location + ".scale", "ordinal scale needs min < max");
        }
    }
    return report;
}

ValidationReport validate_lambda(const LambdaSpec& lambda)
{
    ValidationReport report;
    if (!(lambda.lo >= 0.5 && lambda.lo <= lambda.hi && lambda.hi <= 1.0)) {
        report.add("lambda", "need 0.5 <= lo <= hi <= 1, got [" + fmt(lambda.lo) + ", " +
                                 fmt(lambda.hi) + "]");
    }
    return report;
}

ValidationReport check_profile_dominance(std::span<const CriterionSpec> criteria,
                                         const ProfileMatrix& profiles,
                                         const std::string& location)
{
    ValidationReport report;
    for (std::size_t k = 0; k + 1 < profiles.size(); ++k) {
        const auto& lower = profiles[k];
        const auto& upper = profiles[k + 1];
        const std::size_t n = std::min({criteria.size(), lower.size(), upper.size()});
        for (std::size_t j = 0; j < n; ++j) {
            if (!at_least_as_good(upper[j], lower[j], criteria[j].direction)) {
                report.add(location + ".b" + std::to_string(k + 2) + "." + criteria[j].id,
                           "profile dominance violated: b" + std::to_string(k + 2) + " = " +
                               fmt(upper[j]) + " is worse than b" + std::to_string(k + 1) +
                               " = " + fmt(lower[j]) + " (" + to_string(criteria[j].direction) +
                               ")");
            }
        }
    }
    return report;
}

ProfileMatrix effective_profiles(const Project& project, const Alternative& alternative)
{
    ProfileMatrix profiles = project.scheme.base_profiles;
    if (!alternative.sector) {
        return profiles;
    }
    const auto found = project.scheme.overrides.find(*alternative.sector);
    if (found == project.scheme.overrides.end()) {
        return profiles;
    }
    for (const auto& [criterion_id, column] : found->second) {
        const std::size_t j = project.criterion_index(criterion_id);
        for (std::size_t k = 0; k < profiles.size() && k < column.size(); ++k) {
            profiles[k][j] = column[k];
        }
    }
    return profiles;
}

ValidationReport validate_project(const Project& project)
{
    ValidationReport report;
    const auto& criteria = project.criteria;
    const auto& scheme = project.scheme;
    const std::size_t n = criteria.size();

    if (n == 0) {
        report.add("criteria", "project has no criteria");
    }
    std::set<std::string> ids;
    for (const auto& c : criteria) {
        const std::string loc = "criteria[" + c.id + "]";
        report.append(validate_criterion(c, loc));
        if (!ids.insert(c.id).second) {
            report.add(loc, "duplicate criterion id");
        }
    }

    // Profiles.
    const std::size_t p = scheme.category_count();
    if (p < 2) {
        report.add("profiles.categories", "need at least 2 categories");
    }
    bool shape_ok = true;
    if (p >= 2 && scheme.base_profiles.size() != p - 1) {
        report.add("profiles.base", "expected " + std::to_string(p - 1) + " profiles for " +
                                        std::to_string(p) + " categories, got " +
                                        std::to_string(scheme.base_profiles.size()));
        shape_ok = false;
    }
    for (std::size_t k = 0; k < scheme.base_profiles.size(); ++k) {
        const auto& row = scheme.base_profiles[k];
        const std::string loc = "profiles.base.b" + std::to_string(k + 1);
        if (row.size() != n) {
            report.add(loc, "expected " + std::to_string(n) + " values, got " +
                                std::to_string(row.size()));
            shape_ok = false;
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double value = row[j];
            if (!std::isfinite(value)) {
                report.add(loc + "." + criteria[j].id, "profile value is not finite");
            } else if (const auto* s = std::get_if<OrdinalScale>(&criteria[j].scale)) {
                if (!is_integer(value) || value < s->min || value > s->max) {
                    report.add(loc + "." + criteria[j].id,
                               "profile value " + fmt(value) + " outside ordinal scale " +
                                   std::to_string(s->min) + ".." + std::to_string(s->max));
                }
            }
        }
    }
    if (shape_ok) {
        report.append(check_profile_dominance(criteria, scheme.base_profiles, "profiles.base"));
    }

    for (const auto& [sector, columns] : scheme.overrides) {
        const std::string loc = "profiles.overrides[" + sector + "]";
        bool override_ok = shape_ok;
        for (const auto& [criterion_id, column] : columns) {
            const std::string cloc = loc + "." + criterion_id;
            if (!ids.count(criterion_id)) {
                report.add(cloc, "override names unknown criterion");
                override_ok = false;
                continue;
            }
            if (project.criteria[project.criterion_index(criterion_id)].is_ordinal()) {
                report.add(cloc, "qualitative (ordinal) profile columns cannot be overridden per sector");
                override_ok = false;
            }
            if (p >= 2 && column.size() != p - 1) {
                report.add(cloc, "override must replace the whole column (" +
                                     std::to_string(p - 1) + " values), got " +
                                     std::to_string(column.size()));
                override_ok = false;
            }
            for (double v : column) {
                if (!std::isfinite(v)) {
                    report.add(cloc, "override value is not finite");
                    override_ok = false;
                }
            }
        }
        if (override_ok) {
            Alternative probe;
            probe.sector = sector;
            report.append(check_profile_dominance(criteria, effective_profiles(project, probe), loc));
        }
    }

    // Alternatives.
    std::set<std::string> alt_ids;
    for (const auto& a : project.alternatives) {
        const std::string loc = "alternatives[" + a.id + "]";
        if (a.id.empty()) {
            report.add(loc, "alternative id is empty");
        }
        if (!alt_ids.insert(a.id).second) {
            report.add(loc, "duplicate alternative id");
        }
        if (a.sector && !scheme.overrides.empty() && !scheme.overrides.count(*a.sector)) {
            report.add(loc + ".sector", "sector '" + *a.sector + "' has no profile override");
        }
        for (const auto& c : criteria) {
            if (!a.evaluations.count(c.id)) {
                report.add(loc + ".evaluations." + c.id, "missing evaluation");
            }
        }
        for (const auto& [criterion_id, e] : a.evaluations) {
            const std::string eloc = loc + ".evaluations." + criterion_id;
            if (!ids.count(criterion_id)) {
                report.add(eloc, "evaluation on unknown criterion");
                continue;
            }
            if (!std::isfinite(e.lo) || !std::isfinite(e.hi)) {
                report.add(eloc, "evaluation is not finite");
                continue;
            }
            if (e.lo > e.hi) {
                report.add(eloc, "interval lower bound exceeds upper bound");
            }
            const auto& c = criteria[project.criterion_index(criterion_id)];
            if (const auto* s = std::get_if<OrdinalScale>(&c.scale)) {
                if (!is_integer(e.lo) || !is_integer(e.hi)) {
                    report.add(eloc, "ordinal evaluation must be integer");
                } else if (e.lo < s->min || e.hi > s->max) {
                    report.add(eloc, "evaluation " + fmt(e.lo == e.hi ? e.lo : e.hi) +
                                         " outside scale " + std::to_string(s->min) + ".." +
                                         std::to_string(s->max));
                }
            }
        }
    }
    return report;
}

Project flip_direction(const Project& project, const std::string& criterion_id)
{
    Project out = project;
    const std::size_t j = out.criterion_index(criterion_id);
    auto& c = out.criteria[j];
    c.direction = c.direction == Direction::gain ? Direction::cost : Direction::gain;
    if (auto* s = std::get_if<OrdinalScale>(&c.scale)) {
        *s = OrdinalScale{-s->max, -s->min};
    }
    for (auto& row : out.scheme.base_profiles) {
        if (j < row.size()) {
            row[j] = -row[j];
        }
    }
    for (auto& [sector, columns] : out.scheme.overrides) {
        if (auto it = columns.find(criterion_id); it != columns.end()) {
            for (auto& v : it->second) {
                v = -v;
            }
        }
    }
    for (auto& a : out.alternatives) {
        if (auto it = a.evaluations.find(criterion_id); it != a.evaluations.end()) {
            it->second = Evaluation{-it->second.hi, -it->second.lo};
        }
    }
    return out;
}

Project normalize_to_gain(const Project& project)
{
    Project out = project;
    for (const auto& c : project.criteria) {
        if (c.direction == Direction::cost) {
            out = flip_direction(out, c.id);
        }
    }
    return out;
}

} // namespace creditsort
