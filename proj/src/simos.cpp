#include "creditsort/simos.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace creditsort {

ValidationReport validate_weight_vector(const WeightVector& weights,
                                        std::span<const std::string> criteria,
                                        const std::string& location)
{
    ValidationReport report;
    double sum = 0.0;
    for (const auto& [id, w] : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            report.add(location + "." + id, "weight must be finite and nonnegative");
        }
        sum += w;
    }
    for (const auto& id : criteria) {
        if (!weights.count(id)) {
            report.add(location + "." + id, "missing weight");
        }
    }
    if (!criteria.empty()) {
        const std::set<std::string> known(criteria.begin(), criteria.end());
        for (const auto& [id, w] : weights) {
            if (!known.count(id)) {
                report.add(location + "." + id, "weight on unknown criterion");
            }
        }
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "weights sum to " << sum << ", expected 1";
        report.add(location, msg.str());
    }
    return report;
}

ValidationReport validate_deck(const CardDeck& deck, std::span<const std::string> criteria)
{
    ValidationReport report;
    if (deck.ranks.empty()) {
        report.add("deck.ranks", "deck has no ranks");
    }
    std::set<std::string> seen;
    for (std::size_t r = 0; r < deck.ranks.size(); ++r) {
        const std::string loc = "deck.ranks[" + std::to_string(r + 1) + "]";
        if (deck.ranks[r].empty()) {
            report.add(loc, "rank holds no criterion");
        }
        for (const auto& id : deck.ranks[r]) {
            if (!seen.insert(id).second) {
                report.add(loc, "criterion '" + id + "' appears more than once");
            }
        }
    }
    const std::size_t gaps = deck.ranks.empty() ? 0 : deck.ranks.size() - 1;
    if (deck.white_cards.size() != gaps) {
        report.add("deck.white_cards", "expected " + std::to_string(gaps) +
                                           " white-card counts, got " +
                                           std::to_string(deck.white_cards.size()));
    }
    for (std::size_t r = 0; r < deck.white_cards.size(); ++r) {
        if (deck.white_cards[r] < 0) {
            report.add("deck.white_cards[" + std::to_string(r + 1) + "]",
                       "white-card count must be nonnegative");
        }
    }
    for (const auto& id : criteria) {
        if (!seen.count(id)) {
            report.add("deck", "criterion '" + id + "' is not ranked");
        }
    }
    if (!criteria.empty()) {
        const std::set<std::string> known(criteria.begin(), criteria.end());
        for (const auto& id : seen) {
            if (!known.count(id)) {
                report.add("deck", "unknown criterion '" + id + "'");
            }
        }
    }
    return report;
}

SimosWeights simos_resolve(const CardDeck& deck, std::span<const std::string> criteria)
{
    if (!(deck.z > 1.0) || !std::isfinite(deck.z)) {
        std::ostringstream msg;
        msg << "Simos ratio z must exceed 1 (got " << deck.z << ")";
        throw ConfigurationError(msg.str());
    }
    if (auto report = validate_deck(deck, criteria); !report.ok()) {
        throw ValidationError(std::move(report));
    }

    SimosWeights out;
    const std::size_t ranks = deck.ranks.size();
    for (int white : deck.white_cards) {
        out.spacing += white + 1;
    }
    out.rank_weights.assign(ranks, 1.0);
    if (ranks > 1) {
        out.unit = (deck.z - 1.0) / out.spacing;
        int cumulative = 0;
        for (std::size_t r = 1; r < ranks; ++r) {
            cumulative += deck.white_cards[r - 1] + 1;
            out.rank_weights[r] = 1.0 + out.unit * cumulative;
        }
        out.rank_weights.back() = deck.z;
    }

    for (std::size_t r = 0; r < ranks; ++r) {
        out.rank_totals.push_back(out.rank_weights[r] * static_cast<double>(deck.ranks[r].size()));
        out.total += out.rank_totals.back();
    }
    for (std::size_t r = 0; r < ranks; ++r) {
        for (const auto& id : deck.ranks[r]) {
            out.weights[id] = out.rank_weights[r] / out.total;
        }
    }
    return out;
}

ImportancePreorder::ImportancePreorder(std::vector<std::vector<std::string>> classes)
    : classes_(std::move(classes))
{
    for (std::size_t level = 0; level < classes_.size(); ++level) {
        for (const auto& id : classes_[level]) {
            level_[id] = level;
        }
    }
}

Importance ImportancePreorder::compare(const std::string& g, const std::string& h) const
{
    const std::size_t a = level_.at(g);
    const std::size_t b = level_.at(h);
    if (a < b) {
        return Importance::less;
    }
    return a == b ? Importance::equivalent : Importance::more;
}

bool ImportancePreorder::consistent_with(const WeightVector& weights) const
{
    for (const auto& [g, lg] : level_) {
        for (const auto& [h, lh] : level_) {
            const auto wg = weights.find(g);
            const auto wh = weights.find(h);
            if (wg == weights.end() || wh == weights.end()) {
                return false;
            }
            if (lg < lh && !(wg->second < wh->second)) {
                return false;
            }
            if (lg == lh && wg->second != wh->second) {
                return false;
            }
        }
    }
    return true;
}

std::string ImportancePreorder::describe(const std::string& sim, const std::string& prec) const
{
    std::string out;
    for (std::size_t level = 0; level < classes_.size(); ++level) {
        if (level > 0) {
            out += prec;
        }
        for (std::size_t i = 0; i < classes_[level].size(); ++i) {
            if (i > 0) {
                out += sim;
            }
            out += classes_[level][i];
        }
    }
    return out;
}

ImportancePreorder preorder_check(const CardDeck& deck)
{
    if (auto report = validate_deck(deck); !report.ok()) {
        throw ValidationError(std::move(report));
    }
    return ImportancePreorder(deck.ranks);
}

} // namespace creditsort
