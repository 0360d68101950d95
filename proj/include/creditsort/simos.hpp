#pragma once

#include "creditsort/errors.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace creditsort {

/// Criterion id -> weight. Valid vectors are nonnegative and sum to 1.
using WeightVector = std::map<std::string, double>;

ValidationReport validate_weight_vector(const WeightVector& weights,
                                        std::span<const std::string> criteria,
                                        const std::string& location);

/// A decision maker's card ranking: ranks run from least to most important,
/// `white_cards[r]` blank cards sit between rank r and rank r + 1, and `z` says
/// how many times the last rank outweighs the first.
struct CardDeck {
    std::vector<std::vector<std::string>> ranks;
    std::vector<int> white_cards;
    double z = 0.0;

    bool operator==(const CardDeck&) const = default;
};

struct SimosWeights {
    std::vector<double> rank_weights; // k(r), full precision; k(1) = 1, k(last) = z
    std::vector<double> rank_totals;  // k(r) times the number of cards in rank r
    double total = 0.0;               // K'
    double unit = 0.0;                // u = (z - 1) / e
    int spacing = 0;                  // e = sum of e_r = e'_r + 1
    WeightVector weights;             // normalized k*
};

/// Structural check of a deck. If `criteria` is non-empty every listed
/// criterion must appear exactly once.
ValidationReport validate_deck(const CardDeck& deck, std::span<const std::string> criteria = {});

/// Revised Simos procedure. A deck with a single rank yields equal weights.
/// Throws ConfigurationError when z <= 1 and ValidationError for a malformed deck.
SimosWeights simos_resolve(const CardDeck& deck, std::span<const std::string> criteria = {});

enum class Importance { less, equivalent, more };

/// Total preorder induced by a deck, least important class first.
class ImportancePreorder {
public:
    explicit ImportancePreorder(std::vector<std::vector<std::string>> classes);

    const std::vector<std::vector<std::string>>& classes() const { return classes_; }
    /// How `g` compares to `h`; throws std::out_of_range for unknown ids.
    Importance compare(const std::string& g, const std::string& h) const;
    /// g < h implies w(g) < w(h) and g ~ h implies w(g) == w(h).
    bool consistent_with(const WeightVector& weights) const;
    /// "g1_1 ~ g1_2 < g5_8 ~ ..." using `sim` and `prec` as the relation symbols.
    std::string describe(const std::string& sim = " ~ ", const std::string& prec = " < ") const;

private:
    std::vector<std::vector<std::string>> classes_;
    std::map<std::string, std::size_t> level_;
};

ImportancePreorder preorder_check(const CardDeck& deck);

} // namespace creditsort
