#pragma once

// Random small sorting instances on integer grids, produced both as a
// library Project (doubles) and as exact rationals for the oracle.

#include "creditsort/core_model.hpp"
#include "creditsort/simos.hpp"
#include "oracle/brute_electre.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace random_instances {

struct Instance {
    creditsort::Project project;
    creditsort::WeightVector weights;
    std::vector<double> weight_row; // criterion order

    std::vector<oracle::Criterion> exact_criteria;
    std::vector<oracle::Q> exact_weights;
    std::vector<std::vector<oracle::Q>> exact_profiles;
    std::vector<std::vector<oracle::Q>> exact_alternatives;
};

inline int uniform_int(std::mt19937_64& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// n in [1, max_criteria], p in [2, max_categories], values on 0..10.
inline Instance make(std::mt19937_64& rng, int alternatives = 1, int max_criteria = 5,
                     int max_categories = 4, bool with_veto = true)
{
    using namespace creditsort;
    Instance inst;
    const int n = uniform_int(rng, 1, max_criteria);
    const int p = uniform_int(rng, 2, max_categories);
    const int m = p - 1;

    for (int k = 1; k <= p; ++k) {
        inst.project.scheme.categories.push_back("C" + std::to_string(k));
    }
    inst.project.scheme.base_profiles.assign(m, std::vector<double>(n));
    inst.exact_profiles.assign(m, std::vector<oracle::Q>(n));

    std::vector<int> raw_weights(n);
    int weight_total = 0;
    while (weight_total == 0) {
        weight_total = 0;
        for (int j = 0; j < n; ++j) {
            raw_weights[j] = uniform_int(rng, 0, 5);
            weight_total += raw_weights[j];
        }
    }

    for (int j = 0; j < n; ++j) {
        CriterionSpec c;
        c.id = "g" + std::to_string(j + 1);
        c.direction = uniform_int(rng, 0, 3) == 0 ? Direction::cost : Direction::gain;
        c.scale = uniform_int(rng, 0, 1) == 0 ? Scale{OrdinalScale{0, 10}} : Scale{RatioScale{}};
        const int q = uniform_int(rng, 0, 2);
        const int pp = q + uniform_int(rng, 0, 3);
        c.thresholds.indifference = q;
        c.thresholds.preference = pp;
        oracle::Criterion exact{c.direction == Direction::cost, q, pp, std::nullopt};
        if (with_veto && uniform_int(rng, 0, 1) == 1) {
            const int v = pp + uniform_int(rng, 0, 5);
            c.thresholds.veto = v;
            exact.v = oracle::Q(v);
        }
        inst.project.criteria.push_back(c);
        inst.exact_criteria.push_back(exact);

        std::vector<int> column(m);
        for (auto& value : column) {
            value = uniform_int(rng, 0, 10);
        }
        std::sort(column.begin(), column.end());
        if (c.direction == Direction::cost) {
            std::reverse(column.begin(), column.end());
        }
        for (int k = 0; k < m; ++k) {
            inst.project.scheme.base_profiles[k][j] = column[k];
            inst.exact_profiles[k][j] = column[k];
        }

        const double w = static_cast<double>(raw_weights[j]) / weight_total;
        inst.weights[c.id] = w;
        inst.weight_row.push_back(w);
        inst.exact_weights.emplace_back(raw_weights[j], weight_total);
    }

    for (int i = 0; i < alternatives; ++i) {
        Alternative a;
        a.id = "a" + std::to_string(i + 1);
        std::vector<oracle::Q> row;
        for (int j = 0; j < n; ++j) {
            const int value = uniform_int(rng, 0, 10);
            a.evaluations[inst.project.criteria[j].id] = Evaluation::point(value);
            row.emplace_back(value);
        }
        inst.project.alternatives.push_back(a);
        inst.exact_alternatives.push_back(row);
    }
    return inst;
}

/// Cutting level on the grid 0.5, 0.525, ..., 1 together with its exact value.
inline std::pair<double, oracle::Q> grid_lambda(std::mt19937_64& rng)
{
    const int k = uniform_int(rng, 20, 40);
    return {k / 40.0, oracle::Q(k, 40)};
}

} // namespace random_instances
