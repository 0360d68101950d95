#include "creditsort/smaa.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace creditsort::smaa {

namespace {

constexpr double kBoundSlack = 1e-12;

std::string bounds_text(const std::string& id, const WeightBounds& b)
{
    std::ostringstream out;
    out << id << " [" << b.lo << ", " << b.hi << "]";
    return out.str();
}

} // namespace

void check_sampler(const WeightSampler& sampler, std::span<const std::string> criteria)
{
    if (const auto* fixed = std::get_if<FixedWeights>(&sampler)) {
        if (auto report = validate_weight_vector(fixed->weights, criteria, "weights");
            !report.ok()) {
            throw ConfigurationError("invalid fixed weights: " + report.to_string());
        }
        return;
    }
    const auto* boxed = std::get_if<BoxedSimplex>(&sampler);
    if (!boxed) {
        if (criteria.empty()) {
            throw ConfigurationError("cannot sample weights over zero criteria");
        }
        return;
    }
    double sum_lo = 0.0;
    double sum_hi = 0.0;
    for (const auto& id : criteria) {
        const auto it = boxed->bounds.find(id);
        if (it == boxed->bounds.end()) {
            throw ConfigurationError("no weight interval for criterion '" + id + "'");
        }
        const auto& b = it->second;
        if (!(b.lo >= 0.0 && b.lo <= b.hi && b.hi <= 1.0)) {
            throw ConfigurationError("weight interval " + bounds_text(id, b) +
                                     " violates 0 <= lo <= hi <= 1");
        }
        sum_lo += b.lo;
        sum_hi += b.hi;
    }
    for (const auto& [id, b] : boxed->bounds) {
        if (std::find(criteria.begin(), criteria.end(), id) == criteria.end()) {
            throw ConfigurationError("weight interval for unknown criterion '" + id + "'");
        }
    }
    if (sum_lo > 1.0 + kBoundSlack || sum_hi < 1.0 - kBoundSlack) {
        std::ostringstream msg;
        msg << "weight intervals leave no feasible weight vector (sum of lower bounds " << sum_lo
            << ", sum of upper bounds " << sum_hi << "; need lo-sum <= 1 <= hi-sum):";
        for (const auto& id : criteria) {
            msg << ' ' << bounds_text(id, boxed->bounds.at(id));
        }
        throw ConfigurationError(msg.str());
    }
}

PreparedWeightSampler::PreparedWeightSampler(const WeightSampler& sampler,
                                             std::span<const std::string> criteria,
                                             std::uint32_t attempt_budget)
    : n_(criteria.size()), budget_(attempt_budget)
{
    check_sampler(sampler, criteria);
    if (const auto* fixed = std::get_if<FixedWeights>(&sampler)) {
        mode_ = Mode::fixed;
        for (const auto& id : criteria) {
            fixed_.push_back(fixed->weights.at(id));
        }
        return;
    }
    if (std::holds_alternative<SimplexUniform>(sampler)) {
        mode_ = Mode::simplex;
        return;
    }
    mode_ = Mode::interval;
    const auto& bounds = std::get<BoxedSimplex>(sampler).bounds;
    double sum_lo = 0.0;
    double sum_hi = 0.0;
    for (const auto& id : criteria) {
        lo_.push_back(bounds.at(id).lo);
        hi_.push_back(bounds.at(id).hi);
        sum_lo += lo_.back();
        sum_hi += hi_.back();
    }
    // Tighten each box edge to what the simplex constraint can reach; the
    // feasible polytope is unchanged.
    for (std::size_t j = 0; j < n_; ++j) {
        const double lo = std::max(lo_[j], 1.0 - (sum_hi - hi_[j]));
        const double hi = std::min(hi_[j], 1.0 - (sum_lo - lo_[j]));
        lo_[j] = std::min(lo, hi);
        hi_[j] = std::max(lo, hi);
    }
    double widest = -1.0;
    for (std::size_t j = 0; j < n_; ++j) {
        if (hi_[j] - lo_[j] > widest) {
            widest = hi_[j] - lo_[j];
            free_index_ = j;
        }
    }
    double log_box = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        if (j != free_index_) {
            log_box += std::log(hi_[j] - lo_[j]);
        }
    }
    const double log_simplex = -std::lgamma(static_cast<double>(n_));
    box_proposal_ = log_box <= log_simplex;
}

void PreparedWeightSampler::sample(DrawStream& stream, std::span<double> out) const
{
    assert(out.size() == n_);
    switch (mode_) {
    case Mode::fixed:
        std::copy(fixed_.begin(), fixed_.end(), out.begin());
        return;
    case Mode::simplex: {
        double total = 0.0;
        for (auto& w : out) {
            w = stream.exponential();
            total += w;
        }
        for (auto& w : out) {
            w /= total;
        }
        return;
    }
    case Mode::interval:
        break;
    }

    for (std::uint32_t attempt = 0; attempt < budget_; ++attempt) {
        bool accepted = true;
        if (box_proposal_) {
            double rest = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                if (j != free_index_) {
                    out[j] = lo_[j] + stream.uniform() * (hi_[j] - lo_[j]);
                    rest += out[j];
                }
            }
            const double last = 1.0 - rest;
            accepted = last >= lo_[free_index_] - kBoundSlack &&
                       last <= hi_[free_index_] + kBoundSlack;
            out[free_index_] = std::clamp(last, lo_[free_index_], hi_[free_index_]);
        } else {
            double total = 0.0;
            for (auto& w : out) {
                w = stream.exponential();
                total += w;
            }
            for (std::size_t j = 0; j < n_; ++j) {
                out[j] /= total;
                accepted = accepted && out[j] >= lo_[j] && out[j] <= hi_[j];
            }
        }
        if (accepted) {
#ifndef NDEBUG
            double sum = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                assert(out[j] >= lo_[j] && out[j] <= hi_[j]);
                sum += out[j];
            }
            assert(std::abs(sum - 1.0) <= 1e-9);
#endif
            return;
        }
    }
    std::ostringstream msg;
    msg << "interval weight sampling rejected " << budget_
        << " proposals in a row; the weight intervals are (nearly) infeasible:";
    for (std::size_t j = 0; j < n_; ++j) {
        msg << " [" << lo_[j] << ", " << hi_[j] << "]";
    }
    throw ConfigurationError(msg.str());
}

WeightVector sample_weights(const WeightSampler& sampler, std::span<const std::string> criteria,
                            DrawStream& stream)
{
    const PreparedWeightSampler prepared(sampler, criteria);
    std::vector<double> w(criteria.size());
    prepared.sample(stream, w);
    WeightVector out;
    for (std::size_t j = 0; j < criteria.size(); ++j) {
        out[criteria[j]] = w[j];
    }
    return out;
}

double sample_evaluation(const Evaluation& evaluation, const Scale& scale, DrawStream& stream)
{
    if (evaluation.is_point()) {
        return evaluation.lo;
    }
    const double u = stream.uniform();
    if (std::holds_alternative<OrdinalScale>(scale)) {
        const double count = evaluation.hi - evaluation.lo + 1.0;
        return evaluation.lo + std::min(std::floor(u * count), count - 1.0);
    }
    return evaluation.lo + u * (evaluation.hi - evaluation.lo);
}

int modal_category(std::span<const double> acceptability)
{
    const auto best = std::max_element(acceptability.begin(), acceptability.end());
    return static_cast<int>(best - acceptability.begin()) + 1;
}

ErrorRates error_rates(std::span<const double> acceptability, int cutoff)
{
    const int p = static_cast<int>(acceptability.size());
    if (cutoff < 1 || cutoff > p - 1) {
        throw ConfigurationError("risk cutoff " + std::to_string(cutoff) +
                                 " outside 1.." + std::to_string(p - 1));
    }
    ErrorRates out;
    out.modal_category = modal_category(acceptability);
    double high = 0.0;
    double low = 0.0;
    for (int k = 1; k <= p; ++k) {
        (k <= cutoff ? high : low) += acceptability[k - 1];
    }
    if (out.modal_category > cutoff) {
        out.type_i = high;
    } else {
        out.type_ii = low;
    }
    return out;
}

const AlternativeAcceptability& AcceptabilityReport::row(const std::string& alternative) const
{
    for (const auto& r : rows) {
        if (r.alternative == alternative) {
            return r;
        }
    }
    throw std::out_of_range("no report row for alternative '" + alternative + "'");
}

namespace {

std::vector<std::string> criterion_ids(const Project& project)
{
    std::vector<std::string> ids;
    for (const auto& c : project.criteria) {
        ids.push_back(c.id);
    }
    return ids;
}

void require_valid(const Project& project)
{
    if (auto report = validate_project(project); !report.ok()) {
        throw ValidationError(std::move(report));
    }
}

void require_lambda(const LambdaSpec& lambda)
{
    if (auto report = validate_lambda(lambda); !report.ok()) {
        throw ConfigurationError("lambda: " + report.violations.front().message);
    }
}

struct SampledCell {
    std::size_t alternative;
    std::size_t criterion;
};

} // namespace

AcceptabilityReport run_smaa(const Project& project, const WeightSampler& sampler,
                             const RunConfig& config, std::string label)
{
    require_valid(project);
    require_lambda(config.lambda);
    if (config.draws < 1) {
        throw ConfigurationError("number of draws must be at least 1");
    }
    const std::size_t p = project.scheme.category_count();
    if (config.cutoff && (*config.cutoff < 1 || *config.cutoff > static_cast<int>(p) - 1)) {
        throw ConfigurationError("risk cutoff " + std::to_string(*config.cutoff) + " outside 1.." +
                                 std::to_string(p - 1));
    }

    const electre::SortingProblem problem(project);
    if (!config.evaluation_sampling && !problem.all_point()) {
        throw ConfigurationError(
            "interval evaluations present but evaluation sampling is off");
    }
    const auto ids = criterion_ids(project);
    const PreparedWeightSampler weights(sampler, ids, config.attempt_budget);

    const std::size_t m = problem.alternative_count();
    const std::size_t n = problem.criterion_count();
    std::vector<SampledCell> cells;
    if (config.evaluation_sampling) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (problem.lower(i)[j] != problem.upper(i)[j]) {
                    cells.push_back({i, j});
                }
            }
        }
    }

    unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
    workers = static_cast<unsigned>(
        std::clamp<std::uint64_t>(workers, 1, std::min<std::uint64_t>(config.draws, 256)));

    std::vector<std::vector<std::uint64_t>> counts(workers, std::vector<std::uint64_t>(m * p, 0));
    std::vector<std::exception_ptr> failures(workers);
    const double lambda_lo = config.lambda.lo;
    const double lambda_span = config.lambda.hi - config.lambda.lo;

    auto work = [&](unsigned worker, std::uint64_t begin, std::uint64_t end) {
        try {
            std::vector<double> w(n);
            std::vector<std::vector<double>> rows(m);
            for (std::size_t i = 0; i < m; ++i) {
                rows[i].assign(problem.lower(i).begin(), problem.lower(i).end());
            }
            auto& local = counts[worker];
            for (std::uint64_t draw = begin; draw < end; ++draw) {
                DrawStream stream(config.seed, draw);
                weights.sample(stream, w);
                const double lambda = lambda_lo + stream.uniform() * lambda_span;
                for (const auto& cell : cells) {
                    const auto& c = project.criteria[cell.criterion];
                    const Evaluation e{problem.lower(cell.alternative)[cell.criterion],
                                       problem.upper(cell.alternative)[cell.criterion]};
                    rows[cell.alternative][cell.criterion] = sample_evaluation(e, c.scale, stream);
                }
                for (std::size_t i = 0; i < m; ++i) {
                    const auto scores = problem.scores(i, rows[i], w);
                    const int category = electre::assign(scores, lambda, config.rule);
                    ++local[i * p + static_cast<std::size_t>(category - 1)];
                }
            }
        } catch (...) {
            failures[worker] = std::current_exception();
        }
    };

    if (workers == 1) {
        work(0, 0, config.draws);
    } else {
        std::vector<std::jthread> threads;
        const std::uint64_t chunk = config.draws / workers;
        const std::uint64_t extra = config.draws % workers;
        std::uint64_t begin = 0;
        for (unsigned t = 0; t < workers; ++t) {
            const std::uint64_t end = begin + chunk + (t < extra ? 1 : 0);
            threads.emplace_back(work, t, begin, end);
            begin = end;
        }
    }
    for (const auto& failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    AcceptabilityReport report;
    report.label = std::move(label);
    report.categories = p;
    report.draws = config.draws;
    report.cutoff = config.cutoff;
    const double draws = static_cast<double>(config.draws);
    for (std::size_t i = 0; i < m; ++i) {
        AlternativeAcceptability row;
        row.alternative = problem.alternative_id(i);
        for (std::size_t k = 0; k < p; ++k) {
            std::uint64_t total = 0;
            for (const auto& local : counts) {
                total += local[i * p + k];
            }
            const double pi = static_cast<double>(total) / draws;
            row.acceptability.push_back(pi);
            row.standard_error.push_back(std::sqrt(pi * (1.0 - pi) / draws));
        }
        row.modal_category = modal_category(row.acceptability);
        if (config.cutoff) {
            const auto rates = error_rates(row.acceptability, *config.cutoff);
            row.type_i = rates.type_i;
            row.type_ii = rates.type_ii;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<std::vector<double>> exact_acceptability(const Project& project,
                                                     const WeightVector& weights,
                                                     const LambdaSpec& lambda,
                                                     electre::AssignmentRule rule)
{
    require_valid(project);
    require_lambda(lambda);
    const electre::SortingProblem problem(project);
    if (!problem.all_point()) {
        throw UnsupportedInputError(
            "exact acceptabilities need point evaluations; interval evaluations present");
    }
    const auto w = problem.align(weights);
    electre::check_weights(w);

    const std::size_t p = problem.category_count();
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < problem.alternative_count(); ++i) {
        std::vector<double> pi(p, 0.0);
        const auto scores = problem.scores(i, w);
        if (lambda.lo == lambda.hi) {
            pi[static_cast<std::size_t>(electre::assign(scores, lambda.lo, rule) - 1)] = 1.0;
        } else {
            const double width = lambda.hi - lambda.lo;
            for (const auto& piece : electre::lambda_breakpoints(scores, rule)) {
                const double overlap =
                    std::min(lambda.hi, piece.hi) - std::max(lambda.lo, piece.lo);
                if (overlap > 0.0) {
                    pi[static_cast<std::size_t>(piece.category - 1)] += overlap / width;
                }
            }
        }
        out.push_back(std::move(pi));
    }
    return out;
}

IntervalWeights interval_weights_from_dms(std::span<const WeightVector> dm_vectors)
{
    if (dm_vectors.empty()) {
        throw ConfigurationError("interval weights need at least one decision maker");
    }
    IntervalWeights out;
    for (const auto& [id, w] : dm_vectors.front()) {
        out[id] = {w, w};
    }
    for (const auto& vector : dm_vectors.subspan(1)) {
        if (vector.size() != out.size()) {
            throw ConfigurationError("decision makers weight different criterion sets");
        }
        for (const auto& [id, w] : vector) {
            const auto it = out.find(id);
            if (it == out.end()) {
                throw ConfigurationError("decision makers weight different criterion sets ('" +
                                         id + "')");
            }
            it->second.lo = std::min(it->second.lo, w);
            it->second.hi = std::max(it->second.hi, w);
        }
    }
    return out;
}

} // namespace creditsort::smaa
