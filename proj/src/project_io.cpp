#include "creditsort/project_io.hpp"

#include "creditsort/electre_tri.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace creditsort::io {

using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- reading

[[noreturn]] void schema_fault(const std::string& location, const std::string& message)
{
    ValidationReport report;
    report.add(location, message);
    throw ValidationError(std::move(report));
}

const json& object_at(const json& j, const std::string& loc,
                      std::initializer_list<std::string_view> allowed)
{
    if (!j.is_object()) {
        schema_fault(loc, "expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto name : allowed) {
            known = known || key == name;
        }
        if (!known) {
            schema_fault(loc + "." + key, "unknown field");
        }
    }
    return j;
}

const json& required(const json& j, const std::string& loc, const char* key)
{
    const auto it = j.find(key);
    if (it == j.end()) {
        schema_fault(loc + "." + key, "required field missing");
    }
    return *it;
}

const json* optional_field(const json& j, const char* key)
{
    const auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& j, const std::string& loc)
{
    if (!j.is_number()) {
        schema_fault(loc, "expected a number");
    }
    return j.get<double>();
}

std::string text(const json& j, const std::string& loc)
{
    if (!j.is_string()) {
        schema_fault(loc, "expected a string");
    }
    return j.get<std::string>();
}

bool boolean(const json& j, const std::string& loc)
{
    if (!j.is_boolean()) {
        schema_fault(loc, "expected true or false");
    }
    return j.get<bool>();
}

std::int64_t integer(const json& j, const std::string& loc)
{
    if (!j.is_number_integer()) {
        schema_fault(loc, "expected an integer");
    }
    return j.get<std::int64_t>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& loc)
{
    if (!j.is_number_unsigned()) {
        schema_fault(loc, "expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

const json& array_at(const json& j, const std::string& loc)
{
    if (!j.is_array()) {
        schema_fault(loc, "expected an array");
    }
    return j;
}

std::vector<double> numbers(const json& j, const std::string& loc)
{
    std::vector<double> out;
    const auto& arr = array_at(j, loc);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(number(arr[i], loc + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::vector<std::string> strings(const json& j, const std::string& loc)
{
    std::vector<std::string> out;
    const auto& arr = array_at(j, loc);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(text(arr[i], loc + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::pair<double, double> pair_of_numbers(const json& j, const std::string& loc)
{
    const auto values = numbers(j, loc);
    if (values.size() != 2) {
        schema_fault(loc, "expected [lo, hi]");
    }
    return {values[0], values[1]};
}

CriterionSpec read_criterion(const json& j, const std::string& loc)
{
    object_at(j, loc, {"id", "group", "direction", "scale", "thresholds"});
    CriterionSpec c;
    c.id = text(required(j, loc, "id"), loc + ".id");
    const std::string cloc = "criteria[" + c.id + "]";
    if (const auto* g = optional_field(j, "group")) {
        c.group = text(*g, cloc + ".group");
    }
    const auto dir = text(required(j, cloc, "direction"), cloc + ".direction");
    if (dir != "gain" && dir != "cost") {
        schema_fault(cloc + ".direction", "expected \"gain\" or \"cost\"");
    }
    c.direction = direction_from_string(dir);

    const auto& scale = object_at(required(j, cloc, "scale"), cloc + ".scale", {"type", "min", "max"});
    const auto type = text(required(scale, cloc + ".scale", "type"), cloc + ".scale.type");
    if (type == "ordinal") {
        c.scale = OrdinalScale{
            static_cast<int>(integer(required(scale, cloc + ".scale", "min"), cloc + ".scale.min")),
            static_cast<int>(integer(required(scale, cloc + ".scale", "max"), cloc + ".scale.max"))};
    } else if (type == "ratio") {
        if (scale.contains("min") || scale.contains("max")) {
            schema_fault(cloc + ".scale", "ratio scales take no bounds");
        }
        c.scale = RatioScale{};
    } else {
        schema_fault(cloc + ".scale.type", "expected \"ordinal\" or \"ratio\"");
    }

    if (const auto* t = optional_field(j, "thresholds")) {
        const std::string tloc = cloc + ".thresholds";
        object_at(*t, tloc, {"q", "p", "v"});
        if (const auto* q = optional_field(*t, "q")) {
            c.thresholds.indifference = number(*q, tloc + ".q");
        }
        if (const auto* p = optional_field(*t, "p")) {
            c.thresholds.preference = number(*p, tloc + ".p");
        }
        if (const auto* v = optional_field(*t, "v")) {
            c.thresholds.veto = number(*v, tloc + ".v");
        }
    }
    return c;
}

Evaluation read_evaluation(const json& j, const std::string& loc)
{
    if (j.is_number()) {
        return Evaluation::point(j.get<double>());
    }
    const auto [lo, hi] = pair_of_numbers(j, loc);
    return Evaluation::interval(lo, hi);
}

Alternative read_alternative(const json& j, const std::string& loc)
{
    object_at(j, loc, {"id", "sector", "evaluations"});
    Alternative a;
    a.id = text(required(j, loc, "id"), loc + ".id");
    const std::string aloc = "alternatives[" + a.id + "]";
    if (const auto* s = optional_field(j, "sector")) {
        a.sector = text(*s, aloc + ".sector");
    }
    const auto& evals = required(j, aloc, "evaluations");
    if (!evals.is_object()) {
        schema_fault(aloc + ".evaluations", "expected an object keyed by criterion id");
    }
    for (const auto& [id, value] : evals.items()) {
        a.evaluations[id] = read_evaluation(value, aloc + ".evaluations." + id);
    }
    return a;
}

ProfileScheme read_profiles(const json& j, const std::string& loc)
{
    object_at(j, loc, {"categories", "base", "overrides"});
    ProfileScheme scheme;
    scheme.categories = strings(required(j, loc, "categories"), loc + ".categories");
    const auto& base = array_at(required(j, loc, "base"), loc + ".base");
    for (std::size_t k = 0; k < base.size(); ++k) {
        scheme.base_profiles.push_back(numbers(base[k], loc + ".base[" + std::to_string(k) + "]"));
    }
    if (const auto* o = optional_field(j, "overrides")) {
        if (!o->is_object()) {
            schema_fault(loc + ".overrides", "expected an object keyed by sector");
        }
        for (const auto& [sector, columns] : o->items()) {
            const std::string sloc = loc + ".overrides." + sector;
            if (!columns.is_object()) {
                schema_fault(sloc, "expected an object keyed by criterion id");
            }
            auto& target = scheme.overrides[sector];
            for (const auto& [id, column] : columns.items()) {
                target[id] = numbers(column, sloc + "." + id);
            }
        }
    }
    return scheme;
}

WeightVector read_weights(const json& j, const std::string& loc)
{
    if (!j.is_object()) {
        schema_fault(loc, "expected an object keyed by criterion id");
    }
    WeightVector out;
    for (const auto& [id, w] : j.items()) {
        out[id] = number(w, loc + "." + id);
    }
    return out;
}

CardDeck read_deck(const json& j, const std::string& loc)
{
    object_at(j, loc, {"ranks", "white_cards", "z"});
    CardDeck deck;
    const auto& ranks = array_at(required(j, loc, "ranks"), loc + ".ranks");
    for (std::size_t r = 0; r < ranks.size(); ++r) {
        deck.ranks.push_back(strings(ranks[r], loc + ".ranks[" + std::to_string(r) + "]"));
    }
    if (const auto* w = optional_field(j, "white_cards")) {
        const auto& arr = array_at(*w, loc + ".white_cards");
        for (std::size_t r = 0; r < arr.size(); ++r) {
            deck.white_cards.push_back(static_cast<int>(
                integer(arr[r], loc + ".white_cards[" + std::to_string(r) + "]")));
        }
    }
    deck.z = number(required(j, loc, "z"), loc + ".z");
    return deck;
}

DecisionMaker read_decision_maker(const json& j, const std::string& loc)
{
    object_at(j, loc, {"id", "weights", "deck", "intervals"});
    DecisionMaker dm;
    dm.id = text(required(j, loc, "id"), loc + ".id");
    const std::string dloc = "decision_makers[" + dm.id + "]";
    const int given = static_cast<int>(j.contains("weights")) + static_cast<int>(j.contains("deck")) +
                      static_cast<int>(j.contains("intervals"));
    if (given != 1) {
        schema_fault(dloc, "give exactly one of \"weights\", \"deck\", \"intervals\"");
    }
    if (j.contains("weights")) {
        dm.model = read_weights(j.at("weights"), dloc + ".weights");
    } else if (j.contains("deck")) {
        dm.model = read_deck(j.at("deck"), dloc + ".deck");
    } else {
        const auto& iv = j.at("intervals");
        if (!iv.is_object()) {
            schema_fault(dloc + ".intervals", "expected an object keyed by criterion id");
        }
        smaa::IntervalWeights bounds;
        for (const auto& [id, pair] : iv.items()) {
            const auto [lo, hi] = pair_of_numbers(pair, dloc + ".intervals." + id);
            bounds[id] = {lo, hi};
        }
        dm.model = std::move(bounds);
    }
    return dm;
}

void read_run(const json& j, const std::string& loc, smaa::RunConfig& run)
{
    object_at(j, loc, {"draws", "seed", "rule", "evaluation_sampling", "cutoff", "attempt_budget"});
    if (const auto* d = optional_field(j, "draws")) {
        run.draws = unsigned_integer(*d, loc + ".draws");
    }
    if (const auto* s = optional_field(j, "seed")) {
        run.seed = unsigned_integer(*s, loc + ".seed");
    }
    if (const auto* r = optional_field(j, "rule")) {
        try {
            run.rule = electre::rule_from_string(text(*r, loc + ".rule"));
        } catch (const ConfigurationError& e) {
            schema_fault(loc + ".rule", e.what());
        }
    }
    if (const auto* e = optional_field(j, "evaluation_sampling")) {
        run.evaluation_sampling = boolean(*e, loc + ".evaluation_sampling");
    }
    if (const auto* c = optional_field(j, "cutoff")) {
        run.cutoff = static_cast<int>(integer(*c, loc + ".cutoff"));
    }
    if (const auto* b = optional_field(j, "attempt_budget")) {
        run.attempt_budget = static_cast<std::uint32_t>(unsigned_integer(*b, loc + ".attempt_budget"));
    }
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte);
        std::string what = e.what();
        // nlohmann prefixes "[json.exception.parse_error.101] parse error at line L, column C: "
        if (const auto colon = what.find(": "); colon != std::string::npos) {
            what = what.substr(colon + 2);
        }
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + what,
                         line, column);
    }
}

// ---------------------------------------------------------------- writing

json write_evaluation(const Evaluation& e)
{
    return e.is_point() ? json(e.lo) : json::array({e.lo, e.hi});
}

json write_criterion(const CriterionSpec& c)
{
    json out;
    out["id"] = c.id;
    out["group"] = c.group;
    out["direction"] = to_string(c.direction);
    if (const auto* ord = std::get_if<OrdinalScale>(&c.scale)) {
        out["scale"] = {{"type", "ordinal"}, {"min", ord->min}, {"max", ord->max}};
    } else {
        out["scale"] = {{"type", "ratio"}};
    }
    json t = {{"q", c.thresholds.indifference}, {"p", c.thresholds.preference}};
    if (c.thresholds.veto) {
        t["v"] = *c.thresholds.veto;
    }
    out["thresholds"] = std::move(t);
    return out;
}

json write_decision_maker(const DecisionMaker& dm)
{
    json out;
    out["id"] = dm.id;
    if (const auto* w = std::get_if<WeightVector>(&dm.model)) {
        json weights = json::object();
        for (const auto& [id, value] : *w) {
            weights[id] = value;
        }
        out["weights"] = std::move(weights);
    } else if (const auto* deck = std::get_if<CardDeck>(&dm.model)) {
        out["deck"] = {{"ranks", deck->ranks}, {"white_cards", deck->white_cards}, {"z", deck->z}};
    } else {
        json bounds = json::object();
        for (const auto& [id, b] : std::get<smaa::IntervalWeights>(dm.model)) {
            bounds[id] = json::array({b.lo, b.hi});
        }
        out["intervals"] = std::move(bounds);
    }
    return out;
}

std::string shortest(double value)
{
    std::array<char, 64> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), result.ptr);
}

json write_report_object(const smaa::AcceptabilityReport& report)
{
    json out;
    out["label"] = report.label;
    out["categories"] = report.categories;
    out["draws"] = report.draws;
    out["cutoff"] = report.cutoff ? json(*report.cutoff) : json(nullptr);
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"alternative", r.alternative},
                        {"acceptability", r.acceptability},
                        {"standard_error", r.standard_error},
                        {"modal_category", r.modal_category},
                        {"type_i", r.type_i ? json(*r.type_i) : json(nullptr)},
                        {"type_ii", r.type_ii ? json(*r.type_ii) : json(nullptr)}});
    }
    out["rows"] = std::move(rows);
    return out;
}

std::optional<double> optional_number(const json& j, const char* key, const std::string& loc)
{
    const auto* v = optional_field(j, key);
    return v ? std::optional<double>(number(*v, loc + "." + key)) : std::nullopt;
}

smaa::AcceptabilityReport read_report_object(const json& j, const std::string& loc)
{
    object_at(j, loc, {"label", "categories", "draws", "cutoff", "rows"});
    smaa::AcceptabilityReport report;
    report.label = text(required(j, loc, "label"), loc + ".label");
    report.categories = unsigned_integer(required(j, loc, "categories"), loc + ".categories");
    report.draws = unsigned_integer(required(j, loc, "draws"), loc + ".draws");
    if (const auto* c = optional_field(j, "cutoff")) {
        report.cutoff = static_cast<int>(integer(*c, loc + ".cutoff"));
    }
    const auto& rows = array_at(required(j, loc, "rows"), loc + ".rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string rloc = loc + ".rows[" + std::to_string(i) + "]";
        object_at(rows[i], rloc,
                  {"alternative", "acceptability", "standard_error", "modal_category", "type_i",
                   "type_ii"});
        smaa::AlternativeAcceptability row;
        row.alternative = text(required(rows[i], rloc, "alternative"), rloc + ".alternative");
        row.acceptability = numbers(required(rows[i], rloc, "acceptability"), rloc + ".acceptability");
        row.standard_error =
            numbers(required(rows[i], rloc, "standard_error"), rloc + ".standard_error");
        row.modal_category = static_cast<int>(
            integer(required(rows[i], rloc, "modal_category"), rloc + ".modal_category"));
        row.type_i = optional_number(rows[i], "type_i", rloc);
        row.type_ii = optional_number(rows[i], "type_ii", rloc);
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace

// ---------------------------------------------------------------- project files

const DecisionMaker& ProjectFile::decision_maker(const std::string& id) const
{
    for (const auto& dm : decision_makers) {
        if (dm.id == id) {
            return dm;
        }
    }
    throw ConfigurationError("unknown decision maker '" + id + "'");
}

ProjectFile parse_project(const std::string& text)
{
    const json root = parse_json(text);
    object_at(root, "project",
              {"schema_version", "name", "criteria", "alternatives", "profiles", "decision_makers",
               "lambda", "run", "cash_flows", "discount_rate", "ratio_samples"});
    ProjectFile file;
    file.schema_version =
        static_cast<int>(integer(required(root, "project", "schema_version"), "schema_version"));
    if (file.schema_version != kSchemaVersion) {
        schema_fault("schema_version", "unsupported schema version " +
                                           std::to_string(file.schema_version));
    }
    if (const auto* n = optional_field(root, "name")) {
        file.name = ::creditsort::io::text(*n, "name");
    }
    const auto& criteria = array_at(required(root, "project", "criteria"), "criteria");
    for (std::size_t j = 0; j < criteria.size(); ++j) {
        file.project.criteria.push_back(
            read_criterion(criteria[j], "criteria[" + std::to_string(j) + "]"));
    }
    const auto& alternatives = array_at(required(root, "project", "alternatives"), "alternatives");
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
        file.project.alternatives.push_back(
            read_alternative(alternatives[i], "alternatives[" + std::to_string(i) + "]"));
    }
    file.project.scheme = read_profiles(required(root, "project", "profiles"), "profiles");

    if (const auto* dms = optional_field(root, "decision_makers")) {
        array_at(*dms, "decision_makers");
        for (std::size_t d = 0; d < dms->size(); ++d) {
            file.decision_makers.push_back(
                read_decision_maker((*dms)[d], "decision_makers[" + std::to_string(d) + "]"));
        }
    }
    if (const auto* l = optional_field(root, "lambda")) {
        const auto [lo, hi] = pair_of_numbers(*l, "lambda");
        file.run.lambda = {lo, hi};
    }
    if (const auto* r = optional_field(root, "run")) {
        read_run(*r, "run", file.run);
    }
    if (const auto* c = optional_field(root, "cash_flows")) {
        if (!c->is_object()) {
            schema_fault("cash_flows", "expected an object keyed by alternative id");
        }
        for (const auto& [id, flows] : c->items()) {
            file.cash_flows[id] = {numbers(flows, "cash_flows." + id)};
        }
    }
    if (const auto* r = optional_field(root, "discount_rate")) {
        file.discount_rate = number(*r, "discount_rate");
    }
    if (const auto* s = optional_field(root, "ratio_samples")) {
        if (!s->is_object()) {
            schema_fault("ratio_samples", "expected an object keyed by sector");
        }
        for (const auto& [sector, ratios] : s->items()) {
            if (!ratios.is_object()) {
                schema_fault("ratio_samples." + sector, "expected an object keyed by criterion id");
            }
            for (const auto& [id, sample] : ratios.items()) {
                file.ratio_samples[sector][id] = numbers(sample, "ratio_samples." + sector + "." + id);
            }
        }
    }
    return file;
}

ValidationReport validate_project_file(const ProjectFile& file)
{
    ValidationReport report = validate_project(file.project);
    std::vector<std::string> ids;
    for (const auto& c : file.project.criteria) {
        ids.push_back(c.id);
    }

    std::set<std::string> seen;
    for (const auto& dm : file.decision_makers) {
        const std::string loc = "decision_makers[" + dm.id + "]";
        if (!seen.insert(dm.id).second) {
            report.add(loc, "duplicate decision maker id");
        }
        if (const auto* w = std::get_if<WeightVector>(&dm.model)) {
            report.append(validate_weight_vector(*w, ids, loc + ".weights"));
        } else if (const auto* deck = std::get_if<CardDeck>(&dm.model)) {
            for (const auto& v : validate_deck(*deck, ids).violations) {
                report.add(loc + "." + v.location, v.message);
            }
            if (!(deck->z > 1.0)) {
                report.add(loc + ".deck.z", "Simos ratio z must exceed 1");
            }
        } else {
            try {
                smaa::check_sampler(smaa::BoxedSimplex{std::get<smaa::IntervalWeights>(dm.model)},
                                    ids);
            } catch (const ConfigurationError& e) {
                report.add(loc + ".intervals", e.what());
            }
        }
    }

    report.append(validate_lambda(file.run.lambda));
    if (file.run.draws < 1) {
        report.add("run.draws", "number of draws must be at least 1");
    }
    const int p = static_cast<int>(file.project.scheme.category_count());
    if (file.run.cutoff && (*file.run.cutoff < 1 || *file.run.cutoff > p - 1)) {
        report.add("run.cutoff", "risk cutoff must lie in 1.." + std::to_string(p - 1));
    }

    std::set<std::string> alternatives;
    for (const auto& a : file.project.alternatives) {
        alternatives.insert(a.id);
    }
    for (const auto& [id, series] : file.cash_flows) {
        if (!alternatives.count(id)) {
            report.add("cash_flows." + id, "cash flows for unknown alternative");
        }
        if (series.flows.empty()) {
            report.add("cash_flows." + id, "cash-flow series is empty");
        }
    }
    if (file.discount_rate && !(*file.discount_rate > -1.0)) {
        report.add("discount_rate", "discount rate must exceed -1");
    }
    const std::set<std::string> known(ids.begin(), ids.end());
    for (const auto& [sector, samples] : file.ratio_samples) {
        for (const auto& [id, sample] : samples) {
            const std::string loc = "ratio_samples." + sector + "." + id;
            if (!known.count(id)) {
                report.add(loc, "sample for unknown criterion");
            } else if (file.project.criteria[file.project.criterion_index(id)].is_ordinal()) {
                report.add(loc, "ratio samples must target ratio-scale criteria");
            }
            if (sample.empty()) {
                report.add(loc, "sample is empty");
            }
        }
    }
    return report;
}

ProjectFile parse_and_validate(const std::string& text)
{
    ProjectFile file = parse_project(text);
    if (auto report = validate_project_file(file); !report.ok()) {
        throw ValidationError(std::move(report));
    }
    return file;
}

ProjectFile load_project(const std::filesystem::path& path)
{
    return parse_and_validate(read_text_file(path));
}

std::string serialize_project(const ProjectFile& file)
{
    json root;
    root["schema_version"] = file.schema_version;
    root["name"] = file.name;
    json criteria = json::array();
    for (const auto& c : file.project.criteria) {
        criteria.push_back(write_criterion(c));
    }
    root["criteria"] = std::move(criteria);

    json alternatives = json::array();
    for (const auto& a : file.project.alternatives) {
        json alt;
        alt["id"] = a.id;
        if (a.sector) {
            alt["sector"] = *a.sector;
        }
        json evals = json::object();
        for (const auto& c : file.project.criteria) {
            if (const auto it = a.evaluations.find(c.id); it != a.evaluations.end()) {
                evals[c.id] = write_evaluation(it->second);
            }
        }
        for (const auto& [id, e] : a.evaluations) {
            if (!evals.contains(id)) {
                evals[id] = write_evaluation(e);
            }
        }
        alt["evaluations"] = std::move(evals);
        alternatives.push_back(std::move(alt));
    }
    root["alternatives"] = std::move(alternatives);

    json overrides = json::object();
    for (const auto& [sector, columns] : file.project.scheme.overrides) {
        json cols = json::object();
        for (const auto& [id, column] : columns) {
            cols[id] = column;
        }
        overrides[sector] = std::move(cols);
    }
    root["profiles"] = {{"categories", file.project.scheme.categories},
                        {"base", file.project.scheme.base_profiles},
                        {"overrides", std::move(overrides)}};

    json dms = json::array();
    for (const auto& dm : file.decision_makers) {
        dms.push_back(write_decision_maker(dm));
    }
    root["decision_makers"] = std::move(dms);
    root["lambda"] = json::array({file.run.lambda.lo, file.run.lambda.hi});
    json run = {{"draws", file.run.draws},
                {"seed", file.run.seed},
                {"rule", electre::to_string(file.run.rule)},
                {"evaluation_sampling", file.run.evaluation_sampling}};
    if (file.run.cutoff) {
        run["cutoff"] = *file.run.cutoff;
    }
    if (file.run.attempt_budget != smaa::kDefaultAttemptBudget) {
        run["attempt_budget"] = file.run.attempt_budget;
    }
    root["run"] = std::move(run);

    if (!file.cash_flows.empty()) {
        json flows = json::object();
        for (const auto& [id, series] : file.cash_flows) {
            flows[id] = series.flows;
        }
        root["cash_flows"] = std::move(flows);
    }
    if (file.discount_rate) {
        root["discount_rate"] = *file.discount_rate;
    }
    if (!file.ratio_samples.empty()) {
        json samples = json::object();
        for (const auto& [sector, ratios] : file.ratio_samples) {
            json r = json::object();
            for (const auto& [id, sample] : ratios) {
                r[id] = sample;
            }
            samples[sector] = std::move(r);
        }
        root["ratio_samples"] = std::move(samples);
    }
    return root.dump(2) + "\n";
}

smaa::WeightSampler sampler_for(const DecisionMaker& dm, std::span<const std::string> criteria)
{
    if (const auto* bounds = std::get_if<smaa::IntervalWeights>(&dm.model)) {
        return smaa::BoxedSimplex{*bounds};
    }
    return smaa::FixedWeights{*point_weights(dm, criteria)};
}

std::optional<WeightVector> point_weights(const DecisionMaker& dm,
                                          std::span<const std::string> criteria)
{
    if (const auto* w = std::get_if<WeightVector>(&dm.model)) {
        return *w;
    }
    if (const auto* deck = std::get_if<CardDeck>(&dm.model)) {
        return simos_resolve(*deck, criteria).weights;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- reports

ReportFormat format_from_string(const std::string& text)
{
    if (text == "csv") {
        return ReportFormat::csv;
    }
    if (text == "json") {
        return ReportFormat::json;
    }
    throw ConfigurationError("unknown report format '" + text + "' (expected csv or json)");
}

std::string report_csv(std::span<const smaa::AcceptabilityReport> reports)
{
    std::size_t p = 0;
    for (const auto& r : reports) {
        p = std::max(p, r.categories);
    }
    std::string out = "alternative,dm";
    for (std::size_t k = 1; k <= p; ++k) {
        out += ",pi_" + std::to_string(k);
    }
    out += ",modal,type_i,type_ii";
    for (std::size_t k = 1; k <= p; ++k) {
        out += ",se_" + std::to_string(k);
    }
    out += '\n';
    auto na_or = [](const std::optional<double>& v) { return v ? shortest(*v) : std::string("NA"); };
    for (const auto& report : reports) {
        for (const auto& row : report.rows) {
            out += row.alternative + ',' + report.label;
            for (std::size_t k = 0; k < p; ++k) {
                out += ',' + (k < row.acceptability.size() ? shortest(row.acceptability[k]) : "NA");
            }
            out += ',' + std::to_string(row.modal_category) + ',' + na_or(row.type_i) + ',' +
                   na_or(row.type_ii);
            for (std::size_t k = 0; k < p; ++k) {
                out += ',' + (k < row.standard_error.size() ? shortest(row.standard_error[k]) : "NA");
            }
            out += '\n';
        }
    }
    return out;
}

std::string report_json(std::span<const smaa::AcceptabilityReport> reports)
{
    json out;
    out["schema_version"] = kSchemaVersion;
    json list = json::array();
    for (const auto& r : reports) {
        list.push_back(write_report_object(r));
    }
    out["reports"] = std::move(list);
    return out.dump(2) + "\n";
}

std::vector<smaa::AcceptabilityReport> parse_report_json(const std::string& text)
{
    const json root = parse_json(text);
    object_at(root, "report", {"schema_version", "reports"});
    std::vector<smaa::AcceptabilityReport> out;
    const auto& list = array_at(required(root, "report", "reports"), "reports");
    for (std::size_t i = 0; i < list.size(); ++i) {
        out.push_back(read_report_object(list[i], "reports[" + std::to_string(i) + "]"));
    }
    return out;
}

void write_report(std::span<const smaa::AcceptabilityReport> reports, ReportFormat format,
                  const std::filesystem::path& path)
{
    write_text_file(path, format == ReportFormat::csv ? report_csv(reports) : report_json(reports));
}

// ---------------------------------------------------------------- files

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    out.close();
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

std::string sha256_hex(const std::filesystem::path& path)
{
    const std::string bytes = read_text_file(path);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 computation failed for '" + path.string() + "'");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

ValidationReport verify_manifest(const std::filesystem::path& manifest)
{
    ValidationReport report;
    std::istringstream lines(read_text_file(manifest));
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::string digest;
        std::string name;
        fields >> digest >> name;
        const auto file = manifest.parent_path() / name;
        if (!std::filesystem::exists(file)) {
            report.add(name, "listed in manifest but missing");
        } else if (sha256_hex(file) != digest) {
            report.add(name, "contents differ from the manifest checksum");
        }
    }
    return report;
}

} // namespace creditsort::io
