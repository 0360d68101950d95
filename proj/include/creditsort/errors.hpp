#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace creditsort {

/// One mechanical inconsistency found in project data. `location` is a
/// dotted path such as `alternatives[A].evaluations.g2_3`.
struct Violation {
    std::string location;
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string location, std::string message)
    {
        violations.push_back({std::move(location), std::move(message)});
    }
    void append(const ValidationReport& other)
    {
        violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    }
    std::string to_string() const;
};

/// Invalid run parameters (weights that do not sum to one, lambda out of
/// range, empty weight polytope, ...). Maps to CLI exit code 2.
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Semantic faults in input data. Carries the full report; maps to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report)
        : std::runtime_error(report.to_string()), report_(std::move(report))
    {
    }
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Syntax errors in input files, positioned at a 1-based line and column.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what), line_(line), column_(column)
    {
    }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class UnsupportedInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace creditsort
