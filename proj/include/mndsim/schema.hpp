#pragma once

// Declarative schema rules for the XML configuration documents.
//
// A rule file is line oriented; '#' starts a comment. Directives:
//
//   element <path> required|optional|repeated [int|uint|double|string]
//           [min=..] [max=..] [gt=..] [lt=..] [values=a|b|c]
//   attribute <path>@<name> required|optional [type] [constraints...]
//   probability_sum <parent-path> <child,child,...> [tol=1e-9]
//   require_if <path>[@attr]=<value> <target-path>
//
// Paths are slash-separated element names starting at the document root.
// Any element or attribute not named by a rule is a violation.

#include "mndsim/xml.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mndsim::schema {

enum class Cardinality { required, optional, repeated };
enum class ValueType { container, int_, uint_, double_, string_ };

struct NodeRule {
    std::vector<std::string> path;
    bool is_attribute = false;
    std::string attr_name; // when is_attribute
    Cardinality cardinality = Cardinality::optional;
    ValueType type = ValueType::container;
    std::optional<double> min, max, gt, lt;
    std::vector<std::string> values; // allowed literals, empty = any

    std::string display_path() const;
};

struct SumRule {
    std::vector<std::string> parent;
    std::vector<std::string> children;
    double tolerance = 1e-9;
};

struct RequireIfRule {
    std::vector<std::string> condition_path;
    std::string condition_attr; // empty: compare element text
    std::string condition_value;
    std::vector<std::string> target_path;
};

struct RuleSet {
    std::vector<NodeRule> nodes;
    std::vector<SumRule> sums;
    std::vector<RequireIfRule> conditionals;

    std::string root_name() const;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RuleSet parse_rules(std::string_view content);
RuleSet parse_rules_file(const std::string& path);

// Rule identifiers reported in issues:
//   missing_required, cardinality, unknown_element, unknown_attribute,
//   wrong_type, out_of_range, invalid_value, probability_sum,
//   missing_conditional
struct Issue {
    std::string path;    // path to the offending node
    std::string rule;    // violated rule identifier
    std::string message; // human-readable detail

    bool operator==(const Issue&) const = default;
};

struct ValidationReport {
    bool is_valid = true;
    std::vector<Issue> issues;

    std::string summary() const;
};

ValidationReport validate(const xml::Node& document, const RuleSet& rules);

/// File-level entry point: parses both files, never mutates them.
/// Throws xml::IoError / xml::ParseError / SchemaError; schema violations
/// land in the returned report.
ValidationReport validate_config(const std::string& document_path, const std::string& schema_path);

} // namespace mndsim::schema
