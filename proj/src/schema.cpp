#include "mndsim/schema.hpp"

#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>

namespace mndsim::schema {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(begin, i - begin));
            begin = i + 1;
        }
    }
    return out;
}

std::string join_path(const std::vector<std::string>& segments)
{
    std::string out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (i)
            out += '/';
        out += segments[i];
    }
    return out;
}

bool parse_int64(const std::string& text, std::int64_t& out)
{
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && !text.empty();
}

bool parse_uint64(const std::string& text, std::uint64_t& out)
{
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && !text.empty();
}

bool parse_double(const std::string& text, double& out)
{
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && !text.empty();
}

const char* type_name(ValueType t)
{
    switch (t) {
    case ValueType::int_: return "int";
    case ValueType::uint_: return "uint";
    case ValueType::double_: return "double";
    case ValueType::string_: return "string";
    default: return "container";
    }
}

struct Instance {
    const xml::Node* node;
    std::string display;
};

void collect_instances(const xml::Node& node, const std::string& display,
                       const std::vector<std::string>& path, std::size_t depth,
                       std::vector<Instance>& out)
{
    if (depth == path.size()) {
        out.push_back({&node, display});
        return;
    }
    const auto matches = node.children_named(path[depth]);
    for (std::size_t i = 0; i < matches.size(); ++i) {
        std::string child_display = display + "/" + path[depth];
        if (matches.size() > 1)
            child_display += "[" + std::to_string(i) + "]";
        collect_instances(*matches[i], child_display, path, depth + 1, out);
    }
}

std::vector<Instance> instances_of(const xml::Node& root, const std::vector<std::string>& path)
{
    std::vector<Instance> out;
    if (path.empty() || root.name != path[0])
        return out;
    collect_instances(root, path[0], std::vector<std::string>(path.begin() + 1, path.end()), 0,
                      out);
    return out;
}

class Validator {
public:
    Validator(const xml::Node& doc, const RuleSet& rules) : doc_(doc), rules_(rules)
    {
        for (const NodeRule& r : rules.nodes) {
            const std::string joined = join_path(r.path);
            if (r.is_attribute)
                attrs_of_[joined].push_back(&r);
            else
                element_rule_[joined] = &r;
        }
        for (const NodeRule& r : rules.nodes) {
            if (r.is_attribute || r.path.size() < 2)
                continue;
            std::vector<std::string> parent(r.path.begin(), r.path.end() - 1);
            children_of_[join_path(parent)].push_back(&r);
        }
    }

    ValidationReport run()
    {
        const std::string root = rules_.root_name();
        if (doc_.name != root) {
            add(doc_.name, "unknown_element",
                "root element is '" + doc_.name + "', schema expects '" + root + "'");
            add(root, "missing_required", "required root element '" + root + "' not found");
        }
        else {
            walk(doc_, root, root);
            check_sums();
            check_conditionals();
        }
        report_.is_valid = report_.issues.empty();
        return report_;
    }

private:
    const xml::Node& doc_;
    const RuleSet& rules_;
    ValidationReport report_;
    std::map<std::string, const NodeRule*> element_rule_;
    std::map<std::string, std::vector<const NodeRule*>> children_of_;
    std::map<std::string, std::vector<const NodeRule*>> attrs_of_;

    void add(const std::string& path, const std::string& rule, const std::string& message)
    {
        report_.issues.push_back({path, rule, message});
    }

    void check_scalar(const NodeRule& rule, const std::string& text, const std::string& display)
    {
        double numeric = 0.0;
        bool have_numeric = false;
        switch (rule.type) {
        case ValueType::int_: {
            std::int64_t v = 0;
            if (!parse_int64(text, v)) {
                add(display, "wrong_type", "'" + text + "' is not a valid int");
                return;
            }
            numeric = static_cast<double>(v);
            have_numeric = true;
            break;
        }
        case ValueType::uint_: {
            std::uint64_t v = 0;
            if (!parse_uint64(text, v)) {
                add(display, "wrong_type", "'" + text + "' is not a valid uint");
                return;
            }
            numeric = static_cast<double>(v);
            have_numeric = true;
            break;
        }
        case ValueType::double_: {
            double v = 0.0;
            if (!parse_double(text, v)) {
                add(display, "wrong_type", "'" + text + "' is not a valid double");
                return;
            }
            numeric = v;
            have_numeric = true;
            break;
        }
        default:
            break;
        }
        if (!rule.values.empty()) {
            bool found = false;
            for (const std::string& allowed : rule.values)
                if (allowed == text)
                    found = true;
            if (!found) {
                std::string allowed_list;
                for (std::size_t i = 0; i < rule.values.size(); ++i)
                    allowed_list += (i ? "|" : "") + rule.values[i];
                add(display, "invalid_value",
                    "'" + text + "' is not one of {" + allowed_list + "}");
                return;
            }
        }
        if (!have_numeric)
            return;
        std::ostringstream why;
        if (rule.min && numeric < *rule.min)
            why << "value " << text << " < min " << *rule.min;
        else if (rule.max && numeric > *rule.max)
            why << "value " << text << " > max " << *rule.max;
        else if (rule.gt && !(numeric > *rule.gt))
            why << "value " << text << " must be > " << *rule.gt;
        else if (rule.lt && !(numeric < *rule.lt))
            why << "value " << text << " must be < " << *rule.lt;
        if (!why.str().empty())
            add(display, "out_of_range", why.str());
    }

    void walk(const xml::Node& node, const std::string& joined, const std::string& display)
    {
        const NodeRule* rule = element_rule_.at(joined);

        if (rule->type != ValueType::container) {
            if (!node.children.empty())
                add(display, "wrong_type",
                    "expected scalar of type " + std::string(type_name(rule->type)) +
                        ", found child elements");
            else
                check_scalar(*rule, node.text, display);
        }
        else if (!node.text.empty()) {
            add(display, "wrong_type", "element holds text but is declared a container");
        }

        // attributes
        auto attr_rules_it = attrs_of_.find(joined);
        if (attr_rules_it != attrs_of_.end()) {
            for (const NodeRule* ar : attr_rules_it->second) {
                const std::string* value = node.attribute(ar->attr_name);
                const std::string attr_display = display + "@" + ar->attr_name;
                if (!value) {
                    if (ar->cardinality == Cardinality::required)
                        add(attr_display, "missing_required",
                            "required attribute '" + ar->attr_name + "' missing");
                    continue;
                }
                check_scalar(*ar, *value, attr_display);
            }
        }
        for (const auto& [attr_name, value] : node.attributes) {
            bool declared = false;
            if (attr_rules_it != attrs_of_.end())
                for (const NodeRule* ar : attr_rules_it->second)
                    if (ar->attr_name == attr_name)
                        declared = true;
            if (!declared)
                add(display + "@" + attr_name, "unknown_attribute",
                    "attribute '" + attr_name + "' is not in the schema");
        }

        // declared children: cardinality
        auto child_rules_it = children_of_.find(joined);
        if (child_rules_it != children_of_.end()) {
            for (const NodeRule* cr : child_rules_it->second) {
                const std::string& child_name = cr->path.back();
                const std::size_t count = node.children_named(child_name).size();
                const std::string child_display = display + "/" + child_name;
                if (count == 0 && cr->cardinality == Cardinality::required)
                    add(child_display, "missing_required",
                        "required element '" + child_name + "' missing");
                if (count > 1 && cr->cardinality != Cardinality::repeated)
                    add(child_display, "cardinality",
                        "element '" + child_name + "' occurs " + std::to_string(count) +
                            " times, at most one allowed");
            }
        }

        // actual children: unknown detection + recursion
        std::map<std::string, std::size_t> sibling_index;
        std::map<std::string, std::size_t> sibling_total;
        for (const xml::Node& c : node.children)
            ++sibling_total[c.name];
        for (const xml::Node& c : node.children) {
            const std::string child_joined = joined + "/" + c.name;
            std::string child_display = display + "/" + c.name;
            if (sibling_total[c.name] > 1)
                child_display += "[" + std::to_string(sibling_index[c.name]++) + "]";
            if (!element_rule_.count(child_joined)) {
                add(child_display, "unknown_element",
                    "element '" + c.name + "' is not in the schema");
                continue;
            }
            walk(c, child_joined, child_display);
        }
    }

    void check_sums()
    {
        for (const SumRule& rule : rules_.sums) {
            for (const Instance& inst : instances_of(doc_, rule.parent)) {
                double sum = 0.0;
                bool complete = true;
                std::string expr;
                for (const std::string& child_name : rule.children) {
                    const xml::Node* child = inst.node->child(child_name);
                    double v = 0.0;
                    if (!child || !parse_double(child->text, v)) {
                        complete = false; // element rules already flag this
                        break;
                    }
                    expr += (expr.empty() ? "" : "+") + child_name;
                    sum += v;
                }
                if (complete && std::abs(sum - 1.0) > rule.tolerance) {
                    std::ostringstream msg;
                    msg << expr << " = " << sum << ", expected 1 (tolerance " << rule.tolerance
                        << ")";
                    add(inst.display, "probability_sum", msg.str());
                }
            }
        }
    }

    void check_conditionals()
    {
        for (const RequireIfRule& rule : rules_.conditionals) {
            // common ancestor of condition and target paths
            std::size_t common = 0;
            while (common < rule.condition_path.size() && common < rule.target_path.size() &&
                   rule.condition_path[common] == rule.target_path[common])
                ++common;
            std::vector<std::string> ancestor(rule.condition_path.begin(),
                                              rule.condition_path.begin() + common);
            for (const Instance& inst : instances_of(doc_, ancestor)) {
                const xml::Node* cond = inst.node;
                bool found = true;
                for (std::size_t i = common; i < rule.condition_path.size(); ++i) {
                    cond = cond->child(rule.condition_path[i]);
                    if (!cond) {
                        found = false;
                        break;
                    }
                }
                if (!found)
                    continue;
                std::string actual;
                if (rule.condition_attr.empty()) {
                    actual = cond->text;
                }
                else {
                    const std::string* attr = cond->attribute(rule.condition_attr);
                    if (!attr)
                        continue;
                    actual = *attr;
                }
                if (actual != rule.condition_value)
                    continue;
                const xml::Node* target = inst.node;
                for (std::size_t i = common; i < rule.target_path.size() && target; ++i)
                    target = target->child(rule.target_path[i]);
                if (!target) {
                    std::string cond_display = join_path(rule.condition_path);
                    if (!rule.condition_attr.empty())
                        cond_display += "@" + rule.condition_attr;
                    add(inst.display + "/" + rule.target_path.back(), "missing_conditional",
                        "element '" + join_path(rule.target_path) + "' required when " +
                            cond_display + " = '" + rule.condition_value + "'");
                }
            }
        }
    }
};

} // namespace

std::string NodeRule::display_path() const
{
    std::string out = join_path(path);
    if (is_attribute)
        out += "@" + attr_name;
    return out;
}

std::string RuleSet::root_name() const
{
    for (const NodeRule& r : nodes)
        if (!r.path.empty())
            return r.path[0];
    return {};
}

std::string ValidationReport::summary() const
{
    std::string out;
    for (const Issue& issue : issues)
        out += issue.path + ": " + issue.rule + ": " + issue.message + "\n";
    return out;
}

RuleSet parse_rules(std::string_view content)
{
    RuleSet rules;
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t line_no = 0;
    auto error = [&](const std::string& msg) -> SchemaError {
        return SchemaError("schema rules line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream tokens(line);
        std::vector<std::string> tok;
        std::string t;
        while (tokens >> t)
            tok.push_back(t);
        if (tok.empty())
            continue;

        auto parse_constraints = [&](NodeRule& rule, std::size_t first) {
            for (std::size_t i = first; i < tok.size(); ++i) {
                const std::string& item = tok[i];
                auto eq = item.find('=');
                if (eq == std::string::npos) {
                    if (item == "int")
                        rule.type = ValueType::int_;
                    else if (item == "uint")
                        rule.type = ValueType::uint_;
                    else if (item == "double")
                        rule.type = ValueType::double_;
                    else if (item == "string")
                        rule.type = ValueType::string_;
                    else
                        throw error("unknown type '" + item + "'");
                    continue;
                }
                const std::string key = item.substr(0, eq);
                const std::string value = item.substr(eq + 1);
                if (key == "values") {
                    rule.values = split(value, '|');
                    if (rule.type == ValueType::container)
                        rule.type = ValueType::string_;
                    continue;
                }
                double v = 0.0;
                if (!parse_double(value, v))
                    throw error("bad numeric bound '" + item + "'");
                if (key == "min")
                    rule.min = v;
                else if (key == "max")
                    rule.max = v;
                else if (key == "gt")
                    rule.gt = v;
                else if (key == "lt")
                    rule.lt = v;
                else
                    throw error("unknown constraint '" + key + "'");
            }
        };

        if (tok[0] == "element" || tok[0] == "attribute") {
            if (tok.size() < 3)
                throw error("expected: " + tok[0] + " <path> <cardinality> ...");
            NodeRule rule;
            std::string path = tok[1];
            if (tok[0] == "attribute") {
                auto at = path.find('@');
                if (at == std::string::npos)
                    throw error("attribute path needs '@name'");
                rule.is_attribute = true;
                rule.attr_name = path.substr(at + 1);
                path.erase(at);
            }
            rule.path = split(path, '/');
            if (tok[2] == "required")
                rule.cardinality = Cardinality::required;
            else if (tok[2] == "optional")
                rule.cardinality = Cardinality::optional;
            else if (tok[2] == "repeated" && !rule.is_attribute)
                rule.cardinality = Cardinality::repeated;
            else
                throw error("unknown cardinality '" + tok[2] + "'");
            parse_constraints(rule, 3);
            rules.nodes.push_back(std::move(rule));
        }
        else if (tok[0] == "probability_sum") {
            if (tok.size() < 3)
                throw error("expected: probability_sum <parent> <children> [tol=..]");
            SumRule rule;
            rule.parent = split(tok[1], '/');
            rule.children = split(tok[2], ',');
            for (std::size_t i = 3; i < tok.size(); ++i) {
                if (tok[i].rfind("tol=", 0) == 0) {
                    double v = 0.0;
                    if (!parse_double(tok[i].substr(4), v))
                        throw error("bad tolerance '" + tok[i] + "'");
                    rule.tolerance = v;
                }
                else {
                    throw error("unknown option '" + tok[i] + "'");
                }
            }
            rules.sums.push_back(std::move(rule));
        }
        else if (tok[0] == "require_if") {
            if (tok.size() != 3)
                throw error("expected: require_if <path>[@attr]=<value> <target>");
            auto eq = tok[1].find('=');
            if (eq == std::string::npos)
                throw error("condition needs '=<value>'");
            RequireIfRule rule;
            std::string cond = tok[1].substr(0, eq);
            rule.condition_value = tok[1].substr(eq + 1);
            if (auto at = cond.find('@'); at != std::string::npos) {
                rule.condition_attr = cond.substr(at + 1);
                cond.erase(at);
            }
            rule.condition_path = split(cond, '/');
            rule.target_path = split(tok[2], '/');
            rules.conditionals.push_back(std::move(rule));
        }
        else {
            throw error("unknown directive '" + tok[0] + "'");
        }
    }
    if (rules.nodes.empty())
        throw SchemaError("schema rules declare no elements");
    const std::string root = rules.root_name();
    for (const NodeRule& r : rules.nodes)
        if (r.path.empty() || r.path[0] != root)
            throw SchemaError("schema rules mix root elements: '" + root + "' vs '" +
                              (r.path.empty() ? "" : r.path[0]) + "'");
    return rules;
}

RuleSet parse_rules_file(const std::string& path)
{
    return parse_rules(xml::read_file_bytes(path));
}

ValidationReport validate(const xml::Node& document, const RuleSet& rules)
{
    Validator validator(document, rules);
    return validator.run();
}

ValidationReport validate_config(const std::string& document_path, const std::string& schema_path)
{
    const RuleSet rules = parse_rules_file(schema_path);
    const xml::Node doc = xml::parse_file(document_path);
    return validate(doc, rules);
}

} // namespace mndsim::schema
