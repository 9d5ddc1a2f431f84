#pragma once

// Minimal XML document model for the simulator's configuration files.
// Supported subset: elements, attributes, character data, comments and an
// optional prolog. No namespaces, no DOCTYPE, no external entities, no
// mixed content (an element holds either child elements or text).

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mndsim::xml {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : std::runtime_error("xml parse error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + msg),
          line(line),
          column(column)
    {
    }
    std::size_t line;
    std::size_t column;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Node {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Node> children;
    std::string text; // trimmed character data; empty for container elements

    const Node* child(std::string_view child_name) const;
    Node* child(std::string_view child_name);
    std::vector<const Node*> children_named(std::string_view child_name) const;
    const std::string* attribute(std::string_view attr_name) const;
    void set_attribute(const std::string& attr_name, const std::string& value);

    bool operator==(const Node& other) const;
};

/// Parses a full document; the returned node is the root element.
Node parse(std::string_view content);
Node parse_file(const std::string& path);

/// Canonical serialization: prolog, 2-space indent, LF endings, trimmed text.
std::string serialize(const Node& root);

std::string read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::string_view bytes);

} // namespace mndsim::xml
