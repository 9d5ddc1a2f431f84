#include "mndsim/xml.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace mndsim::xml {

namespace {

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

bool is_name_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_name_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b]))
        ++b;
    while (e > b && is_space(s[e - 1]))
        --e;
    return std::string(s.substr(b, e - b));
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Node parse_document()
    {
        skip_prolog_and_misc();
        if (eof())
            fail("document has no root element");
        Node root = parse_element();
        skip_misc();
        if (!eof())
            fail("content after root element");
        return root;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    bool eof() const { return pos_ >= src_.size(); }

    char peek() const { return src_[pos_]; }

    bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    void advance(std::size_t n = 1)
    {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            }
            else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_ws()
    {
        while (!eof() && is_space(peek()))
            advance();
    }

    void expect(char c)
    {
        if (eof() || peek() != c)
            fail(std::string("expected '") + c + "'");
        advance();
    }

    void skip_comment()
    {
        // caller saw "<!--"
        advance(4);
        while (!eof() && !starts_with("-->"))
            advance();
        if (eof())
            fail("unterminated comment");
        advance(3);
    }

    void skip_prolog_and_misc()
    {
        skip_ws();
        if (starts_with("<?xml")) {
            while (!eof() && !starts_with("?>"))
                advance();
            if (eof())
                fail("unterminated XML declaration");
            advance(2);
        }
        skip_misc();
    }

    void skip_misc()
    {
        for (;;) {
            skip_ws();
            if (starts_with("<!--")) {
                skip_comment();
            }
            else if (starts_with("<!DOCTYPE")) {
                fail("DOCTYPE is not supported");
            }
            else {
                return;
            }
        }
    }

    std::string parse_name()
    {
        if (eof() || !is_name_start(peek()))
            fail("expected a name");
        std::size_t begin = pos_;
        while (!eof() && is_name_char(peek()))
            advance();
        if (!eof() && peek() == ':')
            fail("namespaces are not supported");
        return std::string(src_.substr(begin, pos_ - begin));
    }

    std::string decode_entity()
    {
        // caller saw '&'
        advance();
        std::size_t begin = pos_;
        while (!eof() && peek() != ';' && pos_ - begin < 12)
            advance();
        if (eof() || peek() != ';')
            fail("unterminated entity reference");
        std::string name(src_.substr(begin, pos_ - begin));
        advance();
        if (name == "amp") return "&";
        if (name == "lt") return "<";
        if (name == "gt") return ">";
        if (name == "quot") return "\"";
        if (name == "apos") return "'";
        if (!name.empty() && name[0] == '#') {
            int base = 10;
            std::size_t digits = 1;
            if (name.size() > 1 && (name[1] == 'x' || name[1] == 'X')) {
                base = 16;
                digits = 2;
            }
            try {
                unsigned long code = std::stoul(name.substr(digits), nullptr, base);
                if (code == 0 || code > 0x10FFFF)
                    fail("character reference out of range");
                // encode as UTF-8
                std::string out;
                if (code < 0x80) {
                    out += static_cast<char>(code);
                }
                else if (code < 0x800) {
                    out += static_cast<char>(0xC0 | (code >> 6));
                    out += static_cast<char>(0x80 | (code & 0x3F));
                }
                else if (code < 0x10000) {
                    out += static_cast<char>(0xE0 | (code >> 12));
                    out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
                    out += static_cast<char>(0x80 | (code & 0x3F));
                }
                else {
                    out += static_cast<char>(0xF0 | (code >> 18));
                    out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
                    out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
                    out += static_cast<char>(0x80 | (code & 0x3F));
                }
                return out;
            }
            catch (const std::exception&) {
                fail("bad character reference");
            }
        }
        fail("unknown entity '&" + name + ";'");
    }

    std::string parse_attr_value()
    {
        if (eof() || (peek() != '"' && peek() != '\''))
            fail("expected quoted attribute value");
        char quote = peek();
        advance();
        std::string value;
        while (!eof() && peek() != quote) {
            if (peek() == '<')
                fail("'<' in attribute value");
            if (peek() == '&') {
                value += decode_entity();
            }
            else {
                value += peek();
                advance();
            }
        }
        if (eof())
            fail("unterminated attribute value");
        advance();
        return value;
    }

    Node parse_element()
    {
        expect('<');
        Node node;
        node.name = parse_name();
        for (;;) {
            skip_ws();
            if (eof())
                fail("unterminated start tag");
            if (peek() == '>') {
                advance();
                break;
            }
            if (starts_with("/>")) {
                advance(2);
                return node;
            }
            std::string attr_name = parse_name();
            for (const auto& [existing, _] : node.attributes)
                if (existing == attr_name)
                    fail("duplicate attribute '" + attr_name + "'");
            skip_ws();
            expect('=');
            skip_ws();
            node.attributes.emplace_back(attr_name, parse_attr_value());
        }
        parse_content(node);
        return node;
    }

    void parse_content(Node& node)
    {
        std::string text;
        for (;;) {
            if (eof())
                fail("unterminated element '" + node.name + "'");
            if (starts_with("<!--")) {
                skip_comment();
            }
            else if (starts_with("</")) {
                advance(2);
                std::string close = parse_name();
                if (close != node.name)
                    fail("mismatched close tag '" + close + "' for '" + node.name + "'");
                skip_ws();
                expect('>');
                break;
            }
            else if (starts_with("<![CDATA[")) {
                fail("CDATA is not supported");
            }
            else if (peek() == '<') {
                node.children.push_back(parse_element());
            }
            else if (peek() == '&') {
                text += decode_entity();
            }
            else {
                text += peek();
                advance();
            }
        }
        std::string trimmed = trim(text);
        if (!node.children.empty() && !trimmed.empty())
            fail("mixed element and text content in '" + node.name + "'");
        node.text = trimmed;
    }
};

void escape_text(const std::string& in, std::string& out)
{
    for (char c : in) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
}

void escape_attr(const std::string& in, std::string& out)
{
    for (char c : in) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
}

void serialize_node(const Node& node, int depth, std::string& out)
{
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += '<';
    out += node.name;
    for (const auto& [name, value] : node.attributes) {
        out += ' ';
        out += name;
        out += "=\"";
        escape_attr(value, out);
        out += '"';
    }
    if (node.children.empty() && node.text.empty()) {
        out += "/>\n";
        return;
    }
    if (node.children.empty()) {
        out += '>';
        escape_text(node.text, out);
        out += "</";
        out += node.name;
        out += ">\n";
        return;
    }
    out += ">\n";
    for (const Node& c : node.children)
        serialize_node(c, depth + 1, out);
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "</";
    out += node.name;
    out += ">\n";
}

} // namespace

const Node* Node::child(std::string_view child_name) const
{
    for (const Node& c : children)
        if (c.name == child_name)
            return &c;
    return nullptr;
}

Node* Node::child(std::string_view child_name)
{
    for (Node& c : children)
        if (c.name == child_name)
            return &c;
    return nullptr;
}

std::vector<const Node*> Node::children_named(std::string_view child_name) const
{
    std::vector<const Node*> out;
    for (const Node& c : children)
        if (c.name == child_name)
            out.push_back(&c);
    return out;
}

const std::string* Node::attribute(std::string_view attr_name) const
{
    for (const auto& [name, value] : attributes)
        if (name == attr_name)
            return &value;
    return nullptr;
}

void Node::set_attribute(const std::string& attr_name, const std::string& value)
{
    for (auto& [name, existing] : attributes) {
        if (name == attr_name) {
            existing = value;
            return;
        }
    }
    attributes.emplace_back(attr_name, value);
}

bool Node::operator==(const Node& other) const
{
    return name == other.name && attributes == other.attributes && text == other.text &&
           children == other.children;
}

Node parse(std::string_view content)
{
    Parser parser(content);
    return parser.parse_document();
}

Node parse_file(const std::string& path)
{
    return parse(read_file_bytes(path));
}

std::string serialize(const Node& root)
{
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    serialize_node(root, 0, out);
    return out;
}

std::string read_file_bytes(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
        throw IoError("read failure: " + path);
    return buffer.str();
}

void write_file_bytes(const std::string& path, std::string_view bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open file for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out)
        throw IoError("write failure: " + path);
}

} // namespace mndsim::xml
