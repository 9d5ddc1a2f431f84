#include "mndsim/csv.hpp"

#include "mndsim/xml.hpp" // read_file_bytes

#include <cstdio>
#include <stdexcept>

namespace mndsim::csvio {

std::string escape_field(const std::string& field)
{
    bool needs_quotes = false;
    for (char c : field)
        if (c == ',' || c == '"' || c == '\n' || c == '\r')
            needs_quotes = true;
    if (!needs_quotes)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out << ',';
        out << escape_field(fields[i]);
    }
    out << '\n';
}

std::string format_double(double value, int decimals)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    return buffer;
}

Table read_csv(const std::string& path)
{
    const std::string bytes = xml::read_file_bytes(path);
    Table table;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_has_content = false;

    auto end_field = [&]() {
        row.push_back(field);
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        if (table.header.empty())
            table.header = row;
        else
            table.rows.push_back(row);
        row.clear();
        row_has_content = false;
    };

    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const char c = bytes[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < bytes.size() && bytes[i + 1] == '"') {
                    field += '"';
                    ++i;
                }
                else {
                    in_quotes = false;
                }
            }
            else {
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            row_has_content = true;
            break;
        case ',':
            end_field();
            row_has_content = true;
            break;
        case '\r':
            break;
        case '\n':
            if (row_has_content || !field.empty() || !row.empty())
                end_row();
            break;
        default:
            field += c;
            row_has_content = true;
        }
    }
    if (in_quotes)
        throw std::runtime_error(path + ": unterminated quoted field");
    if (row_has_content || !field.empty() || !row.empty())
        end_row();
    return table;
}

std::vector<std::string> split_joined_list(const std::string& field)
{
    std::vector<std::string> out;
    if (field.empty())
        return out;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= field.size(); ++i) {
        if (i == field.size() || field[i] == ',') {
            out.push_back(field.substr(begin, i - begin));
            begin = i + 1;
        }
    }
    return out;
}

} // namespace mndsim::csvio
