#pragma once

// CSV conventions shared by all outputs: comma separator, dot decimal,
// LF endings, header row, UTF-8, minimal RFC-4180 quoting.

#include <ostream>
#include <string>
#include <vector>

namespace mndsim::csvio {

std::string escape_field(const std::string& field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Fixed-point formatting with the given number of decimals.
std::string format_double(double value, int decimals);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reads a whole file; handles quoted fields and tolerates CRLF.
Table read_csv(const std::string& path);

std::vector<std::string> split_joined_list(const std::string& field);

} // namespace mndsim::csvio
