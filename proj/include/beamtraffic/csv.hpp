#pragma once

// Minimal CSV reading/writing shared by the file formats.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace beamtraffic::csv {

// Splits one line on commas, trimming whitespace and surrounding quotes.
std::vector<std::string> split(std::string_view line);

/// Line-oriented reader that skips blank lines and tracks the 1-based line
/// number for error messages. The first non-blank line is the header; a
/// completely empty input has an empty header and no rows.
class Reader {
public:
    Reader(std::istream& in, std::string source);

    const std::vector<std::string>& header() const { return header_; }
    bool empty() const { return header_.empty(); }
    std::size_t line() const { return line_; }
    const std::string& source() const { return source_; }

    // Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    /// Index of a header column; throws ParseError when absent.
    std::size_t column(std::string_view name) const;

    double to_double(const std::string& field, std::string_view what) const;
    long long to_int(const std::string& field, std::string_view what) const;

private:
    std::istream& in_;
    std::string source_;
    std::vector<std::string> header_;
    std::size_t line_ = 0;
};

// Canonical 9-significant-digit float formatting ("%.9g").
std::string fmt(double v);

std::ifstream open_input(const std::filesystem::path& file);
std::ofstream open_output(const std::filesystem::path& file);

}  // namespace beamtraffic::csv
