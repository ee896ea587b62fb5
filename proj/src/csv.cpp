#include "beamtraffic/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>

#include "beamtraffic/error.hpp"

namespace beamtraffic::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

}  // namespace

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        const auto piece = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        out.emplace_back(trim(piece));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

Reader::Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {
    std::vector<std::string> fields;
    if (!next(fields)) {
        return;  // empty input: no header, no rows
    }
    header_ = std::move(fields);
    // Strip a UTF-8 byte order mark.
    if (!header_.empty() && header_[0].rfind("\xEF\xBB\xBF", 0) == 0) {
        header_[0] = header_[0].substr(3);
    }
}

bool Reader::next(std::vector<std::string>& fields) {
    std::string raw;
    while (std::getline(in_, raw)) {
        ++line_;
        if (!raw.empty() && raw.back() == '\r') {
            raw.pop_back();
        }
        if (trim(raw).empty()) {
            continue;
        }
        fields = split(raw);
        return true;
    }
    return false;
}

std::size_t Reader::column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) {
            return i;
        }
    }
    throw ParseError(source_, 1, "missing column '" + std::string(name) + "'");
}

double Reader::to_double(const std::string& field, std::string_view what) const {
    if (field.empty() || field == "nan" || field == "NaN" || field == "NA") {
        return std::nan("");
    }
    const char* end = nullptr;
    double value = 0.0;
    // std::from_chars for double is available in libstdc++ 11.
    auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    end = res.ptr;
    if (res.ec != std::errc() || end != field.data() + field.size()) {
        throw ParseError(source_, line_, "invalid " + std::string(what) + " '" + field + "'");
    }
    return value;
}

long long Reader::to_int(const std::string& field, std::string_view what) const {
    long long value = 0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw ParseError(source_, line_, "invalid " + std::string(what) + " '" + field + "'");
    }
    return value;
}

std::string fmt(double v) {
    if (v == 0.0) {
        v = 0.0;  // drop negative zero
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::ifstream open_input(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open input file: " + file.string());
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidArgument("cannot open output file: " + file.string());
    }
    return out;
}

}  // namespace beamtraffic::csv
