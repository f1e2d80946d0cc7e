#include "gfa/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "gfa/errors.hpp"

namespace gfa {

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n") != std::string::npos;
}

std::string quoted(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw TypeError("csv row arity does not match the header");
    rows_.push_back(std::move(cells));
}

std::string CsvWriter::str() const {
    std::string out = "# gfa-kit v1\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += quoted(columns_[i]);
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += quoted(row[i]);
        }
        out += '\n';
    }
    return out;
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw EvalError("cannot open for writing: " + path);
    std::string body = str();
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw EvalError("write failed: " + path);
}

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_int(long v) { return std::to_string(v); }

}  // namespace gfa
