#pragma once

#include <string>
#include <vector>

namespace gfa {

/// Report table with the versioned "# gfa-kit v1" header line. Numbers are
/// rendered with shortest round-trip formatting and infinities as inf/-inf,
/// so identical runs serialize to identical bytes.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);

    void add_row(std::vector<std::string> cells);  // arity must match columns
    std::string str() const;
    void write_file(const std::string& path) const;  // EvalError with the path on failure

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string csv_number(double v);
std::string csv_int(long v);

}  // namespace gfa
