#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace c2f {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
    bool has_column(const std::string& name) const { return column(name) >= 0; }
    double num(std::size_t row, int col) const;
};

// Lines starting with '#' are skipped; the first remaining line is the
// header. Throws if no header or no data rows survive.
CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, std::uint64_t config_hash,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string csv_num(double v);  // canonical %.17g formatting

}  // namespace c2f
