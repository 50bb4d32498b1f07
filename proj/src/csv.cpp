#include "c2f/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace c2f {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

double CsvTable::num(std::size_t row, int col) const {
    if (col < 0 || row >= rows.size() || col >= static_cast<int>(rows[row].size()))
        throw std::out_of_range("CsvTable::num: bad cell");
    return std::stod(rows[row][col]);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open csv: " + path);
    CsvTable t;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line[0] == '#') continue;
        if (line.empty()) continue;
        if (t.header.empty()) {
            t.header = split_commas(line);
        } else {
            auto row = split_commas(line);
            if (row.size() != t.header.size())
                throw std::runtime_error("csv row width mismatch in " + path);
            t.rows.push_back(std::move(row));
        }
    }
    if (t.header.empty()) throw std::runtime_error("csv has no header: " + path);
    if (t.rows.empty()) throw std::runtime_error("csv has no data rows: " + path);
    return t;
}

void write_csv(const std::string& path, std::uint64_t config_hash,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open csv for writing: " + path);
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(config_hash));
    f << "# config=" << hex << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
        f << "\n";
    }
    if (!f) throw std::runtime_error("short write on csv: " + path);
}

std::string csv_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace c2f
