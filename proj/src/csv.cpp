#include "srl/csv.hpp"

#include <fstream>
#include <sstream>

namespace srl {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("csv: no column named " + name);
}

double CsvTable::number(std::size_t row, int col) const {
    return std::stod(rows.at(row).at(col));
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path);
    CsvTable table;
    std::string line;
    if (std::getline(in, line)) table.columns = split_row(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        table.rows.push_back(split_row(line));
    }
    return table;
}

}  // namespace srl
