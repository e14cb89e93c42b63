#pragma once

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace srl {

// Minimal CSV writer; doubles are serialized with 17 significant digits so a
// round trip through text reproduces the bits.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : f_(std::fopen(path.c_str(), "w")) {
        if (!f_) throw std::runtime_error("csv: cannot open " + path);
    }
    ~CsvWriter() {
        if (f_) std::fclose(f_);
    }
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            std::fprintf(f_, "%s%s", i ? "," : "", cols[i].c_str());
        std::fprintf(f_, "\n");
    }
    void field(double v) { std::fprintf(f_, "%s%.17g", sep(), v); }
    void field(int v) { std::fprintf(f_, "%s%d", sep(), v); }
    void field(long v) { std::fprintf(f_, "%s%ld", sep(), v); }
    void field(const std::string& v) { std::fprintf(f_, "%s%s", sep(), v.c_str()); }
    void end_row() {
        std::fprintf(f_, "\n");
        first_ = true;
    }

private:
    const char* sep() {
        if (first_) {
            first_ = false;
            return "";
        }
        return ",";
    }
    std::FILE* f_;
    bool first_ = true;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const;
    double number(std::size_t row, int col) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace srl
