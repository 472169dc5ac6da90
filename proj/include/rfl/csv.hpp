#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace rfl {

// Shortest round-trip decimal form; bitwise-stable across runs.
std::string format_double(double v);

std::vector<std::string> split_csv_line(const std::string& line);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 if absent
};

CsvTable read_csv(const std::string& path);

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    void write_row(const std::vector<std::string>& cells);
    void write_doubles(const std::vector<double>& values);

  private:
    std::ofstream out_;
    std::string path_;
};

} // namespace rfl
