#pragma once
#include <fstream>
#include <string>
#include <vector>

#include "catr/errors.hpp"

namespace catr {

// Fixed numeric formatting shared by every CSV and declared in each JSON
// output, so identical runs produce byte-identical files.
inline constexpr const char* kNumberFormat = "%.9g";

std::string format_number(double v);

/// Comma-delimited, one header row, LF line endings.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);

  private:
    std::ofstream out_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace catr
