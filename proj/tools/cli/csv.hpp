#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace seqmeas::cli {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

class CsvTable {
 public:
  void add_meta(std::string key, std::string value);
  void set_header(std::vector<std::string> columns);
  /// Throws std::logic_error if the row width differs from the header.
  void add_row(std::vector<double> row);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

  void write(std::ostream& os) const;

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace seqmeas::cli
