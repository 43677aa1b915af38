#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace typcell::cli {

/// Shortest round-trip decimal form; locale independent. NaN renders empty.
std::string format_number(double v);
std::string format_number(std::uint64_t v);

/// Header plus rows of already formatted cells. Cells never need quoting:
/// every value we emit is numeric or a bare identifier.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable &row(std::vector<std::string> cells);

  [[nodiscard]] const std::vector<std::string> &header() const noexcept { return header_; }
  [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
  [[nodiscard]] const std::vector<std::string> &at(std::size_t i) const { return rows_.at(i); }

  /// Comma separated, '\n' line endings, trailing newline.
  [[nodiscard]] std::string render() const;
  void write(const std::filesystem::path &path) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

} // namespace typcell::cli
