#include "csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace typcell::cli {

std::string format_number(double v) {
  if (std::isnan(v)) {
    return {};
  }
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) {
    throw std::runtime_error("format_number: conversion failed");
  }
  return {buf.data(), end};
}

std::string format_number(std::uint64_t v) { return std::to_string(v); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable &CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::logic_error("CsvTable::row: cell count does not match the header");
  }
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::render() const {
  std::string out;
  auto line = [&out](const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) {
        out += ',';
      }
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto &r : rows_) {
    line(r);
  }
  return out;
}

void CsvTable::write(const std::filesystem::path &path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  os << render();
  if (!os) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

} // namespace typcell::cli
