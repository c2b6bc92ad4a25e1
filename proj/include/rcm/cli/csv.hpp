#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace rcm {

// Floats are printed with 17 significant digits.
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  class Row {
   public:
    Row& add(double v);
    Row& add(int64_t v);
    Row& add(uint64_t v);
    Row& add(int v) { return add(int64_t(v)); }
    Row& add(bool v);
    Row& add(const std::string& v);
    Row& add(const char* v) { return add(std::string(v)); }

   private:
    friend class CsvTable;
    explicit Row(std::vector<std::string>* cells) : cells_(cells) {}
    std::vector<std::string>* cells_;
  };
  // Row cells must be added in column order; write() checks the count.
  Row row();

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// One experiment output: the CSV plus provenance written to <csv>.meta.json.
struct RunResult {
  std::string experiment;
  CsvTable table{{}};
  std::vector<uint64_t> seeds;
  std::string config_digest;
  double wall_seconds = 0;
  int threads = 1;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json meta() const;
};

std::string build_hash();
// Writes path and path + ".meta.json"; creates parent directories.
void write_run(const RunResult& r, const std::string& path);

}  // namespace rcm
