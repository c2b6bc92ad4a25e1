#include "rcm/cli/csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rcm/error.hpp"

#ifndef RCM_BUILD_HASH
#define RCM_BUILD_HASH "unknown"
#endif

namespace rcm {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

CsvTable::Row CsvTable::row() {
  rows_.emplace_back();
  return Row(&rows_.back());
}

CsvTable::Row& CsvTable::Row::add(double v) {
  cells_->push_back(format_double(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(int64_t v) {
  cells_->push_back(std::to_string(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(uint64_t v) {
  cells_->push_back(std::to_string(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(bool v) {
  cells_->push_back(v ? "1" : "0");
  return *this;
}
CsvTable::Row& CsvTable::Row::add(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) {
    cells_->push_back(v);
    return *this;
  }
  std::string q = "\"";
  for (char c : v) {
    if (c == '"') q += '"';
    q += c;
  }
  cells_->push_back(q + "\"");
  return *this;
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(columns_);
  for (const auto& r : rows_) {
    if (r.size() != columns_.size()) throw PreconditionError("CSV row width differs from the header");
    line(r);
  }
}

std::string CsvTable::str() const {
  std::ostringstream s;
  write(s);
  return s.str();
}

nlohmann::json RunResult::meta() const {
  return {{"experiment", experiment}, {"seeds", seeds},         {"config_digest", config_digest},
          {"build_hash", build_hash()}, {"wall_seconds", wall_seconds}, {"threads", threads},
          {"rows", table.rows().size()}, {"extra", extra}};
}

std::string build_hash() { return RCM_BUILD_HASH; }

void write_run(const RunResult& r, const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    r.table.write(out);
  }
  std::ofstream meta(path + ".meta.json", std::ios::binary);
  if (!meta) throw ConfigError("cannot write " + path + ".meta.json");
  meta << r.meta().dump(2) << '\n';
}

}  // namespace rcm
