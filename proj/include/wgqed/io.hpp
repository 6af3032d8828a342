#ifndef WGQED_IO_HPP
#define WGQED_IO_HPP

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core.hpp"

namespace wgqed {

using Json = nlohmann::ordered_json;

// shortest round-trip representation; NaN written as "nan", -0 as 0
inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }

  CsvTable& add(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) throw Error("csv: row width does not match the header");
    rows_.push_back(std::move(cells));
    return *this;
  }

  // '#' lines first: toolkit version and the resolved parameter set
  void write(std::ostream& os, const Json& provenance) const {
    os << "# wgqed " << version << '\n';
    os << "# config " << provenance.dump() << '\n';
    write_body(os);
  }

  void write_body(std::ostream& os) const {
    join(os, columns_);
    for (const auto& r : rows_) join(os, r);
  }

 private:
  static void join(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct Artifact {
  std::filesystem::path csv;
  std::filesystem::path metadata;
};

// <dir>/<stem>.csv and <dir>/<stem>.json
inline Artifact write_artifact(const std::filesystem::path& dir, const std::string& stem, const CsvTable& table,
                               const Json& metadata) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output: cannot create directory " + dir.string() + ": " + ec.message());
  Artifact a{dir / (stem + ".csv"), dir / (stem + ".json")};
  std::ofstream csv(a.csv, std::ios::binary);
  if (!csv) throw ConfigError("output: cannot write " + a.csv.string());
  table.write(csv, metadata.contains("config") ? metadata["config"] : Json::object());
  std::ofstream meta(a.metadata, std::ios::binary);
  if (!meta) throw ConfigError("output: cannot write " + a.metadata.string());
  meta << metadata.dump(2) << '\n';
  if (!csv || !meta) throw Error("output: write failed in " + dir.string());
  return a;
}

// lines of a CSV payload without the provenance comments
inline std::string csv_payload(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("csv: cannot read " + p.string());
  std::ostringstream os;
  std::string line;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') os << line << '\n';
  return os.str();
}

}  // namespace wgqed

#endif  // WGQED_IO_HPP
