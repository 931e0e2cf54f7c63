#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "orrw/version.hpp"

namespace orrw::csv {

// 17 significant digits: doubles survive a print/parse round trip bit-exactly.
inline std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format(std::uint64_t v) { return std::to_string(v); }
inline std::string format(std::int64_t v) { return std::to_string(v); }
inline std::string format(unsigned v) { return std::to_string(v); }

inline std::vector<std::string> split(const std::string& text, char delim) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(delim, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

// A CSV document: one metadata comment line (tool version, RNG id, and the
// canonical argument echo that reproduces the run), optional informational
// comments, a header row and data rows.
struct Table {
  std::string version = kVersion;
  std::string rng = kRngId;
  std::string argv_echo;
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline void write(std::ostream& os, const Table& table) {
  os << "# orrw version=" << table.version << " rng=" << table.rng
     << " argv=" << table.argv_echo << "\n";
  for (const auto& comment : table.comments) os << "# " << comment << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i)
    os << (i ? "," : "") << table.header[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

inline Table parse(std::istream& is) {
  Table table;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# orrw ", 0) != 0)
    throw std::runtime_error("csv: missing metadata line");

  auto field = [&line](const std::string& key) {
    const std::size_t pos = line.find(key);
    if (pos == std::string::npos)
      throw std::runtime_error("csv: metadata field missing: " + key);
    return pos + key.size();
  };
  const std::size_t v = field(" version=");
  table.version = line.substr(v, line.find(' ', v) - v);
  const std::size_t r = field(" rng=");
  table.rng = line.substr(r, line.find(' ', r) - r);
  table.argv_echo = line.substr(field(" argv="));

  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      table.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    if (!have_header) {
      table.header = split(line, ',');
      have_header = true;
    } else {
      table.rows.push_back(split(line, ','));
    }
  }
  if (!have_header) throw std::runtime_error("csv: missing header row");
  return table;
}

}  // namespace orrw::csv
