#include "clgnn/report.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "clgnn/types.hpp"

namespace clgnn {

namespace {

constexpr const char* kHeader = "clgnn-report";

void check_field(const std::string& s, const char* what) {
  if (s.find('\t') != std::string::npos || s.find('\n') != std::string::npos) {
    throw ParameterError(std::string("report: ") + what + " contains tab or newline: " + s);
  }
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  for (;;) {
    const size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("invalid numeric value: '" + text + "'");
  }
  return value;
}

std::string format_double_hex(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::hex);
  return std::string(buf, res.ptr);
}

double parse_double_hex(const std::string& text) {
  double value = 0.0;
  const auto res =
      std::from_chars(text.data(), text.data() + text.size(), value, std::chars_format::hex);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("invalid hex-float value: '" + text + "'");
  }
  return value;
}

void Report::set(const std::string& key, const std::string& value) {
  check_field(key, "key");
  check_field(value, "value");
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void Report::set_int(const std::string& key, long long value) { set(key, std::to_string(value)); }
void Report::set_double(const std::string& key, double value) { set(key, format_double(value)); }
void Report::set_bool(const std::string& key, bool value) { set(key, value ? "true" : "false"); }

bool Report::has(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return true;
  }
  return false;
}

const std::string& Report::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  throw ParseError("report: missing key '" + key + "'");
}

long long Report::get_int(const std::string& key) const {
  const std::string& v = get(key);
  long long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ParseError("report: key '" + key + "' is not an integer: '" + v + "'");
  }
  return out;
}

double Report::get_double(const std::string& key) const { return parse_double(get(key)); }

ReportTable& Report::add_table(const std::string& name, std::vector<std::string> columns) {
  check_field(name, "table name");
  for (const auto& c : columns) check_field(c, "column");
  ReportTable table;
  table.name = name;
  table.columns = std::move(columns);
  tables_.push_back(std::move(table));
  return tables_.back();
}

const ReportTable* Report::find_table(const std::string& name) const {
  for (const auto& t : tables_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::string Report::serialize() const {
  std::string out;
  out += kHeader;
  out += '\t';
  out += std::to_string(kSchemaVersion);
  out += '\n';
  for (const auto& [k, v] : entries_) {
    out += k;
    out += '\t';
    out += v;
    out += '\n';
  }
  for (const auto& t : tables_) {
    out += "[table ";
    out += t.name;
    out += "]\n";
    for (size_t i = 0; i < t.columns.size(); ++i) {
      if (i) out += '\t';
      out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
      if (row.size() != t.columns.size()) {
        throw ParameterError("report: row width mismatch in table '" + t.name + "'");
      }
      for (size_t i = 0; i < row.size(); ++i) {
        if (i) out += '\t';
        check_field(row[i], "cell");
        out += row[i];
      }
      out += '\n';
    }
    out += "[/table]\n";
  }
  return out;
}

Report Report::parse(const std::string& text) {
  Report report;
  size_t pos = 0;
  int line_no = 0;
  bool saw_header = false;
  ReportTable* open_table = nullptr;
  bool table_needs_columns = false;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!saw_header) {
      const auto fields = split_tabs(line);
      if (fields.size() != 2 || fields[0] != kHeader) {
        throw ParseError("line " + std::to_string(line_no) + ": expected '" + kHeader +
                         "<TAB>version' header");
      }
      if (fields[1] != std::to_string(kSchemaVersion)) {
        throw ParseError("line " + std::to_string(line_no) + ": unsupported schema version '" +
                         fields[1] + "'");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    if (line.rfind("[table ", 0) == 0) {
      if (open_table != nullptr) {
        throw ParseError("line " + std::to_string(line_no) + ": nested table");
      }
      if (line.back() != ']') {
        throw ParseError("line " + std::to_string(line_no) + ": malformed table header");
      }
      const std::string name = line.substr(7, line.size() - 8);
      open_table = &report.add_table(name, {});
      table_needs_columns = true;
      continue;
    }
    if (line == "[/table]") {
      if (open_table == nullptr) {
        throw ParseError("line " + std::to_string(line_no) + ": [/table] with no open table");
      }
      open_table = nullptr;
      continue;
    }
    const auto fields = split_tabs(line);
    if (open_table != nullptr) {
      if (table_needs_columns) {
        open_table->columns = fields;
        table_needs_columns = false;
      } else {
        if (fields.size() != open_table->columns.size()) {
          throw ParseError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(open_table->columns.size()) + " cells, got " +
                           std::to_string(fields.size()));
        }
        open_table->rows.push_back(fields);
      }
      continue;
    }
    if (fields.size() != 2) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key<TAB>value");
    }
    report.entries_.emplace_back(fields[0], fields[1]);
  }
  if (!saw_header) throw ParseError("empty document: missing header");
  if (open_table != nullptr) throw ParseError("unterminated table '" + open_table->name + "'");
  return report;
}

}  // namespace clgnn
