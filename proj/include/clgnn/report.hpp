#ifndef CLGNN_REPORT_HPP_
#define CLGNN_REPORT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace clgnn {

// Line-oriented structured text: a schema header, ordered key/value pairs,
// and named tables. Tab is the field separator; keys and cells must not
// contain tabs or newlines. Round-trips exactly through parse().
//
//   clgnn-report<TAB>1
//   key<TAB>value
//   [table name]
//   col_a<TAB>col_b
//   1<TAB>2
//   [/table]
struct ReportTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

class Report {
 public:
  static constexpr int kSchemaVersion = 1;

  void set(const std::string& key, const std::string& value);
  void set_int(const std::string& key, long long value);
  void set_double(const std::string& key, double value);  // shortest round-trip form
  void set_bool(const std::string& key, bool value);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  long long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;

  ReportTable& add_table(const std::string& name, std::vector<std::string> columns);
  const ReportTable* find_table(const std::string& name) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  const std::vector<ReportTable>& tables() const { return tables_; }

  std::string serialize() const;
  static Report parse(const std::string& text);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<ReportTable> tables_;
};

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);
double parse_double(const std::string& text);

// Exact hexadecimal form, for checkpoints that must round-trip bitwise.
std::string format_double_hex(double value);
double parse_double_hex(const std::string& text);

}  // namespace clgnn

#endif  // CLGNN_REPORT_HPP_
