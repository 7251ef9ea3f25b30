#include "clgnn/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "clgnn/report.hpp"

namespace clgnn {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  size_t start = 0;
  for (;;) {
    const size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void fail_at(const std::string& path, int line_no, const std::string& msg) {
  throw ParseError(path + ":" + std::to_string(line_no) + ": " + msg);
}

int parse_node_id(const std::string& path, int line_no, const std::string& field) {
  int value = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || value < 0) {
    fail_at(path, line_no, "invalid node id '" + field + "'");
  }
  return value;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

Graph load_graph(const std::string& edges_path, const std::string& features_path,
                 const std::string& labels_path, int num_classes) {
  const auto feature_lines = split_lines(read_file(features_path));
  std::vector<std::string> rows;
  for (const auto& line : feature_lines) {
    if (!line.empty()) rows.push_back(line);
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw ParseError(features_path + ":1: no feature rows");
  const int dim = static_cast<int>(split_fields(rows[0], '\t').size());
  Matrix features(n, dim);
  for (int v = 0; v < n; ++v) {
    const auto fields = split_fields(rows[static_cast<size_t>(v)], '\t');
    if (static_cast<int>(fields.size()) != dim) {
      fail_at(features_path, v + 1,
              "expected " + std::to_string(dim) + " fields, got " +
                  std::to_string(fields.size()));
    }
    for (int j = 0; j < dim; ++j) {
      const std::string& f = fields[static_cast<size_t>(j)];
      double value = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), value);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        fail_at(features_path, v + 1, "invalid float '" + f + "'");
      }
      features(v, j) = value;
    }
  }

  std::vector<std::pair<int, int>> edges;
  {
    const auto lines = split_lines(read_file(edges_path));
    for (size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto fields = split_fields(lines[i], '\t');
      if (fields.size() != 2) {
        fail_at(edges_path, static_cast<int>(i) + 1, "expected u<TAB>v");
      }
      const int u = parse_node_id(edges_path, static_cast<int>(i) + 1, fields[0]);
      const int v = parse_node_id(edges_path, static_cast<int>(i) + 1, fields[1]);
      if (u >= n || v >= n) {
        fail_at(edges_path, static_cast<int>(i) + 1,
                "edge endpoint beyond " + std::to_string(n) + " feature rows");
      }
      edges.emplace_back(u, v);
    }
  }

  std::vector<int> labels(static_cast<size_t>(n), -1);
  int max_label = -1;
  {
    const auto lines = split_lines(read_file(labels_path));
    for (size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto fields = split_fields(lines[i], '\t');
      if (fields.size() != 2) {
        fail_at(labels_path, static_cast<int>(i) + 1, "expected node<TAB>class");
      }
      const int v = parse_node_id(labels_path, static_cast<int>(i) + 1, fields[0]);
      const int y = parse_node_id(labels_path, static_cast<int>(i) + 1, fields[1]);
      if (v >= n) {
        fail_at(labels_path, static_cast<int>(i) + 1,
                "node beyond " + std::to_string(n) + " feature rows");
      }
      labels[static_cast<size_t>(v)] = y;
      max_label = std::max(max_label, y);
    }
  }
  const int c = num_classes < 0 ? max_label + 1 : num_classes;
  return build_graph(n, edges, std::move(features), std::move(labels), c);
}

void save_graph(const Graph& g, const std::string& edges_path,
                const std::string& features_path, const std::string& labels_path) {
  std::string edges;
  for (int v = 0; v < g.num_nodes; ++v) {
    for (int u : g.neighbors(v)) {
      if (v < u) {
        edges += std::to_string(v);
        edges += '\t';
        edges += std::to_string(u);
        edges += '\n';
      }
    }
  }
  write_file(edges_path, edges);

  std::string features;
  for (int v = 0; v < g.num_nodes; ++v) {
    for (int j = 0; j < g.feature_dim(); ++j) {
      if (j) features += '\t';
      features += format_double(g.features(v, j));
    }
    features += '\n';
  }
  write_file(features_path, features);

  std::string labels;
  for (int v = 0; v < g.num_nodes; ++v) {
    if (g.has_label(v)) {
      labels += std::to_string(v);
      labels += '\t';
      labels += std::to_string(g.labels[static_cast<size_t>(v)]);
      labels += '\n';
    }
  }
  write_file(labels_path, labels);
}

Graph load_cora(const std::string& content_path, const std::string& cites_path) {
  std::map<std::string, int> node_index;
  std::map<std::string, int> class_index;
  std::vector<std::vector<double>> feature_rows;
  std::vector<std::string> class_names;

  const auto content_lines = split_lines(read_file(content_path));
  int dim = -1;
  for (size_t i = 0; i < content_lines.size(); ++i) {
    if (content_lines[i].empty()) continue;
    std::istringstream in(content_lines[i]);
    std::vector<std::string> fields;
    std::string field;
    while (in >> field) fields.push_back(field);
    if (fields.size() < 3) {
      fail_at(content_path, static_cast<int>(i) + 1, "expected id, features, class");
    }
    if (dim < 0) {
      dim = static_cast<int>(fields.size()) - 2;
    } else if (static_cast<int>(fields.size()) - 2 != dim) {
      fail_at(content_path, static_cast<int>(i) + 1,
              "expected " + std::to_string(dim) + " feature fields, got " +
                  std::to_string(fields.size() - 2));
    }
    if (node_index.count(fields.front())) {
      fail_at(content_path, static_cast<int>(i) + 1, "duplicate id '" + fields.front() + "'");
    }
    node_index[fields.front()] = static_cast<int>(feature_rows.size());
    std::vector<double> row(static_cast<size_t>(dim));
    for (int j = 0; j < dim; ++j) {
      const std::string& f = fields[static_cast<size_t>(j) + 1];
      double value = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), value);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        fail_at(content_path, static_cast<int>(i) + 1, "invalid feature '" + f + "'");
      }
      row[static_cast<size_t>(j)] = value;
    }
    feature_rows.push_back(std::move(row));
    class_names.push_back(fields.back());
  }
  const int n = static_cast<int>(feature_rows.size());
  if (n == 0) throw ParseError(content_path + ":1: no content rows");

  // Deterministic class ids: lexicographic over class names.
  {
    std::vector<std::string> sorted = class_names;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) class_index[sorted[i]] = static_cast<int>(i);
  }

  Matrix features(n, dim);
  std::vector<int> labels(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    for (int j = 0; j < dim; ++j) features(v, j) = feature_rows[static_cast<size_t>(v)][static_cast<size_t>(j)];
    labels[static_cast<size_t>(v)] = class_index[class_names[static_cast<size_t>(v)]];
  }

  std::vector<std::pair<int, int>> edges;
  const auto cite_lines = split_lines(read_file(cites_path));
  for (size_t i = 0; i < cite_lines.size(); ++i) {
    if (cite_lines[i].empty()) continue;
    std::istringstream in(cite_lines[i]);
    std::string a, b;
    if (!(in >> a >> b)) {
      fail_at(cites_path, static_cast<int>(i) + 1, "expected two ids");
    }
    const auto ia = node_index.find(a);
    const auto ib = node_index.find(b);
    if (ia == node_index.end() || ib == node_index.end()) {
      fail_at(cites_path, static_cast<int>(i) + 1, "unknown id in citation");
    }
    edges.emplace_back(ia->second, ib->second);
  }
  return build_graph(n, edges, std::move(features), std::move(labels),
                     static_cast<int>(class_index.size()));
}

void save_split(const SplitSpec& split, const std::string& path) {
  Report report;
  report.set("document", "split");
  const std::vector<std::pair<const char*, const std::vector<int>*>> sets = {
      {"train_labeled", &split.train_labeled},
      {"validation", &split.validation},
      {"test_eval", &split.test_eval},
      {"test_labeled", &split.test_labeled}};
  for (const auto& [name, nodes] : sets) {
    auto& table = report.add_table(name, {"node"});
    for (int v : *nodes) table.rows.push_back({std::to_string(v)});
  }
  write_file(path, report.serialize());
}

SplitSpec load_split(const std::string& path) {
  const Report report = Report::parse(read_file(path));
  if (!report.has("document") || report.get("document") != "split") {
    throw ParseError(path + ": not a split document");
  }
  SplitSpec split;
  const std::vector<std::pair<const char*, std::vector<int>*>> sets = {
      {"train_labeled", &split.train_labeled},
      {"validation", &split.validation},
      {"test_eval", &split.test_eval},
      {"test_labeled", &split.test_labeled}};
  for (const auto& [name, nodes] : sets) {
    const ReportTable* table = report.find_table(name);
    if (table == nullptr) throw ParseError(path + ": missing table '" + std::string(name) + "'");
    for (const auto& row : table->rows) {
      nodes->push_back(parse_node_id(path, 0, row.at(0)));
    }
  }
  return split;
}

}  // namespace clgnn
