#ifndef CLGNN_GRAPH_IO_HPP_
#define CLGNN_GRAPH_IO_HPP_

#include <string>

#include "clgnn/graph.hpp"

namespace clgnn {

// Edge file:    one "u<TAB>v" per line, 0-based ids.
// Feature file: one node per line, tab-separated floats; row count fixes n.
// Label file:   "node<TAB>class" lines; absent nodes stay unlabeled.
// num_classes < 0 infers max label + 1. Parse errors carry file:line.
Graph load_graph(const std::string& edges_path, const std::string& features_path,
                 const std::string& labels_path, int num_classes = -1);

// Writes the three files so load_graph reproduces the graph exactly
// (shortest-round-trip float formatting, one canonical line per edge).
void save_graph(const Graph& g, const std::string& edges_path,
                const std::string& features_path, const std::string& labels_path);

// Classic citation-dataset layout: content rows "id f1..fm class_name",
// cites rows "cited citing" (whitespace separated, string ids).
Graph load_cora(const std::string& content_path, const std::string& cites_path);

void save_split(const SplitSpec& split, const std::string& path);
SplitSpec load_split(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace clgnn

#endif  // CLGNN_GRAPH_IO_HPP_
