#pragma once

// Text formats: edge lists and labelings (1-based in files), SBM parameter
// files and flat key-value config files.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbmcd/errors.hpp"
#include "sbmcd/graph.hpp"
#include "sbmcd/sampler.hpp"

namespace sbmcd::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& s) {
  const auto p = s.find('#');
  return trim(p == std::string::npos ? s : s.substr(0, p));
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

struct EdgeList {
  Graph graph;
  std::optional<std::size_t> k;  // from the header, when present
};

/// Edge list: optional header `n k`, then `i j` per line, 1-based. The first
/// line is read as a header when its first value is larger than its second
/// (edges are written with i < j). Without a header, n is the largest index
/// seen unless `n_hint` is given. `#` starts a comment.
inline EdgeList read_edge_list(std::istream& in, std::optional<std::size_t> n_hint = {}) {
  std::vector<std::pair<long long, long long>> raw;
  std::optional<std::size_t> header_n, header_k;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = strip_comment(line);
    if (body.empty()) continue;
    std::istringstream ss(body);
    long long a = 0, b = 0;
    std::string extra;
    if (!(ss >> a >> b) || (ss >> extra))
      throw FormatError("edge list line " + std::to_string(lineno) + ": expected two integers");
    if (first && a > b) {
      if (b < 1) throw FormatError("edge list header: k must be positive");
      header_n = static_cast<std::size_t>(a);
      header_k = static_cast<std::size_t>(b);
      first = false;
      continue;
    }
    first = false;
    if (a < 1 || b < 1)
      throw FormatError("edge list line " + std::to_string(lineno) + ": indices are 1-based");
    raw.emplace_back(a, b);
  }
  std::size_t n = header_n.value_or(n_hint.value_or(0));
  if (!header_n && !n_hint)
    for (const auto& [a, b] : raw) n = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(a, b)));
  if (n == 0) throw FormatError("edge list: cannot determine node count");
  std::vector<Graph::Edge> edges;
  edges.reserve(raw.size());
  for (const auto& [a, b] : raw) {
    if (static_cast<std::size_t>(a) > n || static_cast<std::size_t>(b) > n)
      throw FormatError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                        ") exceeds n=" + std::to_string(n));
    edges.emplace_back(static_cast<Node>(a - 1), static_cast<Node>(b - 1));
  }
  return {Graph(n, edges), header_k};
}

inline EdgeList read_edge_list(const std::string& path, std::optional<std::size_t> n_hint = {}) {
  auto in = open_in(path);
  return read_edge_list(in, n_hint);
}

/// Writes the `n k` header (when k is known) followed by edges i<j, 1-based.
inline void write_edge_list(std::ostream& out, const Graph& g, std::optional<std::size_t> k = {}) {
  if (k) out << g.num_nodes() << ' ' << *k << '\n';
  for (const auto& [u, v] : g.edges()) out << (u + 1) << ' ' << (v + 1) << '\n';
}

/// One 1-based label per line. k is the largest label unless given.
inline Labeling read_labeling(std::istream& in, std::optional<std::size_t> k = {}) {
  std::vector<Label> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = strip_comment(line);
    if (body.empty()) continue;
    std::istringstream ss(body);
    long long v = 0;
    std::string extra;
    if (!(ss >> v) || (ss >> extra) || v < 1)
      throw FormatError("labeling line " + std::to_string(lineno) + ": expected a positive integer");
    labels.push_back(static_cast<Label>(v - 1));
  }
  if (labels.empty()) throw FormatError("labeling file is empty");
  if (k) return Labeling(std::move(labels), *k);
  return Labeling::from_labels(std::move(labels));
}

inline Labeling read_labeling(const std::string& path, std::optional<std::size_t> k = {}) {
  auto in = open_in(path);
  return read_labeling(in, k);
}

inline void write_labeling(std::ostream& out, const Labeling& z) {
  for (Label l : z.labels()) out << (l + 1) << '\n';
}

/// `key = value` lines; `#` comments. Repeated keys keep every value in order.
using KeyValues = std::multimap<std::string, std::string>;

inline KeyValues read_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = strip_comment(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw FormatError("line " + std::to_string(lineno) + ": expected key = value");
    kv.emplace(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  return kv;
}

inline KeyValues read_key_values(const std::string& path) {
  auto in = open_in(path);
  return read_key_values(in);
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw FormatError("not a number: '" + item + "'");
    }
    if (used != item.size()) throw FormatError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

/// Parameters as read from a params file, before rho is resolved for an n.
struct ParamsSpec {
  std::vector<double> pi;
  Matrix<double> shape;
  RhoMode rho_mode = RhoMode::kConst;
  double rho = 1.0;
  double c = 1.0;

  SbmParams resolve(std::size_t n) const {
    SbmParams p;
    p.pi = pi;
    p.shape = shape;
    p.rho = resolve_rho(rho_mode, n, rho, c);
    return p;
  }
};

inline RhoMode parse_rho_mode(const std::string& s) {
  if (s == "const") return RhoMode::kConst;
  if (s == "log_n_over_n") return RhoMode::kLogNOverN;
  if (s == "one_over_n") return RhoMode::kOneOverN;
  if (s == "custom_expr") return RhoMode::kCustomLogN;
  throw FormatError("unknown rho_mode '" + s + "'");
}

/// Params file keys: k, pi (comma list), S (one comma-list row per line,
/// repeated k times), rho, rho_mode (const | log_n_over_n | one_over_n |
/// custom_expr, the latter meaning c*log(n)/n), c.
inline ParamsSpec params_from_key_values(const KeyValues& kv) {
  auto one = [&](const std::string& key) -> std::optional<std::string> {
    const auto [lo, hi] = kv.equal_range(key);
    if (lo == hi) return std::nullopt;
    if (std::next(lo) != hi) throw FormatError("key '" + key + "' given more than once");
    return lo->second;
  };
  ParamsSpec spec;
  const auto k_str = one("k");
  if (!k_str) throw FormatError("params: missing k");
  const auto k = static_cast<std::size_t>(std::stoul(*k_str));
  if (k < 1) throw FormatError("params: k must be >= 1");
  if (const auto pi = one("pi")) {
    spec.pi = parse_list(*pi);
  } else {
    spec.pi.assign(k, 1.0 / static_cast<double>(k));
  }
  if (spec.pi.size() != k) throw FormatError("params: pi must have k entries");
  spec.shape = Matrix<double>(k, k);
  const auto [lo, hi] = kv.equal_range("S");
  std::size_t row = 0;
  for (auto it = lo; it != hi; ++it, ++row) {
    const auto vals = parse_list(it->second);
    if (row >= k || vals.size() != k) throw FormatError("params: S must be k rows of k values");
    for (std::size_t c = 0; c < k; ++c) spec.shape(row, c) = vals[c];
  }
  if (row != k) throw FormatError("params: S must have k rows");
  if (const auto m = one("rho_mode")) spec.rho_mode = parse_rho_mode(*m);
  if (const auto r = one("rho")) spec.rho = std::stod(*r);
  else if (spec.rho_mode == RhoMode::kConst) throw FormatError("params: rho required for rho_mode const");
  if (const auto c = one("c")) spec.c = std::stod(*c);
  return spec;
}

inline ParamsSpec read_params(const std::string& path) { return params_from_key_values(read_key_values(path)); }

}  // namespace sbmcd::io
