// SPDX-License-Identifier: Apache-2.0
#include "wqaoa/graph6.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>

#include "wqaoa/error.hpp"

namespace wqaoa {

namespace {

constexpr int kBias = 63;
constexpr char kLongSize = 126;
constexpr std::string_view kHeader = ">>graph6<<";

int decode_char(std::string_view text, std::size_t pos) {
  const auto c = static_cast<unsigned char>(text[pos]);
  if (c < 63 || c > 126) throw ParseError("graph6 character outside [63,126]", pos);
  return c - kBias;
}

}  // namespace

WeightedGraph parse_graph6(std::string_view text) {
  std::size_t pos = 0;
  if (text.starts_with(kHeader)) pos = kHeader.size();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
  if (pos >= text.size()) throw ParseError("empty graph6 string", pos);
  if (text[pos] == ':' || text[pos] == ';') throw ParseError("sparse6 input is not supported", pos);
  if (text[pos] == '&') throw ParseError("digraph6 input is not supported", pos);

  std::uint64_t n = 0;
  if (text[pos] != kLongSize) {
    n = static_cast<std::uint64_t>(decode_char(text, pos));
    pos += 1;
  } else {
    // 126 followed by three sextets, or 126 126 followed by six.
    int sextets = 3;
    pos += 1;
    if (pos < text.size() && text[pos] == kLongSize) {
      sextets = 6;
      pos += 1;
    }
    if (pos + static_cast<std::size_t>(sextets) > text.size()) throw ParseError("truncated graph6 size header", text.size());
    for (int k = 0; k < sextets; ++k) n = (n << 6) | static_cast<std::uint64_t>(decode_char(text, pos++));
  }
  if (n == 0) throw ParseError("graph6 graph has no vertices", 0);
  if (n > 100000) throw ParseError("graph6 vertex count " + std::to_string(n) + " too large", 0);

  for (std::size_t at = pos; at < text.size(); ++at) decode_char(text, at);
  const std::uint64_t nbits = n * (n - 1) / 2;
  const std::size_t nchars = static_cast<std::size_t>((nbits + 5) / 6);
  if (text.size() - pos < nchars) throw ParseError("truncated graph6 adjacency bitstream", text.size());
  if (text.size() - pos > nchars) throw ParseError("trailing data after graph6 adjacency bitstream", pos + nchars);

  std::vector<Edge> edges;
  std::uint64_t bit = 0;
  // Upper triangle, column by column: (0,1), (0,2), (1,2), (0,3), ...
  for (std::uint64_t j = 1; j < n; ++j) {
    for (std::uint64_t i = 0; i < j; ++i, ++bit) {
      const std::size_t at = pos + static_cast<std::size_t>(bit / 6);
      const int sextet = decode_char(text, at);
      if ((sextet >> (5 - bit % 6)) & 1) edges.push_back({static_cast<int>(i), static_cast<int>(j), 1.0});
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  return WeightedGraph(static_cast<int>(n), std::move(edges));
}

std::string serialize_graph6(const WeightedGraph& g) {
  const auto n = static_cast<std::uint64_t>(g.n_vertices());
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(n + kBias));
  } else if (n <= 258047) {
    out.push_back(kLongSize);
    for (int k = 2; k >= 0; --k) out.push_back(static_cast<char>(((n >> (6 * k)) & 63) + kBias));
  } else {
    out.push_back(kLongSize);
    out.push_back(kLongSize);
    for (int k = 5; k >= 0; --k) out.push_back(static_cast<char>(((n >> (6 * k)) & 63) + kBias));
  }
  std::vector<std::uint8_t> adj(n * n, 0);
  for (const auto& e : g.edges()) {
    adj[static_cast<std::size_t>(e.u) * n + e.v] = 1;
    adj[static_cast<std::size_t>(e.v) * n + e.u] = 1;
  }
  int acc = 0;
  int filled = 0;
  for (std::uint64_t j = 1; j < n; ++j) {
    for (std::uint64_t i = 0; i < j; ++i) {
      acc = (acc << 1) | adj[i * n + j];
      if (++filled == 6) {
        out.push_back(static_cast<char>(acc + kBias));
        acc = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) out.push_back(static_cast<char>((acc << (6 - filled)) + kBias));
  return out;
}

std::vector<WeightedGraph> read_graph6_stream(std::istream& in) {
  std::vector<WeightedGraph> graphs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    try {
      graphs.push_back(parse_graph6(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), e.offset());
    }
  }
  return graphs;
}

}  // namespace wqaoa
