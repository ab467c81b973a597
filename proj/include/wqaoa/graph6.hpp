// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wqaoa/graph.hpp"

namespace wqaoa {

/// Decodes one graph6 line into a unit-weight graph. A leading ">>graph6<<"
/// header and trailing CR/LF are tolerated. Throws ParseError with the byte
/// offset of the first bad character.
WeightedGraph parse_graph6(std::string_view text);

/// Encodes the adjacency structure of `g` (weights are ignored).
std::string serialize_graph6(const WeightedGraph& g);

/// Reads every nonblank line of a graph6 file.
std::vector<WeightedGraph> read_graph6_stream(std::istream& in);

}  // namespace wqaoa
