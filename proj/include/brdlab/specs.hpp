#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "brdlab/graph.hpp"

namespace brdlab {

/// Seed used by random generator specs that do not name one.
inline constexpr std::uint64_t kDefaultGraphSeed = 1;

/// Builds a graph from a text spec. Accepted forms:
///   path:n  cycle:n  clique:n  star:m  kml:m:l
///   er:n:p[:seed]  ba:n:m[:seed]  rr:n:d[:seed]
///   cospectral[:1|:2]  (the two members of the cospectral pair)
///   singlecomp  chain:k:delta  union:k:delta[:len]  p5slow:delta
///   {"n": 3, "edges": [[0,1],[1,2]]}
/// Throws InputError when the text does not parse and GenerationError when
/// it parses but names an impossible graph (path:0, rr:5:3, ...).
Graph parse_graph_spec(std::string_view spec);

namespace detail {

std::vector<std::string> split(std::string_view s, char sep);
/// Whole-string parses; throw InputError on trailing junk or overflow.
std::size_t parse_size(std::string_view s);
std::uint64_t parse_u64(std::string_view s);
double parse_real(std::string_view s);

}  // namespace detail

}  // namespace brdlab
