#include "brdlab/specs.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "brdlab/constructions.hpp"
#include "brdlab/errors.hpp"
#include "brdlab/json_io.hpp"

namespace brdlab {

namespace detail {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

namespace {

template <class T>
T parse_number(std::string_view s, const char* what) {
  T value{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc{} || ptr != last)
    throw InputError("expected " + std::string(what) + ", got '" + std::string(s) + "'");
  return value;
}

}  // namespace

std::size_t parse_size(std::string_view s) { return parse_number<std::size_t>(s, "a count"); }

std::uint64_t parse_u64(std::string_view s) { return parse_number<std::uint64_t>(s, "an integer"); }

double parse_real(std::string_view s) {
  const double v = parse_number<double>(s, "a number");
  if (!std::isfinite(v)) throw InputError("expected a finite number, got '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

namespace {

// Field parsing happens before the generator runs, so InputError from here
// means bad syntax; anything the generator rejects is an infeasible graph.
template <class F>
Graph feasible(F&& build) {
  try {
    return build();
  } catch (const InputError& e) {
    throw GenerationError(e.what());
  } catch (const DomainError& e) {
    throw GenerationError(e.what());
  }
}

Graph from_generator(const std::vector<std::string>& f) {
  using namespace detail;
  const std::string& kind = f[0];
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (f.size() < lo || f.size() > hi) throw InputError("wrong number of fields for '" + kind + "'");
  };
  auto seed_at = [&](std::size_t k) { return f.size() > k ? parse_u64(f[k]) : kDefaultGraphSeed; };
  if (kind == "path" || kind == "cycle" || kind == "clique" || kind == "star") {
    arity(2, 2);
    const std::size_t n = parse_size(f[1]);
    return feasible([&] {
      if (kind == "path") return generators::path(n);
      if (kind == "cycle") return generators::cycle(n);
      if (kind == "clique") return generators::clique(n);
      return generators::star(n);
    });
  }
  if (kind == "kml") {
    arity(3, 3);
    const std::size_t m = parse_size(f[1]);
    const std::size_t l = parse_size(f[2]);
    return feasible([&] { return generators::complete_bipartite(m, l); });
  }
  if (kind == "er") {
    arity(3, 4);
    const std::size_t n = parse_size(f[1]);
    const double p = parse_real(f[2]);
    const std::uint64_t seed = seed_at(3);
    return feasible([&] { return generators::erdos_renyi(n, p, seed); });
  }
  if (kind == "ba" || kind == "rr") {
    arity(3, 4);
    const std::size_t n = parse_size(f[1]);
    const std::size_t m = parse_size(f[2]);
    const std::uint64_t seed = seed_at(3);
    return feasible([&] {
      return kind == "ba" ? generators::barabasi_albert(n, m, seed) : generators::random_regular(n, m, seed);
    });
  }
  if (kind == "cospectral") {
    arity(1, 2);
    const std::size_t which = f.size() == 2 ? parse_size(f[1]) : 1;
    if (which != 1 && which != 2) throw InputError("cospectral member must be 1 or 2");
    auto [a, b] = cospectral_pair();
    return which == 1 ? a : b;
  }
  if (kind == "singlecomp" || kind == "chain" || kind == "union" || kind == "p5slow") {
    std::string joined = f[0];
    for (std::size_t k = 1; k < f.size(); ++k) joined += ":" + f[k];
    return make_scenario(joined).front().graph;
  }
  throw InputError("unknown graph kind '" + kind + "'");
}

}  // namespace

Graph parse_graph_spec(std::string_view spec) {
  const auto begin = spec.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) throw InputError("empty graph spec");
  spec.remove_prefix(begin);
  if (spec.front() == '{') {
    Json j = Json::parse(spec, nullptr, false);
    if (j.is_discarded()) throw InputError("graph JSON does not parse");
    return graph_from_json(j);
  }
  return from_generator(detail::split(spec, ':'));
}

}  // namespace brdlab
