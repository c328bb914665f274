#include "aadb/rmat.hpp"

#include <cmath>
#include <map>

#include "aadb/error.hpp"

namespace aadb {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// splitmix64 stream; the state is decorrelated per edge so any edge range
// can be generated independently of the rest.
struct SplitMix {
  std::uint64_t state;
  double nextUnit() {
    state += kGolden;
    return static_cast<double>(mix64(state) >> 11) * 0x1.0p-53;
  }
};

}  // namespace

std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + kGolden * (stream + 1));
}

void RmatParams::validate() const {
  if (scale < 1 || scale > 40) {
    throw Error(ErrorKind::BadSpec, "scale must lie in 1..40");
  }
  if (edgeFactor < 1) {
    throw Error(ErrorKind::BadSpec, "edge factor must be positive");
  }
  if (a < 0 || b < 0 || c < 0 || d < 0 || std::abs(a + b + c + d - 1.0) > 1e-12) {
    throw Error(ErrorKind::BadSpec, "quadrant probabilities must be >= 0 and sum to 1");
  }
}

Edge generateEdge(const RmatParams& params, std::uint64_t index) {
  SplitMix rng{mix64(params.seed ^ mix64(index + 1))};
  std::uint64_t src = 0;
  std::uint64_t dst = 0;
  for (int level = params.scale - 1; level >= 0; --level) {
    double u = rng.nextUnit();
    if (u < params.a) {
      // top-left: both bits stay 0
    } else if (u < params.a + params.b) {
      dst |= std::uint64_t{1} << level;
    } else if (u < params.a + params.b + params.c) {
      src |= std::uint64_t{1} << level;
    } else {
      src |= std::uint64_t{1} << level;
      dst |= std::uint64_t{1} << level;
    }
  }
  return {src, dst};
}

EdgeList generateRmat(const RmatParams& params) {
  return generateRmatRange(params, 0, params.edgeCount());
}

EdgeList generateRmatRange(const RmatParams& params, std::uint64_t first, std::uint64_t last) {
  params.validate();
  if (first > last || last > params.edgeCount()) {
    throw Error(ErrorKind::InvalidRange, "edge index range outside 0..M");
  }
  EdgeList list;
  list.vertexCount = params.vertexCount();
  list.edges.reserve(last - first);
  for (std::uint64_t i = first; i < last; ++i) list.edges.push_back(generateEdge(params, i));
  return list;
}

AssociativeArray edgesToArray(const EdgeList& edges, const Semiring& semiring) {
  std::vector<TripleRecord> triples;
  triples.reserve(edges.edges.size());
  for (const Edge& e : edges.edges) {
    triples.emplace_back(numericKey(e.first), numericKey(e.second), semiring.one());
  }
  return AssociativeArray::fromTriples(triples, semiring);
}

AssociativeArray clampToOne(const AssociativeArray& array) {
  std::vector<TripleRecord> triples;
  triples.reserve(array.nnz());
  for (const auto& [key, value] : array.cells()) {
    triples.emplace_back(key.first, key.second, array.semiring().one());
  }
  // Cells are unique, so folding never fires and values stay exactly one.
  return AssociativeArray::fromTriples(triples, array.semiring());
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> degreeDistribution(
    const AssociativeArray& array) {
  // Incidence counting needs plus = numeric addition; retype the clamped
  // adjacency under plus-times whatever semiring the input carries.
  std::vector<TripleRecord> ones;
  ones.reserve(array.nnz());
  for (const auto& [key, value] : array.cells()) {
    ones.emplace_back(key.first, key.second, Value{1.0});
  }
  auto adjacency = AssociativeArray::fromTriples(ones, Semiring::plusTimes());
  auto degrees = adjacency.rowDegrees().add(adjacency.transpose().rowDegrees());

  std::map<std::uint64_t, std::uint64_t> histogram;
  for (const auto& [key, value] : degrees.cells()) {
    ++histogram[static_cast<std::uint64_t>(value.asNumeric())];
  }
  return {histogram.begin(), histogram.end()};
}

}  // namespace aadb
