#pragma once
// R-MAT edge generator and graph views. N = 2^scale vertices, M =
// edgeFactor * N edges; each edge picks one quadrant per bit level with
// probabilities (a,b,c,d). Every edge is a pure function of (params, edge
// index), so any index range can be generated independently and duplicates
// and self-loops are kept.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "aadb/assoc.hpp"

namespace aadb {

struct RmatParams {
    int scale = 10;
    std::uint64_t edgeFactor = 8;
    double a = 0.57;
    double b = 0.19;
    double c = 0.19;
    double d = 0.05;
    std::uint64_t seed = 1;

    void validate() const;  // BadSpec unless scale >= 1 and a+b+c+d == 1 +- 1e-12
    std::uint64_t vertexCount() const { return std::uint64_t{1} << scale; }
    std::uint64_t edgeCount() const { return edgeFactor << scale; }
};

using Edge = std::pair<std::uint64_t, std::uint64_t>;

struct EdgeList {
    std::uint64_t vertexCount = 0;
    std::vector<Edge> edges;
};

// Decorrelated per-worker seed stream (weak-scaling workers get their own
// graphs from one top-level seed).
std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream);

Edge generateEdge(const RmatParams& params, std::uint64_t index);
EdgeList generateRmat(const RmatParams& params);
// One contiguous slice [first, last) of the same deterministic stream.
EdgeList generateRmatRange(const RmatParams& params, std::uint64_t first, std::uint64_t last);

// Vertex ids become zero-padded decimal keys; duplicate edges fold via plus,
// so values are edge multiplicities under plus-times.
AssociativeArray edgesToArray(const EdgeList& edges,
                              const Semiring& semiring = Semiring::plusTimes());

// Adjacency view: every stored value replaced by the semiring one.
AssociativeArray clampToOne(const AssociativeArray& array);

// Degree = in + out incidence, computed on the clamped adjacency; returns
// (degree, vertexCount) pairs sorted by degree.
std::vector<std::pair<std::uint64_t, std::uint64_t>> degreeDistribution(
    const AssociativeArray& array);

}  // namespace aadb
