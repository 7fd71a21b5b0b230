#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ctqw::lattice {

enum class Family { Square, AmmannBeenker, Penrose };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

struct GenerationParams {
    int size_or_iterations = 0;
    double dedup_tolerance = 1e-6;
    std::string seed_patch;  // "grid", "wheel8", "sun5"
};

// Finite patch of a tiling, reduced to its vertex/edge graph.
//
// Invariants maintained by the builders:
//  - vertex ids are dense 0..N-1, positions pairwise distinct beyond the
//    dedup tolerance,
//  - edges are undirected unit-length segments stored once as (i, j) with
//    i < j, sorted lexicographically, no self-loops,
//  - the graph is connected,
//  - interior[v] is true iff the tiles around v close up to a full 360 deg
//    (recorded at generation time; the edge graph alone cannot always tell a
//    boundary vertex from an interior one).
struct LatticePatch {
    Family family = Family::Square;
    GenerationParams params;
    std::vector<std::array<double, 2>> positions;
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    std::vector<std::uint8_t> interior;
    std::vector<std::vector<std::int32_t>> adjacency;

    std::int32_t num_vertices() const { return static_cast<std::int32_t>(positions.size()); }
    std::int64_t num_edges() const { return static_cast<std::int64_t>(edges.size()); }
};

// Sorts/dedups edges and rebuilds the adjacency lists.  Builders and the JSON
// importer call this last.
void finalize_patch(LatticePatch& patch);

// n x n grid graph, unit spacing, vertex (x, y) at id y*n + x.
LatticePatch build_square(int n);

// Ammann-Beenker patch: square/45-deg-rhomb substitution (silver ratio
// inflation) applied `iterations` times to an 8-fold wheel of 8 rhombs and
// 8 squares around a central vertex.
LatticePatch build_ammann_beenker(int iterations);

// Penrose rhomb patch: Robinson-triangle subdivision (golden ratio inflation)
// applied `iterations` times to a 5-fold "sun" of 5 fat rhombs.
LatticePatch build_penrose(int iterations);

// Iteration caps keep the tile soup within memory; exceeding them raises
// resource_limit_error.
inline constexpr int kMaxAmmannBeenkerIterations = 6;
inline constexpr int kMaxPenroseIterations = 12;

// Local environment of a vertex: degree plus the sorted gaps (in degrees)
// between consecutive incident edges, quantized to the family's angular unit
// (90 for square, 45 for Ammann-Beenker, 36 for Penrose).
struct VertexClass {
    std::string label;       // e.g. "AB:d5:s(45,45,90,90,90)" or "boundary:3"
    int degree = 0;
    std::vector<int> star;   // sorted gap multiset; empty for boundary vertices
    bool interior = false;
};

std::vector<VertexClass> classify_vertices(const LatticePatch& patch);

// BFS hop counts from `origin` over the pristine patch; disconnected vertices
// (impossible for builder output, possible for ad-hoc graphs) get -1.
std::vector<std::int32_t> hop_distances(const LatticePatch& patch, std::int32_t origin);

struct HopZone {
    std::int32_t origin = 0;
    std::int32_t radius = 0;
    std::vector<std::uint8_t> inside;  // per vertex id
    std::int64_t size = 0;
};

HopZone make_zone(const LatticePatch& patch, std::int32_t origin, std::int32_t radius);

// Vertex closest to the patch centroid; ties resolved toward the lowest id.
std::int32_t center_vertex(const LatticePatch& patch);

}  // namespace ctqw::lattice
