#include "ctqw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <set>
#include <unordered_map>

#include "ctqw/errors.hpp"

namespace ctqw::lattice {

namespace {

using Cx = std::complex<double>;

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSilver = 1.0 + kSqrt2;         // Ammann-Beenker inflation
const double kPhi = (1.0 + std::sqrt(5.0)) / 2;  // Penrose inflation

Cx cis_deg(double deg) {
    const double rad = deg * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

// Accumulates a tile soup into a deduplicated vertex/edge graph.  Vertices
// closer than `tol` are merged via a spatial hash; per-vertex tile angles are
// summed so interior vertices (fully surrounded, 360 deg) can be told apart
// from boundary ones.
class GraphAccum {
public:
    explicit GraphAccum(double tol) : tol_(tol) {}

    std::int32_t vertex(Cx p) {
        const auto cx = static_cast<std::int64_t>(std::floor(p.real() / kCell));
        const auto cy = static_cast<std::int64_t>(std::floor(p.imag() / kCell));
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = cells_.find(key(cx + dx, cy + dy));
                if (it == cells_.end()) continue;
                for (std::int32_t id : it->second) {
                    if (std::abs(p - Cx(positions[id][0], positions[id][1])) <= tol_) return id;
                }
            }
        }
        const auto id = static_cast<std::int32_t>(positions.size());
        positions.push_back({p.real(), p.imag()});
        angle_sum.push_back(0.0);
        cells_[key(cx, cy)].push_back(id);
        return id;
    }

    void corner(std::int32_t v, double deg) { angle_sum[v] += deg; }

    void edge(std::int32_t a, std::int32_t b) {
        if (a > b) std::swap(a, b);
        edge_set_.insert((static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b));
    }

    void finish(LatticePatch& patch) {
        patch.positions = std::move(positions);
        patch.interior.resize(patch.positions.size());
        for (std::size_t v = 0; v < patch.interior.size(); ++v)
            patch.interior[v] = std::abs(angle_sum[v] - 360.0) < 1e-6;
        patch.edges.reserve(edge_set_.size());
        for (std::uint64_t e : edge_set_)
            patch.edges.emplace_back(static_cast<std::int32_t>(e >> 32),
                                     static_cast<std::int32_t>(e & 0xffffffffu));
        finalize_patch(patch);
    }

    std::vector<std::array<double, 2>> positions;
    std::vector<double> angle_sum;

private:
    static constexpr double kCell = 0.25;
    static std::uint64_t key(std::int64_t x, std::int64_t y) {
        return (static_cast<std::uint64_t>(x) << 32) ^ static_cast<std::uint64_t>(y & 0xffffffff);
    }

    double tol_;
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> cells_;
    std::set<std::uint64_t> edge_set_;
};

// ---- Ammann-Beenker substitution ------------------------------------------
//
// Tiles are 45-deg rhombs [O P Q R] (acute corners at O and Q) and
// half-squares (R P Q) with the right angle at R and the hypotenuse P-Q kept
// as an internal cut, never a graph edge.  Each inflation step scales the
// patch by 1 + sqrt(2) and splits every tile so that all tile edges are again
// unit length.  The child layout fixes which end of each inflated edge gets
// the unit segment; the slot order below is what makes neighbouring tiles
// agree on that choice, so do not reorder corners casually.

struct AbRhomb {
    Cx o, p, q, r;
};
struct AbTri {
    Cx r, p, q;
};

void subdivide_ab(std::vector<AbRhomb>& rhombs, std::vector<AbTri>& tris) {
    std::vector<AbRhomb> rh_out;
    std::vector<AbTri> tr_out;
    rh_out.reserve(rhombs.size() * 3 + tris.size() * 2);
    tr_out.reserve(rhombs.size() * 4 + tris.size() * 3);
    const double inv = kSilver - 2.0;  // 1 / (1 + sqrt 2) = sqrt 2 - 1

    for (auto& t : rhombs) {
        const Cx o = t.o * kSilver, p = t.p * kSilver, q = t.q * kSilver, r = t.r * kSilver;
        const Cx um = (p - o) * inv, up = (r - o) * inv;
        const Cx a = o + um + up, b = q - um - up;
        rh_out.push_back({o, o + um, a, o + up});
        rh_out.push_back({q, q - um, b, q - up});
        rh_out.push_back({r, a, p, b});  // acute corners sit at the parent's obtuse ones
        tr_out.push_back({a, p, o + um});
        tr_out.push_back({a, r, o + up});
        tr_out.push_back({b, p, q - up});
        tr_out.push_back({b, r, q - um});
    }
    for (auto& t : tris) {
        const Cx r = t.r * kSilver, p = t.p * kSilver, q = t.q * kSilver;
        const Cx e1 = (p - r) * inv, e2 = (q - r) * inv;
        const Cx s1 = p - e1, s2 = r + e2;
        const Cx d = (e2 - e1) * (kSqrt2 / 2.0);
        const Cx h1 = p + d, h2 = q - d;
        const Cx w = r + (e1 + e2) * (kSqrt2 / 2.0);
        rh_out.push_back({p, s1, w, h1});
        rh_out.push_back({r, s2, h2, w});
        tr_out.push_back({w, r, s1});
        tr_out.push_back({w, h2, h1});
        tr_out.push_back({h2, q, s2});
    }
    rhombs = std::move(rh_out);
    tris = std::move(tr_out);
}

void seed_ab(std::vector<AbRhomb>& rhombs, std::vector<AbTri>& tris) {
    Cx z[10];
    for (int k = 0; k < 10; ++k) z[k] = cis_deg(45.0 * k);
    for (int k = 0; k < 8; ++k) {
        const Cx pk = z[k], pk1 = z[k + 1], pk2 = z[k + 2];
        const Cx qk = pk + pk1, qk1 = pk1 + pk2, vk = pk + pk1 + pk2;
        rhombs.push_back({0.0, pk, qk, pk1});
        tris.push_back({qk, vk, pk1});
        tris.push_back({qk1, vk, pk1});
    }
}

// ---- Penrose (P3) subdivision ---------------------------------------------
//
// Robinson half-rhombs (type, A, B, C): A carries the apex angle, A-B and A-C
// are rhomb edges, B-C is the internal diagonal.  Type 0 is half a thin
// rhomb, type 1 half a fat one.  The B/C order encodes the half's handedness
// and drives where the subdivision points fall, which is what keeps
// neighbouring tiles' subdivisions aligned.

struct PenTri {
    int type;
    Cx a, b, c;
};

void subdivide_penrose(std::vector<PenTri>& tris) {
    std::vector<PenTri> out;
    out.reserve(tris.size() * 3);
    const double inv = kPhi - 1.0;  // 1 / phi
    for (auto& t : tris) {
        const Cx a = t.a * kPhi, b = t.b * kPhi, c = t.c * kPhi;
        if (t.type == 0) {
            const Cx p = a + (b - a) * inv;
            out.push_back({0, c, p, b});
            out.push_back({1, p, c, a});
        } else {
            const Cx q = b + (a - b) * inv;
            const Cx r = b + (c - b) * inv;
            out.push_back({1, r, c, a});
            out.push_back({1, q, r, b});
            out.push_back({0, r, q, a});
        }
    }
    tris = std::move(out);
}

void seed_penrose(std::vector<PenTri>& tris) {
    Cx a[6];
    for (int k = 0; k < 6; ++k) a[k] = cis_deg(72.0 * k - 36.0);
    for (int k = 0; k < 5; ++k) {
        const Cx ck = a[k] + a[k + 1];
        tris.push_back({1, a[k], 0.0, ck});
        tris.push_back({1, a[k + 1], 0.0, ck});
    }
}

int quantize_gap(double gap_deg, int unit, double tol_deg) {
    const int q = static_cast<int>(std::lround(gap_deg / unit));
    if (q <= 0 || std::abs(gap_deg - q * static_cast<double>(unit)) > tol_deg)
        throw invalid_parameter_error("vertex star not aligned to the family angular unit");
    return q * unit;
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::Square: return "square";
        case Family::AmmannBeenker: return "ammann-beenker";
        case Family::Penrose: return "penrose";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "square") return Family::Square;
    if (name == "ammann-beenker") return Family::AmmannBeenker;
    if (name == "penrose") return Family::Penrose;
    throw invalid_parameter_error("unknown lattice family: " + name);
}

void finalize_patch(LatticePatch& patch) {
    for (auto& [i, j] : patch.edges) {
        if (i == j) throw invalid_parameter_error("self-loop edge");
        if (i > j) std::swap(i, j);
        if (i < 0 || j >= patch.num_vertices()) throw invalid_parameter_error("edge endpoint out of range");
    }
    std::sort(patch.edges.begin(), patch.edges.end());
    patch.edges.erase(std::unique(patch.edges.begin(), patch.edges.end()), patch.edges.end());
    patch.adjacency.assign(patch.positions.size(), {});
    for (auto [i, j] : patch.edges) {
        patch.adjacency[i].push_back(j);
        patch.adjacency[j].push_back(i);
    }
}

LatticePatch build_square(int n) {
    if (n <= 0) throw invalid_parameter_error("square patch size must be positive");
    LatticePatch patch;
    patch.family = Family::Square;
    patch.params = {n, 1e-6, "grid"};
    patch.positions.reserve(static_cast<std::size_t>(n) * n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            patch.positions.push_back({static_cast<double>(x), static_cast<double>(y)});
            patch.interior.push_back(x > 0 && x < n - 1 && y > 0 && y < n - 1);
        }
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const std::int32_t id = y * n + x;
            if (x + 1 < n) patch.edges.emplace_back(id, id + 1);
            if (y + 1 < n) patch.edges.emplace_back(id, id + n);
        }
    finalize_patch(patch);
    return patch;
}

LatticePatch build_ammann_beenker(int iterations) {
    if (iterations < 0) throw invalid_parameter_error("iterations must be >= 0");
    if (iterations > kMaxAmmannBeenkerIterations)
        throw resource_limit_error("ammann-beenker iteration count exceeds the memory guard");

    std::vector<AbRhomb> rhombs;
    std::vector<AbTri> tris;
    seed_ab(rhombs, tris);
    for (int i = 0; i < iterations; ++i) subdivide_ab(rhombs, tris);

    GraphAccum acc(1e-6);
    for (auto& t : rhombs) {
        const std::int32_t o = acc.vertex(t.o), p = acc.vertex(t.p), q = acc.vertex(t.q), r = acc.vertex(t.r);
        acc.edge(o, p);
        acc.edge(p, q);
        acc.edge(q, r);
        acc.edge(r, o);
        acc.corner(o, 45);
        acc.corner(p, 135);
        acc.corner(q, 45);
        acc.corner(r, 135);
    }
    for (auto& t : tris) {
        const std::int32_t r = acc.vertex(t.r), p = acc.vertex(t.p), q = acc.vertex(t.q);
        acc.edge(r, p);
        acc.edge(r, q);
        acc.corner(r, 90);
        acc.corner(p, 45);
        acc.corner(q, 45);
    }
    LatticePatch patch;
    patch.family = Family::AmmannBeenker;
    patch.params = {iterations, 1e-6, "wheel8"};
    acc.finish(patch);
    return patch;
}

LatticePatch build_penrose(int iterations) {
    if (iterations < 0) throw invalid_parameter_error("iterations must be >= 0");
    if (iterations > kMaxPenroseIterations)
        throw resource_limit_error("penrose iteration count exceeds the memory guard");

    std::vector<PenTri> tris;
    seed_penrose(tris);
    for (int i = 0; i < iterations; ++i) subdivide_penrose(tris);

    GraphAccum acc(1e-6);
    for (auto& t : tris) {
        const std::int32_t a = acc.vertex(t.a), b = acc.vertex(t.b), c = acc.vertex(t.c);
        acc.edge(a, b);
        acc.edge(a, c);
        if (t.type == 0) {
            acc.corner(a, 36);
            acc.corner(b, 72);
            acc.corner(c, 72);
        } else {
            acc.corner(a, 108);
            acc.corner(b, 36);
            acc.corner(c, 36);
        }
    }
    LatticePatch patch;
    patch.family = Family::Penrose;
    patch.params = {iterations, 1e-6, "sun5"};
    acc.finish(patch);
    return patch;
}

std::vector<VertexClass> classify_vertices(const LatticePatch& patch) {
    if (patch.interior.size() != patch.positions.size())
        throw invalid_parameter_error("patch is missing interior/boundary flags");

    int unit = 90;
    const char* prefix = "SQ";
    switch (patch.family) {
        case Family::Square: unit = 90; prefix = "SQ"; break;
        case Family::AmmannBeenker: unit = 45; prefix = "AB"; break;
        case Family::Penrose: unit = 36; prefix = "PEN"; break;
    }

    std::vector<VertexClass> out(patch.positions.size());
    std::vector<double> angles;
    for (std::int32_t v = 0; v < patch.num_vertices(); ++v) {
        VertexClass& cls = out[v];
        cls.degree = static_cast<int>(patch.adjacency[v].size());
        cls.interior = patch.interior[v] != 0;
        if (!cls.interior) {
            cls.label = "boundary:" + std::to_string(cls.degree);
            continue;
        }
        angles.clear();
        for (std::int32_t w : patch.adjacency[v]) {
            const double dx = patch.positions[w][0] - patch.positions[v][0];
            const double dy = patch.positions[w][1] - patch.positions[v][1];
            angles.push_back(std::atan2(dy, dx) * 180.0 / std::numbers::pi);
        }
        std::sort(angles.begin(), angles.end());
        cls.star.reserve(angles.size());
        for (std::size_t i = 0; i < angles.size(); ++i) {
            const double next = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + 360.0;
            cls.star.push_back(quantize_gap(next - angles[i], unit, 1e-4));
        }
        std::sort(cls.star.begin(), cls.star.end());
        cls.label = std::string(prefix) + ":d" + std::to_string(cls.degree) + ":s(";
        for (std::size_t i = 0; i < cls.star.size(); ++i) {
            if (i) cls.label += ',';
            cls.label += std::to_string(cls.star[i]);
        }
        cls.label += ')';
    }
    return out;
}

std::vector<std::int32_t> hop_distances(const LatticePatch& patch, std::int32_t origin) {
    if (origin < 0 || origin >= patch.num_vertices())
        throw invalid_parameter_error("origin vertex id out of range");
    std::vector<std::int32_t> dist(patch.positions.size(), -1);
    std::queue<std::int32_t> frontier;
    dist[origin] = 0;
    frontier.push(origin);
    while (!frontier.empty()) {
        const std::int32_t v = frontier.front();
        frontier.pop();
        for (std::int32_t w : patch.adjacency[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                frontier.push(w);
            }
    }
    return dist;
}

HopZone make_zone(const LatticePatch& patch, std::int32_t origin, std::int32_t radius) {
    if (radius < 0) throw invalid_parameter_error("zone radius must be >= 0");
    const auto dist = hop_distances(patch, origin);
    HopZone zone;
    zone.origin = origin;
    zone.radius = radius;
    zone.inside.resize(dist.size());
    for (std::size_t v = 0; v < dist.size(); ++v) {
        zone.inside[v] = dist[v] >= 0 && dist[v] <= radius;
        zone.size += zone.inside[v];
    }
    return zone;
}

std::int32_t center_vertex(const LatticePatch& patch) {
    if (patch.positions.empty()) throw invalid_parameter_error("empty patch");
    double cx = 0, cy = 0;
    for (const auto& p : patch.positions) {
        cx += p[0];
        cy += p[1];
    }
    cx /= static_cast<double>(patch.positions.size());
    cy /= static_cast<double>(patch.positions.size());
    std::int32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int32_t v = 0; v < patch.num_vertices(); ++v) {
        const double dx = patch.positions[v][0] - cx, dy = patch.positions[v][1] - cy;
        const double d = dx * dx + dy * dy;
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    return best;
}

}  // namespace ctqw::lattice
