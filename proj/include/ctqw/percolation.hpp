#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ctqw/lattice.hpp"
#include "ctqw/spectral.hpp"

namespace ctqw::percolation {

inline constexpr double kDefaultThreshold = 0.02;

// Quenched disorder: a fixed subset of edges removed for the lifetime of a
// trial.  The same (patch, f, seed) always regenerates the same subset.
struct DisorderRealization {
    double fraction = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> removed;                                  // indices into patch.edges, sorted
    std::vector<std::pair<std::int32_t, std::int32_t>> kept_edges;

    std::int64_t removed_count() const { return static_cast<std::int64_t>(removed.size()); }
};

// Removes round(f * |E|) edges (round half to even), drawn uniformly without
// replacement from the whole patch.
DisorderRealization remove_edges(const lattice::LatticePatch& patch, double f, std::uint64_t seed);

// Probability mass strictly outside the zone; inside + escape = 1 up to
// floating error.
double escape_mass(const std::vector<double>& probs, const lattice::HopZone& zone);

// Threshold is inclusive: escape mass exactly at the threshold counts as
// percolated.
bool percolated(double escape, double threshold);

struct TrialSeries {
    std::vector<double> times;
    std::vector<double> escape;
    std::vector<std::uint8_t> percolated;
};

// One quenched-disorder trial: remove edges, evolve the walker localized at
// `origin` across the time grid, record escape mass at each grid point.  The
// zone is always measured on the pristine patch.
TrialSeries run_trial(const lattice::LatticePatch& patch, std::int32_t origin,
                      const lattice::HopZone& zone, double f, std::uint64_t seed,
                      const std::vector<double>& time_grid, double gamma,
                      double threshold = kDefaultThreshold);

struct PercolationSeries {
    std::vector<double> times;
    std::vector<double> mean_escape;        // ensemble mean of escape mass
    std::vector<double> escape_stddev;      // sample standard deviation across trials
    std::vector<double> indicator_fraction; // fraction of trials past the threshold

    lattice::Family family = lattice::Family::Square;
    lattice::GenerationParams params;
    std::string origin_class;
    std::int32_t origin = 0;
    std::int32_t zone_radius = 0;
    double fraction = 0.0;
    double gamma = 1.0;
    double threshold = kDefaultThreshold;
    int trials = 0;
    std::uint64_t base_seed = 0;

    double escape_se(std::size_t i) const;  // standard error of the mean
};

// Deterministic interior-vertex lookup: "center", an explicit id, or a class
// label produced by classify_vertices (closest-to-centroid representative,
// ties toward the lowest id).
std::int32_t resolve_origin(const lattice::LatticePatch& patch, const std::string& selector);

// Ensemble over `trials` independent disorder realizations; trial i uses
// trial_seed(base_seed, i).  Trials may run on worker threads but are always
// reduced in trial-index order, so results are bitwise reproducible.
PercolationSeries ensemble(const lattice::LatticePatch& patch, std::int32_t origin,
                           std::int32_t zone_radius, double f, int trials,
                           std::uint64_t base_seed, const std::vector<double>& time_grid,
                           double gamma, double threshold = kDefaultThreshold);

PercolationSeries ensemble(const lattice::LatticePatch& patch, const std::string& origin_class,
                           std::int32_t zone_radius, double f, int trials,
                           std::uint64_t base_seed, const std::vector<double>& time_grid,
                           double gamma, double threshold = kDefaultThreshold);

struct SweepRow {
    double fraction = 0.0;
    double t_eval = 0.0;
    double mean_escape = 0.0;
    double escape_stddev = 0.0;
    double indicator_fraction = 0.0;
    int trials = 0;
};

// Ensemble evaluated at a single time for each disconnection fraction.
std::vector<SweepRow> sweep_fraction(const lattice::LatticePatch& patch, std::int32_t origin,
                                     std::int32_t zone_radius, const std::vector<double>& fractions,
                                     double t_eval, int trials, std::uint64_t base_seed,
                                     double gamma, double threshold = kDefaultThreshold);

}  // namespace ctqw::percolation
