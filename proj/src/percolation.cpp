#include "ctqw/percolation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <numeric>
#include <thread>

#include "ctqw/errors.hpp"
#include "ctqw/rng.hpp"

namespace ctqw::percolation {

namespace {

void check_time_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw invalid_parameter_error("time grid is empty");
    if (grid.front() < 0.0) throw invalid_parameter_error("time grid starts before zero");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw invalid_parameter_error("time grid must be strictly increasing");
}

void check_fraction(double f) {
    if (!(f >= 0.0 && f <= 1.0)) throw invalid_parameter_error("disconnection fraction must lie in [0, 1]");
}

}  // namespace

DisorderRealization remove_edges(const lattice::LatticePatch& patch, double f, std::uint64_t seed) {
    check_fraction(f);
    const std::int64_t m = patch.num_edges();
    // nearbyint under the default rounding mode resolves ties to even
    const auto count = static_cast<std::int64_t>(std::nearbyint(f * static_cast<double>(m)));

    DisorderRealization real;
    real.fraction = f;
    real.seed = seed;

    std::vector<std::int64_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    SplitMix64 gen(seed);
    for (std::int64_t k = 0; k < count; ++k) {
        const std::int64_t j = k + static_cast<std::int64_t>(gen.bounded(static_cast<std::uint64_t>(m - k)));
        std::swap(idx[k], idx[j]);
    }
    real.removed.assign(idx.begin(), idx.begin() + count);
    std::sort(real.removed.begin(), real.removed.end());

    std::vector<std::uint8_t> gone(m, 0);
    for (std::int64_t e : real.removed) gone[e] = 1;
    real.kept_edges.reserve(m - count);
    for (std::int64_t e = 0; e < m; ++e)
        if (!gone[e]) real.kept_edges.push_back(patch.edges[e]);
    return real;
}

double escape_mass(const std::vector<double>& probs, const lattice::HopZone& zone) {
    if (probs.size() != zone.inside.size())
        throw invalid_parameter_error("probability vector does not match the zone's patch");
    double out = 0.0;
    for (std::size_t v = 0; v < probs.size(); ++v)
        if (!zone.inside[v]) out += probs[v];
    return out;
}

bool percolated(double escape, double threshold) { return escape >= threshold; }

TrialSeries run_trial(const lattice::LatticePatch& patch, std::int32_t origin,
                      const lattice::HopZone& zone, double f, std::uint64_t seed,
                      const std::vector<double>& time_grid, double gamma, double threshold) {
    check_time_grid(time_grid);
    const std::int32_t n = patch.num_vertices();
    if (origin < 0 || origin >= n) throw invalid_parameter_error("origin vertex id out of range");
    if (zone.inside.size() != static_cast<std::size_t>(n))
        throw invalid_parameter_error("zone does not match the patch");

    const DisorderRealization real = remove_edges(patch, f, seed);
    const spectral::Hamiltonian h(n, real.kept_edges, gamma);

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    psi[origin] = 1.0;

    TrialSeries out;
    out.times = time_grid;
    out.escape.reserve(time_grid.size());
    out.percolated.reserve(time_grid.size());

    double t_now = 0.0;
    double cached_dt = 0.0;
    std::unique_ptr<spectral::ChebyshevPropagator> prop;
    std::vector<double> probs(n);
    for (double t : time_grid) {
        const double dt = t - t_now;
        if (dt > 0.0) {
            if (!prop || dt != cached_dt) {
                prop = std::make_unique<spectral::ChebyshevPropagator>(h, dt);
                cached_dt = dt;
            }
            prop->step(psi);
            if (std::abs(psi.squaredNorm() - 1.0) > 1e-10)
                throw accuracy_error("propagation lost unitarity beyond tolerance");
            t_now = t;
        }
        double esc = 0.0;
        for (std::int32_t v = 0; v < n; ++v)
            if (!zone.inside[v]) esc += std::norm(psi[v]);
        out.escape.push_back(esc);
        out.percolated.push_back(percolated(esc, threshold) ? 1 : 0);
    }
    return out;
}

double PercolationSeries::escape_se(std::size_t i) const {
    if (trials < 2) return 0.0;
    return escape_stddev.at(i) / std::sqrt(static_cast<double>(trials));
}

std::int32_t resolve_origin(const lattice::LatticePatch& patch, const std::string& selector) {
    if (selector.empty()) throw invalid_parameter_error("empty origin selector");
    if (selector == "center") return lattice::center_vertex(patch);

    std::int32_t id = 0;
    const auto [ptr, ec] = std::from_chars(selector.data(), selector.data() + selector.size(), id);
    if (ec == std::errc() && ptr == selector.data() + selector.size()) {
        if (id < 0 || id >= patch.num_vertices())
            throw invalid_parameter_error("origin vertex id out of range: " + selector);
        return id;
    }

    const auto classes = lattice::classify_vertices(patch);
    double cx = 0.0, cy = 0.0;
    for (const auto& p : patch.positions) {
        cx += p[0];
        cy += p[1];
    }
    cx /= patch.num_vertices();
    cy /= patch.num_vertices();

    std::int32_t best = -1;
    double best_d = 0.0;
    for (std::int32_t v = 0; v < patch.num_vertices(); ++v) {
        if (classes[v].label != selector) continue;
        const double dx = patch.positions[v][0] - cx, dy = patch.positions[v][1] - cy;
        const double d = dx * dx + dy * dy;
        if (best < 0 || d < best_d) {
            best = v;
            best_d = d;
        }
    }
    if (best < 0) throw invalid_parameter_error("no vertex of class " + selector);
    return best;
}

PercolationSeries ensemble(const lattice::LatticePatch& patch, std::int32_t origin,
                           std::int32_t zone_radius, double f, int trials,
                           std::uint64_t base_seed, const std::vector<double>& time_grid,
                           double gamma, double threshold) {
    check_time_grid(time_grid);
    check_fraction(f);
    if (trials < 1) throw invalid_parameter_error("trial count must be at least 1");

    const lattice::HopZone zone = lattice::make_zone(patch, origin, zone_radius);

    std::vector<TrialSeries> results(trials);
    auto work = [&](int first, int step) {
        for (int i = first; i < trials; i += step)
            results[i] = run_trial(patch, origin, zone, f, trial_seed(base_seed, i),
                                   time_grid, gamma, threshold);
    };
    const int workers = std::min<int>(trials, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
        for (auto& th : pool) th.join();
    }

    const std::size_t nt = time_grid.size();
    PercolationSeries series;
    series.times = time_grid;
    series.mean_escape.assign(nt, 0.0);
    series.escape_stddev.assign(nt, 0.0);
    series.indicator_fraction.assign(nt, 0.0);
    series.family = patch.family;
    series.params = patch.params;
    series.origin = origin;
    series.origin_class = lattice::classify_vertices(patch)[origin].label;
    series.zone_radius = zone_radius;
    series.fraction = f;
    series.gamma = gamma;
    series.threshold = threshold;
    series.trials = trials;
    series.base_seed = base_seed;

    // fixed trial-index reduction order keeps the output bitwise reproducible
    for (std::size_t k = 0; k < nt; ++k) {
        double sum = 0.0;
        int past = 0;
        for (int i = 0; i < trials; ++i) {
            sum += results[i].escape[k];
            past += results[i].percolated[k];
        }
        const double mean = sum / trials;
        series.mean_escape[k] = mean;
        series.indicator_fraction[k] = static_cast<double>(past) / trials;
        if (trials > 1) {
            double ss = 0.0;
            for (int i = 0; i < trials; ++i) {
                const double d = results[i].escape[k] - mean;
                ss += d * d;
            }
            series.escape_stddev[k] = std::sqrt(ss / (trials - 1));
        }
    }
    return series;
}

PercolationSeries ensemble(const lattice::LatticePatch& patch, const std::string& origin_class,
                           std::int32_t zone_radius, double f, int trials,
                           std::uint64_t base_seed, const std::vector<double>& time_grid,
                           double gamma, double threshold) {
    const std::int32_t origin = resolve_origin(patch, origin_class);
    return ensemble(patch, origin, zone_radius, f, trials, base_seed, time_grid, gamma, threshold);
}

std::vector<SweepRow> sweep_fraction(const lattice::LatticePatch& patch, std::int32_t origin,
                                     std::int32_t zone_radius, const std::vector<double>& fractions,
                                     double t_eval, int trials, std::uint64_t base_seed,
                                     double gamma, double threshold) {
    if (fractions.empty()) throw invalid_parameter_error("fraction list is empty");
    if (t_eval <= 0.0) throw invalid_parameter_error("evaluation time must be positive");
    std::vector<SweepRow> rows;
    rows.reserve(fractions.size());
    const std::vector<double> grid{t_eval};
    for (double f : fractions) {
        const PercolationSeries s =
            ensemble(patch, origin, zone_radius, f, trials, base_seed, grid, gamma, threshold);
        SweepRow row;
        row.fraction = f;
        row.t_eval = t_eval;
        row.mean_escape = s.mean_escape[0];
        row.escape_stddev = s.escape_stddev[0];
        row.indicator_fraction = s.indicator_fraction[0];
        row.trials = trials;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ctqw::percolation
