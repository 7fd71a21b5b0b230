// Acceptance suite: one numbered check per release criterion, each printing a
// single [PASS]/[FAIL] line with the measured values.  Run with a criterion
// number to execute just that one, or with no arguments for the full set.
// Exit status is the number of failed criteria.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ctqw/config.hpp"
#include "ctqw/lattice.hpp"
#include "ctqw/percolation.hpp"
#include "ctqw/rng.hpp"
#include "ctqw/runner.hpp"
#include "ctqw/spectral.hpp"
#include "dense_reference.hpp"
#include "test_helpers.hpp"
#include "tiling_oracle.hpp"

using namespace ctqw;

namespace {

constexpr std::uint64_t kBaseSeed = 1;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

spectral::WaveState random_state(std::int32_t n, std::mt19937_64& gen) {
    std::normal_distribution<double> gauss;
    spectral::WaveState psi;
    psi.amplitudes.resize(n);
    for (std::int32_t v = 0; v < n; ++v) psi.amplitudes[v] = {gauss(gen), gauss(gen)};
    psi.amplitudes /= psi.amplitudes.norm();
    return psi;
}

// escape-mass time series of a single pristine walk
std::vector<double> pristine_series(const lattice::LatticePatch& patch, std::int32_t origin,
                                    std::int32_t radius, const std::vector<double>& grid) {
    const auto tr = percolation::run_trial(patch, origin, lattice::make_zone(patch, origin, radius),
                                           0.0, 1, grid, 1.0);
    return tr.escape;
}

bool criterion_1(std::string& detail) {
    std::mt19937_64 gen(314159);
    std::uniform_real_distribution<double> tdraw(0.0, 200.0);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const std::int32_t n = 50 + static_cast<std::int32_t>(gen() % 951);
        const auto edges = test_helpers::random_connected_graph(n, n / 2, gen());
        const spectral::Hamiltonian h(n, edges, 1.0);
        const auto psi = random_state(n, gen);
        for (int k = 0; k < 10; ++k) {
            const auto out = spectral::evolve(h, psi, tdraw(gen));
            worst = std::max(worst, std::abs(out.norm_sq() - 1.0));
        }
    }
    detail = "max |norm^2 - 1| = " + fmt(worst) + " over 20 patches x 10 times";
    return worst < 1e-10;
}

bool criterion_2(std::string& detail) {
    std::mt19937_64 gen(27182);
    double worst = 0.0;
    std::vector<std::pair<std::string, lattice::LatticePatch>> patches;
    patches.emplace_back("square 25x25", lattice::build_square(25));
    patches.emplace_back("eightfold it2", lattice::build_ammann_beenker(2));
    lattice::LatticePatch random_patch;  // random graph, positions unused
    {
        const std::int32_t n = 800;
        random_patch.positions.resize(n, {0.0, 0.0});
        random_patch.edges = test_helpers::random_connected_graph(n, n, gen());
        random_patch.interior.assign(n, 0);
        lattice::finalize_patch(random_patch);
    }
    patches.emplace_back("random n=800", std::move(random_patch));

    for (const auto& [name, patch] : patches) {
        const auto h = spectral::laplacian(patch, 1.0);
        const auto psi = random_state(patch.num_vertices(), gen);
        for (double t : {1.0, 10.0, 100.0}) {
            const auto fast = spectral::evolve(h, psi, t);
            const auto exact = spectral::evolve_dense(h, psi, t);
            worst = std::max(worst, (fast.amplitudes - exact.amplitudes).cwiseAbs().maxCoeff());
        }
    }
    detail = "max |chebyshev - dense| = " + fmt(worst) + " at t in {1,10,100}";
    return worst < 1e-8;
}

bool criterion_3(std::string& detail) {
    const spectral::Hamiltonian h(2, {{0, 1}}, 1.0);
    const auto psi0 = spectral::localized_state(2, 0);
    double worst = 0.0;
    for (double t : {0.0, M_PI / 4, M_PI / 2}) {
        const auto psi = spectral::evolve(h, psi0, t);
        worst = std::max(worst, std::abs(std::norm(psi.amplitudes[0]) - std::cos(t) * std::cos(t)));
    }
    detail = "max |p0(t) - cos^2 t| = " + fmt(worst);
    return worst < 1e-10;
}

bool criterion_4(std::string& detail) {
    std::ostringstream report;
    bool ok = true;
    const auto check_family = [&](const char* name, auto build, auto oracle, int max_it,
                                  int deg_min, int deg_max) {
        for (int it = 0; it <= max_it; ++it) {
            const auto patch = build(it);
            const auto exact = oracle(it);
            try {
                test_helpers::PatchCheckOptions opt;
                opt.interior_degree_min = deg_min;
                opt.interior_degree_max = deg_max;
                test_helpers::check_patch(patch, opt);
                test_helpers::match_positions(patch, exact, 1e-6);
            } catch (const std::exception& e) {
                ok = false;
                report << " " << name << " it" << it << ": " << e.what() << ";";
                continue;
            }
            if (it == max_it)
                report << " " << name << " it" << it << ": " << patch.num_vertices() << "v/"
                       << patch.num_edges() << "e ok;";
        }
    };
    check_family("eightfold", lattice::build_ammann_beenker, tiling_oracle::ab_patch, 4, 3, 8);
    check_family("fivefold", lattice::build_penrose, tiling_oracle::penrose_patch, 5, 3, 7);
    detail = "counts/positions vs exact oracle:" + report.str();
    return ok;
}

bool criterion_5(std::string& detail) {
    const auto patch = lattice::build_square(60);
    const auto origin = lattice::center_vertex(patch);
    std::vector<double> grid;
    for (int t = 0; t <= 100; ++t) grid.push_back(t);
    const auto escape = pristine_series(patch, origin, 15, grid);

    const bool starts_at_zero = escape.front() == 0.0;
    const double peak = *std::max_element(escape.begin(), escape.end());

    // An oscillation peak is a local maximum with topographic prominence >= 0.05:
    // height above the higher of the two valleys separating it from taller terrain.
    // Micro-ripples riding on a flank (prominence < 0.006 on this curve) are fine
    // structure within one oscillation, not separate oscillations.
    std::vector<double> maxima;
    for (std::size_t k = 1; k + 1 < escape.size(); ++k) {
        if (!(escape[k] > escape[k - 1] && escape[k] > escape[k + 1])) continue;
        double left = escape[k];
        for (std::size_t i = k; i-- > 0 && escape[i] <= escape[k];) left = std::min(left, escape[i]);
        double right = escape[k];
        for (std::size_t i = k + 1; i < escape.size() && escape[i] <= escape[k]; ++i)
            right = std::min(right, escape[i]);
        if (escape[k] - std::max(left, right) >= 0.05) maxima.push_back(escape[k]);
    }
    bool decreasing = maxima.size() >= 2;
    for (std::size_t i = 1; i < maxima.size(); ++i)
        if (maxima[i] - maxima[i - 1] >= 0.0) decreasing = false;

    std::string shape = "maxima";
    for (double m : maxima) shape += " " + fmt(m);
    detail = "start " + fmt(escape.front()) + ", peak " + fmt(peak) + ", " + shape;
    return starts_at_zero && peak > 0.5 && decreasing;
}

bool criterion_6(std::string& detail) {
    const auto patch = lattice::build_square(60);
    const auto origin = lattice::center_vertex(patch);
    const std::vector<double> grid{100.0};
    double mean[3];
    const double fs[3] = {0.0, 0.05, 0.30};
    for (int i = 0; i < 3; ++i)
        mean[i] = percolation::ensemble(patch, origin, 15, fs[i], 50, kBaseSeed, grid, 1.0)
                      .mean_escape[0];
    detail = "mean escape " + fmt(mean[0]) + " (f=0), " + fmt(mean[1]) + " (f=0.05), " +
             fmt(mean[2]) + " (f=0.30); gaps " + fmt(mean[0] - mean[1]) + ", " +
             fmt(mean[1] - mean[2]) + " (each must exceed 0.05)";
    return mean[0] - mean[1] > 0.05 && mean[1] - mean[2] > 0.05;
}

bool criterion_7(std::string& detail) {
    const auto patch = lattice::build_square(60);
    const auto origin = lattice::center_vertex(patch);
    const std::vector<double> grid{100.0};
    const double high =
        percolation::ensemble(patch, origin, 15, 0.6, 50, kBaseSeed, grid, 1.0).indicator_fraction[0];
    const double low =
        percolation::ensemble(patch, origin, 15, 0.1, 50, kBaseSeed, grid, 1.0).indicator_fraction[0];
    detail = "indicator " + fmt(high) + " at f=0.6, " + fmt(low) + " at f=0.1";
    return high < 0.05 && low > 0.5;
}

bool criterion_8(std::string& detail) {
    const auto ab = lattice::build_ammann_beenker(3);
    const auto pen = lattice::build_penrose(4);
    const std::vector<double> grid{100.0};

    const auto run = [&](const lattice::LatticePatch& patch, double f) {
        const auto origin = lattice::center_vertex(patch);
        return percolation::ensemble(patch, origin, 10, f, 50, kBaseSeed, grid, 1.0)
            .indicator_fraction[0];
    };
    const double ab_high = run(ab, 0.45), ab_low = run(ab, 0.05);
    const double pen_high = run(pen, 0.5), pen_low = run(pen, 0.05);
    detail = "eightfold: " + fmt(ab_high) + " @f=0.45, " + fmt(ab_low) + " @f=0.05; fivefold: " +
             fmt(pen_high) + " @f=0.5, " + fmt(pen_low) +
             " @f=0.05 (high-f must be < 0.05, low-f > 0.2)";
    return ab_high < 0.05 && ab_low > 0.2 && pen_high < 0.05 && pen_low > 0.2;
}

bool criterion_9(std::string& detail) {
    // Family comparison at a shared zone radius. Every patch must be deep relative
    // to the zone (center eccentricity >= 2x radius: square 59, eightfold 41,
    // fivefold 23 hops), otherwise the zone clips the patch and the numbers compare
    // boundary geometry instead of transport. Four fivefold iterations (eccentricity
    // 14) would fail that requirement, so the fivefold patch uses five.
    const auto square = lattice::build_square(60);
    const auto pen = lattice::build_penrose(5);
    const auto ab = lattice::build_ammann_beenker(3);
    const std::vector<double> grid{100.0};

    bool ok = true;
    std::string report;
    for (double f : {0.05, 0.10}) {
        const auto stats = [&](const lattice::LatticePatch& patch) {
            const auto s = percolation::ensemble(patch, lattice::center_vertex(patch), 10, f, 50,
                                                 kBaseSeed, grid, 1.0);
            return std::pair<double, double>{s.mean_escape[0], s.escape_se(0)};
        };
        const auto [sq_m, sq_se] = stats(square);
        const auto [pen_m, pen_se] = stats(pen);
        const auto [ab_m, ab_se] = stats(ab);
        const bool first = sq_m >= pen_m - std::sqrt(sq_se * sq_se + pen_se * pen_se);
        const bool second = pen_m >= ab_m - std::sqrt(pen_se * pen_se + ab_se * ab_se);
        ok = ok && first && second;
        report += " f=" + fmt(f) + ": " + fmt(sq_m) + " >= " + fmt(pen_m) + " >= " + fmt(ab_m) + ";";
    }
    detail = "mean escape square >= fivefold >= eightfold (1 SE slack):" + report;
    return ok;
}

cli::ExperimentConfig sweep_config_for_reproducibility(const std::string& out) {
    cli::ExperimentConfig cfg;
    cfg.family = lattice::Family::AmmannBeenker;
    cfg.iterations = 3;
    cfg.zone_radius = 10;
    cfg.t_stop = 100.0;
    cfg.fractions = {0.05, 0.45};
    cfg.trials = 50;
    cfg.seed = kBaseSeed;
    cfg.mode = cli::Mode::Sweep;
    cfg.out = out;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool criterion_10(std::string& detail) {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() /
                     ("ctqw_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string out_a = (dir / "rerun_a").string();
    const std::string out_b = (dir / "rerun_b").string();
    cli::run(sweep_config_for_reproducibility(out_a));
    cli::run(sweep_config_for_reproducibility(out_b));
    const std::string csv_a = slurp(out_a + ".csv");
    const std::string csv_b = slurp(out_b + ".csv");
    const bool ok = !csv_a.empty() && csv_a == csv_b;
    detail = "sweep rerun: " + std::to_string(csv_a.size()) + " bytes, " +
             (ok ? "byte-identical" : "DIFFERENT");
    std::error_code ec;
    fs::remove_all(dir, ec);
    return ok;
}

bool criterion_11(std::string& detail) {
    const auto patch = lattice::build_square(5);
    const auto origin = lattice::center_vertex(patch);
    const int trials = 200;
    const double f = 0.2, t = 5.0;

    const auto series = percolation::ensemble(patch, origin, 1, f, trials, kBaseSeed, {t}, 1.0);
    const auto ref = dense_reference::mean_escape(patch, origin, 1, f, trials, kBaseSeed, t, 1.0);
    const double gap = std::abs(series.mean_escape[0] - ref.mean);
    const double se = std::sqrt(series.escape_se(0) * series.escape_se(0) + ref.se * ref.se);
    detail = "ensemble " + fmt(series.mean_escape[0]) + " vs reference " + fmt(ref.mean) +
             ", gap " + fmt(gap) + " <= 3 x " + fmt(se);
    return gap <= 3.0 * se;
}

struct Criterion {
    int number;
    const char* title;
    bool (*check)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "unitarity across random patches", criterion_1},
    {2, "propagator agrees with the dense oracle", criterion_2},
    {3, "two-vertex analytic return probability", criterion_3},
    {4, "tiling validity against the exact oracle", criterion_4},
    {5, "pristine square escape oscillation shape", criterion_5},
    {6, "disorder suppresses mean escape in order", criterion_6},
    {7, "square indicator thresholds", criterion_7},
    {8, "quasicrystal indicator thresholds", criterion_8},
    {9, "family ordering of mean escape", criterion_9},
    {10, "byte-identical reruns", criterion_10},
    {11, "small-instance match with the dense reference", criterion_11},
};

}  // namespace

int main(int argc, char** argv) {
    int only = -1;
    if (argc > 1) only = std::atoi(argv[1]);

    int failures = 0;
    for (const auto& c : kCriteria) {
        if (only > 0 && c.number != only) continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", c.number, c.title,
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
