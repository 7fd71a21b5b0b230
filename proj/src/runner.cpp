#include "ctqw/runner.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "ctqw/csvio.hpp"
#include "ctqw/errors.hpp"
#include "ctqw/patch_io.hpp"
#include "ctqw/percolation.hpp"
#include "ctqw/spectral.hpp"

namespace fs = std::filesystem;

namespace ctqw {

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_parameter_error("cannot open file for checksum: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const auto got = static_cast<std::size_t>(in.gcount());
        for (std::size_t i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

}  // namespace ctqw

namespace ctqw::cli {

namespace {

// Scientific notation, 17 significant digits: exceeds every column's minimum
// and reparses to the identical double.
std::string sci(double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return {buf, res.ptr};
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[i] = digits[v & 0xf];
    return out;
}

lattice::LatticePatch build_patch(const ExperimentConfig& cfg) {
    switch (cfg.family) {
        case lattice::Family::Square: return lattice::build_square(cfg.size);
        case lattice::Family::AmmannBeenker: return lattice::build_ammann_beenker(cfg.iterations);
        case lattice::Family::Penrose: return lattice::build_penrose(cfg.iterations);
    }
    throw invalid_parameter_error("unknown lattice family");
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["family"] = lattice::family_name(cfg.family);
    if (cfg.family == lattice::Family::Square)
        j["size"] = cfg.size;
    else
        j["iterations"] = cfg.iterations;
    j["origin"] = cfg.origin;
    j["zone"] = cfg.zone_radius;
    j["gamma"] = cfg.gamma;
    j["threshold"] = cfg.threshold;
    j["t-stop"] = cfg.t_stop;
    j["t-step"] = cfg.t_step;
    j["fractions"] = cfg.fractions;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["mode"] = mode_name(cfg.mode);
    j["out"] = cfg.out;
    return j;
}

struct ArtifactWriter {
    std::vector<std::string> paths;
    std::vector<std::uint64_t> checksums;

    void write(const std::string& path, const std::string& content) {
        paths.push_back(path);  // tracked before the write so cleanup catches partial files
        std::ofstream out(path, std::ios::binary);
        if (!out || !(out << content) || !out.flush())
            throw std::runtime_error("cannot write output file: " + path);
        checksums.push_back(fnv1a64(content.data(), content.size()));
    }

    void discard_all() {
        for (const auto& p : paths) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
};

void run_dump_distribution(const ExperimentConfig& cfg, const lattice::LatticePatch& patch,
                           std::int32_t origin, ArtifactWriter& w) {
    if (cfg.fractions.size() != 1 || cfg.fractions[0] != 0.0)
        throw config_error("fractions: dump-distribution runs on the pristine patch only (fractions must be 0)");

    const spectral::Hamiltonian h = spectral::laplacian(patch, cfg.gamma);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(patch.num_vertices());
    psi[origin] = 1.0;

    double t_now = 0.0;
    double cached_dt = 0.0;
    std::unique_ptr<spectral::ChebyshevPropagator> prop;
    for (double t : cfg.time_grid()) {
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
        std::string csv = "vertex_id,x,y,probability\n";
        for (std::int32_t v = 0; v < patch.num_vertices(); ++v) {
            csv += std::to_string(v);
            csv += ',';
            csv += format_double(patch.positions[v][0]);
            csv += ',';
            csv += format_double(patch.positions[v][1]);
            csv += ',';
            csv += sci(std::norm(psi[v]));
            csv += '\n';
        }
        w.write(cfg.out + "_t" + format_double(t) + ".csv", csv);
    }
}

void run_timeseries(const ExperimentConfig& cfg, const lattice::LatticePatch& patch,
                    std::int32_t origin, ArtifactWriter& w) {
    std::string csv = "t,mean_escape_mass,indicator_fraction,trials,f,zone_radius,origin_class,family,seed\n";
    const auto grid = cfg.time_grid();
    for (double f : cfg.fractions) {
        const percolation::PercolationSeries s =
            percolation::ensemble(patch, origin, cfg.zone_radius, f, cfg.trials, cfg.seed, grid,
                                  cfg.gamma, cfg.threshold);
        for (std::size_t k = 0; k < s.times.size(); ++k) {
            csv += sci(s.times[k]) + ',' + sci(s.mean_escape[k]) + ',' + sci(s.indicator_fraction[k]) +
                   ',' + std::to_string(cfg.trials) + ',' + sci(f) + ',' +
                   std::to_string(cfg.zone_radius) + ',' + csv_quote(s.origin_class) + ',' +
                   lattice::family_name(cfg.family) + ',' + std::to_string(cfg.seed) + '\n';
        }
    }
    w.write(cfg.out + ".csv", csv);
}

void run_sweep(const ExperimentConfig& cfg, const lattice::LatticePatch& patch, std::int32_t origin,
               ArtifactWriter& w) {
    const auto rows = percolation::sweep_fraction(patch, origin, cfg.zone_radius, cfg.fractions,
                                                  cfg.t_stop, cfg.trials, cfg.seed, cfg.gamma,
                                                  cfg.threshold);
    const std::string origin_class = lattice::classify_vertices(patch)[origin].label;
    std::string csv = "f,t_eval,mean_escape_mass,indicator_fraction,trials,zone_radius,origin_class,family,seed\n";
    for (const auto& r : rows) {
        csv += sci(r.fraction) + ',' + sci(r.t_eval) + ',' + sci(r.mean_escape) + ',' +
               sci(r.indicator_fraction) + ',' + std::to_string(r.trials) + ',' +
               std::to_string(cfg.zone_radius) + ',' + csv_quote(origin_class) + ',' +
               lattice::family_name(cfg.family) + ',' + std::to_string(cfg.seed) + '\n';
    }
    w.write(cfg.out + ".csv", csv);
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
    if (cfg.out.empty()) throw config_error("out: output path is required");
    const fs::path parent = fs::path(cfg.out).parent_path();
    if (!parent.empty()) fs::create_directories(parent);

    const lattice::LatticePatch patch = build_patch(cfg);
    const std::int32_t origin = percolation::resolve_origin(patch, cfg.origin);

    ArtifactWriter w;
    try {
        switch (cfg.mode) {
            case Mode::DumpDistribution:
                run_dump_distribution(cfg, patch, origin, w);
                break;
            case Mode::Timeseries:
                run_timeseries(cfg, patch, origin, w);
                break;
            case Mode::Sweep:
                run_sweep(cfg, patch, origin, w);
                break;
            case Mode::PatchExport:
                w.write(cfg.out + ".json", lattice::patch_to_json(patch));
                break;
        }

        nlohmann::json manifest;
        manifest["config"] = config_json(cfg);
        manifest["resolved_origin"] = origin;
        manifest["origin_class"] = lattice::classify_vertices(patch)[origin].label;
        nlohmann::json arts = nlohmann::json::array();
        for (std::size_t i = 0; i < w.paths.size(); ++i)
            arts.push_back({{"path", w.paths[i]}, {"fnv1a64", hex64(w.checksums[i])}});
        manifest["artifacts"] = arts;
        w.write(cfg.out + ".manifest.json", manifest.dump(2) + "\n");
    } catch (...) {
        w.discard_all();
        throw;
    }
    return {w.paths};
}

}  // namespace ctqw::cli
