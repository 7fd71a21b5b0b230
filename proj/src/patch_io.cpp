#include "ctqw/patch_io.hpp"

#include <fstream>

#include <json.hpp>

#include "ctqw/errors.hpp"

namespace ctqw::lattice {

using nlohmann::json;

std::string patch_to_json(const LatticePatch& patch) {
    json j;
    j["family"] = family_name(patch.family);
    j["generation_params"] = {{"size_or_iterations", patch.params.size_or_iterations},
                              {"dedup_tolerance", patch.params.dedup_tolerance},
                              {"seed_patch", patch.params.seed_patch}};
    json verts = json::array();
    for (const auto& p : patch.positions) verts.push_back({p[0], p[1]});
    j["vertices"] = std::move(verts);
    json edges = json::array();
    for (auto [a, b] : patch.edges) edges.push_back({a, b});
    j["edges"] = std::move(edges);
    json classes = json::array();
    for (const auto& c : classify_vertices(patch)) classes.push_back(c.label);
    j["classes"] = std::move(classes);
    return j.dump(2) + "\n";
}

LatticePatch patch_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw invalid_parameter_error(std::string("patch JSON parse failure: ") + e.what());
    }
    LatticePatch patch;
    try {
        patch.family = family_from_name(j.at("family").get<std::string>());
        const auto& gp = j.at("generation_params");
        patch.params.size_or_iterations = gp.at("size_or_iterations").get<int>();
        patch.params.dedup_tolerance = gp.at("dedup_tolerance").get<double>();
        patch.params.seed_patch = gp.at("seed_patch").get<std::string>();
        for (const auto& v : j.at("vertices"))
            patch.positions.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        for (const auto& e : j.at("edges"))
            patch.edges.emplace_back(e.at(0).get<std::int32_t>(), e.at(1).get<std::int32_t>());
        for (const auto& c : j.at("classes")) {
            const auto label = c.get<std::string>();
            patch.interior.push_back(label.rfind("boundary:", 0) != 0);
        }
    } catch (const json::exception& e) {
        throw invalid_parameter_error(std::string("patch JSON schema violation: ") + e.what());
    }
    if (patch.interior.size() != patch.positions.size())
        throw invalid_parameter_error("patch JSON: classes array does not match vertex count");
    finalize_patch(patch);
    return patch;
}

void save_patch(const LatticePatch& patch, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_parameter_error("cannot open for writing: " + path);
    out << patch_to_json(patch);
    if (!out) throw invalid_parameter_error("write failure: " + path);
}

LatticePatch load_patch(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_parameter_error("cannot open patch file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return patch_from_json(text);
}

}  // namespace ctqw::lattice
