#include "hexdg/mesh_io.hpp"

#include "hexdg/errors.hpp"

#include <fstream>

namespace hexdg {

namespace {

nlohmann::json box_json(const Box3& b)
{
    return {{"lo", {b.lo[0], b.lo[1], b.lo[2]}}, {"hi", {b.hi[0], b.hi[1], b.hi[2]}}};
}

Box3 box_from(const nlohmann::json& j)
{
    Box3 b;
    for (int d = 0; d < 3; ++d) {
        b.lo[d] = j.at("lo").at(d).get<double>();
        b.hi[d] = j.at("hi").at(d).get<double>();
    }
    return b;
}

} // namespace

nlohmann::json mesh_to_json(const GeometricMesh& mesh)
{
    nlohmann::json j;
    j["kind"] = std::string(to_string(mesh.kind));
    j["sigma"] = mesh.sigma;
    j["levels"] = mesh.levels;
    auto& els = j["elements"] = nlohmann::json::array();
    for (const Element& e : mesh.elements)
        els.push_back(box_json(e.box));
    auto& mac = j["macro"] = nlohmann::json::array();
    for (const Box3& b : mesh.macro)
        mac.push_back(box_json(b));
    return j;
}

GeometricMesh mesh_from_json(const nlohmann::json& j)
{
    try {
        GeometricMesh mesh;
        mesh.kind = parse_patch_kind(j.at("kind").get<std::string>());
        mesh.sigma = j.at("sigma").get<double>();
        mesh.levels = j.at("levels").get<int>();
        for (const auto& e : j.at("elements"))
            mesh.elements.push_back(Element{box_from(e), 0});
        if (j.contains("macro")) {
            for (const auto& b : j.at("macro"))
                mesh.macro.push_back(box_from(b));
        } else {
            for (const Element& e : mesh.elements)
                mesh.macro.push_back(e.box);
        }
        return mesh;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("malformed mesh JSON: ") + ex.what());
    }
}

void write_mesh(const std::filesystem::path& path, const GeometricMesh& mesh)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << mesh_to_json(mesh).dump(2) << '\n';
}

GeometricMesh read_mesh(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open mesh file '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("malformed mesh JSON: ") + ex.what());
    }
    return mesh_from_json(j);
}

} // namespace hexdg
