#pragma once

#include "hexdg/mesh.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace hexdg {

/// { "kind": str, "sigma": f64, "levels": int,
///   "elements": [{"lo":[x,y,z],"hi":[x,y,z]}, ...] }
/// Macro cells are stored under an optional "macro" key with the same layout.
nlohmann::json mesh_to_json(const GeometricMesh& mesh);
GeometricMesh mesh_from_json(const nlohmann::json& j);

void write_mesh(const std::filesystem::path& path, const GeometricMesh& mesh);
GeometricMesh read_mesh(const std::filesystem::path& path);

} // namespace hexdg
