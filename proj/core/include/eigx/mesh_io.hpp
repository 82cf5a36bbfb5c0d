#pragma once

#include <string>

#include "eigx/mesh.hpp"

namespace eigx {

/// JSON form: {"level", "vertices": [[x,y]...], "triangles": [[i,j,k]...],
/// "edges": [[a,b]...], "triangle_edges": [[e0,e1,e2]...],
/// "boundary_tags": {"<edge index>": "<tag>"}, "crack_pairs": [[a,b]...]}.
std::string mesh_to_json(const Mesh& mesh);
Mesh mesh_from_json(const std::string& text);

}  // namespace eigx
