#include "eigx/mesh_io.hpp"

#include <json.hpp>

namespace eigx {

using nlohmann::json;

std::string mesh_to_json(const Mesh& mesh) {
  json j;
  j["level"] = mesh.level();
  json verts = json::array();
  for (const auto& v : mesh.vertices()) verts.push_back({v.x(), v.y()});
  j["vertices"] = std::move(verts);
  j["triangles"] = mesh.triangles();
  json edges = json::array();
  json tags = json::object();
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edges()[e];
    edges.push_back({ed.v0, ed.v1});
    if (ed.tag != BoundaryTag::Interior) tags[std::to_string(e)] = std::string(to_string(ed.tag));
  }
  j["edges"] = std::move(edges);
  json tri_edges = json::array();
  for (int t = 0; t < mesh.num_triangles(); ++t) tri_edges.push_back(mesh.triangle_edges(t));
  j["triangle_edges"] = std::move(tri_edges);
  j["boundary_tags"] = std::move(tags);
  j["crack_pairs"] = mesh.crack_pairs();
  return j.dump(1);
}

Mesh mesh_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("mesh JSON: ") + e.what());
  }
  try {
    std::vector<Point> vertices;
    for (const auto& v : j.at("vertices")) vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    const auto triangles = j.at("triangles").get<std::vector<Mesh::Triangle>>();
    const auto edges = j.at("edges").get<std::vector<std::array<int, 2>>>();
    const auto tri_edges = j.at("triangle_edges").get<std::vector<std::array<int, 3>>>();
    if (tri_edges.size() != triangles.size()) throw ConfigError("mesh JSON: triangle_edges length mismatch");
    std::vector<BoundaryTag> edge_tag(edges.size(), BoundaryTag::Interior);
    for (const auto& [key, value] : j.at("boundary_tags").items()) {
      const std::size_t e = std::stoul(key);
      if (e >= edges.size()) throw ConfigError("mesh JSON: boundary tag for unknown edge " + key);
      edge_tag[e] = boundary_tag_from_string(value.get<std::string>());
    }
    std::vector<Mesh::SideTags> side_tags(triangles.size());
    for (std::size_t t = 0; t < triangles.size(); ++t)
      for (int i = 0; i < 3; ++i) {
        const int e = tri_edges[t][i];
        if (e < 0 || static_cast<std::size_t>(e) >= edges.size())
          throw ConfigError("mesh JSON: triangle references unknown edge");
        side_tags[t][i] = edge_tag[e];
      }
    std::vector<std::pair<int, int>> pairs;
    if (j.contains("crack_pairs"))
      for (const auto& p : j["crack_pairs"]) pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    Mesh m(std::move(vertices), triangles, std::move(side_tags), j.at("level").get<int>(), std::move(pairs));
    for (std::size_t t = 0; t < triangles.size(); ++t)
      if (m.triangle_edges(static_cast<int>(t)) != tri_edges[t])
        throw ConfigError("mesh JSON: edge numbering is inconsistent with the triangle list");
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("mesh JSON: ") + e.what());
  }
}

}  // namespace eigx
