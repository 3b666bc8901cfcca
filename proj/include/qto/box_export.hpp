#pragma once

#include <qto/geometry.hpp>
#include <qto/obj_io.hpp>
#include <qto/scene.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace qto {

/// Closed box mesh of an AABB. Vertex i is the corner whose x, y, z come from
/// max when bits 0, 1, 2 of i are set (z-major binary order):
///   0 (x0,y0,z0) 1 (x1,y0,z0) 2 (x0,y1,z0) 3 (x1,y1,z0)
///   4 (x0,y0,z1) 5 (x1,y0,z1) 6 (x0,y1,z1) 7 (x1,y1,z1)
/// Triangles are wound counter-clockwise seen from outside.
inline TriangleMesh bbox_to_mesh(const Aabb& box) {
    const Point3 lo = box.min();
    const Point3 hi = box.max();
    TriangleMesh m;
    m.vertices.reserve(8);
    for (int i = 0; i < 8; ++i) {
        m.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
    }
    m.triangles = {
        {0, 2, 3}, {0, 3, 1}, // z-
        {4, 5, 7}, {4, 7, 6}, // z+
        {0, 1, 5}, {0, 5, 4}, // y-
        {2, 6, 7}, {2, 7, 3}, // y+
        {0, 4, 6}, {0, 6, 2}, // x-
        {1, 3, 7}, {1, 7, 5}, // x+
    };
    return m;
}

/// One `o <id>` object per element; vertex indices are global to the file.
inline std::string export_boxes(const std::vector<const Element*>& elements) {
    std::string out = "# bounding boxes, " + std::to_string(elements.size()) + " objects\n";
    std::size_t offset = 0;
    for (const Element* e : elements) {
        const TriangleMesh m = bbox_to_mesh(e->aabb);
        out += "o " + e->id + "\n";
        append_vertices(out, m);
        append_faces(out, m, offset);
        offset += m.vertices.size();
    }
    return out;
}

inline std::string export_boxes(const std::vector<Element>& elements) {
    std::vector<const Element*> ptrs;
    for (const Element& e : elements) {
        ptrs.push_back(&e);
    }
    return export_boxes(ptrs);
}

inline void export_boxes(const std::vector<const Element*>& elements, const std::filesystem::path& destination) {
    write_text_file(destination, export_boxes(elements));
}

} // namespace qto
