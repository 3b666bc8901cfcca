#pragma once

// Wavefront OBJ subset: `#` comments, `v x y z`, `f i j k` (1-based, triangles
// only) and `o name` object records. Coordinates are written with nine
// decimal places.

#include <qto/detail/text.hpp>
#include <qto/error.hpp>
#include <qto/geometry.hpp>

#include <fmt/format.h>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qto {

struct NamedMesh {
    std::string name;
    TriangleMesh mesh;
};

namespace detail {

inline std::uint32_t parse_face_index(std::string_view tok, std::size_t vertex_count, std::size_t line,
                                      std::size_t column) {
    long long idx = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), idx);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw Error(ErrorCode::MalformedNumber, "malformed face index '" + std::string(tok) + "'", line,
                    column);
    }
    if (idx < 1 || static_cast<unsigned long long>(idx) > vertex_count) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "face index " + std::to_string(idx) + " out of range (1.." + std::to_string(vertex_count) +
                        ")",
                    line, column);
    }
    return static_cast<std::uint32_t>(idx - 1);
}

inline std::size_t column_of(std::string_view line, std::string_view tok) {
    return static_cast<std::size_t>(tok.data() - line.data()) + 1;
}

} // namespace detail

/// Parses an OBJ file into named meshes. Vertex indices are global across the
/// file (as written by export_boxes) and are remapped to per-object local
/// indices. Faces before the first `o` record belong to an unnamed object.
inline std::vector<NamedMesh> parse_obj_objects(std::string_view text) {
    std::vector<Point3> all;
    struct Pending {
        std::string name;
        std::vector<std::array<std::uint32_t, 3>> faces;
    };
    std::vector<Pending> objects(1);

    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        const auto toks = detail::tokens(line);
        if (toks.empty() || toks[0].front() == '#') {
            return;
        }
        if (toks[0] == "v") {
            if (toks.size() != 4) {
                throw Error(ErrorCode::Syntax, "vertex record needs exactly 3 coordinates", line_no);
            }
            all.push_back({detail::parse_double(toks[1], line_no, detail::column_of(line, toks[1])),
                           detail::parse_double(toks[2], line_no, detail::column_of(line, toks[2])),
                           detail::parse_double(toks[3], line_no, detail::column_of(line, toks[3]))});
        } else if (toks[0] == "f") {
            if (toks.size() != 4) {
                throw Error(ErrorCode::NonTriangularFace,
                            "face has " + std::to_string(toks.size() - 1) + " indices, expected 3", line_no);
            }
            std::array<std::uint32_t, 3> f{};
            for (int k = 0; k < 3; ++k) {
                f[k] = detail::parse_face_index(toks[k + 1], all.size(), line_no,
                                                detail::column_of(line, toks[k + 1]));
            }
            objects.back().faces.push_back(f);
        } else if (toks[0] == "o" || toks[0] == "g") {
            std::string_view name = detail::trim(line.substr(line.find(toks[0]) + 1));
            objects.push_back({std::string(name), {}});
        } else {
            throw Error(ErrorCode::Syntax, "unsupported record '" + std::string(toks[0]) + "'", line_no);
        }
    });

    std::vector<NamedMesh> out;
    for (std::size_t oi = 0; oi < objects.size(); ++oi) {
        Pending& p = objects[oi];
        if (oi == 0 && p.faces.empty()) {
            continue;
        }
        NamedMesh nm{p.name, {}};
        std::vector<std::int64_t> remap(all.size(), -1);
        for (const auto& f : p.faces) {
            Triangle t{};
            for (int k = 0; k < 3; ++k) {
                if (remap[f[k]] < 0) {
                    remap[f[k]] = static_cast<std::int64_t>(nm.mesh.vertices.size());
                    nm.mesh.vertices.push_back(all[f[k]]);
                }
                t[k] = static_cast<std::uint32_t>(remap[f[k]]);
            }
            nm.mesh.triangles.push_back(t);
        }
        out.push_back(std::move(nm));
    }
    // A vertex-only file still yields its vertices.
    if (out.empty() && !all.empty()) {
        out.push_back({"", TriangleMesh{all, {}}});
    }
    return out;
}

/// Parses a single-mesh OBJ. Vertices and triangles keep file order and face
/// indices become 0-based. `o`/`g` records are accepted and ignored.
inline TriangleMesh parse_mesh(std::string_view text) {
    TriangleMesh mesh;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        const auto toks = detail::tokens(line);
        if (toks.empty() || toks[0].front() == '#' || toks[0] == "o" || toks[0] == "g") {
            return;
        }
        if (toks[0] == "v") {
            if (toks.size() != 4) {
                throw Error(ErrorCode::Syntax, "vertex record needs exactly 3 coordinates", line_no);
            }
            mesh.vertices.push_back(
                {detail::parse_double(toks[1], line_no, detail::column_of(line, toks[1])),
                 detail::parse_double(toks[2], line_no, detail::column_of(line, toks[2])),
                 detail::parse_double(toks[3], line_no, detail::column_of(line, toks[3]))});
        } else if (toks[0] == "f") {
            if (toks.size() != 4) {
                throw Error(ErrorCode::NonTriangularFace,
                            "face has " + std::to_string(toks.size() - 1) + " indices, expected 3", line_no);
            }
            Triangle t{};
            for (int k = 0; k < 3; ++k) {
                t[k] = detail::parse_face_index(toks[k + 1], mesh.vertices.size(), line_no,
                                                detail::column_of(line, toks[k + 1]));
            }
            mesh.triangles.push_back(t);
        } else {
            throw Error(ErrorCode::Syntax, "unsupported record '" + std::string(toks[0]) + "'", line_no);
        }
    });
    return mesh;
}

// Nine decimal places keep every coordinate within 5e-10 m of its value,
// whatever its magnitude; trailing zeros are dropped.
inline std::string format_coordinate(double v) {
    std::string s = fmt::format("{:.9f}", v);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') {
        s.pop_back();
    }
    return s == "-0" ? "0" : s;
}

inline void append_vertices(std::string& out, const TriangleMesh& mesh) {
    for (const Point3& v : mesh.vertices) {
        out += fmt::format("v {} {} {}\n", format_coordinate(v.x), format_coordinate(v.y),
                           format_coordinate(v.z));
    }
}

inline void append_faces(std::string& out, const TriangleMesh& mesh, std::size_t index_offset) {
    for (const Triangle& t : mesh.triangles) {
        out += fmt::format("f {} {} {}\n", t[0] + 1 + index_offset, t[1] + 1 + index_offset,
                           t[2] + 1 + index_offset);
    }
}

inline std::string serialize_mesh(const TriangleMesh& mesh, std::string_view comment = {}) {
    std::string out;
    if (!comment.empty()) {
        out += fmt::format("# {}\n", comment);
    }
    append_vertices(out, mesh);
    append_faces(out, mesh, 0);
    return out;
}

} // namespace qto
