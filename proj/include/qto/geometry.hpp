#pragma once

#include <qto/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace qto {

/// Point or vector in meters.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

    double operator[](std::size_t axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }

    friend Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend bool operator==(const Point3&, const Point3&) = default;
};

inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Point3 cross(Point3 a, Point3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Axis-aligned box given by its minimum and maximum corners. Zero extent
/// along any axis is allowed.
class Aabb {
public:
    Aabb() = default;

    Aabb(Point3 min, Point3 max) : min_(min), max_(max) {
        if (!min.is_finite() || !max.is_finite()) {
            throw Error(ErrorCode::InvariantViolation, "aabb corner is not finite");
        }
        if (min.x > max.x || min.y > max.y || min.z > max.z) {
            throw Error(ErrorCode::InvariantViolation, "aabb min corner exceeds max corner");
        }
    }

    const Point3& min() const { return min_; }
    const Point3& max() const { return max_; }

    /// L_x, L_y, L_z.
    std::array<double, 3> extents() const {
        return {max_.x - min_.x, max_.y - min_.y, max_.z - min_.z};
    }

    Point3 centroid() const {
        return {(min_.x + max_.x) / 2.0, (min_.y + max_.y) / 2.0, (min_.z + max_.z) / 2.0};
    }

    /// Half-open containment: min inclusive, max exclusive on every axis.
    bool contains_half_open(Point3 p) const {
        return p.x >= min_.x && p.x < max_.x && p.y >= min_.y && p.y < max_.y && p.z >= min_.z &&
               p.z < max_.z;
    }

    friend bool operator==(const Aabb&, const Aabb&) = default;

private:
    Point3 min_{};
    Point3 max_{};
};

using Triangle = std::array<std::uint32_t, 3>;

struct TriangleMesh {
    std::vector<Point3> vertices;
    std::vector<Triangle> triangles;

    friend bool operator==(const TriangleMesh&, const TriangleMesh&) = default;
};

/// Componentwise extrema over all vertices.
inline Aabb compute_aabb(std::span<const Point3> vertices) {
    if (vertices.empty()) {
        throw Error(ErrorCode::EmptyMesh, "cannot bound an empty vertex list");
    }
    Point3 lo = vertices.front();
    Point3 hi = vertices.front();
    for (const Point3& v : vertices) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
    }
    return Aabb(lo, hi);
}

inline Aabb compute_aabb(const TriangleMesh& mesh) { return compute_aabb(mesh.vertices); }

/// Number of undirected edges not shared by exactly two triangles. Zero means
/// the mesh is edge-manifold and closed; orientation is not checked.
inline std::size_t count_open_edges(const TriangleMesh& mesh) {
    std::unordered_map<std::uint64_t, int> uses;
    uses.reserve(mesh.triangles.size() * 3);
    for (const Triangle& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            std::uint64_t a = t[k];
            std::uint64_t b = t[(k + 1) % 3];
            if (a > b) {
                std::swap(a, b);
            }
            ++uses[(a << 32) | b];
        }
    }
    return static_cast<std::size_t>(
        std::count_if(uses.begin(), uses.end(), [](const auto& kv) { return kv.second != 2; }));
}

inline bool is_watertight(const TriangleMesh& mesh) {
    return !mesh.triangles.empty() && count_open_edges(mesh) == 0;
}

/// Enclosed volume by the divergence theorem: |sum v0 . (v1 x v2)| / 6.
inline double mesh_volume(const TriangleMesh& mesh) {
    if (mesh.triangles.empty()) {
        throw Error(ErrorCode::EmptyMesh, "mesh has no triangles");
    }
    for (const Triangle& t : mesh.triangles) {
        for (std::uint32_t i : t) {
            if (i >= mesh.vertices.size()) {
                throw Error(ErrorCode::IndexOutOfRange,
                            "triangle references vertex " + std::to_string(i) + " of " +
                                std::to_string(mesh.vertices.size()));
            }
        }
    }
    if (std::size_t open = count_open_edges(mesh); open != 0) {
        throw Error(ErrorCode::NotWatertight,
                    "mesh is not watertight: " + std::to_string(open) + " open or non-manifold edges");
    }
    double six_v = 0.0;
    for (const Triangle& t : mesh.triangles) {
        six_v += dot(mesh.vertices[t[0]], cross(mesh.vertices[t[1]], mesh.vertices[t[2]]));
    }
    return std::abs(six_v) / 6.0;
}

} // namespace qto
