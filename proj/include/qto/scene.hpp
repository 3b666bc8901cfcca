#pragma once

#include <qto/error.hpp>
#include <qto/geometry.hpp>
#include <qto/obj_io.hpp>
#include <qto/detail/text.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace qto {

struct Element {
    std::string id;
    std::string name;
    std::map<std::string, std::string> properties;
    Aabb aabb;
    /// Set when the geometry came from a mesh file; `aabb` is then its bound.
    std::shared_ptr<const TriangleMesh> mesh;
    std::string mesh_path;
    std::optional<std::string> work_area;

    /// Property lookup with `id` and `name` available as pseudo-properties
    /// when not explicitly set.
    std::optional<std::string> property(std::string_view key) const {
        if (auto it = properties.find(std::string(key)); it != properties.end()) {
            return it->second;
        }
        if (key == "name") {
            return name;
        }
        if (key == "id") {
            return id;
        }
        return std::nullopt;
    }
};

struct Scene {
    std::string units = "m";
    std::vector<Element> elements;

    const Element* find(std::string_view id) const {
        for (const Element& e : elements) {
            if (e.id == id) {
                return &e;
            }
        }
        return nullptr;
    }
};

/// Resolves a scene-relative mesh path to a mesh.
using MeshLoader = std::function<TriangleMesh(const std::string& relative_path)>;

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::Io, "failed reading '" + path.string() + "'");
    }
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
    }
}

namespace detail {

inline nlohmann::json parse_json(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw Error(ErrorCode::Syntax, e.what(), line, col);
    }
}

inline Point3 json_point(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) {
        throw Error(ErrorCode::Syntax, what + " must be an array of 3 numbers");
    }
    for (const auto& c : j) {
        if (!c.is_number()) {
            throw Error(ErrorCode::MalformedNumber, what + " contains a non-numeric coordinate");
        }
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline std::string json_scalar_text(const nlohmann::json& v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_integer() || v.is_number_unsigned() || v.is_boolean()) {
        return v.dump();
    }
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (d == static_cast<double>(static_cast<long long>(d))) {
            return std::to_string(static_cast<long long>(d));
        }
        return v.dump();
    }
    throw Error(ErrorCode::Syntax, "property values must be strings, numbers or booleans");
}

} // namespace detail

/// Parses a scene document. Mesh references are resolved eagerly through
/// `load_mesh`; a scene that references meshes without a loader is an error.
inline Scene parse_scene(std::string_view text, const MeshLoader& load_mesh = {}) {
    const nlohmann::json doc = detail::parse_json(text);
    if (!doc.is_object()) {
        throw Error(ErrorCode::Syntax, "scene document must be a JSON object");
    }
    if (!doc.contains("units")) {
        throw Error(ErrorCode::MissingField, "scene is missing 'units'");
    }
    if (!doc["units"].is_string() || doc["units"].get<std::string>() != "m") {
        throw Error(ErrorCode::UnknownUnit, "unsupported units " + doc["units"].dump() + " (only \"m\")");
    }
    if (!doc.contains("elements") || !doc["elements"].is_array()) {
        throw Error(ErrorCode::MissingField, "scene is missing the 'elements' array");
    }

    Scene scene;
    std::set<std::string> seen;
    std::size_t index = 0;
    for (const auto& je : doc["elements"]) {
        const std::string where = "element #" + std::to_string(index++);
        if (!je.is_object()) {
            throw Error(ErrorCode::Syntax, where + " is not an object");
        }
        if (!je.contains("id") || !je["id"].is_string() || je["id"].get<std::string>().empty()) {
            throw Error(ErrorCode::MissingField, where + " is missing a string 'id'");
        }
        Element e;
        e.id = je["id"].get<std::string>();
        if (!seen.insert(e.id).second) {
            throw Error(ErrorCode::DuplicateId, "duplicate element id '" + e.id + "'");
        }
        if (je.contains("name")) {
            if (!je["name"].is_string()) {
                throw Error(ErrorCode::Syntax, "element " + e.id + ": 'name' must be a string");
            }
            e.name = je["name"].get<std::string>();
        }
        if (je.contains("properties")) {
            if (!je["properties"].is_object()) {
                throw Error(ErrorCode::Syntax, "element " + e.id + ": 'properties' must be an object");
            }
            for (const auto& [k, v] : je["properties"].items()) {
                e.properties[k] = detail::json_scalar_text(v);
            }
        }
        if (je.contains("work_area") && je["work_area"].is_string()) {
            e.work_area = je["work_area"].get<std::string>();
        }

        const bool has_box = je.contains("aabb");
        const bool has_mesh = je.contains("mesh");
        if (has_box == has_mesh) {
            throw Error(has_box ? ErrorCode::Syntax : ErrorCode::MissingField,
                        "element " + e.id + " needs exactly one of 'aabb' or 'mesh'");
        }
        if (has_box) {
            const auto& jb = je["aabb"];
            if (!jb.is_object() || !jb.contains("min") || !jb.contains("max")) {
                throw Error(ErrorCode::MissingField, "element " + e.id + ": aabb needs 'min' and 'max'");
            }
            try {
                e.aabb = Aabb(detail::json_point(jb["min"], "aabb.min"), detail::json_point(jb["max"], "aabb.max"));
            } catch (const Error& err) {
                throw err.with_element(e.id);
            }
        } else {
            if (!je["mesh"].is_string()) {
                throw Error(ErrorCode::Syntax, "element " + e.id + ": 'mesh' must be a path string");
            }
            e.mesh_path = je["mesh"].get<std::string>();
            if (!load_mesh) {
                throw Error(ErrorCode::Io, "element " + e.id + " references a mesh but no loader is available");
            }
            try {
                auto mesh = std::make_shared<const TriangleMesh>(load_mesh(e.mesh_path));
                e.aabb = compute_aabb(*mesh);
                e.mesh = std::move(mesh);
            } catch (const Error& err) {
                throw err.with_element(e.id);
            }
        }
        scene.elements.push_back(std::move(e));
    }
    return scene;
}

inline Scene load_scene_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const std::filesystem::path base = path.parent_path();
    return parse_scene(text, [base](const std::string& rel) {
        const std::filesystem::path p = base / rel;
        try {
            return parse_mesh(read_text_file(p));
        } catch (const Error& e) {
            throw Error(e.code(), p.string() + ": " + e.what());
        }
    });
}

} // namespace qto
